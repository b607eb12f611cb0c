#pragma once

#include "congruence.hpp"

namespace matlog {

struct LTResult {
    LindenbaumReduct reduct;
    FiniteAlgebra quotient;
    std::vector<int> projection;
    bool admits = false;
    int filter_class = -1; // class of the tautology functions, if admits
};

// Lindenbaum–Tarski quotient: Θ = congruence generated by all pairs of
// designated reduct elements; admits iff the tautology filter is one Θ-class.
inline LTResult lt_algebra(const Matrix& m, int k, const Caps& caps = {}) {
    LTResult out;
    out.reduct = lindenbaum_reduct(m, k, caps);
    const auto& alg = out.reduct.reduct->as_algebra;
    const auto& filter = out.reduct.filter;

    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 1; i < filter.size(); ++i) pairs.emplace_back(filter[0], filter[i]);
    Partition theta = congruence_generated(alg, pairs);

    auto q = quotient(alg, theta);
    out.quotient = std::move(q.algebra);
    out.projection = std::move(q.projection);

    int cls = out.projection[static_cast<std::size_t>(filter[0])];
    std::size_t class_size = 0;
    for (int e = 0; e < alg.size; ++e)
        if (out.projection[static_cast<std::size_t>(e)] == cls) ++class_size;
    out.admits = class_size == filter.size();
    if (out.admits) out.filter_class = cls;
    return out;
}

// A is a theorem iff v0(A) is the filter class, where v0
// sends p_i to the class of the i-th projection.
inline bool canonical_valuation_check(const Matrix& m, int k, int depth, const Caps& caps = {}) {
    LTResult lt = lt_algebra(m, k, caps);
    if (!lt.admits)
        throw std::invalid_argument("canonical_valuation_check: matrix does not admit "
                                    "the Lindenbaum-Tarski algebra at this arity");
    auto vars = canonical_vars(k);
    Valuation v0;
    for (int i = 0; i < k; ++i) {
        int proj_elem = lt.reduct.reduct->generator_indices[static_cast<std::size_t>(i)];
        v0[vars[static_cast<std::size_t>(i)]] = lt.projection[static_cast<std::size_t>(proj_elem)];
    }
    auto formulas = enumerate_formulas(m.algebra.signature, vars, depth, caps.max_valuations);
    for (const auto& a : formulas) {
        bool theorem = matrix_consequence(m, {}, a, caps).holds;
        bool canonical = eval(lt.quotient, v0, a) == lt.filter_class;
        if (theorem != canonical) return false;
    }
    return true;
}

inline PointedAlgebra pointed_lt(const Matrix& m, int k, const Caps& caps = {}) {
    LTResult lt = lt_algebra(m, k, caps);
    if (!lt.admits)
        throw std::invalid_argument("pointed_lt: matrix does not admit the "
                                    "Lindenbaum-Tarski algebra at this arity");
    return PointedAlgebra{std::move(lt.quotient), lt.filter_class};
}

struct VarietyResult {
    bool member = true;
    std::optional<Formula> failing_identity; // lhs of the failing A = 1
};

// Bounded variety membership: p must validate A = 1 for every theorem A of m over
// ≤ k variables up to the given depth.
inline VarietyResult variety_membership(const PointedAlgebra& p, const Matrix& m, int k,
                                        int depth, const Caps& caps = {}) {
    Formula one = Formula::apply("one", {});
    for (const auto& a : theorems_upto(m, k, depth, caps))
        if (!check_identity(p, a, one)) return {false, a};
    return {};
}

} // namespace matlog
