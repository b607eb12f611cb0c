#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>

#include "algebra.hpp"

namespace matlog {

struct Caps {
    std::uint64_t max_valuations = 1ull << 20;
    std::uint64_t max_cells = 1ull << 20;
};

struct Matrix {
    FiniteAlgebra algebra;
    std::vector<int> filter;

    void validate() const {
        algebra.validate();
        if (filter.empty()) throw fixture_error("matrix filter must be nonempty");
        for (int e : filter)
            if (e < 0 || e >= algebra.size) throw fixture_error("filter element out of range");
    }

    bool designated(int e) const {
        for (int f : filter)
            if (f == e) return true;
        return false;
    }
};

struct GMatrix {
    FiniteAlgebra algebra;
    std::vector<std::vector<int>> filters;

    void validate() const {
        algebra.validate();
        if (filters.empty()) throw fixture_error("g-matrix needs at least one filter");
        for (const auto& f : filters)
            for (int e : f)
                if (e < 0 || e >= algebra.size)
                    throw fixture_error("filter element out of range");
    }

    static GMatrix of(const Matrix& m) { return {m.algebra, {m.filter}}; }
};

using Valuation = std::map<std::string, int>;

struct ConsequenceResult {
    bool holds = false;
    std::optional<Valuation> witness; // a refuting valuation when holds == false
};

namespace detail {

// Mixed-radix enumeration of valuations in variable-name order, first variable
// most significant; invokes fn on each until fn returns false.
template <typename Fn>
void for_each_valuation(const std::vector<std::string>& vars, int radix, Fn&& fn) {
    std::vector<int> counter(vars.size(), 0);
    for (;;) {
        Valuation v;
        for (std::size_t i = 0; i < vars.size(); ++i) v[vars[i]] = counter[i];
        if (!fn(v)) return;
        int i = static_cast<int>(vars.size()) - 1;
        while (i >= 0 && ++counter[static_cast<std::size_t>(i)] == radix)
            counter[static_cast<std::size_t>(i--)] = 0;
        if (i < 0) return;
    }
}

inline void check_valuation_cap(std::size_t nvars, int radix, const Caps& caps) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < nvars; ++i) {
        count *= static_cast<std::uint64_t>(radix);
        if (count > caps.max_valuations)
            throw cap_exceeded("valuation count exceeds --max-valuations");
    }
}

} // namespace detail

inline ConsequenceResult matrix_consequence(const Matrix& m, const std::vector<Formula>& premises,
                                            const Formula& conclusion, const Caps& caps = {}) {
    std::set<std::string> vs = vars_of(premises);
    collect_vars(conclusion, vs);
    std::vector<std::string> vars(vs.begin(), vs.end());
    detail::check_valuation_cap(vars.size(), m.algebra.size, caps);

    ConsequenceResult out;
    out.holds = true;
    detail::for_each_valuation(vars, m.algebra.size, [&](const Valuation& v) {
        for (const auto& p : premises)
            if (!m.designated(eval(m.algebra, v, p))) return true;
        if (!m.designated(eval(m.algebra, v, conclusion))) {
            out.holds = false;
            out.witness = v;
            return false;
        }
        return true;
    });
    return out;
}

inline ConsequenceResult gmatrix_consequence(const GMatrix& gm,
                                             const std::vector<Formula>& premises,
                                             const Formula& conclusion, const Caps& caps = {}) {
    for (const auto& f : gm.filters) {
        Matrix m{gm.algebra, f};
        if (f.empty()) {
            // an empty filter designates nothing: premises never all designated
            // unless there are none, in which case nothing can be concluded
            if (premises.empty()) {
                std::set<std::string> vs = vars_of(conclusion);
                ConsequenceResult out;
                out.holds = false;
                Valuation v;
                for (const auto& name : vs) v[name] = 0;
                out.witness = v;
                return out;
            }
            continue;
        }
        auto r = matrix_consequence(m, premises, conclusion, caps);
        if (!r.holds) return r;
    }
    return {true, std::nullopt};
}

inline std::vector<std::string> canonical_vars(int k) {
    std::vector<std::string> vars;
    for (int i = 1; i <= k; ++i) vars.push_back("p" + std::to_string(i));
    return vars;
}

inline std::vector<Formula> theorems_upto(const Matrix& m, int k, int depth,
                                          const Caps& caps = {}) {
    auto formulas = enumerate_formulas(m.algebra.signature, canonical_vars(k), depth,
                                       caps.max_valuations);
    std::vector<Formula> out;
    for (const auto& f : formulas)
        if (matrix_consequence(m, {}, f, caps).holds) out.push_back(f);
    return out;
}

namespace detail {

struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::uint64_t h = 1469598103934665603ull;
        for (int x : v) h = (h ^ static_cast<std::uint64_t>(x + 1)) * 1099511628211ull;
        return static_cast<std::size_t>(h);
    }
};

struct ProductClosureResult {
    std::vector<std::vector<int>> elements; // tuples, one entry per coordinate
    std::vector<Formula> witnesses;
    std::vector<std::vector<int>> tables; // induced tables when requested
};

// internal bound for induced operation tables (|closure|^arity cells per op);
// separate from Caps::max_cells, which governs element-table cells
constexpr std::uint64_t induced_table_cell_cap = 1ull << 27;

// Closure of generator tuples inside a product of same-signature algebras,
// acting coordinatewise; records one witnessing term per element and,
// optionally, the induced operation tables of the closure.
inline ProductClosureResult product_closure(const std::vector<const FiniteAlgebra*>& coords,
                                            const std::vector<std::vector<int>>& gens,
                                            const std::vector<std::string>& gen_names,
                                            bool build_tables, std::uint64_t max_cells,
                                            const std::string& what) {
    const Signature& sig = coords.at(0)->signature;
    std::size_t L = coords.size();
    const auto& conns = sig.connectives();

    ProductClosureResult out;
    std::unordered_map<std::vector<int>, int, VecHash> index;
    auto add = [&](std::vector<int> tup, Formula w) -> int {
        auto it = index.find(tup);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(out.elements.size());
        index.emplace(tup, id);
        out.elements.push_back(std::move(tup));
        out.witnesses.push_back(std::move(w));
        if (static_cast<std::uint64_t>(out.elements.size()) * L > max_cells)
            throw cap_exceeded(what + ": element table cells exceed --max-cells");
        return id;
    };

    for (std::size_t g = 0; g < gens.size(); ++g) {
        std::string name = g < gen_names.size() ? gen_names[g] : "x" + std::to_string(g + 1);
        add(gens[g], Formula::variable(name));
    }
    for (std::size_t op = 0; op < conns.size(); ++op) {
        if (conns[op].arity != 0) continue;
        std::vector<int> tup(L);
        for (std::size_t c = 0; c < L; ++c) tup[c] = coords[c]->tables[op][0];
        add(std::move(tup), Formula::apply(conns[op].sym, {}));
    }
    if (out.elements.empty())
        throw std::invalid_argument(what + ": no generators and no constants");

    std::vector<int> result(L);
    std::size_t processed = 0;
    while (processed < out.elements.size()) {
        std::size_t frontier_start = processed;
        std::size_t known = out.elements.size();
        processed = known;
        for (std::size_t op = 0; op < conns.size(); ++op) {
            int r = conns[op].arity;
            if (r == 0) continue;
            std::vector<std::size_t> idx(static_cast<std::size_t>(r), 0);
            std::vector<int> args(static_cast<std::size_t>(r));
            for (;;) {
                bool fresh = frontier_start == 0;
                for (int j = 0; j < r && !fresh; ++j)
                    if (idx[static_cast<std::size_t>(j)] >= frontier_start) fresh = true;
                if (fresh) {
                    for (std::size_t c = 0; c < L; ++c) {
                        for (int j = 0; j < r; ++j)
                            args[static_cast<std::size_t>(j)] =
                                out.elements[idx[static_cast<std::size_t>(j)]][c];
                        result[c] = coords[c]->apply(op, args);
                    }
                    if (index.find(result) == index.end()) {
                        std::vector<Formula> wargs;
                        wargs.reserve(static_cast<std::size_t>(r));
                        for (int j = 0; j < r; ++j)
                            wargs.push_back(out.witnesses[idx[static_cast<std::size_t>(j)]]);
                        add(result, Formula::apply(conns[op].sym, std::move(wargs)));
                    }
                }
                int j = r - 1;
                while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == known)
                    idx[static_cast<std::size_t>(j--)] = 0;
                if (j < 0) break;
            }
        }
    }

    if (build_tables) {
        std::size_t n = out.elements.size();
        for (std::size_t op = 0; op < conns.size(); ++op) {
            int r = conns[op].arity;
            std::uint64_t len = 1;
            for (int j = 0; j < r; ++j) len *= static_cast<std::uint64_t>(n);
            if (len > induced_table_cell_cap)
                throw cap_exceeded(what + ": induced operation table too large");
            std::vector<int> tbl(static_cast<std::size_t>(len));
            std::vector<std::size_t> idx(static_cast<std::size_t>(r), 0);
            std::vector<int> args(static_cast<std::size_t>(r));
            for (std::uint64_t flat = 0; flat < len; ++flat) {
                for (std::size_t c = 0; c < L; ++c) {
                    for (int j = 0; j < r; ++j)
                        args[static_cast<std::size_t>(j)] =
                            out.elements[idx[static_cast<std::size_t>(j)]][c];
                    result[c] = coords[c]->apply(op, args);
                }
                tbl[static_cast<std::size_t>(flat)] = index.at(result);
                int j = r - 1;
                while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == n)
                    idx[static_cast<std::size_t>(j--)] = 0;
            }
            out.tables.push_back(std::move(tbl));
        }
    }
    return out;
}

} // namespace detail

// F(k): the subalgebra of A^(A^k) generated by the k projections, realized on
// flat function tables over the |A|^k argument tuples; tuple order is
// mixed-radix with p1 most significant.
struct TermFunctionAlgebra {
    FiniteAlgebra base;
    int arity = 0;
    std::vector<std::vector<int>> elements; // per element, table of length |A|^k
    std::vector<Formula> representatives;   // term over p1..pk per element
    std::vector<int> generator_indices;     // positions of the projections
    FiniteAlgebra as_algebra;               // induced operations on the closure

    std::size_t tuple_count() const { return elements.empty() ? 0 : elements[0].size(); }

    // decode argument tuple index t into the tuple itself
    std::vector<int> tuple(std::size_t t) const {
        std::vector<int> out(static_cast<std::size_t>(arity));
        for (int i = arity - 1; i >= 0; --i) {
            out[static_cast<std::size_t>(i)] = static_cast<int>(t % static_cast<std::size_t>(base.size));
            t /= static_cast<std::size_t>(base.size);
        }
        return out;
    }
};

inline TermFunctionAlgebra term_function_algebra(const FiniteAlgebra& alg, int k,
                                                 const Caps& caps = {}) {
    if (k < 0) throw std::invalid_argument("arity must be nonnegative");
    std::uint64_t tuples = 1;
    for (int i = 0; i < k; ++i) {
        tuples *= static_cast<std::uint64_t>(alg.size);
        if (tuples > caps.max_cells)
            throw cap_exceeded("term_function_algebra: tuple space exceeds --max-cells");
    }
    std::size_t L = static_cast<std::size_t>(tuples);

    std::vector<const FiniteAlgebra*> coords(L, &alg);
    // projection i maps tuple t to t[i]; with p1 most significant,
    // t[i] = (t / size^(k-1-i)) mod size
    std::vector<std::vector<int>> gens;
    for (int i = 0; i < k; ++i) {
        std::vector<int> proj(L);
        std::size_t stride = 1;
        for (int j = i + 1; j < k; ++j) stride *= static_cast<std::size_t>(alg.size);
        for (std::size_t t = 0; t < L; ++t)
            proj[t] = static_cast<int>((t / stride) % static_cast<std::size_t>(alg.size));
        gens.push_back(std::move(proj));
    }

    auto closure = detail::product_closure(coords, gens, canonical_vars(k), true,
                                           caps.max_cells, "term_function_algebra");

    TermFunctionAlgebra tfa;
    tfa.base = alg;
    tfa.arity = k;
    tfa.elements = std::move(closure.elements);
    tfa.representatives = std::move(closure.witnesses);
    for (int i = 0; i < k; ++i) tfa.generator_indices.push_back(i);
    tfa.as_algebra.signature = alg.signature;
    tfa.as_algebra.size = static_cast<int>(tfa.elements.size());
    tfa.as_algebra.tables = std::move(closure.tables);
    return tfa;
}

// The Lindenbaum reduct: F(k) with the tautology functions designated.
struct LindenbaumReduct {
    std::shared_ptr<const TermFunctionAlgebra> reduct;
    std::vector<int> base_filter; // filter of the underlying matrix
    std::vector<int> filter;      // indices of the tautology functions

    Matrix as_matrix() const { return {reduct->as_algebra, filter}; }

    bool base_designated(int value) const {
        for (int f : base_filter)
            if (f == value) return true;
        return false;
    }
};

inline LindenbaumReduct lindenbaum_reduct(const Matrix& m, int k, const Caps& caps = {}) {
    LindenbaumReduct out;
    out.reduct = std::make_shared<TermFunctionAlgebra>(term_function_algebra(m.algebra, k, caps));
    out.base_filter = m.filter;
    const auto& els = out.reduct->elements;
    for (std::size_t e = 0; e < els.size(); ++e) {
        bool taut = true;
        for (int v : els[e])
            if (!out.base_designated(v)) {
                taut = false;
                break;
            }
        if (taut) out.filter.push_back(static_cast<int>(e));
    }
    if (out.filter.empty())
        throw fixture_error("lindenbaum_reduct: no tautology functions (empty filter)");
    return out;
}

// The closure system of k-variable theories: all intersections of the sets
// Th_t = {g : g(t) designated}, plus the full set. tuple_sets[i] records the
// maximal defining tuple set {t : sets[i] ⊆ Th_t}.
struct ClosureSystem {
    LindenbaumReduct reduct;
    std::vector<std::vector<int>> sets;       // sorted element lists
    std::vector<std::vector<int>> tuple_sets; // per set, sorted tuple indices
};

inline ClosureSystem closure_system(const Matrix& m, int k, const Caps& caps = {}) {
    ClosureSystem cs;
    cs.reduct = lindenbaum_reduct(m, k, caps);
    const auto& tfa = *cs.reduct.reduct;
    std::size_t n = tfa.elements.size();
    std::size_t tuples = tfa.tuple_count();
    if (tuples > 63)
        throw cap_exceeded("closure_system: more than 63 argument tuples");

    // designation pattern per element: bit t set iff g(t) is designated
    std::vector<std::uint64_t> pat(n, 0);
    for (std::size_t e = 0; e < n; ++e)
        for (std::size_t t = 0; t < tuples; ++t)
            if (cs.reduct.base_designated(tfa.elements[e][t])) pat[e] |= 1ull << t;

    // distinct theories = distinct intersection results over T ⊆ tuples; a set
    // is determined by its maximal T, so enumerate T subsets via the patterns.
    // ∩{Th_t : t∈T} = {e : pat[e] ⊇ T}; maximal defining set = ∩{pat[e] : e in set}.
    std::uint64_t full_mask = tuples == 64 ? ~0ull : (1ull << tuples) - 1;
    std::map<std::uint64_t, std::vector<int>> by_maximal_t; // maximal T -> members
    std::uint64_t subset_count = 1ull << tuples;
    if (subset_count > caps.max_valuations)
        throw cap_exceeded("closure_system: tuple subset count exceeds --max-valuations");
    for (std::uint64_t T = 0; T < subset_count; ++T) {
        std::vector<int> members;
        std::uint64_t maximal = full_mask;
        for (std::size_t e = 0; e < n; ++e)
            if ((pat[e] & T) == T) {
                members.push_back(static_cast<int>(e));
                maximal &= pat[e];
            }
        if (members.empty()) maximal = full_mask; // the empty intersection result
        auto it = by_maximal_t.find(maximal);
        if (it == by_maximal_t.end()) by_maximal_t.emplace(maximal, std::move(members));
    }
    // the full set (inconsistent theory) is always present: T = ∅ yields it
    // unless every element is designated somewhere it isn't... T=0 gives all
    // elements, so it is always in the map.

    for (auto& [tmask, members] : by_maximal_t) {
        cs.sets.push_back(std::move(members));
        std::vector<int> ts;
        for (std::size_t t = 0; t < tuples; ++t)
            if (tmask & (1ull << t)) ts.push_back(static_cast<int>(t));
        cs.tuple_sets.push_back(std::move(ts));
    }
    return cs;
}

inline std::vector<std::vector<int>> closed_sets(const Matrix& m, int k, const Caps& caps = {}) {
    return closure_system(m, k, caps).sets;
}

inline bool is_weakly_adequate(const Matrix& m, const Matrix& reference, int k, int depth,
                               const Caps& caps = {}) {
    if (m.algebra.signature != reference.algebra.signature) return false;
    auto formulas = enumerate_formulas(m.algebra.signature, canonical_vars(k), depth,
                                       caps.max_valuations);
    for (const auto& f : formulas)
        if (matrix_consequence(m, {}, f, caps).holds !=
            matrix_consequence(reference, {}, f, caps).holds)
            return false;
    return true;
}

} // namespace matlog
