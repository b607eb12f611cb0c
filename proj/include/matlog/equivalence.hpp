#pragma once

#include "matrix.hpp"

namespace matlog {

struct Counterexample {
    std::vector<Formula> premises;
    Formula conclusion;
    Valuation valuation;
};

struct ModelsResult {
    bool holds = true;
    std::optional<Counterexample> counterexample;
};

// Decides consequence(reference) ⊆ consequence(target).
//
// A failing sequent, if any exists, can be assumed (by structurality and the
// irrelevance of non-occurring variables) to be refuted by the canonical
// valuation w : p_i ↦ i−1 over k = |target| variables, at some target filter
// G. For that G the premise set may be taken maximal: Γ_G = all formulas whose
// target term function is designated at the identity tuple. Whether a
// reference valuation u (at reference filter F) is "active" — i.e. û[Γ_G] ⊆ F,
// so it constrains the conclusion — depends only on the subalgebra D(u) of
// reference × target generated by the pairs (u_i, i−1): u is active iff D(u)
// has no element (x,y) with y ∈ G and x ∉ F; otherwise that element's
// witnessing term is a premise discharging (F,u). A refuting conclusion then
// exists iff the joint closure over the active columns contains an element
// designated at every active (F,u) and undesignated at G. Counterexamples are
// re-verified by direct evaluation before being returned.
inline ModelsResult models(const GMatrix& target, const GMatrix& reference,
                           const Caps& caps = {}) {
    if (target.algebra.signature != reference.algebra.signature)
        throw std::invalid_argument("models: signature mismatch");
    const FiniteAlgebra& ref = reference.algebra;
    const FiniteAlgebra& tgt = target.algebra;
    int k = tgt.size;
    auto vars = canonical_vars(k);

    detail::check_valuation_cap(static_cast<std::size_t>(k), ref.size, caps);
    std::uint64_t ucount = 1;
    for (int i = 0; i < k; ++i) ucount *= static_cast<std::uint64_t>(ref.size);

    // D(u) for every reference valuation u, with witnesses
    std::vector<detail::ProductClosureResult> dclosures;
    dclosures.reserve(static_cast<std::size_t>(ucount));
    std::vector<std::vector<int>> uvals;
    {
        std::vector<int> u(static_cast<std::size_t>(k), 0);
        for (;;) {
            std::vector<std::vector<int>> gens;
            for (int i = 0; i < k; ++i) gens.push_back({u[static_cast<std::size_t>(i)], i});
            std::vector<const FiniteAlgebra*> coords{&ref, &tgt};
            dclosures.push_back(detail::product_closure(coords, gens, vars, false,
                                                        caps.max_cells, "models"));
            uvals.push_back(u);
            int i = k - 1;
            while (i >= 0 && ++u[static_cast<std::size_t>(i)] == ref.size)
                u[static_cast<std::size_t>(i--)] = 0;
            if (i < 0) break;
        }
    }

    auto in_set = [](const std::vector<int>& s, int e) {
        for (int x : s)
            if (x == e) return true;
        return false;
    };

    for (const auto& g : target.filters) {
        // classify (F, u) pairs; collect premises for inactive ones
        struct ActivePair {
            std::size_t filter_index;
            std::size_t u_index;
        };
        std::vector<ActivePair> active;
        std::vector<Formula> premises;
        for (std::size_t fi = 0; fi < reference.filters.size(); ++fi) {
            const auto& f = reference.filters[fi];
            for (std::size_t ui = 0; ui < dclosures.size(); ++ui) {
                const auto& d = dclosures[ui];
                int witness = -1;
                for (std::size_t e = 0; e < d.elements.size(); ++e) {
                    if (in_set(g, d.elements[e][1]) && !in_set(f, d.elements[e][0])) {
                        witness = static_cast<int>(e);
                        break;
                    }
                }
                if (witness == -1)
                    active.push_back({fi, ui});
                else
                    premises.push_back(d.witnesses[static_cast<std::size_t>(witness)]);
            }
        }

        // columns: distinct active u, in enumeration order
        std::vector<std::size_t> columns;
        std::vector<int> col_of_u(dclosures.size(), -1);
        for (const auto& ap : active)
            if (col_of_u[ap.u_index] == -1) {
                col_of_u[ap.u_index] = static_cast<int>(columns.size());
                columns.push_back(ap.u_index);
            }

        std::vector<const FiniteAlgebra*> coords(columns.size(), &ref);
        coords.push_back(&tgt);
        std::vector<std::vector<int>> gens;
        for (int i = 0; i < k; ++i) {
            std::vector<int> gen;
            gen.reserve(columns.size() + 1);
            for (std::size_t c : columns) gen.push_back(uvals[c][static_cast<std::size_t>(i)]);
            gen.push_back(i);
            gens.push_back(std::move(gen));
        }
        auto joint = detail::product_closure(coords, gens, vars, false, caps.max_cells, "models");

        for (std::size_t e = 0; e < joint.elements.size(); ++e) {
            const auto& tup = joint.elements[e];
            if (in_set(g, tup[columns.size()])) continue;
            bool ok = true;
            for (const auto& ap : active) {
                int col = col_of_u[ap.u_index];
                if (!in_set(reference.filters[ap.filter_index],
                            tup[static_cast<std::size_t>(col)])) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;

            // counterexample found: Γ ⊢ A in reference, refuted in target at w
            Counterexample cex;
            std::set<std::string> seen;
            for (const auto& p : premises) {
                std::string key = format_formula(p);
                if (seen.insert(key).second) cex.premises.push_back(p);
            }
            cex.conclusion = joint.witnesses[e];
            for (int i = 0; i < k; ++i) cex.valuation[vars[static_cast<std::size_t>(i)]] = i;

            if (!gmatrix_consequence(reference, cex.premises, cex.conclusion, caps).holds)
                throw std::logic_error("models: counterexample not valid in reference");
            for (const auto& p : cex.premises)
                if (!in_set(g, eval(tgt, cex.valuation, p)))
                    throw std::logic_error("models: counterexample premise not designated");
            if (in_set(g, eval(tgt, cex.valuation, cex.conclusion)))
                throw std::logic_error("models: counterexample conclusion designated");

            return {false, std::move(cex)};
        }
    }
    return {};
}

struct SameSystemResult {
    bool equivalent = true;
    // when false: the counterexample is valid in one system and refuted in the
    // other; failing_side names the g-matrix that refutes it (1-based)
    int failing_side = 0;
    std::optional<Counterexample> counterexample;
};

inline SameSystemResult same_system(const GMatrix& a, const GMatrix& b, const Caps& caps = {}) {
    auto ab = models(a, b, caps);
    if (!ab.holds) return {false, 1, std::move(ab.counterexample)};
    auto ba = models(b, a, caps);
    if (!ba.holds) return {false, 2, std::move(ba.counterexample)};
    return {};
}

} // namespace matlog
