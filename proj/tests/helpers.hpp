#pragma once

// Shared fixtures and independent oracles for the test suites. The oracles
// deliberately avoid the library's optimized code paths: naive definitions,
// exhaustive enumeration.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "matlog/congruence.hpp"
#include "matlog/io.hpp"

namespace helpers {

using namespace matlog;

inline std::string fixture(const std::string& name) {
    return std::string(FIXTURE_DIR) + "/" + name;
}

inline Matrix load(const std::string& name) { return io::load_matrix(fixture(name)); }

// all partitions of {0..n-1} as restricted-growth strings
inline std::vector<Partition> all_partitions(int n) {
    std::vector<Partition> out;
    std::vector<int> a(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, int i, int maxv) -> void {
        if (i == n) {
            out.push_back(Partition(a));
            return;
        }
        for (int v = 0; v <= maxv + 1; ++v) {
            a[static_cast<std::size_t>(i)] = v;
            self(self, i + 1, std::max(maxv, v));
        }
    };
    rec(rec, 0, -1);
    return out;
}

// congruence check straight from the definition: all related argument tuples
inline bool naive_is_congruence(const FiniteAlgebra& alg, const Partition& part) {
    for (std::size_t op = 0; op < alg.signature.connectives().size(); ++op) {
        int ar = alg.signature.connectives()[op].arity;
        if (ar == 0) continue;
        std::size_t total = 1;
        for (int i = 0; i < 2 * ar; ++i) total *= static_cast<std::size_t>(alg.size);
        for (std::size_t code = 0; code < total; ++code) {
            std::size_t c = code;
            std::vector<int> xs(static_cast<std::size_t>(ar)), ys(static_cast<std::size_t>(ar));
            bool related = true;
            for (int i = 0; i < ar; ++i) {
                xs[static_cast<std::size_t>(i)] = static_cast<int>(c % alg.size);
                c /= static_cast<std::size_t>(alg.size);
                ys[static_cast<std::size_t>(i)] = static_cast<int>(c % alg.size);
                c /= static_cast<std::size_t>(alg.size);
                if (!part.same_block(xs[static_cast<std::size_t>(i)],
                                     ys[static_cast<std::size_t>(i)]))
                    related = false;
            }
            if (related &&
                !part.same_block(alg.apply(op, xs), alg.apply(op, ys)))
                return false;
        }
    }
    return true;
}

// all unary polynomial functions: the subuniverse of A^A generated by the
// identity and all constant maps, closed under pointwise operations
inline std::set<std::vector<int>> unary_polynomials(const FiniteAlgebra& alg) {
    std::set<std::vector<int>> fns;
    std::vector<int> id(static_cast<std::size_t>(alg.size));
    for (int x = 0; x < alg.size; ++x) id[static_cast<std::size_t>(x)] = x;
    fns.insert(id);
    for (int c = 0; c < alg.size; ++c)
        fns.insert(std::vector<int>(static_cast<std::size_t>(alg.size), c));
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::vector<int>> cur(fns.begin(), fns.end());
        for (std::size_t op = 0; op < alg.signature.connectives().size(); ++op) {
            int ar = alg.signature.connectives()[op].arity;
            if (ar == 0) continue;
            std::vector<std::size_t> idx(static_cast<std::size_t>(ar), 0);
            for (;;) {
                std::vector<int> f(static_cast<std::size_t>(alg.size));
                for (int x = 0; x < alg.size; ++x) {
                    std::vector<int> args(static_cast<std::size_t>(ar));
                    for (int i = 0; i < ar; ++i)
                        args[static_cast<std::size_t>(i)] =
                            cur[idx[static_cast<std::size_t>(i)]][static_cast<std::size_t>(x)];
                    f[static_cast<std::size_t>(x)] = alg.apply(op, args);
                }
                if (fns.insert(f).second) grew = true;
                int i = ar - 1;
                while (i >= 0 && ++idx[static_cast<std::size_t>(i)] == cur.size())
                    idx[static_cast<std::size_t>(i--)] = 0;
                if (i < 0) break;
            }
        }
    }
    return fns;
}

// Leibniz congruence by the polynomial definition: a ~ b iff every unary
// polynomial sends them to the same side of the filter
inline Partition leibniz_poly_oracle(const Matrix& m) {
    auto polys = unary_polynomials(m.algebra);
    std::vector<int> assign(static_cast<std::size_t>(m.algebra.size), -1);
    int next = 0;
    for (int a = 0; a < m.algebra.size; ++a) {
        if (assign[static_cast<std::size_t>(a)] != -1) continue;
        assign[static_cast<std::size_t>(a)] = next;
        for (int b = a + 1; b < m.algebra.size; ++b) {
            if (assign[static_cast<std::size_t>(b)] != -1) continue;
            bool same = true;
            for (const auto& p : polys)
                if (m.designated(p[static_cast<std::size_t>(a)]) !=
                    m.designated(p[static_cast<std::size_t>(b)])) {
                    same = false;
                    break;
                }
            if (same) assign[static_cast<std::size_t>(b)] = next;
        }
        ++next;
    }
    return Partition(assign);
}

// naive recursive evaluation, independent of matlog::eval
inline int naive_eval(const FiniteAlgebra& alg, const Valuation& v, const Formula& f) {
    if (f.is_variable) return v.at(f.head);
    std::vector<int> args;
    for (const auto& a : f.args) args.push_back(naive_eval(alg, v, a));
    return alg.apply(*alg.signature.index_of(f.head), args);
}

// designation bitmasks over all valuations of `vars`, one mask per formula;
// valuation order matches mixed-radix counting so both matrices line up
inline std::vector<std::uint64_t> designation_masks(const Matrix& m,
                                                    const std::vector<std::string>& vars,
                                                    const std::vector<Formula>& pool) {
    std::vector<std::uint64_t> masks(pool.size(), 0);
    std::size_t bit = 0;
    std::vector<int> counter(vars.size(), 0);
    for (;;) {
        Valuation v;
        for (std::size_t i = 0; i < vars.size(); ++i) v[vars[i]] = counter[i];
        for (std::size_t f = 0; f < pool.size(); ++f)
            if (m.designated(naive_eval(m.algebra, v, pool[f]))) masks[f] |= 1ull << bit;
        ++bit;
        std::size_t i = vars.size();
        while (i > 0) {
            if (++counter[i - 1] < m.algebra.size) break;
            counter[i - 1] = 0;
            --i;
        }
        if (i == 0) break;
    }
    return masks;
}

// exhaustive sequent search: a pool sequent Γ ⊢ A (|Γ| ≤ 2) valid in `holds_in`
// and refuted in `fails_in`, or nullopt
inline std::optional<Sequent> distinguishing_sequent(const Matrix& holds_in,
                                                     const Matrix& fails_in,
                                                     const std::vector<std::string>& vars,
                                                     const std::vector<Formula>& pool) {
    auto ma = designation_masks(holds_in, vars, pool);
    auto mb = designation_masks(fails_in, vars, pool);
    std::size_t n = pool.size();
    auto check = [&](std::uint64_t pa, std::uint64_t pb, std::size_t concl,
                     std::vector<Formula> prem) -> std::optional<Sequent> {
        bool va = (pa & ~ma[concl]) == 0; // premises designated ⇒ conclusion designated
        bool vb = (pb & ~mb[concl]) == 0;
        if (va && !vb) return Sequent{std::move(prem), pool[concl]};
        return std::nullopt;
    };
    std::uint64_t all_a = 1, all_b = 1; // bit counts: one per valuation
    for (std::size_t i = 0; i < vars.size(); ++i) {
        all_a *= static_cast<std::uint64_t>(holds_in.algebra.size);
        all_b *= static_cast<std::uint64_t>(fails_in.algebra.size);
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::uint64_t fa = (1ull << all_a) - 1; // empty premise set: all valuations
        std::uint64_t fb = (1ull << all_b) - 1;
        if (auto s = check(fa, fb, c, {})) return s;
        for (std::size_t p = 0; p < n; ++p) {
            if (auto s = check(fa & ma[p], fb & mb[p], c, {pool[p]})) return s;
            for (std::size_t q = p + 1; q < n; ++q)
                if (auto s = check(fa & ma[p] & ma[q], fb & mb[p] & mb[q], c,
                                   {pool[p], pool[q]}))
                    return s;
        }
    }
    return std::nullopt;
}

// small random matrix over a fixed two-operation signature
inline Signature random_sig() {
    return Signature("rand", {{"f", 2}, {"g", 1}});
}

inline Matrix random_matrix(std::mt19937& rng, int size) {
    FiniteAlgebra alg;
    alg.signature = random_sig();
    alg.size = size;
    std::uniform_int_distribution<int> el(0, size - 1);
    alg.tables.push_back({});
    for (int i = 0; i < size * size; ++i) alg.tables[0].push_back(el(rng));
    alg.tables.push_back({});
    for (int i = 0; i < size; ++i) alg.tables[1].push_back(el(rng));
    // a nonempty proper subset as the filter
    std::uniform_int_distribution<int> mask_dist(1, (1 << size) - 2);
    int mask = mask_dist(rng);
    std::vector<int> filter;
    for (int e = 0; e < size; ++e)
        if (mask & (1 << e)) filter.push_back(e);
    Matrix m{std::move(alg), std::move(filter)};
    m.validate();
    return m;
}

} // namespace helpers
