#pragma once

#include "equivalence.hpp"
#include "matrix.hpp"

namespace matlog {

inline bool compatible(const Partition& part, const std::vector<int>& filter) {
    std::vector<char> in_filter(static_cast<std::size_t>(part.size()), 0);
    for (int e : filter) in_filter[static_cast<std::size_t>(e)] = 1;
    std::vector<int> block_state(static_cast<std::size_t>(part.num_blocks()), -1);
    for (int e = 0; e < part.size(); ++e) {
        int b = part.block_of(e);
        int s = in_filter[static_cast<std::size_t>(e)];
        if (block_state[static_cast<std::size_t>(b)] == -1)
            block_state[static_cast<std::size_t>(b)] = s;
        else if (block_state[static_cast<std::size_t>(b)] != s)
            return false;
    }
    return true;
}

namespace detail {

inline Partition two_block(int n, const std::vector<int>& filter) {
    std::vector<int> assign(static_cast<std::size_t>(n), 1);
    for (int e : filter) assign[static_cast<std::size_t>(e)] = 0;
    // all-designated or all-undesignated collapses to one block; Partition
    // canonicalization handles the labeling
    return Partition(std::move(assign));
}

// quotient tables without the is_congruence revalidation (callers guarantee it)
inline FiniteAlgebra quotient_unchecked(const FiniteAlgebra& alg, const Partition& cong) {
    int m = cong.num_blocks();
    std::vector<int> rep(static_cast<std::size_t>(m), -1);
    for (int e = 0; e < alg.size; ++e)
        if (rep[static_cast<std::size_t>(cong.block_of(e))] == -1)
            rep[static_cast<std::size_t>(cong.block_of(e))] = e;
    FiniteAlgebra q;
    q.signature = alg.signature;
    q.size = m;
    const auto& conns = alg.signature.connectives();
    for (std::size_t op = 0; op < conns.size(); ++op) {
        int r = conns[op].arity;
        std::size_t len = 1;
        for (int j = 0; j < r; ++j) len *= static_cast<std::size_t>(m);
        std::vector<int> tbl(len);
        std::vector<int> idx(static_cast<std::size_t>(r), 0);
        std::vector<int> args(static_cast<std::size_t>(r));
        for (std::size_t flat = 0; flat < len; ++flat) {
            for (int j = 0; j < r; ++j)
                args[static_cast<std::size_t>(j)] =
                    rep[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
            tbl[flat] = cong.block_of(alg.apply(op, args));
            int j = r - 1;
            while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == m)
                idx[static_cast<std::size_t>(j--)] = 0;
        }
        q.tables.push_back(std::move(tbl));
    }
    return q;
}

} // namespace detail

inline Partition leibniz_congruence(const Matrix& m) {
    return largest_congruence_below(m.algebra, detail::two_block(m.algebra.size, m.filter));
}

inline Matrix reduce(const Matrix& m) {
    Partition leib = leibniz_congruence(m);
    auto q = quotient(m.algebra, leib);
    std::set<int> img;
    for (int e : m.filter) img.insert(q.projection[static_cast<std::size_t>(e)]);
    Matrix out;
    out.algebra = std::move(q.algebra);
    out.filter.assign(img.begin(), img.end());
    return out;
}

// A theory at finite scale: a closed set of term functions of a Lindenbaum reduct.
struct TheoryOnReduct {
    LindenbaumReduct reduct;
    std::vector<int> members;
};

namespace detail {

// designation pattern (one bit per argument tuple) for every reduct element
inline std::vector<std::uint64_t> designation_patterns(const LindenbaumReduct& lr) {
    const auto& tfa = *lr.reduct;
    std::size_t tuples = tfa.tuple_count();
    if (tuples > 63) throw cap_exceeded("reduct has more than 63 argument tuples");
    std::vector<std::uint64_t> pat(tfa.elements.size(), 0);
    for (std::size_t e = 0; e < tfa.elements.size(); ++e)
        for (std::size_t t = 0; t < tuples; ++t)
            if (lr.base_designated(tfa.elements[e][t])) pat[e] |= 1ull << t;
    return pat;
}

// T_Σ: the tuples at which every member of the theory is designated
inline std::uint64_t theory_tuple_mask(const std::vector<std::uint64_t>& pat,
                                       const std::vector<int>& members, std::size_t tuples) {
    std::uint64_t mask = tuples >= 64 ? ~0ull : (1ull << tuples) - 1;
    for (int e : members) mask &= pat[static_cast<std::size_t>(e)];
    return mask;
}

// Frege relation from patterns: g ~ h iff their designation patterns agree on
// T_Σ. This unfolds the definition (members∪{g} ⊢ h and conversely, pointwise
// over tuples): the only tuples that can discriminate are those where all
// members are designated.
inline Partition frege_from_mask(const std::vector<std::uint64_t>& pat, std::uint64_t tmask) {
    std::map<std::uint64_t, int> ids;
    std::vector<int> assign(pat.size());
    for (std::size_t e = 0; e < pat.size(); ++e) {
        std::uint64_t key = pat[e] & tmask;
        auto it = ids.find(key);
        if (it == ids.end()) it = ids.emplace(key, static_cast<int>(ids.size())).first;
        assign[e] = it->second;
    }
    return Partition(std::move(assign));
}

} // namespace detail

inline Partition frege_relation(const TheoryOnReduct& t) {
    auto pat = detail::designation_patterns(t.reduct);
    std::uint64_t tmask =
        detail::theory_tuple_mask(pat, t.members, t.reduct.reduct->tuple_count());
    return detail::frege_from_mask(pat, tmask);
}

inline Partition suszko_congruence(const TheoryOnReduct& t) {
    return largest_congruence_below(t.reduct.reduct->as_algebra, frege_relation(t));
}

inline Partition leibniz_on_reduct(const TheoryOnReduct& t) {
    Matrix m{t.reduct.reduct->as_algebra, t.members};
    return leibniz_congruence(m);
}

// All congruence data for every closed set of a matrix at arity k, computed in
// one batch. Per-theory results are obtained by refining on the quotient by a
// congruence known to lie below the answer: for Σ with defining tuple set T,
// ∧{Ω̃(Th_t) : t∈T} ≤ Ω̃Σ and ∧{Ω(Th_t) : t∈T} ≤ ΩΣ, because the singleton
// relations meet to something below ΛΣ (resp. the two-block equivalence of Σ)
// and largest-congruence-below is monotone. The correspondence theorem then
// lets the remaining refinement run on the (much smaller) quotient.
struct CongruenceFamily {
    ClosureSystem system;
    std::vector<Partition> frege;
    std::vector<Partition> suszko;
    std::vector<Partition> leibniz;
    Partition tarski;
};

inline CongruenceFamily congruence_family(const Matrix& m, int k, const Caps& caps = {}) {
    CongruenceFamily fam;
    fam.system = closure_system(m, k, caps);
    const auto& lr = fam.system.reduct;
    const auto& alg = lr.reduct->as_algebra;
    int n = alg.size;
    std::size_t tuples = lr.reduct->tuple_count();
    auto pat = detail::designation_patterns(lr);

    detail::TranslationTables tt(alg);

    // full-scale results for the single-tuple theories Th_t
    std::vector<Partition> suszko_t(tuples), leib_t(tuples);
    for (std::size_t t = 0; t < tuples; ++t) {
        std::vector<int> members;
        for (int e = 0; e < n; ++e)
            if (pat[static_cast<std::size_t>(e)] & (1ull << t)) members.push_back(e);
        std::uint64_t tmask = detail::theory_tuple_mask(pat, members, tuples);
        suszko_t[t] = detail::largest_congruence_below(tt, detail::frege_from_mask(pat, tmask));
        leib_t[t] = detail::largest_congruence_below(tt, detail::two_block(n, members));
    }

    auto refine_via_quotient = [&](const Partition& seed, const Partition& upper) {
        if (seed.num_blocks() == n) {
            // seed is the identity: nothing to gain from the quotient
            return detail::largest_congruence_below(tt, upper);
        }
        FiniteAlgebra q = detail::quotient_unchecked(alg, seed);
        // project the upper bound onto the quotient (well-defined: seed ≤ upper)
        std::vector<int> proj_upper(static_cast<std::size_t>(q.size));
        for (int e = 0; e < n; ++e)
            proj_upper[static_cast<std::size_t>(seed.block_of(e))] = upper.block_of(e);
        Partition refined = largest_congruence_below(q, Partition(std::move(proj_upper)));
        std::vector<int> pulled(static_cast<std::size_t>(n));
        for (int e = 0; e < n; ++e)
            pulled[static_cast<std::size_t>(e)] =
                refined.block_of(seed.block_of(e));
        return Partition(std::move(pulled));
    };

    std::size_t count = fam.system.sets.size();
    fam.tarski = Partition::total(n);
    for (std::size_t i = 0; i < count; ++i) {
        const auto& members = fam.system.sets[i];
        const auto& tset = fam.system.tuple_sets[i];
        std::uint64_t tmask = 0;
        for (int t : tset) tmask |= 1ull << t;
        fam.frege.push_back(detail::frege_from_mask(pat, tmask));

        if (tset.size() == 1) {
            fam.suszko.push_back(suszko_t[static_cast<std::size_t>(tset[0])]);
            fam.leibniz.push_back(leib_t[static_cast<std::size_t>(tset[0])]);
        } else {
            Partition sseed = Partition::total(n), lseed = Partition::total(n);
            for (int t : tset) {
                sseed = sseed.meet(suszko_t[static_cast<std::size_t>(t)]);
                lseed = lseed.meet(leib_t[static_cast<std::size_t>(t)]);
            }
            fam.suszko.push_back(refine_via_quotient(sseed, fam.frege.back()));
            fam.leibniz.push_back(refine_via_quotient(lseed, detail::two_block(n, members)));
        }
        fam.tarski = fam.tarski.meet(fam.suszko.back());
    }
    return fam;
}

inline Partition tarski_congruence(const Matrix& m, int k, const Caps& caps = {}) {
    return congruence_family(m, k, caps).tarski;
}

inline Partition rasiowa_relation(const Matrix& m, const std::string& arrow, int k,
                                  const Caps& caps = {}) {
    auto opt = m.algebra.signature.index_of(arrow);
    if (!opt || m.algebra.signature.arity(arrow) != 2)
        throw std::invalid_argument("rasiowa_relation: '" + arrow + "' is not a binary connective");
    LindenbaumReduct lr = lindenbaum_reduct(m, k, caps);
    const auto& alg = lr.reduct->as_algebra;
    std::size_t op = *alg.signature.index_of(arrow);
    int n = alg.size;
    std::vector<char> taut(static_cast<std::size_t>(n), 0);
    for (int e : lr.filter) taut[static_cast<std::size_t>(e)] = 1;
    const auto& tbl = alg.tables[op];
    auto related = [&](int g, int h) {
        return taut[static_cast<std::size_t>(tbl[static_cast<std::size_t>(g) *
                                                     static_cast<std::size_t>(n) +
                                                 static_cast<std::size_t>(h)])] &&
               taut[static_cast<std::size_t>(tbl[static_cast<std::size_t>(h) *
                                                     static_cast<std::size_t>(n) +
                                                 static_cast<std::size_t>(g)])];
    };

    // union-find on the related pairs, then confirm the relation really is the
    // induced equivalence (it need not be transitive for arbitrary matrices)
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        return parent[static_cast<std::size_t>(x)] == x
                   ? x
                   : parent[static_cast<std::size_t>(x)] = find(parent[static_cast<std::size_t>(x)]);
    };
    for (int g = 0; g < n; ++g)
        if (!related(g, g))
            throw std::invalid_argument(
                "rasiowa_relation: the relation is not reflexive on this reduct");
    for (int g = 0; g < n; ++g)
        for (int h = g + 1; h < n; ++h)
            if (related(g, h)) {
                int a = find(g), b = find(h);
                if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
            }
    for (int g = 0; g < n; ++g)
        for (int h = g + 1; h < n; ++h)
            if ((find(g) == find(h)) != (related(g, h) ? true : false))
                throw std::invalid_argument(
                    "rasiowa_relation: the relation is not an equivalence on this reduct");
    std::vector<int> assign(static_cast<std::size_t>(n));
    for (int e = 0; e < n; ++e) assign[static_cast<std::size_t>(e)] = find(e);
    return Partition(std::move(assign));
}

struct ImplicativeViolation {
    std::string clause;        // "i1" … "i5"
    std::vector<int> filter;   // the S-filter where it fails
    std::string detail;        // human-readable witnesses
};

struct ImplicativeResult {
    bool holds = true;
    std::optional<ImplicativeViolation> violation;
};

// (i1)–(i5) instantiated over every S-filter on m.algebra. A subset G is an
// S-filter when ⟨algebra, G⟩ is a model of m's consequence, decided via the
// equivalence module.
inline ImplicativeResult is_implicative_extensional(const Matrix& m, const std::string& arrow,
                                                    const Caps& caps = {}) {
    auto opt = m.algebra.signature.index_of(arrow);
    if (!opt || m.algebra.signature.arity(arrow) != 2)
        throw std::invalid_argument("is_implicative_extensional: '" + arrow +
                                    "' is not a binary connective");
    std::size_t aop = *opt;
    int n = m.algebra.size;
    if (n > 20) throw cap_exceeded("is_implicative_extensional: S-filter enumeration over 2^" +
                                   std::to_string(n) + " subsets");
    const auto& atbl = m.algebra.tables[aop];
    auto arr = [&](int a, int b) {
        return atbl[static_cast<std::size_t>(a) * static_cast<std::size_t>(n) +
                    static_cast<std::size_t>(b)];
    };
    GMatrix ref = GMatrix::of(m);

    auto fail = [&](const std::string& clause, const std::vector<int>& g,
                    const std::string& d) {
        ImplicativeResult r;
        r.holds = false;
        r.violation = ImplicativeViolation{clause, g, d};
        return r;
    };

    for (std::uint64_t mask = 1; mask < (1ull << n); ++mask) {
        std::vector<int> g;
        std::vector<char> in(static_cast<std::size_t>(n), 0);
        for (int e = 0; e < n; ++e)
            if (mask & (1ull << e)) {
                g.push_back(e);
                in[static_cast<std::size_t>(e)] = 1;
            }
        GMatrix tgt{m.algebra, {g}};
        if (!models(tgt, ref, caps).holds) continue; // not an S-filter

        for (int a = 0; a < n; ++a)
            if (!in[static_cast<std::size_t>(arr(a, a))])
                return fail("i1", g, "a=" + m.algebra.label(a));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (in[static_cast<std::size_t>(b)] && !in[static_cast<std::size_t>(arr(a, b))])
                    return fail("i2", g, "a=" + m.algebra.label(a) + ", b=" + m.algebra.label(b));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    if (in[static_cast<std::size_t>(arr(a, b))] &&
                        in[static_cast<std::size_t>(arr(b, c))] &&
                        !in[static_cast<std::size_t>(arr(a, c))])
                        return fail("i3", g,
                                    "a=" + m.algebra.label(a) + ", b=" + m.algebra.label(b) +
                                        ", c=" + m.algebra.label(c));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (in[static_cast<std::size_t>(a)] && in[static_cast<std::size_t>(arr(a, b))] &&
                    !in[static_cast<std::size_t>(b)])
                    return fail("i4", g, "a=" + m.algebra.label(a) + ", b=" + m.algebra.label(b));
        const auto& conns = m.algebra.signature.connectives();
        for (std::size_t op = 0; op < conns.size(); ++op) {
            int r = conns[op].arity;
            if (r == 0) continue;
            std::size_t pairs = 1;
            for (int j = 0; j < 2 * r; ++j) pairs *= static_cast<std::size_t>(n);
            std::vector<int> idx(static_cast<std::size_t>(2 * r), 0);
            for (std::size_t flat = 0; flat < pairs; ++flat) {
                bool premise = true;
                for (int j = 0; j < r && premise; ++j) {
                    int ai = idx[static_cast<std::size_t>(j)];
                    int bi = idx[static_cast<std::size_t>(r + j)];
                    if (!in[static_cast<std::size_t>(arr(ai, bi))] ||
                        !in[static_cast<std::size_t>(arr(bi, ai))])
                        premise = false;
                }
                if (premise) {
                    std::vector<int> as(idx.begin(), idx.begin() + r);
                    std::vector<int> bs(idx.begin() + r, idx.end());
                    int pa = m.algebra.apply(op, as);
                    int pb = m.algebra.apply(op, bs);
                    if (!in[static_cast<std::size_t>(arr(pa, pb))]) {
                        std::string d = "connective " + conns[op].sym;
                        return fail("i5", g, d);
                    }
                }
                int j = 2 * r - 1;
                while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == n)
                    idx[static_cast<std::size_t>(j--)] = 0;
            }
        }
    }
    return {};
}

} // namespace matlog
