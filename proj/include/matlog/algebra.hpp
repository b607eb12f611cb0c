#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <tuple>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "language.hpp"

namespace matlog {

// A finite algebra over a signature. Universe = {0,…,size-1}; one table per
// connective, row-major with the leftmost argument most significant.
struct FiniteAlgebra {
    Signature signature;
    int size = 0;
    std::vector<std::vector<int>> tables;
    std::vector<std::string> labels; // optional; empty or size entries

    void validate() const {
        if (size <= 0) throw fixture_error("algebra size must be positive");
        const auto& conns = signature.connectives();
        if (tables.size() != conns.size())
            throw fixture_error("expected one table per connective");
        for (std::size_t i = 0; i < conns.size(); ++i) {
            std::size_t want = 1;
            for (int a = 0; a < conns[i].arity; ++a) want *= static_cast<std::size_t>(size);
            if (tables[i].size() != want)
                throw fixture_error("table for '" + conns[i].sym + "' has wrong length");
            for (int e : tables[i])
                if (e < 0 || e >= size)
                    throw fixture_error("table entry out of range for '" + conns[i].sym + "'");
        }
        if (!labels.empty() && labels.size() != static_cast<std::size_t>(size))
            throw fixture_error("labels must cover the universe");
    }

    int apply(std::size_t op, const std::vector<int>& args) const {
        std::size_t idx = 0;
        for (int a : args) idx = idx * static_cast<std::size_t>(size) + static_cast<std::size_t>(a);
        return tables[op][idx];
    }

    std::string label(int e) const {
        if (!labels.empty()) return labels[static_cast<std::size_t>(e)];
        return std::to_string(e);
    }
};

struct PointedAlgebra {
    FiniteAlgebra algebra;
    int one = 0;

    // The algebra with an extra 0-ary connective "one" naming the point,
    // so identities A = 1 can be written as formulas.
    FiniteAlgebra extended() const {
        FiniteAlgebra out = algebra;
        if (!out.signature.has("one")) {
            auto conns = out.signature.connectives();
            conns.push_back({"one", 0});
            out.signature = Signature(out.signature.name(), std::move(conns));
            out.tables.push_back({one});
        }
        return out;
    }
};

// An equivalence relation on {0,…,n-1} in canonical form: block ids appear in
// order of first occurrence, so equal values mean equal set-partitions.
class Partition {
public:
    Partition() = default;

    explicit Partition(std::vector<int> assignment) : blocks_(std::move(assignment)) {
        canonicalize();
    }

    static Partition identity(int n) {
        std::vector<int> v(static_cast<std::size_t>(n));
        std::iota(v.begin(), v.end(), 0);
        return Partition(std::move(v));
    }

    static Partition total(int n) {
        return Partition(std::vector<int>(static_cast<std::size_t>(n), 0));
    }

    int size() const { return static_cast<int>(blocks_.size()); }
    int block_of(int e) const { return blocks_[static_cast<std::size_t>(e)]; }
    int num_blocks() const { return count_; }
    const std::vector<int>& assignment() const { return blocks_; }

    bool same_block(int a, int b) const {
        return blocks_[static_cast<std::size_t>(a)] == blocks_[static_cast<std::size_t>(b)];
    }

    // this ≤ other in the refinement order (every block of this inside a block of other).
    bool refines(const Partition& other) const {
        std::vector<int> image(static_cast<std::size_t>(count_), -1);
        for (std::size_t e = 0; e < blocks_.size(); ++e) {
            int mine = blocks_[e], theirs = other.blocks_[e];
            if (image[static_cast<std::size_t>(mine)] == -1)
                image[static_cast<std::size_t>(mine)] = theirs;
            else if (image[static_cast<std::size_t>(mine)] != theirs)
                return false;
        }
        return true;
    }

    // Coarsest common refinement (intersection of the two equivalences).
    Partition meet(const Partition& other) const {
        std::vector<int> combined(blocks_.size());
        std::map<std::pair<int, int>, int> ids;
        for (std::size_t e = 0; e < blocks_.size(); ++e) {
            auto key = std::make_pair(blocks_[e], other.blocks_[e]);
            auto it = ids.find(key);
            if (it == ids.end()) it = ids.emplace(key, static_cast<int>(ids.size())).first;
            combined[e] = it->second;
        }
        return Partition(std::move(combined));
    }

    std::vector<std::vector<int>> blocks() const {
        std::vector<std::vector<int>> out(static_cast<std::size_t>(count_));
        for (std::size_t e = 0; e < blocks_.size(); ++e)
            out[static_cast<std::size_t>(blocks_[e])].push_back(static_cast<int>(e));
        return out;
    }

    bool operator==(const Partition& other) const { return blocks_ == other.blocks_; }
    bool operator!=(const Partition& other) const { return !(*this == other); }

private:
    void canonicalize() {
        std::vector<int> relabel;
        int next = 0;
        std::vector<int> seen;
        seen.assign(blocks_.size(), -1);
        for (auto& b : blocks_) {
            if (b < 0 || static_cast<std::size_t>(b) >= blocks_.size())
                throw std::out_of_range("partition block id out of range");
            if (seen[static_cast<std::size_t>(b)] == -1) seen[static_cast<std::size_t>(b)] = next++;
            b = seen[static_cast<std::size_t>(b)];
        }
        count_ = next;
    }

    std::vector<int> blocks_;
    int count_ = 0;
};

inline int eval(const FiniteAlgebra& alg, const std::map<std::string, int>& v, const Formula& f) {
    if (f.is_variable) {
        auto it = v.find(f.head);
        if (it == v.end()) throw std::out_of_range("unbound variable '" + f.head + "'");
        return it->second;
    }
    auto op = alg.signature.index_of(f.head);
    if (!op) throw std::out_of_range("connective '" + f.head + "' not in algebra signature");
    std::vector<int> args;
    args.reserve(f.args.size());
    for (const auto& a : f.args) args.push_back(eval(alg, v, a));
    return alg.apply(*op, args);
}

namespace detail {

// One-coordinate translation tables: for each (operation, coordinate), a matrix
// t[a*contexts + c] = op(..., a, ...) with the other coordinates fixed by context
// c. Binary operations get a transposed copy so both coordinates scan
// contiguously; shared across refinement calls on the same algebra.
struct TranslationTables {
    int n = 0;
    struct Family {
        const int* data;
        std::size_t contexts;
    };
    std::vector<Family> families;
    std::vector<std::vector<int>> owned;

    explicit TranslationTables(const FiniteAlgebra& alg) : n(alg.size) {
        const auto& conns = alg.signature.connectives();
        std::size_t un = static_cast<std::size_t>(n);
        for (std::size_t op = 0; op < conns.size(); ++op) {
            int r = conns[op].arity;
            const auto& tbl = alg.tables[op];
            if (r == 0) continue;
            if (r == 1) {
                families.push_back({tbl.data(), 1});
            } else if (r == 2) {
                families.push_back({tbl.data(), un}); // t[a*n+c] = op(a,c)
                owned.emplace_back(un * un);
                auto& tr = owned.back();
                for (std::size_t c = 0; c < un; ++c)
                    for (std::size_t a = 0; a < un; ++a) tr[a * un + c] = tbl[c * un + a];
                families.push_back({tr.data(), un}); // t[a*n+c] = op(c,a)
            } else {
                // Small algebras only; materialize each coordinate.
                std::size_t ctx = tbl.size() / un;
                for (int coord = 0; coord < r; ++coord) {
                    owned.emplace_back(un * ctx);
                    auto& t = owned.back();
                    // stride of the varying coordinate in the flat table
                    std::size_t stride = 1;
                    for (int j = coord + 1; j < r; ++j) stride *= un;
                    std::size_t ci = 0;
                    std::vector<std::size_t> rest(static_cast<std::size_t>(r - 1), 0);
                    for (;;) {
                        std::size_t base = 0;
                        int k = 0;
                        for (int j = 0; j < r; ++j) {
                            std::size_t mul = 1;
                            for (int j2 = j + 1; j2 < r; ++j2) mul *= un;
                            if (j != coord) base += rest[static_cast<std::size_t>(k++)] * mul;
                        }
                        for (std::size_t a = 0; a < un; ++a)
                            t[a * ctx + ci] = tbl[base + a * stride];
                        ++ci;
                        int j = r - 2;
                        while (j >= 0 && ++rest[static_cast<std::size_t>(j)] == un)
                            rest[static_cast<std::size_t>(j--)] = 0;
                        if (j < 0) break;
                    }
                    families.push_back({t.data(), ctx});
                }
            }
        }
        // fix up pointers into owned (vector may have reallocated)
        std::size_t oi = 0;
        std::size_t fi = 0;
        for (std::size_t op = 0; op < conns.size(); ++op) {
            int r = conns[op].arity;
            if (r == 0) continue;
            if (r == 1) {
                ++fi;
            } else if (r == 2) {
                ++fi;
                families[fi++].data = owned[oi++].data();
            } else {
                for (int coord = 0; coord < r; ++coord) families[fi++].data = owned[oi++].data();
            }
        }
    }
};

inline void regroup_by_keys(std::vector<int>& blocks,
                            const std::vector<std::tuple<int, std::uint64_t, std::uint64_t>>& keys,
                            int& nblocks) {
    std::size_t n = blocks.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        return keys[static_cast<std::size_t>(x)] < keys[static_cast<std::size_t>(y)];
    });
    std::vector<int> gid(n);
    int next = -1;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == 0 || keys[static_cast<std::size_t>(order[i])] !=
                          keys[static_cast<std::size_t>(order[i - 1])])
            ++next;
        gid[static_cast<std::size_t>(order[i])] = next;
    }
    // canonical relabel by first occurrence
    std::vector<int> relabel(n, -1);
    int fresh = 0;
    for (std::size_t e = 0; e < n; ++e) {
        int g = gid[e];
        if (relabel[static_cast<std::size_t>(g)] == -1) relabel[static_cast<std::size_t>(g)] = fresh++;
        blocks[e] = relabel[static_cast<std::size_t>(g)];
    }
    nblocks = fresh;
}

// Largest congruence refining `eq`: iterated splitting by translation images.
// Block keys are exact tuples (old block, 128-bit sequence hash of image
// blocks); groups compare hashes exactly, so a split never merges.
inline Partition largest_congruence_below(const TranslationTables& tt, const Partition& eq) {
    int n = tt.n;
    std::vector<int> blocks = eq.assignment();
    int nblocks = eq.num_blocks();
    std::vector<std::tuple<int, std::uint64_t, std::uint64_t>> keys(static_cast<std::size_t>(n));

    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& fam : tt.families) {
            if (nblocks == n) return Partition(std::move(blocks));
            for (int a = 0; a < n; ++a) {
                const int* row = fam.data + static_cast<std::size_t>(a) * fam.contexts;
                std::uint64_t h1 = 1469598103934665603ull, h2 = 0x2545F4914F6CDD1Dull;
                for (std::size_t c = 0; c < fam.contexts; ++c) {
                    std::uint64_t b = static_cast<std::uint64_t>(blocks[static_cast<std::size_t>(row[c])]);
                    h1 = (h1 ^ b) * 1099511628211ull;
                    h2 = (h2 + b + 1) * 0x9E3779B97F4A7C15ull;
                }
                keys[static_cast<std::size_t>(a)] = {blocks[static_cast<std::size_t>(a)], h1, h2};
            }
            int before = nblocks;
            regroup_by_keys(blocks, keys, nblocks);
            if (nblocks != before) changed = true;
        }
    }
    return Partition(std::move(blocks));
}

} // namespace detail

// true iff part is closed under every basic operation varied one coordinate at
// a time (equivalent to closure under componentwise-related tuples).
inline bool is_congruence(const FiniteAlgebra& alg, const Partition& part) {
    detail::TranslationTables tt(alg);
    auto part_blocks = part.blocks();
    for (const auto& fam : tt.families) {
        for (const auto& blk : part_blocks) {
            if (blk.size() < 2) continue;
            const int* first = fam.data + static_cast<std::size_t>(blk[0]) * fam.contexts;
            for (std::size_t i = 1; i < blk.size(); ++i) {
                const int* row = fam.data + static_cast<std::size_t>(blk[i]) * fam.contexts;
                for (std::size_t c = 0; c < fam.contexts; ++c)
                    if (!part.same_block(first[c], row[c])) return false;
            }
        }
    }
    return true;
}

inline Partition largest_congruence_below(const FiniteAlgebra& alg, const Partition& eq) {
    detail::TranslationTables tt(alg);
    return detail::largest_congruence_below(tt, eq);
}

// Least congruence containing the given pairs: union-find closed under
// one-coordinate translations.
inline Partition congruence_generated(const FiniteAlgebra& alg,
                                      const std::vector<std::pair<int, int>>& pairs) {
    int n = alg.size;
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (a > b) std::swap(a, b);
        parent[static_cast<std::size_t>(b)] = a;
        return true;
    };
    bool any = false;
    for (auto [a, b] : pairs) any |= unite(a, b);
    if (!any) return Partition::identity(n);

    detail::TranslationTables tt(alg);
    std::vector<int> anchor(static_cast<std::size_t>(n));
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& fam : tt.families) {
            for (std::size_t c = 0; c < fam.contexts; ++c) {
                std::fill(anchor.begin(), anchor.end(), -1);
                for (int a = 0; a < n; ++a) {
                    int cls = find(a);
                    int img = fam.data[static_cast<std::size_t>(a) * fam.contexts + c];
                    if (anchor[static_cast<std::size_t>(cls)] == -1)
                        anchor[static_cast<std::size_t>(cls)] = img;
                    else if (unite(anchor[static_cast<std::size_t>(cls)], img))
                        changed = true;
                }
            }
        }
    }
    std::vector<int> assignment(static_cast<std::size_t>(n));
    for (int e = 0; e < n; ++e) assignment[static_cast<std::size_t>(e)] = find(e);
    return Partition(std::move(assignment));
}

struct QuotientResult {
    FiniteAlgebra algebra;
    std::vector<int> projection;
};

inline QuotientResult quotient(const FiniteAlgebra& alg, const Partition& cong) {
    if (!is_congruence(alg, cong))
        throw std::invalid_argument("partition is not a congruence");
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
        for (std::size_t flat = 0; flat < len; ++flat) {
            std::vector<int> args(static_cast<std::size_t>(r));
            for (int j = 0; j < r; ++j)
                args[static_cast<std::size_t>(j)] = rep[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
            tbl[flat] = cong.block_of(alg.apply(op, args));
            int j = r - 1;
            while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == m)
                idx[static_cast<std::size_t>(j--)] = 0;
        }
        q.tables.push_back(std::move(tbl));
    }
    QuotientResult out;
    out.algebra = std::move(q);
    out.projection = cong.assignment();
    return out;
}

inline FiniteAlgebra direct_product(const FiniteAlgebra& a, const FiniteAlgebra& b) {
    if (a.signature != b.signature)
        throw std::invalid_argument("direct_product: signature mismatch");
    FiniteAlgebra p;
    p.signature = a.signature;
    p.size = a.size * b.size;
    const auto& conns = a.signature.connectives();
    for (std::size_t op = 0; op < conns.size(); ++op) {
        int r = conns[op].arity;
        std::size_t len = 1;
        for (int j = 0; j < r; ++j) len *= static_cast<std::size_t>(p.size);
        std::vector<int> tbl(len);
        std::vector<int> idx(static_cast<std::size_t>(r), 0);
        for (std::size_t flat = 0; flat < len; ++flat) {
            std::vector<int> xa(static_cast<std::size_t>(r)), xb(static_cast<std::size_t>(r));
            for (int j = 0; j < r; ++j) {
                xa[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j)] / b.size;
                xb[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j)] % b.size;
            }
            tbl[flat] = a.apply(op, xa) * b.size + b.apply(op, xb);
            int j = r - 1;
            while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == p.size)
                idx[static_cast<std::size_t>(j--)] = 0;
        }
        p.tables.push_back(std::move(tbl));
    }
    return p;
}

struct GeneratedSubalgebra {
    std::vector<int> elements;     // discovery order; generators first
    std::vector<Formula> witnesses; // term over the generator variables per element
};

// BFS closure under all operations, recording one witnessing term per element.
inline GeneratedSubalgebra subalgebra_generated(const FiniteAlgebra& alg,
                                                const std::vector<int>& gens,
                                                const std::vector<std::string>& gen_names = {}) {
    const auto& conns = alg.signature.connectives();
    bool has_const = false;
    for (const auto& c : conns)
        if (c.arity == 0) has_const = true;
    if (gens.empty() && !has_const)
        throw std::invalid_argument("empty generator set with no constants");

    GeneratedSubalgebra out;
    std::vector<int> pos(static_cast<std::size_t>(alg.size), -1);
    auto add = [&](int e, Formula w) {
        if (pos[static_cast<std::size_t>(e)] != -1) return;
        pos[static_cast<std::size_t>(e)] = static_cast<int>(out.elements.size());
        out.elements.push_back(e);
        out.witnesses.push_back(std::move(w));
    };
    for (std::size_t i = 0; i < gens.size(); ++i) {
        std::string name = i < gen_names.size() ? gen_names[i] : "x" + std::to_string(i + 1);
        add(gens[i], Formula::variable(name));
    }
    for (std::size_t op = 0; op < conns.size(); ++op)
        if (conns[op].arity == 0) add(alg.tables[op][0], Formula::apply(conns[op].sym, {}));

    // frontier closure: combine new elements with everything known
    std::size_t processed = 0;
    while (processed < out.elements.size()) {
        std::size_t frontier_start = processed;
        std::size_t known = out.elements.size();
        processed = known;
        for (std::size_t op = 0; op < conns.size(); ++op) {
            int r = conns[op].arity;
            if (r == 0) continue;
            std::vector<std::size_t> idx(static_cast<std::size_t>(r), 0);
            for (;;) {
                bool fresh = false;
                for (int j = 0; j < r; ++j)
                    if (idx[static_cast<std::size_t>(j)] >= frontier_start) fresh = true;
                if (fresh || frontier_start == 0) {
                    std::vector<int> args(static_cast<std::size_t>(r));
                    std::vector<Formula> wargs;
                    wargs.reserve(static_cast<std::size_t>(r));
                    for (int j = 0; j < r; ++j) {
                        args[static_cast<std::size_t>(j)] = out.elements[idx[static_cast<std::size_t>(j)]];
                        wargs.push_back(out.witnesses[idx[static_cast<std::size_t>(j)]]);
                    }
                    int e = alg.apply(op, args);
                    if (pos[static_cast<std::size_t>(e)] == -1)
                        add(e, Formula::apply(conns[op].sym, std::move(wargs)));
                }
                int j = r - 1;
                while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == known)
                    idx[static_cast<std::size_t>(j--)] = 0;
                if (j < 0) break;
            }
        }
    }
    return out;
}

// Backtracking isomorphism search with unary-profile pruning.
inline std::optional<std::vector<int>> find_isomorphism(const FiniteAlgebra& a,
                                                        const FiniteAlgebra& b) {
    if (a.signature != b.signature || a.size != b.size) return std::nullopt;
    int n = a.size;
    const auto& conns = a.signature.connectives();

    // profile: constants must map to constants; unary cycle structure must match
    auto profile = [&](const FiniteAlgebra& alg, int e) {
        std::vector<int> p;
        for (std::size_t op = 0; op < conns.size(); ++op) {
            if (conns[op].arity != 1) continue;
            int x = e;
            for (int steps = 0; steps < 3; ++steps) {
                x = alg.tables[op][static_cast<std::size_t>(x)];
                p.push_back(x == e ? 1 : 0);
            }
        }
        return p;
    };
    std::vector<std::vector<int>> pa(static_cast<std::size_t>(n)), pb(static_cast<std::size_t>(n));
    for (int e = 0; e < n; ++e) {
        pa[static_cast<std::size_t>(e)] = profile(a, e);
        pb[static_cast<std::size_t>(e)] = profile(b, e);
    }

    std::vector<int> map(static_cast<std::size_t>(n), -1), used(static_cast<std::size_t>(n), 0);
    // constants pin images immediately
    for (std::size_t op = 0; op < conns.size(); ++op) {
        if (conns[op].arity != 0) continue;
        int ca = a.tables[op][0], cb = b.tables[op][0];
        if (map[static_cast<std::size_t>(ca)] == -1) {
            if (used[static_cast<std::size_t>(cb)]) return std::nullopt;
            map[static_cast<std::size_t>(ca)] = cb;
            used[static_cast<std::size_t>(cb)] = 1;
        } else if (map[static_cast<std::size_t>(ca)] != cb) {
            return std::nullopt;
        }
    }

    auto consistent = [&](int e) {
        // check all table constraints whose arguments are all assigned
        for (std::size_t op = 0; op < conns.size(); ++op) {
            int r = conns[op].arity;
            if (r == 0) continue;
            std::vector<int> idx(static_cast<std::size_t>(r), 0);
            for (;;) {
                bool involves = false, all_assigned = true;
                for (int j = 0; j < r; ++j) {
                    if (idx[static_cast<std::size_t>(j)] == e) involves = true;
                    if (map[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])] == -1)
                        all_assigned = false;
                }
                if (involves && all_assigned) {
                    std::vector<int> xa(idx.begin(), idx.end()), xb(static_cast<std::size_t>(r));
                    for (int j = 0; j < r; ++j)
                        xb[static_cast<std::size_t>(j)] =
                            map[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
                    int ya = a.apply(op, xa);
                    if (map[static_cast<std::size_t>(ya)] != -1 &&
                        map[static_cast<std::size_t>(ya)] != b.apply(op, xb))
                        return false;
                    if (map[static_cast<std::size_t>(ya)] == -1 &&
                        used[static_cast<std::size_t>(b.apply(op, xb))]) {
                        // image already taken by a different element; can't extend later
                    }
                }
                int j = r - 1;
                while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == n)
                    idx[static_cast<std::size_t>(j--)] = 0;
                if (j < 0) break;
            }
        }
        return true;
    };

    std::function<bool(int)> rec = [&](int e) -> bool {
        while (e < n && map[static_cast<std::size_t>(e)] != -1) ++e;
        if (e == n) {
            // full homomorphism check
            for (std::size_t op = 0; op < conns.size(); ++op) {
                int r = conns[op].arity;
                std::vector<int> idx(static_cast<std::size_t>(r), 0);
                std::size_t len = a.tables[op].size();
                for (std::size_t flat = 0; flat < len; ++flat) {
                    std::vector<int> xb(static_cast<std::size_t>(r));
                    for (int j = 0; j < r; ++j)
                        xb[static_cast<std::size_t>(j)] =
                            map[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
                    if (map[static_cast<std::size_t>(a.tables[op][flat])] != b.apply(op, xb))
                        return false;
                    int j = r - 1;
                    while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == n)
                        idx[static_cast<std::size_t>(j--)] = 0;
                }
            }
            return true;
        }
        for (int img = 0; img < n; ++img) {
            if (used[static_cast<std::size_t>(img)]) continue;
            if (pa[static_cast<std::size_t>(e)] != pb[static_cast<std::size_t>(img)]) continue;
            map[static_cast<std::size_t>(e)] = img;
            used[static_cast<std::size_t>(img)] = 1;
            if (consistent(e) && rec(e + 1)) return true;
            map[static_cast<std::size_t>(e)] = -1;
            used[static_cast<std::size_t>(img)] = 0;
        }
        return false;
    };
    if (!rec(0)) return std::nullopt;
    return map;
}

// true iff lhs = rhs holds under every assignment of the occurring variables.
inline bool check_identity(const PointedAlgebra& p, const Formula& lhs, const Formula& rhs) {
    FiniteAlgebra alg = p.extended();
    std::set<std::string> vs = vars_of(lhs);
    collect_vars(rhs, vs);
    std::vector<std::string> vars(vs.begin(), vs.end());
    int n = alg.size;
    std::vector<int> counter(vars.size(), 0);
    for (;;) {
        std::map<std::string, int> v;
        for (std::size_t i = 0; i < vars.size(); ++i) v[vars[i]] = counter[i];
        if (eval(alg, v, lhs) != eval(alg, v, rhs)) return false;
        int i = static_cast<int>(vars.size()) - 1;
        while (i >= 0 && ++counter[static_cast<std::size_t>(i)] == n)
            counter[static_cast<std::size_t>(i--)] = 0;
        if (i < 0) break;
    }
    return true;
}

} // namespace matlog
