#pragma once

#include <functional>
#include <unordered_map>

#include "matrix.hpp"

namespace matlog {

struct Rule {
    std::string name;
    std::vector<Formula> premises;
    Formula conclusion;

    bool is_axiom() const { return premises.empty(); }
};

struct RuleSet {
    Signature signature;
    std::vector<Rule> rules;

    void validate() const {
        if (rules.empty()) throw fixture_error("rule set must be nonempty");
        std::set<std::string> names;
        for (const auto& r : rules)
            if (!names.insert(r.name).second)
                throw fixture_error("duplicate rule name '" + r.name + "'");
    }

    const Rule* find(const std::string& name) const {
        for (const auto& r : rules)
            if (r.name == name) return &r;
        return nullptr;
    }
};

struct ModelCheckResult {
    bool is_model = true;
    std::string violated_rule;
    Valuation valuation;
};

// The matrix models the rule set iff the filter is closed under every rule instance.
inline ModelCheckResult is_model(const Matrix& m, const RuleSet& rs, const Caps& caps = {}) {
    for (const auto& rule : rs.rules) {
        std::set<std::string> vs = vars_of(rule.premises);
        collect_vars(rule.conclusion, vs);
        std::vector<std::string> vars(vs.begin(), vs.end());
        detail::check_valuation_cap(vars.size(), m.algebra.size, caps);
        ModelCheckResult out;
        detail::for_each_valuation(vars, m.algebra.size, [&](const Valuation& v) {
            for (const auto& p : rule.premises)
                if (!m.designated(eval(m.algebra, v, p))) return true;
            if (!m.designated(eval(m.algebra, v, rule.conclusion))) {
                out.is_model = false;
                out.violated_rule = rule.name;
                out.valuation = v;
                return false;
            }
            return true;
        });
        if (!out.is_model) return out;
    }
    return {};
}

struct DerivationStep {
    Formula formula;
    std::string justification;   // "hypothesis" or a rule name
    std::vector<int> from_lines; // 0-based indices of the premise lines
};

using Derivation = std::vector<DerivationStep>;

struct DeriveBounds {
    int depth = 5;                    // forward-chaining rounds
    std::size_t max_formula_size = 30; // node count of any derived instance
};

namespace detail {

inline bool pattern_match(const Formula& pattern, const Formula& value, Substitution& sigma) {
    if (pattern.is_variable) {
        auto it = sigma.find(pattern.head);
        if (it != sigma.end()) return it->second == value;
        sigma.emplace(pattern.head, value);
        return true;
    }
    if (value.is_variable || value.head != pattern.head ||
        value.args.size() != pattern.args.size())
        return false;
    for (std::size_t i = 0; i < pattern.args.size(); ++i)
        if (!pattern_match(pattern.args[i], value.args[i], sigma)) return false;
    return true;
}

inline void collect_subformulas(const Formula& f, std::vector<Formula>& out,
                                std::set<std::string>& seen) {
    if (seen.insert(format_formula(f)).second) out.push_back(f);
    for (const auto& a : f.args) collect_subformulas(a, out, seen);
}

} // namespace detail

// Bounded forward-chaining proof search. Substitution values for variables not
// fixed by premise matching are drawn from the subformula pool of hypotheses,
// goal, and rule schemata; absence of a proof within bounds is not a
// non-derivability verdict.
inline std::optional<Derivation> derive(const RuleSet& rs, const std::vector<Formula>& hypotheses,
                                        const Formula& goal, const DeriveBounds& bounds = {}) {
    std::vector<Formula> pool;
    {
        std::set<std::string> seen;
        for (const auto& h : hypotheses) detail::collect_subformulas(h, pool, seen);
        detail::collect_subformulas(goal, pool, seen);
        for (const auto& r : rs.rules) {
            for (const auto& p : r.premises) detail::collect_subformulas(p, pool, seen);
            detail::collect_subformulas(r.conclusion, pool, seen);
        }
    }

    // proof state: all derived formulas with backpointers
    std::vector<DerivationStep> steps;
    std::unordered_map<std::string, int> line_of;
    auto add = [&](const Formula& f, const std::string& just, std::vector<int> from) -> int {
        if (f.size() > bounds.max_formula_size) return -1;
        std::string key = format_formula(f);
        auto it = line_of.find(key);
        if (it != line_of.end()) return it->second;
        int line = static_cast<int>(steps.size());
        steps.push_back({f, just, std::move(from)});
        line_of.emplace(std::move(key), line);
        return line;
    };

    std::string goal_key = format_formula(goal);
    for (const auto& h : hypotheses) add(h, "hypothesis", {});

    auto extract = [&]() -> Derivation {
        // prune to the ancestors of the goal, preserving order
        int goal_line = line_of.at(goal_key);
        std::vector<char> needed(steps.size(), 0);
        std::vector<int> stack{goal_line};
        while (!stack.empty()) {
            int l = stack.back();
            stack.pop_back();
            if (needed[static_cast<std::size_t>(l)]) continue;
            needed[static_cast<std::size_t>(l)] = 1;
            for (int f : steps[static_cast<std::size_t>(l)].from_lines) stack.push_back(f);
        }
        std::vector<int> renumber(steps.size(), -1);
        Derivation out;
        for (std::size_t l = 0; l < steps.size(); ++l) {
            if (!needed[l]) continue;
            DerivationStep s = steps[l];
            for (auto& f : s.from_lines) f = renumber[static_cast<std::size_t>(f)];
            renumber[l] = static_cast<int>(out.size());
            out.push_back(std::move(s));
        }
        return out;
    };

    if (line_of.count(goal_key)) return extract();

    for (int round = 0; round < bounds.depth; ++round) {
        std::size_t usable = steps.size(); // formulas from earlier rounds
        bool grew = false;

        for (const auto& rule : rs.rules) {
            // instantiate: match premises against usable lines, then fill any
            // remaining conclusion variables from the pool; premises are
            // matched most-structured-first so selective patterns bind the
            // variables before bare-variable premises become lookups
            std::vector<std::size_t> order(rule.premises.size());
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return rule.premises[a].size() > rule.premises[b].size();
            });
            std::vector<int> lines(rule.premises.size(), -1);
            std::function<void(std::size_t, Substitution&)> match =
                [&](std::size_t pi, Substitution& sigma) {
                    if (line_of.count(goal_key)) return;
                    if (pi == rule.premises.size()) {
                        std::vector<int> from(lines.begin(), lines.end());
                        std::set<std::string> unbound;
                        for (const auto& v : vars_of(rule.conclusion))
                            if (!sigma.count(v)) unbound.insert(v);
                        std::vector<std::string> uv(unbound.begin(), unbound.end());
                        std::vector<std::size_t> choice(uv.size(), 0);
                        for (;;) {
                            for (std::size_t i = 0; i < uv.size(); ++i)
                                sigma[uv[i]] = pool[choice[i]];
                            int line = add(substitute(sigma, rule.conclusion), rule.name, from);
                            if (line >= 0 && static_cast<std::size_t>(line) >= usable) grew = true;
                            if (line_of.count(goal_key)) return;
                            int i = static_cast<int>(uv.size()) - 1;
                            while (i >= 0 && ++choice[static_cast<std::size_t>(i)] == pool.size())
                                choice[static_cast<std::size_t>(i--)] = 0;
                            if (i < 0) break;
                        }
                        for (const auto& v : uv) sigma.erase(v);
                        return;
                    }
                    std::size_t slot = order[pi];
                    const Formula& p = rule.premises[slot];
                    // fully bound premise: direct lookup
                    bool bound = true;
                    for (const auto& v : vars_of(p))
                        if (!sigma.count(v)) {
                            bound = false;
                            break;
                        }
                    if (bound) {
                        auto it = line_of.find(format_formula(substitute(sigma, p)));
                        if (it == line_of.end() || static_cast<std::size_t>(it->second) >= usable)
                            return;
                        lines[slot] = it->second;
                        match(pi + 1, sigma);
                        return;
                    }
                    for (std::size_t l = 0; l < usable; ++l) {
                        Substitution trial = sigma;
                        if (!detail::pattern_match(p, steps[l].formula, trial)) continue;
                        lines[slot] = static_cast<int>(l);
                        match(pi + 1, trial);
                        if (line_of.count(goal_key)) return;
                    }
                };

            if (rule.is_axiom() && round > 0) continue; // axiom instances don't change
            Substitution sigma;
            match(0, sigma);
            if (line_of.count(goal_key)) return extract();
        }
        if (!grew) break;
    }
    return std::nullopt;
}

struct IndependenceResult {
    enum class Kind { Derivable, Certificate, NotFound } kind = Kind::NotFound;
    std::optional<Derivation> derivation; // when Derivable
    std::optional<Matrix> certificate;    // when Certificate
    Valuation falsifying;                 // valuation refuting the target axiom
};

// Searches for a matrix of size ≤ size_bound that models every rule except the
// target axiom while refuting the target's conclusion; a derivation of the
// target from the other rules short-circuits the search.
inline IndependenceResult independence_search(const RuleSet& rs, const std::string& target_name,
                                              int size_bound, const Caps& caps = {}) {
    const Rule* target = rs.find(target_name);
    if (!target) throw std::invalid_argument("unknown rule '" + target_name + "'");
    if (!target->is_axiom())
        throw std::invalid_argument("independence target must be an axiom (premise-free rule)");

    RuleSet others;
    others.signature = rs.signature;
    for (const auto& r : rs.rules)
        if (r.name != target_name) others.rules.push_back(r);

    IndependenceResult out;
    if (auto d = derive(others, {}, target->conclusion, {4, 30})) {
        out.kind = IndependenceResult::Kind::Derivable;
        out.derivation = std::move(d);
        return out;
    }

    const auto& conns = rs.signature.connectives();
    std::set<std::string> cvars = vars_of(target->conclusion);
    std::vector<std::string> tvars(cvars.begin(), cvars.end());

    for (int n = 1; n <= size_bound; ++n) {
        // all operation tables, lexicographic on the concatenated entries
        std::vector<std::size_t> lens;
        std::size_t total_cells = 0;
        for (const auto& c : conns) {
            std::size_t len = 1;
            for (int j = 0; j < c.arity; ++j) len *= static_cast<std::size_t>(n);
            lens.push_back(len);
            total_cells += len;
        }
        std::uint64_t space = 1;
        for (std::size_t i = 0; i < total_cells; ++i) {
            space *= static_cast<std::uint64_t>(n);
            if (space > caps.max_valuations * 64)
                throw cap_exceeded("independence_search: matrix space exceeds cap");
        }

        // filters: ascending cardinality, then lexicographic on element lists
        std::vector<std::vector<int>> filters;
        for (int card = 1; card <= n; ++card) {
            std::vector<int> pick(static_cast<std::size_t>(card));
            std::iota(pick.begin(), pick.end(), 0);
            for (;;) {
                filters.push_back(pick);
                int i = card - 1;
                while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - card + i) --i;
                if (i < 0) break;
                ++pick[static_cast<std::size_t>(i)];
                for (int j = i + 1; j < card; ++j)
                    pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
            }
        }

        std::vector<int> cells(total_cells, 0);
        for (;;) {
            Matrix m;
            m.algebra.signature = rs.signature;
            m.algebra.size = n;
            std::size_t off = 0;
            for (std::size_t op = 0; op < conns.size(); ++op) {
                m.algebra.tables.emplace_back(cells.begin() + static_cast<long>(off),
                                              cells.begin() + static_cast<long>(off + lens[op]));
                off += lens[op];
            }
            for (const auto& f : filters) {
                m.filter = f;
                // the target axiom must fail somewhere
                Valuation bad;
                bool fails = false;
                detail::for_each_valuation(tvars, n, [&](const Valuation& v) {
                    if (!m.designated(eval(m.algebra, v, target->conclusion))) {
                        fails = true;
                        bad = v;
                        return false;
                    }
                    return true;
                });
                if (!fails) continue;
                if (!is_model(m, others, caps).is_model) continue;

                // re-verify the certificate from scratch
                Matrix fresh = m;
                fresh.validate();
                if (!is_model(fresh, others, caps).is_model)
                    throw std::logic_error("independence certificate failed re-verification");
                if (fresh.designated(eval(fresh.algebra, bad, target->conclusion)))
                    throw std::logic_error("independence falsifying valuation failed re-check");
                out.kind = IndependenceResult::Kind::Certificate;
                out.certificate = std::move(fresh);
                out.falsifying = std::move(bad);
                return out;
            }
            // next table assignment (rightmost cell least significant)
            int i = static_cast<int>(total_cells) - 1;
            while (i >= 0 && ++cells[static_cast<std::size_t>(i)] == n)
                cells[static_cast<std::size_t>(i--)] = 0;
            if (i < 0) break;
        }
    }
    return out;
}

} // namespace matlog
