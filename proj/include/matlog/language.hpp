#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"

namespace matlog {

struct Connective {
    std::string sym;
    int arity = 0;
};

// A propositional signature: ordered list of connectives with arities.
// Any identifier not declared here is a variable.
class Signature {
public:
    Signature() = default;

    Signature(std::string name, std::vector<Connective> connectives)
        : name_(std::move(name)), connectives_(std::move(connectives)) {
        for (std::size_t i = 0; i < connectives_.size(); ++i) {
            const auto& c = connectives_[i];
            if (c.sym.empty() || c.arity < 0)
                throw fixture_error("bad connective in signature '" + name_ + "'");
            if (!index_.emplace(c.sym, i).second)
                throw fixture_error("duplicate connective '" + c.sym + "'");
        }
    }

    const std::string& name() const { return name_; }
    const std::vector<Connective>& connectives() const { return connectives_; }

    bool has(const std::string& sym) const { return index_.count(sym) != 0; }

    int arity(const std::string& sym) const {
        auto it = index_.find(sym);
        if (it == index_.end())
            throw std::out_of_range("unknown connective '" + sym + "'");
        return connectives_[it->second].arity;
    }

    std::optional<std::size_t> index_of(const std::string& sym) const {
        auto it = index_.find(sym);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    bool operator==(const Signature& other) const {
        if (connectives_.size() != other.connectives_.size()) return false;
        for (std::size_t i = 0; i < connectives_.size(); ++i)
            if (connectives_[i].sym != other.connectives_[i].sym ||
                connectives_[i].arity != other.connectives_[i].arity)
                return false;
        return true;
    }
    bool operator!=(const Signature& other) const { return !(*this == other); }

private:
    std::string name_;
    std::vector<Connective> connectives_;
    std::map<std::string, std::size_t> index_;
};

// Formula tree. A node is a variable leaf or a connective application;
// equality is structural (identity of strings).
struct Formula {
    std::string head;
    std::vector<Formula> args;
    bool is_variable = true;

    static Formula variable(std::string name) {
        Formula f;
        f.head = std::move(name);
        f.is_variable = true;
        return f;
    }

    static Formula apply(std::string connective, std::vector<Formula> arguments) {
        Formula f;
        f.head = std::move(connective);
        f.args = std::move(arguments);
        f.is_variable = false;
        return f;
    }

    bool operator==(const Formula& other) const {
        return is_variable == other.is_variable && head == other.head && args == other.args;
    }
    bool operator!=(const Formula& other) const { return !(*this == other); }

    bool operator<(const Formula& other) const {
        if (is_variable != other.is_variable) return is_variable && !other.is_variable;
        if (head != other.head) return head < other.head;
        return args < other.args;
    }

    // Number of nodes.
    std::size_t size() const {
        std::size_t n = 1;
        for (const auto& a : args) n += a.size();
        return n;
    }

    // A leaf has depth 1.
    std::size_t depth() const {
        std::size_t d = 0;
        for (const auto& a : args) d = std::max(d, a.depth());
        return d + 1;
    }
};

using Substitution = std::map<std::string, Formula>;

inline std::string format_formula(const Formula& f) {
    if (f.is_variable) return f.head;
    std::string out = f.head;
    out += '(';
    for (std::size_t i = 0; i < f.args.size(); ++i) {
        if (i) out += ", ";
        out += format_formula(f.args[i]);
    }
    out += ')';
    return out;
}

// Uniform substitution; identity outside the map's domain.
inline Formula substitute(const Substitution& s, const Formula& f) {
    if (f.is_variable) {
        auto it = s.find(f.head);
        return it == s.end() ? f : it->second;
    }
    std::vector<Formula> args;
    args.reserve(f.args.size());
    for (const auto& a : f.args) args.push_back(substitute(s, a));
    return Formula::apply(f.head, std::move(args));
}

inline void collect_vars(const Formula& f, std::set<std::string>& out) {
    if (f.is_variable) {
        out.insert(f.head);
        return;
    }
    for (const auto& a : f.args) collect_vars(a, out);
}

inline std::set<std::string> vars_of(const Formula& f) {
    std::set<std::string> out;
    collect_vars(f, out);
    return out;
}

inline std::set<std::string> vars_of(const std::vector<Formula>& fs) {
    std::set<std::string> out;
    for (const auto& f : fs) collect_vars(f, out);
    return out;
}

namespace detail {

class FormulaParser {
public:
    FormulaParser(const Signature& sig, const std::string& text) : sig_(sig), text_(text) {}

    Formula parse() {
        Formula f = parse_formula();
        skip_ws();
        if (pos_ != text_.size())
            throw parse_error("unexpected trailing input", pos_);
        return f;
    }

    // Parses up to (but not past) a delimiter; used by the sequent parser.
    Formula parse_prefix() { return parse_formula(); }

    std::size_t position() const { return pos_; }

    void skip_ws() {
        while (pos_ < text_.size() &&
               (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                text_[pos_] == '\r'))
            ++pos_;
    }

    bool at_end() {
        skip_ws();
        return pos_ == text_.size();
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    void advance() { ++pos_; }

private:
    static bool ident_start(char c) {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
    }
    static bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

    std::string parse_ident() {
        skip_ws();
        if (pos_ >= text_.size() || !ident_start(text_[pos_]))
            throw parse_error("expected identifier", pos_);
        std::size_t start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
        return text_.substr(start, pos_ - start);
    }

    Formula parse_formula() {
        skip_ws();
        std::size_t ident_pos = pos_;
        std::string id = parse_ident();
        skip_ws();
        bool is_conn = sig_.has(id);
        if (pos_ < text_.size() && text_[pos_] == '(') {
            if (!is_conn)
                throw parse_error("unknown connective '" + id + "'", ident_pos);
            ++pos_;
            std::vector<Formula> args;
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == ')') {
                ++pos_;
            } else {
                for (;;) {
                    args.push_back(parse_formula());
                    skip_ws();
                    if (pos_ >= text_.size())
                        throw parse_error("expected ',' or ')'", pos_);
                    if (text_[pos_] == ',') {
                        ++pos_;
                        continue;
                    }
                    if (text_[pos_] == ')') {
                        ++pos_;
                        break;
                    }
                    throw parse_error("expected ',' or ')'", pos_);
                }
            }
            int want = sig_.arity(id);
            if (static_cast<int>(args.size()) != want)
                throw parse_error("connective '" + id + "' expects " + std::to_string(want) +
                                      " argument(s), got " + std::to_string(args.size()),
                                  ident_pos);
            return Formula::apply(id, std::move(args));
        }
        if (is_conn) {
            // A bare connective name is only legal for 0-ary connectives.
            if (sig_.arity(id) != 0)
                throw parse_error("connective '" + id + "' used without arguments", ident_pos);
            return Formula::apply(id, {});
        }
        return Formula::variable(id);
    }

    const Signature& sig_;
    const std::string& text_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline Formula parse_formula(const Signature& sig, const std::string& text) {
    return detail::FormulaParser(sig, text).parse();
}

struct Sequent {
    std::vector<Formula> premises;
    Formula conclusion;
};

// "A1, ..., An |- B"; the premise side may be empty.
inline Sequent parse_sequent(const Signature& sig, const std::string& text) {
    auto turnstile = text.find("|-");
    if (turnstile == std::string::npos)
        throw parse_error("expected '|-'", text.size());
    std::string lhs = text.substr(0, turnstile);
    std::string rhs = text.substr(turnstile + 2);

    Sequent seq;
    detail::FormulaParser lp(sig, lhs);
    if (!lp.at_end()) {
        for (;;) {
            seq.premises.push_back(lp.parse_prefix());
            lp.skip_ws();
            if (lp.at_end()) break;
            if (lp.peek() != ',')
                throw parse_error("expected ',' between premises", lp.position());
            lp.advance();
        }
    }
    seq.conclusion = parse_formula(sig, rhs);
    return seq;
}

inline std::string format_sequent(const Sequent& s) {
    std::string out;
    for (std::size_t i = 0; i < s.premises.size(); ++i) {
        if (i) out += ", ";
        out += format_formula(s.premises[i]);
    }
    if (!s.premises.empty()) out += ' ';
    out += "|- ";
    out += format_formula(s.conclusion);
    return out;
}

// All formulas over the given variables up to the given depth (leaf depth 1),
// in deterministic order: by depth, then connective order, then argument tuples
// counted mixed-radix with the leftmost argument most significant.
inline std::vector<Formula> enumerate_formulas(const Signature& sig,
                                               const std::vector<std::string>& vars,
                                               int max_depth,
                                               std::size_t cap = 1u << 20) {
    std::vector<Formula> all;          // everything of depth <= d so far
    std::vector<Formula> prev_layer;   // depth exactly d
    for (const auto& v : vars) all.push_back(Formula::variable(v));
    for (const auto& c : sig.connectives())
        if (c.arity == 0) all.push_back(Formula::apply(c.sym, {}));
    prev_layer = all;
    if (all.size() > cap) throw cap_exceeded("formula enumeration exceeds cap");

    for (int d = 2; d <= max_depth; ++d) {
        std::vector<Formula> layer;
        for (const auto& c : sig.connectives()) {
            if (c.arity == 0) continue;
            // argument tuples over `all`, at least one argument of depth d-1
            std::vector<std::size_t> idx(c.arity, 0);
            std::size_t n = all.size();
            std::size_t boundary = n - prev_layer.size(); // indices >= boundary have depth d-1
            for (;;) {
                bool fresh = false;
                for (int a = 0; a < c.arity; ++a)
                    if (idx[a] >= boundary) fresh = true;
                if (fresh) {
                    std::vector<Formula> args;
                    args.reserve(c.arity);
                    for (int a = 0; a < c.arity; ++a) args.push_back(all[idx[a]]);
                    layer.push_back(Formula::apply(c.sym, std::move(args)));
                    if (all.size() + layer.size() > cap)
                        throw cap_exceeded("formula enumeration exceeds cap");
                }
                int a = c.arity - 1;
                while (a >= 0 && ++idx[a] == n) idx[a--] = 0;
                if (a < 0) break;
            }
        }
        all.insert(all.end(), layer.begin(), layer.end());
        prev_layer = std::move(layer);
        if (prev_layer.empty()) break;
    }
    return all;
}

} // namespace matlog
