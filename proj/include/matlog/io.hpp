#pragma once

#include <fstream>

#include <json.hpp>

#include "matrix.hpp"
#include "rules.hpp"

namespace matlog {

using json = nlohmann::json;

namespace io {

inline json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw fixture_error("cannot open fixture '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw fixture_error("fixture '" + path + "': " + e.what());
    }
    return j;
}

inline Signature signature_from_json(const json& j) {
    try {
        std::vector<Connective> conns;
        for (const auto& c : j.at("connectives"))
            conns.push_back({c.at("sym").get<std::string>(), c.at("arity").get<int>()});
        return Signature(j.value("name", ""), std::move(conns));
    } catch (const json::exception& e) {
        throw fixture_error(std::string("bad signature: ") + e.what());
    }
}

inline FiniteAlgebra algebra_from_json(const json& j) {
    FiniteAlgebra alg;
    try {
        alg.signature = signature_from_json(j.at("signature"));
        alg.size = j.at("size").get<int>();
        const auto& tables = j.at("tables");
        for (const auto& c : alg.signature.connectives()) {
            if (!tables.contains(c.sym))
                throw fixture_error("missing table for connective '" + c.sym + "'");
            alg.tables.push_back(tables.at(c.sym).get<std::vector<int>>());
        }
        if (j.contains("labels")) alg.labels = j.at("labels").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw fixture_error(std::string("bad algebra: ") + e.what());
    }
    alg.validate();
    return alg;
}

inline Matrix matrix_from_json(const json& j) {
    Matrix m;
    try {
        m.algebra = algebra_from_json(j.at("algebra"));
        m.filter = j.at("filter").get<std::vector<int>>();
    } catch (const json::exception& e) {
        throw fixture_error(std::string("bad matrix: ") + e.what());
    }
    m.validate();
    return m;
}

// A g-matrix fixture has "filters"; a plain matrix fixture is accepted as the
// singleton g-matrix.
inline GMatrix gmatrix_from_json(const json& j) {
    GMatrix gm;
    try {
        gm.algebra = algebra_from_json(j.at("algebra"));
        if (j.contains("filters"))
            gm.filters = j.at("filters").get<std::vector<std::vector<int>>>();
        else
            gm.filters = {j.at("filter").get<std::vector<int>>()};
    } catch (const json::exception& e) {
        throw fixture_error(std::string("bad g-matrix: ") + e.what());
    }
    gm.validate();
    return gm;
}

inline RuleSet rules_from_json(const json& j) {
    RuleSet rs;
    try {
        rs.signature = signature_from_json(j.at("signature"));
        for (const auto& r : j.at("rules")) {
            Rule rule;
            rule.name = r.at("name").get<std::string>();
            for (const auto& p : r.at("premises"))
                rule.premises.push_back(parse_formula(rs.signature, p.get<std::string>()));
            rule.conclusion = parse_formula(rs.signature, r.at("conclusion").get<std::string>());
            rs.rules.push_back(std::move(rule));
        }
    } catch (const json::exception& e) {
        throw fixture_error(std::string("bad rule set: ") + e.what());
    } catch (const parse_error& e) {
        throw fixture_error(std::string("bad rule formula: ") + e.what());
    }
    rs.validate();
    return rs;
}

inline Matrix load_matrix(const std::string& path) { return matrix_from_json(load_file(path)); }
inline GMatrix load_gmatrix(const std::string& path) { return gmatrix_from_json(load_file(path)); }
inline FiniteAlgebra load_algebra(const std::string& path) {
    return algebra_from_json(load_file(path));
}
inline RuleSet load_rules(const std::string& path) { return rules_from_json(load_file(path)); }

inline json signature_to_json(const Signature& sig) {
    json conns = json::array();
    for (const auto& c : sig.connectives()) conns.push_back({{"sym", c.sym}, {"arity", c.arity}});
    return {{"name", sig.name()}, {"connectives", conns}};
}

inline json algebra_to_json(const FiniteAlgebra& alg) {
    json tables = json::object();
    const auto& conns = alg.signature.connectives();
    for (std::size_t op = 0; op < conns.size(); ++op) tables[conns[op].sym] = alg.tables[op];
    json out = {{"signature", signature_to_json(alg.signature)},
                {"size", alg.size},
                {"tables", tables}};
    if (!alg.labels.empty()) out["labels"] = alg.labels;
    return out;
}

inline json matrix_to_json(const Matrix& m) {
    return {{"algebra", algebra_to_json(m.algebra)}, {"filter", m.filter}};
}

inline json valuation_to_json(const Valuation& v) {
    json out = json::object();
    for (const auto& [name, e] : v) out[name] = e;
    return out;
}

inline json partition_to_json(const Partition& p) {
    json blocks = json::array();
    for (const auto& b : p.blocks()) blocks.push_back(b);
    return {{"blocks", blocks}, {"assignment", p.assignment()}};
}

inline void save_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw fixture_error("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

} // namespace io
} // namespace matlog
