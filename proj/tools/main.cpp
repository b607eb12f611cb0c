// matlog: a workbench for logical matrices, congruences, and Hilbert systems
// on finite carriers.

#include <iostream>

#include <CLI11.hpp>

#include "matlog/congruence.hpp"
#include "matlog/equivalence.hpp"
#include "matlog/io.hpp"
#include "matlog/lindenbaum.hpp"
#include "matlog/matrix.hpp"
#include "matlog/rules.hpp"

using namespace matlog;

namespace {

struct Options {
    std::uint64_t max_valuations = 1ull << 20;
    std::uint64_t max_cells = 1ull << 20;
    std::string format = "text";

    Caps caps() const { return {max_valuations, max_cells}; }
    bool json_out() const { return format == "json"; }
};

std::string show_valuation(const Valuation& v) {
    std::string out;
    for (const auto& [name, e] : v) {
        if (!out.empty()) out += ", ";
        out += name + "=" + std::to_string(e);
    }
    return out;
}

std::string show_partition(const Partition& p) {
    std::string out;
    for (const auto& blk : p.blocks()) {
        out += "{";
        for (std::size_t i = 0; i < blk.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(blk[i]);
        }
        out += "}";
    }
    return out;
}

std::string show_set(const std::vector<int>& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i]);
    }
    return out + "}";
}

void emit(const Options& opt, const json& j, const std::string& text) {
    if (opt.json_out())
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

int cmd_check(const Options& opt, const std::string& matrix_path, const std::string& sequent) {
    Matrix m = io::load_matrix(matrix_path);
    Sequent seq = parse_sequent(m.algebra.signature, sequent);
    auto r = matrix_consequence(m, seq.premises, seq.conclusion, opt.caps());
    json j = {{"sequent", format_sequent(seq)}, {"holds", r.holds}};
    std::string text = format_sequent(seq) + (r.holds ? ": holds\n" : ": fails\n");
    if (!r.holds) {
        j["witness"] = io::valuation_to_json(*r.witness);
        text += "witness valuation: " + show_valuation(*r.witness) + "\n";
    }
    emit(opt, j, text);
    return r.holds ? 0 : 1;
}

int cmd_theorems(const Options& opt, const std::string& matrix_path, int k, int depth) {
    Matrix m = io::load_matrix(matrix_path);
    auto ths = theorems_upto(m, k, depth, opt.caps());
    json arr = json::array();
    std::string text = "theorems over p1..p" + std::to_string(k) + ", depth <= " +
                       std::to_string(depth) + ": " + std::to_string(ths.size()) + "\n";
    for (const auto& t : ths) {
        arr.push_back(format_formula(t));
        text += "  " + format_formula(t) + "\n";
    }
    emit(opt, {{"vars", k}, {"depth", depth}, {"theorems", arr}}, text);
    return 0;
}

int cmd_leibniz(const Options& opt, const std::string& matrix_path) {
    Matrix m = io::load_matrix(matrix_path);
    Partition p = leibniz_congruence(m);
    emit(opt, {{"leibniz", io::partition_to_json(p)}},
         "leibniz congruence: " + show_partition(p) + "\n");
    return 0;
}

int cmd_reduce(const Options& opt, const std::string& matrix_path, const std::string& out_path) {
    Matrix m = io::load_matrix(matrix_path);
    Matrix r = reduce(m);
    json j = io::matrix_to_json(r);
    if (!out_path.empty()) io::save_json(out_path, j);
    std::string text = "reduced matrix: " + std::to_string(r.algebra.size) +
                       " elements, filter " + show_set(r.filter) + "\n";
    if (!out_path.empty()) text += "written to " + out_path + "\n";
    emit(opt, j, text);
    return 0;
}

int cmd_free(const Options& opt, const std::string& algebra_path, int k) {
    // accept a bare algebra file or a matrix fixture wrapping one
    json j = io::load_file(algebra_path);
    FiniteAlgebra alg = io::algebra_from_json(j.contains("algebra") ? j.at("algebra") : j);
    auto tfa = term_function_algebra(alg, k, opt.caps());
    json els = json::array();
    std::string text = "free algebra on " + std::to_string(k) + " generators: " +
                       std::to_string(tfa.elements.size()) + " elements\n";
    for (std::size_t e = 0; e < tfa.elements.size(); ++e) {
        els.push_back({{"table", tfa.elements[e]},
                       {"representative", format_formula(tfa.representatives[e])}});
        text += "  [" + std::to_string(e) + "] " + format_formula(tfa.representatives[e]) + "\n";
    }
    emit(opt, {{"vars", k}, {"size", tfa.elements.size()}, {"elements", els}}, text);
    return 0;
}

int cmd_lt(const Options& opt, const std::string& matrix_path, int k, int depth) {
    Matrix m = io::load_matrix(matrix_path);
    LTResult lt = lt_algebra(m, k, opt.caps());
    json j = {{"vars", k},
              {"quotient_size", lt.quotient.size},
              {"admits", lt.admits}};
    std::string text = "Lindenbaum-Tarski quotient: " + std::to_string(lt.quotient.size) +
                       " elements, admits: " + (lt.admits ? "true" : "false") + "\n";
    bool canon = false;
    if (lt.admits) {
        canon = canonical_valuation_check(m, k, depth, opt.caps());
        j["canonical_valuation_check"] = canon;
        j["depth"] = depth;
        text += "canonical valuation check (depth " + std::to_string(depth) +
                "): " + (canon ? "passes" : "fails") + "\n";
    }
    emit(opt, j, text);
    return lt.admits && canon ? 0 : 1;
}

int cmd_congruences(const Options& opt, const std::string& matrix_path, int k) {
    Matrix m = io::load_matrix(matrix_path);
    auto fam = congruence_family(m, k, opt.caps());
    std::size_t count = fam.system.sets.size();

    bool all_ok = true;
    json sets = json::array();
    std::string text = std::to_string(count) + " closed sets on a reduct of " +
                       std::to_string(fam.system.reduct.reduct->as_algebra.size) + " elements\n";
    for (std::size_t i = 0; i < count; ++i) {
        // chain and intersection-law verification per closed set
        bool chain = fam.tarski.refines(fam.suszko[i]) && fam.suszko[i].refines(fam.frege[i]) &&
                     fam.suszko[i].refines(fam.leibniz[i]) &&
                     compatible(fam.suszko[i], fam.system.sets[i]);
        Partition meet_ext = Partition::total(fam.tarski.size());
        for (std::size_t e = 0; e < count; ++e)
            if (std::includes(fam.system.sets[e].begin(), fam.system.sets[e].end(),
                              fam.system.sets[i].begin(), fam.system.sets[i].end()))
                meet_ext = meet_ext.meet(fam.suszko[e]);
        bool law = meet_ext == fam.leibniz[i];
        all_ok = all_ok && chain && law;
        sets.push_back({{"members", fam.system.sets[i]},
                        {"frege_blocks", fam.frege[i].num_blocks()},
                        {"suszko_blocks", fam.suszko[i].num_blocks()},
                        {"leibniz_blocks", fam.leibniz[i].num_blocks()},
                        {"frege", fam.frege[i].assignment()},
                        {"suszko", fam.suszko[i].assignment()},
                        {"leibniz", fam.leibniz[i].assignment()},
                        {"chain_ok", chain},
                        {"intersection_law_ok", law}});
        text += "  theory " + std::to_string(i) + " (|members|=" +
                std::to_string(fam.system.sets[i].size()) + "): frege " +
                std::to_string(fam.frege[i].num_blocks()) + " blocks, suszko " +
                std::to_string(fam.suszko[i].num_blocks()) + ", leibniz " +
                std::to_string(fam.leibniz[i].num_blocks()) + ", chain " +
                (chain ? "ok" : "VIOLATED") + ", intersection law " + (law ? "ok" : "VIOLATED") +
                "\n";
    }
    text += "tarski congruence: " + std::to_string(fam.tarski.num_blocks()) + " blocks\n";
    text += std::string("all checks: ") + (all_ok ? "ok" : "VIOLATED") + "\n";
    emit(opt, {{"vars", k}, {"tarski", fam.tarski.assignment()}, {"closed_sets", sets},
               {"all_ok", all_ok}},
         text);
    return all_ok ? 0 : 1;
}

int cmd_rasiowa(const Options& opt, const std::string& matrix_path, const std::string& arrow,
                int k) {
    Matrix m = io::load_matrix(matrix_path);
    Partition p = rasiowa_relation(m, arrow, k, opt.caps());
    emit(opt, {{"arrow", arrow}, {"vars", k}, {"rasiowa", io::partition_to_json(p)}},
         "rasiowa relation (" + arrow + ", k=" + std::to_string(k) + "): " + show_partition(p) +
             "\n");
    return 0;
}

int cmd_implicative(const Options& opt, const std::string& matrix_path,
                    const std::string& arrow) {
    Matrix m = io::load_matrix(matrix_path);
    auto r = is_implicative_extensional(m, arrow, opt.caps());
    json j = {{"arrow", arrow}, {"implicative_extensional", r.holds}};
    std::string text = std::string("implicative extensional (S-filter reading): ") +
                       (r.holds ? "true" : "false") + "\n";
    if (!r.holds) {
        j["violation"] = {{"clause", r.violation->clause},
                          {"filter", r.violation->filter},
                          {"witnesses", r.violation->detail}};
        text += "violated clause (" + r.violation->clause + ") on S-filter " +
                show_set(r.violation->filter) + " with " + r.violation->detail + "\n";
    }
    emit(opt, j, text);
    return r.holds ? 0 : 1;
}

int cmd_equiv(const Options& opt, const std::string& a_path, const std::string& b_path) {
    GMatrix a = io::load_gmatrix(a_path);
    GMatrix b = io::load_gmatrix(b_path);
    auto r = same_system(a, b, opt.caps());
    json j = {{"equivalent", r.equivalent}};
    std::string text = r.equivalent ? "equivalent\n" : "not equivalent\n";
    if (!r.equivalent) {
        Sequent seq{r.counterexample->premises, r.counterexample->conclusion};
        j["fails_in"] = r.failing_side == 1 ? a_path : b_path;
        j["counterexample"] = {{"sequent", format_sequent(seq)},
                               {"valuation", io::valuation_to_json(r.counterexample->valuation)}};
        text += "sequent valid in " + (r.failing_side == 1 ? b_path : a_path) + ", fails in " +
                (r.failing_side == 1 ? a_path : b_path) + ":\n  " + format_sequent(seq) +
                "\n  at valuation " + show_valuation(r.counterexample->valuation) + "\n";
    }
    emit(opt, j, text);
    return r.equivalent ? 0 : 1;
}

int cmd_model_check(const Options& opt, const std::string& matrix_path,
                    const std::string& rules_path) {
    Matrix m = io::load_matrix(matrix_path);
    RuleSet rs = io::load_rules(rules_path);
    auto r = is_model(m, rs, opt.caps());
    json j = {{"is_model", r.is_model}};
    std::string text = r.is_model ? "matrix is a model of the rule set\n"
                                  : "matrix is not a model\n";
    if (!r.is_model) {
        j["violated_rule"] = r.violated_rule;
        j["valuation"] = io::valuation_to_json(r.valuation);
        text += "rule " + r.violated_rule + " fails at " + show_valuation(r.valuation) + "\n";
    }
    emit(opt, j, text);
    return r.is_model ? 0 : 1;
}

int cmd_derive(const Options& opt, const std::string& rules_path, const std::string& goal_text,
               const std::vector<std::string>& hyp_texts, int depth, std::size_t max_size) {
    RuleSet rs = io::load_rules(rules_path);
    Formula goal = parse_formula(rs.signature, goal_text);
    std::vector<Formula> hyps;
    for (const auto& h : hyp_texts) hyps.push_back(parse_formula(rs.signature, h));
    auto d = derive(rs, hyps, goal, {depth, max_size});
    json j = {{"goal", format_formula(goal)}, {"found", d.has_value()},
              {"depth", depth}, {"max_formula_size", max_size}};
    if (!d) {
        emit(opt, j,
             "no derivation found within bounds (depth " + std::to_string(depth) +
                 ", formula size " + std::to_string(max_size) + ")\n");
        return 1;
    }
    json lines = json::array();
    std::string text = "derivation (" + std::to_string(d->size()) + " lines):\n";
    for (std::size_t i = 0; i < d->size(); ++i) {
        const auto& s = (*d)[i];
        std::string just = s.justification;
        if (!s.from_lines.empty()) {
            just += " from";
            for (int f : s.from_lines) just += " " + std::to_string(f + 1);
        }
        lines.push_back({{"formula", format_formula(s.formula)}, {"justification", just}});
        text += "  " + std::to_string(i + 1) + ". " + format_formula(s.formula) + "  [" + just +
                "]\n";
    }
    j["derivation"] = lines;
    emit(opt, j, text);
    return 0;
}

int cmd_independence(const Options& opt, const std::string& rules_path,
                     const std::string& target, int size_bound) {
    RuleSet rs = io::load_rules(rules_path);
    auto r = independence_search(rs, target, size_bound, opt.caps());
    switch (r.kind) {
    case IndependenceResult::Kind::Derivable: {
        json lines = json::array();
        for (const auto& s : *r.derivation)
            lines.push_back({{"formula", format_formula(s.formula)},
                             {"justification", s.justification}});
        emit(opt, {{"target", target}, {"verdict", "derivable"}, {"derivation", lines}},
             "axiom " + target + " is derivable from the remaining rules; not independent (" +
                 std::to_string(r.derivation->size()) + "-line derivation)\n");
        return 0;
    }
    case IndependenceResult::Kind::Certificate: {
        json j = {{"target", target},
                  {"verdict", "independent"},
                  {"certificate", io::matrix_to_json(*r.certificate)},
                  {"falsifying_valuation", io::valuation_to_json(r.falsifying)}};
        emit(opt, j,
             "axiom " + target + " is independent: certificate matrix of size " +
                 std::to_string(r.certificate->algebra.size) + ", target fails at " +
                 show_valuation(r.falsifying) + "\n");
        return 0;
    }
    default:
        emit(opt, {{"target", target}, {"verdict", "not found"}},
             "no verdict within size bound " + std::to_string(size_bound) + "\n");
        return 1;
    }
}

int cmd_closed_sets(const Options& opt, const std::string& matrix_path, int k) {
    Matrix m = io::load_matrix(matrix_path);
    auto cs = closure_system(m, k, opt.caps());
    json sets = json::array();
    std::string text = std::to_string(cs.sets.size()) + " closed sets on a reduct of " +
                       std::to_string(cs.reduct.reduct->as_algebra.size) + " elements\n";
    for (std::size_t i = 0; i < cs.sets.size(); ++i) {
        sets.push_back(cs.sets[i]);
        text += "  " + show_set(cs.sets[i]) + "\n";
    }
    emit(opt, {{"vars", k}, {"closed_sets", sets}}, text);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"matlog: logical matrices, congruences, and Hilbert systems on finite carriers"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--max-valuations", opt.max_valuations, "valuation enumeration cap");
    app.add_option("--max-cells", opt.max_cells, "term-function table cell cap");
    app.add_option("--format", opt.format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));

    std::string path_a, path_b, sequent, arrow = "imp", goal, target, out_path;
    std::vector<std::string> hyps;
    int vars = 1, depth = 3, size_bound = 3, derive_depth = 5;
    std::size_t max_size = 30;

    auto* c_check = app.add_subcommand("check", "decide a sequent in a matrix");
    c_check->add_option("matrix", path_a)->required();
    c_check->add_option("sequent", sequent)->required();

    auto* c_theorems = app.add_subcommand("theorems", "enumerate theorems up to depth");
    c_theorems->add_option("matrix", path_a)->required();
    c_theorems->add_option("--vars", vars);
    c_theorems->add_option("--depth", depth);

    auto* c_leibniz = app.add_subcommand("leibniz", "Leibniz congruence of a matrix");
    c_leibniz->add_option("matrix", path_a)->required();

    auto* c_reduce = app.add_subcommand("reduce", "Leibniz reduction of a matrix");
    c_reduce->add_option("matrix", path_a)->required();
    c_reduce->add_option("-o,--out", out_path, "write the reduced matrix fixture here");

    auto* c_free = app.add_subcommand("free", "term-function algebra F(k)");
    c_free->add_option("algebra", path_a)->required();
    c_free->add_option("--vars", vars);

    auto* c_lt = app.add_subcommand("lt", "Lindenbaum-Tarski quotient");
    c_lt->add_option("matrix", path_a)->required();
    c_lt->add_option("--vars", vars);
    c_lt->add_option("--depth", depth, "depth for the canonical valuation check");

    auto* c_cong = app.add_subcommand("congruences", "congruence chain per closed set");
    c_cong->add_option("matrix", path_a)->required();
    c_cong->add_option("--vars", vars);

    auto* c_ras = app.add_subcommand("rasiowa", "Rasiowa relation on the reduct");
    c_ras->add_option("matrix", path_a)->required();
    c_ras->add_option("--arrow", arrow);
    c_ras->add_option("--vars", vars);

    auto* c_impl = app.add_subcommand("implicative", "check conditions (i1)-(i5) over S-filters");
    c_impl->add_option("matrix", path_a)->required();
    c_impl->add_option("--arrow", arrow);

    auto* c_equiv = app.add_subcommand("equiv", "decide whether two g-matrices define the same system");
    c_equiv->add_option("gmatrix_a", path_a)->required();
    c_equiv->add_option("gmatrix_b", path_b)->required();

    auto* c_model = app.add_subcommand("model-check", "is the matrix a model of the rule set");
    c_model->add_option("matrix", path_a)->required();
    c_model->add_option("rules", path_b)->required();

    auto* c_derive = app.add_subcommand("derive", "bounded Hilbert-style proof search");
    c_derive->add_option("rules", path_a)->required();
    c_derive->add_option("--goal", goal)->required();
    c_derive->add_option("--hyp", hyps, "hypothesis (repeatable)");
    c_derive->add_option("--depth", derive_depth);
    c_derive->add_option("--max-size", max_size, "formula node-count cap");

    auto* c_indep = app.add_subcommand("independence", "axiom independence by matrix search");
    c_indep->add_option("rules", path_a)->required();
    c_indep->add_option("--target", target)->required();
    c_indep->add_option("--size-bound", size_bound);

    auto* c_closed = app.add_subcommand("closed-sets", "closure system of k-variable theories");
    c_closed->add_option("matrix", path_a)->required();
    c_closed->add_option("--vars", vars);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (*c_check) return cmd_check(opt, path_a, sequent);
        if (*c_theorems) return cmd_theorems(opt, path_a, vars, depth);
        if (*c_leibniz) return cmd_leibniz(opt, path_a);
        if (*c_reduce) return cmd_reduce(opt, path_a, out_path);
        if (*c_free) return cmd_free(opt, path_a, vars);
        if (*c_lt) return cmd_lt(opt, path_a, vars, depth);
        if (*c_cong) return cmd_congruences(opt, path_a, vars);
        if (*c_ras) return cmd_rasiowa(opt, path_a, arrow, vars);
        if (*c_impl) return cmd_implicative(opt, path_a, arrow);
        if (*c_equiv) return cmd_equiv(opt, path_a, path_b);
        if (*c_model) return cmd_model_check(opt, path_a, path_b);
        if (*c_derive) return cmd_derive(opt, path_a, goal, hyps, derive_depth, max_size);
        if (*c_indep) return cmd_independence(opt, path_a, target, size_bound);
        if (*c_closed) return cmd_closed_sets(opt, path_a, vars);
    } catch (const cap_exceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return 3;
    } catch (const fixture_error& e) {
        std::cerr << "fixture error: " << e.what() << "\n";
        return 4;
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
