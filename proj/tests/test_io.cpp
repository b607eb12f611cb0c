#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "matlog/io.hpp"

using namespace matlog;

TEST_CASE("all fixtures load and validate") {
    for (const char* fx : {"b2.json", "l3.json", "g3.json", "b2xb2.json"}) {
        Matrix m = helpers::load(fx);
        CHECK(m.algebra.size >= 2);
        CHECK(!m.filter.empty());
    }
    RuleSet rs = io::load_rules(helpers::fixture("hilbert_cl.json"));
    CHECK(rs.rules.size() == 5);
}

TEST_CASE("matrix json round trip") {
    for (const char* fx : {"b2.json", "l3.json", "b2xb2.json"}) {
        Matrix m = helpers::load(fx);
        Matrix again = io::matrix_from_json(io::matrix_to_json(m));
        CHECK(again.algebra.signature == m.algebra.signature);
        CHECK(again.algebra.size == m.algebra.size);
        CHECK(again.algebra.tables == m.algebra.tables);
        CHECK(again.algebra.labels == m.algebra.labels);
        CHECK(again.filter == m.filter);
    }
}

TEST_CASE("gmatrix accepts a filter family or a single filter") {
    json j = io::load_file(helpers::fixture("l3.json"));
    GMatrix single = io::gmatrix_from_json(j);
    REQUIRE(single.filters.size() == 1);
    CHECK(single.filters[0] == std::vector<int>{2});

    j.erase("filter");
    j["filters"] = json::array({{2}, {1, 2}});
    GMatrix family = io::gmatrix_from_json(j);
    REQUIRE(family.filters.size() == 2);
    CHECK(family.filters[1] == std::vector<int>{1, 2});
}

TEST_CASE("malformed fixtures raise fixture_error") {
    CHECK_THROWS_AS(io::load_file(helpers::fixture("missing.json")), fixture_error);

    json good = io::load_file(helpers::fixture("b2.json"));

    json j = good;
    j["algebra"]["tables"].erase("imp");
    CHECK_THROWS_AS(io::matrix_from_json(j), fixture_error);

    j = good;
    j["algebra"]["tables"]["imp"] = json::array({1, 1, 0}); // wrong length
    CHECK_THROWS_AS(io::matrix_from_json(j), fixture_error);

    j = good;
    j["algebra"]["tables"]["imp"] = json::array({1, 1, 0, 9}); // out of range
    CHECK_THROWS_AS(io::matrix_from_json(j), fixture_error);

    j = good;
    j["filter"] = json::array({5});
    CHECK_THROWS_AS(io::matrix_from_json(j), fixture_error);

    j = good;
    j.erase("filter");
    CHECK_THROWS_AS(io::matrix_from_json(j), fixture_error);

    // rules: a premise that does not parse
    json r = io::load_file(helpers::fixture("hilbert_cl.json"));
    r["rules"][0]["conclusion"] = "imp(p";
    CHECK_THROWS_AS(io::rules_from_json(r), fixture_error);
}

TEST_CASE("save and reload") {
    Matrix m = helpers::load("g3.json");
    std::string path = "test_io_roundtrip.json";
    io::save_json(path, io::matrix_to_json(m));
    Matrix again = io::load_matrix(path);
    CHECK(again.algebra.tables == m.algebra.tables);
    CHECK(again.filter == m.filter);
    std::remove(path.c_str());
}
