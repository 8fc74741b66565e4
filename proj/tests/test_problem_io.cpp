#include <catch2/catch_amalgamated.hpp>

#include "testutil.hpp"

using namespace lwmi;

TEST_CASE("the shipped problem files load and compute") {
    Problem mixed = load_problem_file(testutil::problems_dir() + "/mixed.json");
    CHECK(mixed.universe->num_bools() == 1);
    CHECK(mixed.universe->num_reals() == 1);
    CHECK(mixed.query == "wmi");
    CHECK(compute_wmi(mixed, engine_options(mixed)).value.rat == Rat(5, 2));

    Problem prop = load_problem_file(testutil::problems_dir() + "/prop.json");
    CHECK(prop.query == "wmc");
    CHECK(compute_wmi(prop, engine_options(prop)).value.rat == Rat(18, 25));

    Problem pdf = load_problem_file(testutil::problems_dir() + "/pdf.json");
    CHECK(pdf.query == "check-identities");
    CHECK(check_identities(pdf, engine_options(pdf)).all_pass());

    Problem disc = load_problem_file(testutil::problems_dir() + "/disc.json");
    CHECK(disc.mc.samples == 1000000);
    CHECK(disc.mc.seed == 42);

    Problem tri = load_problem_file(testutil::problems_dir() + "/triangle.json");
    CHECK(tri.oracle_resolution == 1000);
}

TEST_CASE("decimal weights load as exact rationals") {
    auto text = R"({
        "booleans": ["b1"], "reals": [],
        "formula": {"var": "b1"},
        "weight": {"op": "ite", "cond": {"var": "b1"}, "then": {"const": 0.1}, "else": {"const": 0.2}}
    })";
    Problem p = load_problem_text(text);
    CHECK(p.weight.eval(Assignment({true}), {}) == Rat(1, 10));
    CHECK(p.weight.eval(Assignment({false}), {}) == Rat(1, 5));
}

TEST_CASE("schema violations are reported as input errors") {
    CHECK_THROWS_AS(load_problem_text("{"), input_error);
    CHECK_THROWS_AS(load_problem_text("[]"), input_error);
    CHECK_THROWS_AS(load_problem_text(R"({"booleans": [], "reals": []})"), input_error);
    CHECK_THROWS_AS(load_problem_text(R"({
        "booleans": ["b"], "reals": [],
        "formula": {"var": "b"}, "weight": {"const": 1},
        "query": "summon"
    })"),
                    input_error);
    CHECK_THROWS_AS(load_problem_text(R"({
        "booleans": ["b", "b"], "reals": [],
        "formula": {"var": "b"}, "weight": {"const": 1}
    })"),
                    input_error);
    CHECK_THROWS_AS(load_problem_text(R"({
        "booleans": [], "reals": [{"name": "x", "lower": 1, "upper": 0}],
        "formula": {"op": "true"}, "weight": {"const": 1}
    })"),
                    input_error);
    CHECK_THROWS_AS(load_problem_text(R"({
        "booleans": [], "reals": [{"name": "x", "lower": 0, "upper": 1}],
        "formula": {"op": "le", "lhs": {"var": "y"}, "rhs": {"const": 1}},
        "weight": {"const": 1}
    })"),
                    input_error);
}

TEST_CASE("obviously negative weights are rejected at load time") {
    CHECK_THROWS_AS(load_problem_text(R"({
        "booleans": ["b"], "reals": [],
        "formula": {"var": "b"},
        "weight": {"op": "ite", "cond": {"var": "b"}, "then": {"const": -1}, "else": {"const": 1}}
    })"),
                    nonnegativity_error);
}

TEST_CASE("results serialize with exact rational strings") {
    Problem mixed = load_problem_file(testutil::problems_dir() + "/mixed.json");
    IntegrationResult r = compute_wmi(mixed, engine_options(mixed));
    Json j = result_to_json(r, true);
    CHECK(j.at("value") == "5/2");
    CHECK(j.at("method") == "exact");
    CHECK(j.at("breakdown").at("T") == Json{{"value", "1/2"}});
    CHECK(j.at("breakdown").at("F") == Json{{"value", "2"}});
    CHECK_FALSE(j.contains("stderr"));
}
