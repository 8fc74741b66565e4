#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <fstream>

#include "testutil.hpp"

using namespace lwmi;
using testutil::parse_without_elapsed;
using testutil::problems_dir;
using testutil::run_cli;

TEST_CASE("compute on the exact fixture") {
    auto r = run_cli("compute " + problems_dir() + "/mixed.json --method exact");
    REQUIRE(r.exit_code == 0);
    Json j = Json::parse(r.out);
    CHECK(j.at("value") == "5/2");
    CHECK(j.at("method") == "exact");
    CHECK(j.contains("elapsed_ms"));
    CHECK_FALSE(j.contains("stderr"));
}

TEST_CASE("compute honors the breakdown flag") {
    auto r = run_cli("compute " + problems_dir() + "/mixed.json --breakdown");
    REQUIRE(r.exit_code == 0);
    Json j = Json::parse(r.out);
    CHECK(j.at("breakdown").at("T").at("value") == "1/2");
    CHECK(j.at("breakdown").at("F").at("value") == "2");

    auto bare = run_cli("compute " + problems_dir() + "/mixed.json");
    CHECK_FALSE(Json::parse(bare.out).contains("breakdown"));
}

TEST_CASE("purely Boolean fixture counts exactly") {
    auto r = run_cli("compute " + problems_dir() + "/prop.json");
    REQUIRE(r.exit_code == 0);
    Json j = Json::parse(r.out);
    CHECK(j.at("value") == "18/25");
    CHECK(j.at("method") == "exact");
}

TEST_CASE("sampling runs are reproducible byte for byte") {
    const std::string cmd =
        "compute " + problems_dir() + "/mixed.json --method mc --mc-samples 200000 --seed 7";
    auto a = run_cli(cmd);
    auto b = run_cli(cmd);
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    CHECK(parse_without_elapsed(a.out) == parse_without_elapsed(b.out));

    Json j = Json::parse(a.out);
    CHECK(j.at("method") == "mc");
    CHECK(j.at("seed") == 7);
    CHECK(j.at("samples") == 200000);
    double val = j.at("value").get<double>();
    double se = j.at("stderr").get<double>();
    CHECK(std::abs(val - 2.5) <= 4 * se);
}

TEST_CASE("thread count does not change the numbers") {
    const std::string cmd =
        "compute " + problems_dir() + "/mixed.json --method mc --mc-samples 100000 --seed 3";
    auto one = run_cli(cmd + " --threads 1");
    auto four = run_cli(cmd + " --threads 4");
    auto env = run_cli(cmd + " --threads 1", "WMI_THREADS=4");
    REQUIRE(one.exit_code == 0);
    CHECK(parse_without_elapsed(one.out) == parse_without_elapsed(four.out));
    CHECK(parse_without_elapsed(one.out) == parse_without_elapsed(env.out));
}

TEST_CASE("oracle subcommand uses the grid evaluator") {
    auto r = run_cli("oracle " + problems_dir() + "/triangle.json");
    REQUIRE(r.exit_code == 0);
    Json j = Json::parse(r.out);
    CHECK(j.at("method") == "oracle");
    CHECK(std::abs(j.at("value").get<double>() - 0.5) <= 2e-3);

    auto fine = run_cli("oracle " + problems_dir() + "/mixed.json --grid-resolution 10000");
    Json jf = Json::parse(fine.out);
    CHECK(std::abs(jf.at("value").get<double>() - 2.5) <= 1e-3);

    // flag spelling of the same evaluator
    auto flag = run_cli("compute " + problems_dir() + "/triangle.json --method oracle");
    REQUIRE(flag.exit_code == 0);
    CHECK(Json::parse(flag.out).at("method") == "oracle");

    auto bogus = run_cli("compute " + problems_dir() + "/triangle.json --method banana");
    CHECK(bogus.exit_code == 1);
}

TEST_CASE("identity checks pass on the shipped fixtures") {
    auto r = run_cli("check-identities " + problems_dir() + "/pdf.json");
    REQUIRE(r.exit_code == 0);
    Json j = Json::parse(r.out);
    CHECK(j.at("value") == "1/8");
    bool saw_corollary2 = false;
    for (const auto& c : j.at("checks")) {
        CHECK(c.at("pass") == true);
        if (c.at("name") == "corollary2") {
            saw_corollary2 = true;
            CHECK(c.at("lhs") == "1/8");
            CHECK(c.at("rhs") == "1/8");
        }
    }
    CHECK(saw_corollary2);

    auto rp = run_cli("check-identities " + problems_dir() + "/prop.json");
    REQUIRE(rp.exit_code == 0);
    Json jp = Json::parse(rp.out);
    bool saw_theorem1 = false;
    for (const auto& c : jp.at("checks"))
        if (c.at("name") == "theorem1") {
            saw_theorem1 = true;
            CHECK(c.at("lhs") == "18/25");
            CHECK(c.at("pass") == true);
        }
    CHECK(saw_theorem1);
}

TEST_CASE("density validation and factorization subcommands") {
    auto v = run_cli("validate-pdf " + problems_dir() + "/pdf.json");
    REQUIRE(v.exit_code == 0);
    Json jv = Json::parse(v.out);
    CHECK(jv.at("value") == "1");
    REQUIRE(jv.at("checks").size() == 1);
    CHECK(jv.at("checks")[0].at("name") == "pdf");
    CHECK(jv.at("checks")[0].at("pass") == true);

    auto f = run_cli("factorize " + problems_dir() + "/pdf.json");
    REQUIRE(f.exit_code == 0);
    Json jf = Json::parse(f.out);
    CHECK(jf.at("factorization").at("marginal").at("T") == "1/2");
    CHECK(jf.at("factorization").at("marginal").at("F") == "1/2");
    CHECK(jf.at("factorization").at("normalizer").at("T") == "1/2");
}

TEST_CASE("input problems exit with code 1 and no stdout") {
    auto missing = run_cli("compute " + problems_dir() + "/no_such_file.json");
    CHECK(missing.exit_code == 1);
    CHECK(missing.out.empty());

    auto malformed = run_cli("compute /dev/null");
    CHECK(malformed.exit_code == 1);

    auto badthreads = run_cli("compute " + problems_dir() + "/mixed.json", "WMI_THREADS=banana");
    CHECK(badthreads.exit_code == 1);
}

TEST_CASE("capacity and backend refusals exit with code 2 and a JSON error") {
    auto forced = run_cli("compute " + problems_dir() + "/disc.json --method exact");
    CHECK(forced.exit_code == 2);
    Json j = Json::parse(forced.out);
    CHECK(j.contains("error"));

    auto grid = run_cli("oracle " + problems_dir() + "/disc.json --grid-resolution 20000");
    CHECK(grid.exit_code == 2);
    CHECK(Json::parse(grid.out).contains("error"));
}

TEST_CASE("failed checks exit with code 3") {
    // unit mass everywhere is not a probability density: mass 2
    const std::string path = "/tmp/lwmi_not_a_pdf.json";
    {
        std::ofstream out(path);
        out << R"({
            "booleans": ["b1"],
            "reals": [{"name": "x", "lower": 0, "upper": 1}],
            "formula": {"var": "b1"},
            "weight": {"const": 1}
        })";
    }
    auto r = run_cli("validate-pdf " + path);
    CHECK(r.exit_code == 3);
    Json j = Json::parse(r.out);
    CHECK(j.at("value") == "2");
    CHECK(j.at("checks")[0].at("pass") == false);
}

TEST_CASE("mc flags do not disturb exact queries") {
    auto r = run_cli("compute " + problems_dir() + "/mixed.json --method auto --seed 5");
    REQUIRE(r.exit_code == 0);
    CHECK(Json::parse(r.out).at("value") == "5/2");
}

TEST_CASE("disc fixture runs the sampling backend from its embedded settings") {
    auto r = run_cli("compute " + problems_dir() + "/disc.json");
    REQUIRE(r.exit_code == 0);
    Json j = Json::parse(r.out);
    CHECK(j.at("method") == "mc");
    CHECK(j.at("seed") == 42);
    double val = j.at("value").get<double>();
    double se = j.at("stderr").get<double>();
    CHECK(std::abs(val - 3.14159265358979) <= 4 * se);
}
