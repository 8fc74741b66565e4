#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "testutil.hpp"

using namespace lwmi;

namespace {

constexpr double kPi = 3.14159265358979323846;

UniversePtr sym_square() { return testutil::box_universe(0, 2, Rat(-1), Rat(1)); }

McEstimate disc_estimate(std::uint64_t n, std::uint64_t seed, unsigned threads = 1) {
    auto u = sym_square();
    Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    Formula disc = Formula::atom(u, x * x + y * y - Polynomial::constant(2, Rat(1)));
    return inner_integral_mc(disc, WeightSpec::constant(u, Rat(1)), n, seed, threads);
}

} // namespace

TEST_CASE("constant indicator integrates with zero error") {
    auto u = testutil::box_universe(0, 2, Rat(0), Rat(1));
    McEstimate e = mc_integrate(
        *u, [](const std::vector<double>&) { return true; },
        [](const std::vector<double>&) { return 1.0; }, 100000, 1);
    CHECK(e.value == 1.0);
    CHECK(e.stderr_ == 0.0);
    CHECK(e.samples == 100000);
}

TEST_CASE("disc area estimate brackets pi") {
    McEstimate e = disc_estimate(1000000, 42);
    CHECK(e.stderr_ < 0.002);
    CHECK(e.stderr_ > 0.001);
    CHECK(std::abs(e.value - kPi) <= 3 * e.stderr_);
}

TEST_CASE("estimates are bit-identical across repeat runs and thread counts") {
    McEstimate a = disc_estimate(200000, 7, 1);
    McEstimate b = disc_estimate(200000, 7, 1);
    McEstimate c = disc_estimate(200000, 7, 3);
    McEstimate d = disc_estimate(200000, 7, 8);
    CHECK(a.value == b.value);
    CHECK(a.stderr_ == b.stderr_);
    CHECK(a.value == c.value);
    CHECK(a.stderr_ == c.stderr_);
    CHECK(a.value == d.value);
    CHECK(a.stderr_ == d.stderr_);
}

TEST_CASE("different seeds decorrelate") {
    McEstimate a = disc_estimate(100000, 1);
    McEstimate b = disc_estimate(100000, 2);
    CHECK(a.value != b.value);
}

TEST_CASE("standard error shrinks like the square root of the sample count") {
    McEstimate small = disc_estimate(50000, 5);
    McEstimate big = disc_estimate(200000, 5);
    CHECK(big.stderr_ <= small.stderr_ / 2 * 2.2);
    CHECK(big.stderr_ >= small.stderr_ / 2 / 2.2);
}

TEST_CASE("the exact value is inside three standard errors for most seeds") {
    int hits = 0;
    const int runs = 40;
    for (int s = 1; s <= runs; ++s) {
        McEstimate e = disc_estimate(50000, static_cast<std::uint64_t>(s));
        if (std::abs(e.value - kPi) <= 3 * e.stderr_) ++hits;
    }
    CHECK(hits >= runs - 2);
}

TEST_CASE("negative densities abort the run") {
    auto u = sym_square();
    CHECK_THROWS_AS(mc_integrate(
                        *u, [](const std::vector<double>&) { return true; },
                        [](const std::vector<double>& x) { return x[0]; }, 10000, 3),
                    nonnegativity_error);
}

TEST_CASE("sampling requires at least two draws and a real dimension") {
    auto u = sym_square();
    auto yes = [](const std::vector<double>&) { return true; };
    auto one = [](const std::vector<double>&) { return 1.0; };
    CHECK_THROWS_AS(mc_integrate(*u, yes, one, 1, 0), input_error);
    auto u0 = testutil::prop_universe(1);
    CHECK_THROWS_AS(mc_integrate(*u0, yes, one, 100, 0), input_error);
}
