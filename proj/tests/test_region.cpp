#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "testutil.hpp"

using namespace lwmi;
using testutil::box_universe;

namespace {

Formula between(const UniversePtr& u, const Rat& lo, const Rat& hi) {
    Polynomial x = Polynomial::variable(u->num_reals(), 0);
    return Formula::conj2(Formula::atom(u, Polynomial::constant(u->num_reals(), lo) - x),
                          Formula::atom(u, x - Polynomial::constant(u->num_reals(), hi)));
}

} // namespace

TEST_CASE("decomposition of a conjunction yields a single cell") {
    auto u = box_universe(0, 1, Rat(-10), Rat(10));
    Decomposition d = decompose(between(u, Rat(0), Rat(1)));
    CHECK(d.exact);
    REQUIRE(d.cells.size() == 1);
    CHECK(d.cells[0].polytope_kind);
    CHECK(polytope_volume(d.cells[0].poly) == Rat(1));
}

TEST_CASE("decomposition of a disjunction covers it disjointly") {
    auto u = box_universe(0, 1, Rat(-2), Rat(2));
    Polynomial x = Polynomial::variable(1, 0);
    Formula f = Formula::disj2(Formula::atom(u, x - Polynomial::constant(1, Rat(1))),
                               Formula::atom(u, Polynomial::constant(1, Rat(0)) - x));
    Decomposition d = decompose(f);
    REQUIRE(d.cells.size() == 3);
    std::vector<Rat> lengths;
    Rat total = 0;
    for (const auto& c : d.cells) {
        lengths.push_back(polytope_volume(c.poly));
        total += lengths.back();
    }
    std::sort(lengths.begin(), lengths.end());
    CHECK(lengths == std::vector<Rat>{Rat(1), Rat(1), Rat(2)});
    CHECK(total == Rat(4));
}

TEST_CASE("contradictory constraints decompose to nothing") {
    auto u = box_universe(0, 1, Rat(-2), Rat(2));
    Polynomial x = Polynomial::variable(1, 0);
    Formula f = Formula::conj2(Formula::atom(u, x),
                               Formula::atom(u, Polynomial::constant(1, Rat(1)) - x));
    CHECK(decompose(f).cells.empty());
}

TEST_CASE("emptiness checks on polytopes") {
    auto u1 = box_universe(0, 1, Rat(0), Rat(1));
    CHECK_FALSE(polytope_is_empty(box_polytope(*u1)));

    RatPoint ex{Rat(1)}, mx{Rat(-1)};
    Polytope empty1(1, {{ex, Rat(0)}, {mx, Rat(-1)}}); // x <= 0 and x >= 1
    CHECK(polytope_is_empty(empty1));

    auto u2 = box_universe(0, 2, Rat(0), Rat(1));
    RatPoint diag{Rat(1), Rat(1)};
    Polytope empty2 = box_polytope(*u2).cut({diag, Rat(-5)});
    CHECK(polytope_is_empty(empty2));
}

TEST_CASE("decomposition rejects Boolean variables and empty real spaces") {
    auto mixed = box_universe(1, 1, Rat(0), Rat(1));
    Formula f = Formula::bool_var(mixed, 0);
    CHECK_THROWS_AS(decompose(f), input_error);

    auto pure = testutil::prop_universe(1);
    CHECK_THROWS_AS(decompose(Formula::make_true(pure)), input_error);
}

TEST_CASE("cells tile the solution set, against the grid oracle") {
    testutil::Rng rng(1212);
    for (int it = 0; it < 6; ++it) {
        auto u = box_universe(0, 2, Rat(0), Rat(1));
        std::vector<Formula> pool;
        const int na = rng.uni(2, 4);
        for (int i = 0; i < na; ++i) pool.push_back(testutil::rand_linear_atom(rng, u));
        Formula f = testutil::rand_smt_formula(rng, u, pool, 2);
        Decomposition d = decompose(f);
        REQUIRE(d.exact);

        Rat cell_total = 0;
        for (const auto& c : d.cells) cell_total += polytope_volume(c.poly);

        const unsigned R = 256;
        double grid = grid_oracle(f, WeightSpec::constant(u, Rat(1)), R);
        CHECK(std::abs(rat_to_double(cell_total) - grid) <= 2.0 / R);
    }
}

TEST_CASE("cells are pairwise disjoint and sound on sampled points") {
    testutil::Rng rng(1313);
    auto u = box_universe(0, 2, Rat(0), Rat(1));
    std::vector<Formula> pool;
    for (int i = 0; i < 4; ++i) pool.push_back(testutil::rand_linear_atom(rng, u));
    Formula f = testutil::rand_smt_formula(rng, u, pool, 3);
    Decomposition d = decompose(f);

    int checked = 0;
    for (std::uint64_t s = 0; checked < 1200; ++s) {
        RatPoint x{Rat(rng.uni(0, 64), 64), Rat(rng.uni(0, 64), 64)};
        std::size_t hits = 0;
        for (const auto& c : d.cells)
            if (c.poly.contains(x)) ++hits;
        // interiors are disjoint; boundaries may overlap, so at most count
        // membership through the sign constraints, which partition exactly
        std::size_t strict_hits = 0;
        for (const auto& c : d.cells)
            if (c.satisfies_constraints(x)) ++strict_hits;
        if (f.interpret(Assignment(), x)) {
            CHECK(strict_hits >= 1);
            CHECK(hits >= 1);
        }
        ++checked;
    }
}

TEST_CASE("sampled membership agrees with interpretation cellwise") {
    testutil::Rng rng(1414);
    auto u = box_universe(0, 2, Rat(0), Rat(1));
    std::vector<Formula> pool;
    for (int i = 0; i < 3; ++i) pool.push_back(testutil::rand_linear_atom(rng, u));
    Formula f = testutil::rand_smt_formula(rng, u, pool, 2);
    Decomposition d = decompose(f);
    for (int rep = 0; rep < 300; ++rep) {
        RatPoint x{Rat(rng.uni(1, 63), 64), Rat(rng.uni(1, 63), 64)};
        bool in_some_cell = false;
        for (const auto& c : d.cells)
            if (c.satisfies_constraints(x)) in_some_cell = true;
        // boundary points can fall between open complements; skip exact hits
        bool on_boundary = false;
        for (const auto& a : d.atoms)
            if (a.eval(x) == 0) on_boundary = true;
        if (!on_boundary) CHECK(in_some_cell == f.interpret(Assignment(), x));
    }
}

TEST_CASE("nonlinear atoms flag the decomposition inexact") {
    auto u = box_universe(0, 2, Rat(-1), Rat(1));
    Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    Formula disc = Formula::atom(u, x * x + y * y - Polynomial::constant(2, Rat(1)));
    Decomposition d = decompose(disc);
    CHECK_FALSE(d.exact);
    REQUIRE_FALSE(d.cells.empty());
    CHECK_FALSE(d.cells[0].polytope_kind);
    CHECK(d.cells[0].satisfies_constraints({Rat(0), Rat(0)}));
    CHECK_FALSE(d.cells[0].satisfies_constraints({Rat(1), Rat(1)}));
}

TEST_CASE("atom budget is enforced") {
    auto u = box_universe(0, 1, Rat(0), Rat(1));
    Polynomial x = Polynomial::variable(1, 0);
    std::vector<Formula> atoms;
    for (int i = 0; i <= 21; ++i)
        atoms.push_back(Formula::atom(u, x - Polynomial::constant(1, Rat(i, 22))));
    CHECK_THROWS_AS(decompose(Formula::disj(u, atoms)), capacity_error);
}
