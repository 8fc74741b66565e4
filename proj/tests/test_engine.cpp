#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "testutil.hpp"

using namespace lwmi;
using testutil::box_universe;

namespace {

struct Mixed {
    UniversePtr u;
    Formula f;
    WeightSpec w;
};

// (b1 and 0<=x<=1) or (not b1 and 0<=x<=2), weight ite(b1, x, 1) on [-10,10]
Mixed mixed_fixture() {
    auto u = box_universe(1, 1, Rat(-10), Rat(10));
    Polynomial x = Polynomial::variable(1, 0);
    Formula b1 = Formula::bool_var(u, 0);
    Formula ge0 = Formula::atom(u, -x);
    Formula le1 = Formula::atom(u, x - Polynomial::constant(1, Rat(1)));
    Formula le2 = Formula::atom(u, x - Polynomial::constant(1, Rat(2)));
    Formula f = Formula::disj2(Formula::conj(u, {b1, ge0, le1}),
                               Formula::conj(u, {Formula::negate(b1), ge0, le2}));
    WeightSpec w = WeightSpec::ite(b1, WeightSpec::real_var(u, 0), WeightSpec::constant(u, Rat(1)));
    return {u, f, w};
}

} // namespace

TEST_CASE("the mixed fixture integrates to 5/2 exactly") {
    Mixed m = mixed_fixture();
    EngineOptions opts;
    IntegrationResult r = lwmi_integrate(m.f, m.w, opts);
    CHECK(r.method == Method::Exact);
    CHECK(r.value.exact);
    CHECK(r.value.rat == Rat(5, 2));

    REQUIRE(r.breakdown.size() == 2);
    CHECK(r.breakdown[0].b.to_string() == "T");
    CHECK(r.breakdown[0].value.rat == Rat(1, 2));
    CHECK(r.breakdown[1].b.to_string() == "F");
    CHECK(r.breakdown[1].value.rat == Rat(2));

    Rat sum = 0;
    for (const auto& e : r.breakdown) sum += e.value.rat;
    CHECK(sum == r.value.rat);
}

TEST_CASE("unsatisfiable formulas integrate to zero") {
    Mixed m = mixed_fixture();
    Formula contradiction =
        Formula::conj2(Formula::bool_var(m.u, 0), Formula::negate(Formula::bool_var(m.u, 0)));
    EngineOptions opts;
    CHECK(lwmi_integrate(contradiction, m.w, opts).value.rat == Rat(0));

    // satisfiable skeleton, empty real region
    Polynomial x = Polynomial::variable(1, 0);
    Formula empty_region = Formula::conj2(
        Formula::atom(m.u, x), Formula::atom(m.u, Polynomial::constant(1, Rat(1)) - x));
    CHECK(lwmi_integrate(empty_region, m.w, opts).value.rat == Rat(0));
}

TEST_CASE("purely Boolean problems reduce to counting") {
    auto u = testutil::prop_universe(2);
    Formula f = Formula::disj2(Formula::bool_var(u, 0), Formula::bool_var(u, 1));
    WeightSpec w = WeightSpec::mul(
        u, {WeightSpec::ite(Formula::bool_var(u, 0), WeightSpec::constant(u, Rat(3, 10)),
                            WeightSpec::constant(u, Rat(7, 10))),
            WeightSpec::ite(Formula::bool_var(u, 1), WeightSpec::constant(u, Rat(3, 5)),
                            WeightSpec::constant(u, Rat(2, 5)))});

    EngineOptions opts;
    IntegrationResult r = lwmi_integrate(f, w, opts);
    CHECK(r.value.rat == Rat(18, 25));
    CHECK(r.method == Method::Exact);

    LiteralWeights lw({{Rat(3, 10), Rat(7, 10)}, {Rat(3, 5), Rat(2, 5)}});
    CHECK(r.value.rat == wmc(f, lw));

    // an explicit mc request still computes the finite sum exactly
    opts.backend = Backend::Mc;
    IntegrationResult rm = lwmi_integrate(f, w, opts);
    CHECK(rm.method == Method::Exact);
    CHECK(rm.value.rat == Rat(18, 25));
}

TEST_CASE("weight scaling scales the integral linearly") {
    Mixed m = mixed_fixture();
    EngineOptions opts;
    CHECK(lwmi_integrate(m.f, scale_weight(m.w, Rat(2)), opts).value.rat == Rat(5));
    CHECK(lwmi_integrate(m.f, scale_weight(m.w, Rat(1, 2)), opts).value.rat == Rat(5, 4));
    CHECK(lwmi_integrate(m.f, scale_weight(m.w, Rat(1)), opts).value.rat == Rat(5, 2));
    CHECK_THROWS_AS(scale_weight(m.w, Rat(-1)), input_error);
}

TEST_CASE("backend selection and refusal") {
    Mixed m = mixed_fixture();
    Capability cap = exact_capability(m.f, m.w, EngineOptions{});
    CHECK(cap.exact_ok);

    auto u = box_universe(0, 2, Rat(-1), Rat(1));
    Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    Formula disc = Formula::atom(u, x * x + y * y - Polynomial::constant(2, Rat(1)));
    WeightSpec one = WeightSpec::constant(u, Rat(1));
    CHECK_FALSE(exact_capability(disc, one, EngineOptions{}).exact_ok);

    EngineOptions force_exact;
    force_exact.backend = Backend::Exact;
    CHECK_THROWS_AS(lwmi_integrate(disc, one, force_exact), backend_unavailable);

    EngineOptions auto_opts;
    auto_opts.mc_samples = 200000;
    auto_opts.mc_seed = 11;
    IntegrationResult r = lwmi_integrate(disc, one, auto_opts);
    CHECK(r.method == Method::Mc);
    CHECK(std::abs(r.value.approx - 3.14159265358979) <= 4 * r.stderr_);

    // high dimension pushes auto to sampling as well
    auto u4 = box_universe(0, 4, Rat(0), Rat(1));
    Formula all = Formula::make_true(u4);
    CHECK_FALSE(exact_capability(all, WeightSpec::constant(u4, Rat(1)), EngineOptions{}).exact_ok);
}

TEST_CASE("sampling backend brackets the exact value") {
    Mixed m = mixed_fixture();
    EngineOptions opts;
    opts.backend = Backend::Mc;
    opts.mc_samples = 400000;
    opts.mc_seed = 123;
    IntegrationResult r = lwmi_integrate(m.f, m.w, opts);
    CHECK(r.method == Method::Mc);
    CHECK(r.stderr_ > 0);
    CHECK(std::abs(r.value.approx - 2.5) <= 4 * r.stderr_);
    REQUIRE(r.breakdown.size() == 2);
    CHECK(r.breakdown[0].stderr_ > 0);
}

TEST_CASE("exact results agree with the grid oracle") {
    Mixed m = mixed_fixture();
    double grid = grid_oracle(m.f, m.w, 10000);
    CHECK(std::abs(grid - 2.5) <= 1e-3);
}

TEST_CASE("results are deterministic across thread counts") {
    Mixed m = mixed_fixture();
    EngineOptions a, b;
    a.backend = b.backend = Backend::Mc;
    a.mc_samples = b.mc_samples = 100000;
    a.mc_seed = b.mc_seed = 99;
    a.threads = 1;
    b.threads = 4;
    IntegrationResult ra = lwmi_integrate(m.f, m.w, a);
    IntegrationResult rb = lwmi_integrate(m.f, m.w, b);
    CHECK(ra.value.approx == rb.value.approx);
    CHECK(ra.stderr_ == rb.stderr_);

    EngineOptions e1, e2;
    e1.threads = 1;
    e2.threads = 4;
    CHECK(lwmi_integrate(m.f, m.w, e1).value.rat == lwmi_integrate(m.f, m.w, e2).value.rat);
}

TEST_CASE("identity report on the Boolean example") {
    auto u = testutil::prop_universe(2);
    Problem p;
    p.universe = u;
    p.formula = Formula::disj2(Formula::bool_var(u, 0), Formula::bool_var(u, 1));
    p.weight = WeightSpec::mul(
        u, {WeightSpec::ite(Formula::bool_var(u, 0), WeightSpec::constant(u, Rat(3, 10)),
                            WeightSpec::constant(u, Rat(7, 10))),
            WeightSpec::ite(Formula::bool_var(u, 1), WeightSpec::constant(u, Rat(3, 5)),
                            WeightSpec::constant(u, Rat(2, 5)))});
    p.query = "check-identities";

    IdentityReport rep = check_identities(p, engine_options(p));
    CHECK(rep.all_pass());
    bool saw_theorem1 = false, saw_corollary1 = false;
    for (const auto& c : rep.checks) {
        if (c.name == "theorem1") {
            saw_theorem1 = true;
            CHECK(c.lhs == "18/25");
            CHECK(c.rhs == "18/25");
            CHECK(c.pass);
        }
        if (c.name == "corollary1") saw_corollary1 = true;
    }
    CHECK(saw_theorem1);
    CHECK(saw_corollary1);
}

TEST_CASE("identity report on the density fixture") {
    auto u = box_universe(1, 1, Rat(0), Rat(1));
    Polynomial x = Polynomial::variable(1, 0);
    Problem p;
    p.universe = u;
    p.formula = Formula::conj2(Formula::bool_var(u, 0),
                               Formula::atom(u, x - Polynomial::constant(1, Rat(1, 2))));
    p.weight = WeightSpec::ite(Formula::bool_var(u, 0), WeightSpec::real_var(u, 0),
                               WeightSpec::constant(u, Rat(1, 2)));
    p.query = "check-identities";

    IdentityReport rep = check_identities(p, engine_options(p));
    CHECK(rep.all_pass());
    CHECK(rep.result.value.rat == Rat(1, 8));
    bool saw_tonelli = false, saw_corollary2 = false, saw_range = false, saw_complement = false;
    for (const auto& c : rep.checks) {
        if (c.name == "tonelli") saw_tonelli = true;
        if (c.name == "corollary2") {
            saw_corollary2 = true;
            CHECK(c.lhs == "1/8");
            CHECK(c.rhs == "1/8");
        }
        if (c.name == "theorem4_range") saw_range = true;
        if (c.name == "theorem4_complement") saw_complement = true;
    }
    CHECK(saw_tonelli);
    CHECK(saw_corollary2);
    CHECK(saw_range);
    CHECK(saw_complement);
}

TEST_CASE("disjoint integrals add and entailed integrals dominate") {
    testutil::Rng rng(10101);
    for (int it = 0; it < 8; ++it) {
        testutil::SmtFixture fx = testutil::rand_smt_fixture(rng);
        EngineOptions opts;
        Formula other = testutil::rand_smt_formula(
            rng, fx.u, {testutil::rand_linear_atom(rng, fx.u), testutil::rand_linear_atom(rng, fx.u)},
            2);
        Formula disjoint = Formula::conj2(other, Formula::negate(fx.formula));
        Rat a = lwmi_integrate(fx.formula, fx.weight, opts).value.rat;
        Rat b = lwmi_integrate(disjoint, fx.weight, opts).value.rat;
        Rat both = lwmi_integrate(Formula::disj2(fx.formula, disjoint), fx.weight, opts).value.rat;
        CHECK(a + b == both);

        Rat wider = lwmi_integrate(Formula::disj2(fx.formula, other), fx.weight, opts).value.rat;
        CHECK(a <= wider);
    }
}

TEST_CASE("capacity diagnostics name the limiting feature") {
    auto u = box_universe(0, 1, Rat(0), Rat(1));
    Polynomial x = Polynomial::variable(1, 0);
    Polynomial deg9 = Polynomial::constant(1, Rat(1));
    for (int i = 0; i < 9; ++i) deg9 = deg9 * x;
    Capability cap =
        exact_capability(Formula::make_true(u), testutil::poly_to_weight(u, deg9), EngineOptions{});
    CHECK_FALSE(cap.exact_ok);
    CHECK_FALSE(cap.reason.empty());
}
