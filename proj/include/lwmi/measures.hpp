#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "lwmi/integrate.hpp"

namespace lwmi {

// ===========================================================================
// Measure-theoretic helpers on top of the engine: literal-weight lifting,
// discrete probabilities over assignments, density validation, and the
// factorization of a joint density into a Boolean marginal and a family of
// conditional densities over the reals.
// ===========================================================================

// Lifts per-literal weights to the product weight over total assignments,
// w(b) = prod_i (b_i ? w_i_true : w_i_false).
inline AssignmentWeight lift_literal_weights(const LiteralWeights& lw) {
    return AssignmentWeight::from_literals(lw);
}

// Discrete probability table over all 2^M assignments, indexed
// lexicographically. Exact tables sum to 1 exactly; tables estimated by
// sampling are normalized, so they sum to 1 up to float rounding.
struct BoolPdf {
    std::size_t num_vars = 0;
    bool exact = true;
    std::vector<Rat> p;

    const Rat& operator()(const Assignment& b) const { return p[b.lex_index()]; }

    Rat mass_of(const std::vector<Assignment>& event) const {
        Rat s = 0;
        for (const auto& b : event) s += p[b.lex_index()];
        return s;
    }
};

// Probability of an event under the counting-side pdf. The event is given
// as a list of distinct assignments or as a propositional formula.
inline Rat eta(const BoolPdf& pdf, const std::vector<Assignment>& event) {
    return pdf.mass_of(event);
}

inline Rat eta(const BoolPdf& pdf, const Formula& event) {
    if (event.mentions_atoms()) throw input_error("eta expects a propositional event");
    return pdf.mass_of(enumerate_models(event));
}

struct PdfValidation {
    Method method = Method::Exact;
    Value mass;
    double stderr_ = 0;
    bool is_pdf = false;
};

namespace detail {

inline constexpr std::uint64_t NONNEG_SPOT_SEED = 0xbadc0ffee0ddf00dULL;

// Deterministic spot check: exact evaluation at sampled (assignment, point)
// pairs. Catches blatantly signed weights; the samplers still guard every
// point they actually draw.
inline void spot_check_nonnegative(const WeightSpec& w) {
    const Universe& u = *w.universe();
    const std::size_t m = u.num_bools();
    const std::uint64_t num_b = std::uint64_t(1) << std::min<std::size_t>(m, 6);
    const std::uint64_t pts = u.num_reals() == 0 ? 1 : 32;
    for (std::uint64_t ib = 0; ib < num_b; ++ib) {
        Assignment b = Assignment::from_lex_index(m, ib);
        for (std::uint64_t k = 0; k < pts; ++k) {
            RatPoint x = sampled_box_point(u, NONNEG_SPOT_SEED, ib * pts + k);
            if (w.eval(b, x) < 0)
                throw nonnegativity_error("weight is negative at assignment " + b.to_string());
        }
    }
}

// Like spot_check_nonnegative, but only where the weight contributes to the
// integral of f: points of the box satisfying f under the same assignment.
// The weight may take any sign off the solution set.
inline void spot_check_nonnegative_on(const Formula& f, const WeightSpec& w) {
    const Universe& u = *w.universe();
    const std::size_t m = u.num_bools();
    const std::uint64_t num_b = std::uint64_t(1) << std::min<std::size_t>(m, 6);
    const std::uint64_t pts = u.num_reals() == 0 ? 1 : 32;
    for (std::uint64_t ib = 0; ib < num_b; ++ib) {
        Assignment b = Assignment::from_lex_index(m, ib);
        Formula section = f.condition(b);
        for (std::uint64_t k = 0; k < pts; ++k) {
            RatPoint x = sampled_box_point(u, NONNEG_SPOT_SEED, ib * pts + k);
            if (!section.interpret(b, x)) continue;
            if (w.eval(b, x) < 0)
                throw nonnegativity_error("weight is negative at assignment " + b.to_string());
        }
    }
}

} // namespace detail

// Checks that the weight integrates to total mass 1: exactly on the exact
// route, within 3 standard errors on the sampling route.
inline PdfValidation validate_pdf(const WeightSpec& w, const EngineOptions& opts) {
    detail::spot_check_nonnegative(w);
    Formula everything = Formula::make_true(w.universe());
    IntegrationResult r = lwmi_integrate(everything, w, opts);
    PdfValidation v;
    v.method = r.method;
    v.mass = r.value;
    v.stderr_ = r.stderr_;
    if (r.method == Method::Exact)
        v.is_pdf = r.value.exact && r.value.rat == 1;
    else
        v.is_pdf = std::abs(r.value.approx - 1.0) <= 3 * r.stderr_ + 1e-12;
    return v;
}

// w(b, x) = marginal(b) * conditional_b(x): the marginal is the inner
// integral of each conditioned weight, and conditional_b is the conditioned
// weight divided by that normalizer (the zero function when the normalizer
// is zero).
struct Factorization {
    Method method = Method::Exact;
    Value mass;
    BoolPdf marginal;
    std::vector<WeightSpec> conditioned; // per assignment, lexicographic
    std::vector<Value> normalizer;       // inner integral of conditioned[b]

    // Conditional density tau-side evaluation at (b, x).
    Rat conditional_at(const Assignment& b, const RatPoint& x) const {
        std::uint64_t i = b.lex_index();
        if (!normalizer[i].exact) throw input_error("exact conditional evaluation needs the exact route");
        if (normalizer[i].rat == 0) return 0;
        return conditioned[i].eval(Assignment(), x) / normalizer[i].rat;
    }

    // marginal(b) * conditional_b(x); on the exact route this reproduces
    // the original weight wherever it is defined.
    Rat reconstruct_at(const Assignment& b, const RatPoint& x) const {
        std::uint64_t i = b.lex_index();
        if (normalizer[i].rat == 0) return 0;
        return marginal.p[i] * conditional_at(b, x);
    }
};

inline Factorization factorize(const WeightSpec& w, const EngineOptions& opts) {
    PdfValidation pv = validate_pdf(w, opts);
    if (!pv.is_pdf)
        throw input_error("factorize needs a density with total mass 1, got " +
                          (pv.mass.exact ? rat_to_string(pv.mass.rat)
                                         : std::to_string(pv.mass.approx)));

    const Universe& u = *w.universe();
    const std::size_t m = u.num_bools();
    if (m > BOOL_TABLE_CAP)
        throw capacity_error("factorization tabulates 2^M assignments, cap is M <= " +
                             std::to_string(BOOL_TABLE_CAP));
    const std::uint64_t count = std::uint64_t(1) << m;

    Factorization f;
    f.method = pv.method;
    f.mass = pv.mass;
    f.marginal.num_vars = m;
    f.marginal.exact = pv.method == Method::Exact;
    f.marginal.p.resize(count);
    f.conditioned.resize(count);
    f.normalizer.resize(count);

    Formula everything_real = Formula::make_true(w.universe());
    std::vector<Rat> z(count);
    detail::parallel_for(count, opts.threads, [&](std::size_t i) {
        Assignment b = Assignment::from_lex_index(m, i);
        WeightSpec wb = w.condition(b);
        f.conditioned[i] = wb;
        if (u.num_reals() == 0) {
            Rat v = wb.eval(Assignment(), {});
            f.normalizer[i] = Value::of(v);
            z[i] = v;
        } else if (pv.method == Method::Exact) {
            Rat v = inner_integral_exact(everything_real, wb, opts);
            f.normalizer[i] = Value::of(v);
            z[i] = v;
        } else {
            McEstimate est = inner_integral_mc(everything_real, wb, opts.mc_samples,
                                               detail::sub_seed(opts.mc_seed, i), 1);
            f.normalizer[i] = Value::of_double(est.value);
            z[i] = Rat(est.value);
        }
    });

    // Normalize by the total evaluated mass so the marginal is a pdf on
    // both routes (on the exact route the divisor is exactly 1).
    Rat total = 0;
    for (const auto& v : z) total += v;
    for (std::uint64_t i = 0; i < count; ++i)
        f.marginal.p[i] = total == 0 ? Rat(0) : z[i] / total;
    return f;
}

inline Json factorization_report(const Factorization& f) {
    Json marginal = Json::object();
    Json normalizer = Json::object();
    const std::size_t m = f.marginal.num_vars;
    for (std::uint64_t i = 0; i < f.marginal.p.size(); ++i) {
        std::string key = Assignment::from_lex_index(m, i).to_string();
        if (f.marginal.exact) {
            marginal[key] = rat_to_string(f.marginal.p[i]);
            normalizer[key] = rat_to_string(f.normalizer[i].rat);
        } else {
            marginal[key] = rat_to_double(f.marginal.p[i]);
            normalizer[key] = f.normalizer[i].approx;
        }
    }
    Json j;
    j["mass"] = f.mass.exact ? Json(rat_to_string(f.mass.rat)) : Json(f.mass.approx);
    j["marginal"] = std::move(marginal);
    j["normalizer"] = std::move(normalizer);
    return j;
}

// Probability of the event under the product of the factorized measures:
// sum_b marginal(b) * tau_b(section of the event at b). On the exact route
// this equals the engine's integral of the original weight over the event.
inline Value eta_times_tau(const Factorization& f, const Formula& event,
                           const EngineOptions& opts) {
    const Universe& u = *event.universe();
    const std::size_t m = u.num_bools();
    if (f.marginal.num_vars != m) throw input_error("factorization and event universes differ");
    const std::uint64_t count = std::uint64_t(1) << m;

    if (f.method == Method::Exact) {
        Rat acc = 0;
        for (std::uint64_t i = 0; i < count; ++i) {
            if (f.marginal.p[i] == 0) continue;
            Assignment b = Assignment::from_lex_index(m, i);
            Formula section = event.condition(b);
            if (section.is_false()) continue;
            Rat sect_mass;
            if (u.num_reals() == 0)
                sect_mass = f.conditioned[i].eval(Assignment(), {}); // whole fiber mass
            else
                sect_mass = inner_integral_exact(section, f.conditioned[i], opts);
            if (f.normalizer[i].rat == 0) continue;
            acc += f.marginal.p[i] * (sect_mass / f.normalizer[i].rat);
        }
        return Value::of(acc);
    }

    double acc = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
        if (f.marginal.p[i] == 0 || f.normalizer[i].approx == 0) continue;
        Assignment b = Assignment::from_lex_index(m, i);
        Formula section = event.condition(b);
        if (section.is_false()) continue;
        McEstimate est = inner_integral_mc(section, f.conditioned[i], opts.mc_samples,
                                           detail::sub_seed(opts.mc_seed ^ 0x5ec7105ULL, i), 1);
        acc += rat_to_double(f.marginal.p[i]) * (est.value / f.normalizer[i].approx);
    }
    return Value::of_double(acc);
}

} // namespace lwmi
