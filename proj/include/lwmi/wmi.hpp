#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lwmi/measures.hpp"

namespace lwmi {

// ===========================================================================
// Problem-level orchestration: backend selection, the compute entry point,
// weight scaling, and the battery of internal consistency identities.
// ===========================================================================

struct McParams {
    std::uint64_t samples = 100000;
    std::uint64_t seed = 0;
};

struct Problem {
    UniversePtr universe;
    Formula formula;
    WeightSpec weight;
    std::string query = "wmi"; // wmi | wmc | validate-pdf | factorize | check-identities
    Backend backend = Backend::Auto;
    McParams mc;
    unsigned oracle_resolution = 1000;
};

inline EngineOptions engine_options(const Problem& p, unsigned threads = 1) {
    EngineOptions o;
    o.backend = p.backend;
    o.threads = threads;
    o.mc_samples = p.mc.samples;
    o.mc_seed = p.mc.seed;
    return o;
}

inline IntegrationResult compute_wmi(const Problem& p, const EngineOptions& opts) {
    if (p.query == "wmc" && p.universe->num_reals() != 0)
        throw input_error("the wmc query applies to problems without real variables");
    return lwmi_integrate(p.formula, p.weight, opts);
}

// c * w as a weight; the integral scales by the same factor.
inline WeightSpec scale_weight(const WeightSpec& w, const Rat& c) {
    if (c < 0) throw input_error("weight scale factors must be non-negative");
    return WeightSpec::scaled(w, c);
}

struct IdentityCheck {
    std::string name;
    std::string lhs;
    std::string rhs;
    bool pass = false;
};

struct IdentityReport {
    IntegrationResult result;
    std::vector<IdentityCheck> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

namespace detail {

inline std::string value_str(const Value& v) {
    return v.exact ? rat_to_string(v.rat) : Json(v.approx).dump();
}

inline std::string rat_str(const Rat& r) { return rat_to_string(r); }

} // namespace detail

// Runs every identity that applies to the problem:
//   theorem1    pruned literal-product count == table sum of the lifted weight
//   corollary1  the integral with no real variables == the Boolean count
//   tonelli     iterated sums reassociated both ways agree (exact route)
//   theorem4    a pdf weight gives values in [0,1] and complementary events sum to 1
//   corollary2  the factorized measures reproduce the probability of the event
inline IdentityReport check_identities(const Problem& p, EngineOptions opts) {
    const Universe& u = *p.universe;
    const std::size_t m = u.num_bools(), n = u.num_reals();

    opts.record_cells = true;
    IdentityReport rep;
    rep.result = lwmi_integrate(p.formula, p.weight, opts);
    const IntegrationResult& res = rep.result;

    if (n == 0) {
        if (auto lp = p.weight.try_literal_product()) {
            LiteralWeights lw(*lp);
            Rat lhs = lwmc(p.formula, lift_literal_weights(lw), opts.enum_cap);
            Rat rhs = wmc(p.formula, lw, opts.enum_cap);
            rep.checks.push_back({"theorem1", detail::rat_str(lhs), detail::rat_str(rhs), lhs == rhs});
        }
        if (m <= BOOL_TABLE_CAP) {
            std::vector<Rat> table(std::size_t(1) << m);
            for (std::uint64_t i = 0; i < table.size(); ++i)
                table[i] = p.weight.eval(Assignment::from_lex_index(m, i), {});
            Rat count = lwmc(p.formula, AssignmentWeight::from_table(m, std::move(table)),
                             opts.enum_cap);
            rep.checks.push_back({"corollary1", detail::value_str(res.value),
                                  detail::rat_str(count),
                                  res.value.exact && res.value.rat == count});
        }
    }

    if (n > 0 && res.method == Method::Exact) {
        // Reassociate the recorded (assignment, piece, cell) contributions
        // both ways: outer sum over assignments vs outer sum over cells.
        Rat by_b = 0;
        std::map<std::uint64_t, Rat> per_b;
        for (const auto& r : res.cell_records) per_b[r.b_lex] += r.value;
        for (const auto& kv : per_b) by_b += kv.second;
        Rat by_cell = 0;
        std::map<std::pair<std::size_t, std::size_t>, Rat> per_cell;
        for (const auto& r : res.cell_records) per_cell[{r.piece, r.cell}] += r.value;
        for (const auto& kv : per_cell) by_cell += kv.second;
        bool pass = by_b == by_cell && res.value.exact && by_b == res.value.rat;
        rep.checks.push_back({"tonelli", detail::rat_str(by_b), detail::rat_str(by_cell), pass});
    }

    // The remaining identities presume the weight is a density over the whole
    // product space. A weight that is signed somewhere on the box is simply
    // not a PDF, so those checks do not apply.
    PdfValidation pv;
    try {
        pv = validate_pdf(p.weight, opts);
    } catch (const nonnegativity_error&) {
        pv.is_pdf = false;
    }
    if (pv.is_pdf) {
        const double sigma = res.stderr_;
        bool in_range = res.value.exact ? (res.value.rat >= 0 && res.value.rat <= 1)
                                        : (res.value.approx >= -4 * sigma &&
                                           res.value.approx <= 1 + 4 * sigma);
        rep.checks.push_back({"theorem4_range", detail::value_str(res.value), "[0, 1]", in_range});

        Problem q = p;
        q.formula = Formula::negate(p.formula);
        IntegrationResult comp = lwmi_integrate(q.formula, p.weight, opts);
        bool comp_pass;
        std::string lhs;
        if (res.value.exact && comp.value.exact) {
            Rat total = res.value.rat + comp.value.rat;
            comp_pass = total == 1;
            lhs = detail::rat_str(total);
        } else {
            double total = res.value.as_double() + comp.value.as_double();
            double tol = 4 * std::sqrt(sigma * sigma + comp.stderr_ * comp.stderr_) + 1e-12;
            comp_pass = std::abs(total - 1.0) <= tol;
            lhs = Json(total).dump();
        }
        rep.checks.push_back({"theorem4_complement", lhs, "1", comp_pass});

        Factorization fact = factorize(p.weight, opts);
        Value ett = eta_times_tau(fact, p.formula, opts);
        bool c2;
        if (ett.exact && res.value.exact)
            c2 = ett.rat == res.value.rat;
        else
            c2 = std::abs(ett.as_double() - res.value.as_double()) <= 5 * (sigma + 1e-12) + 1e-9;
        rep.checks.push_back(
            {"corollary2", detail::value_str(ett), detail::value_str(res.value), c2});
    }
    return rep;
}

} // namespace lwmi
