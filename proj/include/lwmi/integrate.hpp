#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "lwmi/boolean_engine.hpp"
#include "lwmi/detail/fasteval.hpp"
#include "lwmi/montecarlo.hpp"
#include "lwmi/poly_integration.hpp"
#include "lwmi/region.hpp"
#include "lwmi/weight.hpp"

namespace lwmi {

// ===========================================================================
// The measure-side engine. A weighted model integral is computed as an
// iterated sum-then-integral: enumerate the Boolean assignments whose
// conditioned formula is satisfiable over the reals, and for each one
// integrate the conditioned weight over the solution set within the box.
//
// Exact route: the conditioned weight is a guarded sum of polynomials;
// each guarded polynomial is integrated over the cells of the region
// decomposition of (conditioned formula AND guard), every step rational.
//
// Monte Carlo route: per assignment, hit-or-miss sampling of the
// conditioned formula with the conditioned weight as density; assignment
// streams use decorrelated sub-seeds and errors combine in quadrature.
// ===========================================================================

enum class Backend { Exact, Mc, Auto };
enum class Method { Exact, Mc };

// Exact rational or floating-point result, depending on the route taken.
struct Value {
    bool exact = true;
    Rat rat = 0;
    double approx = 0;

    static Value of(Rat r) {
        Value v;
        v.exact = true;
        v.rat = std::move(r);
        v.approx = rat_to_double(v.rat);
        return v;
    }
    static Value of_double(double d) {
        Value v;
        v.exact = false;
        v.approx = d;
        return v;
    }
    double as_double() const { return exact ? rat_to_double(rat) : approx; }
};

struct EngineOptions {
    Backend backend = Backend::Auto;
    unsigned threads = 1; // 0 = all hardware threads
    std::uint64_t mc_samples = 100000;
    std::uint64_t mc_seed = 0;
    unsigned enum_cap = BOOL_ENUM_CAP;
    unsigned atom_cap = 20;
    unsigned dim_cap = 3;
    unsigned degree_cap = 8;
    std::uint64_t candidate_cap = 1000000;
    bool record_cells = false;
};

struct BreakdownEntry {
    Assignment b;
    Value value;
    double stderr_ = 0;
};

// One (assignment, weight piece, region cell) contribution of the exact
// route; kept so iterated sums can be reassociated and compared.
struct CellRecord {
    std::uint64_t b_lex = 0;
    std::size_t piece = 0;
    std::size_t cell = 0;
    Rat value;
};

struct IntegrationResult {
    Method method = Method::Exact;
    Value value;
    double stderr_ = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::vector<BreakdownEntry> breakdown;
    std::vector<CellRecord> cell_records;
};

struct Capability {
    bool exact_ok = true;
    std::string reason;
};

// Whether the exact route applies: linear atoms everywhere (formula and
// weight guards), dimension and degree within caps, atom budget respected.
inline Capability exact_capability(const Formula& f, const WeightSpec& w,
                                   const EngineOptions& opts) {
    const Universe& u = *f.universe();
    Capability cap;
    auto fail = [&](std::string why) {
        cap.exact_ok = false;
        cap.reason = std::move(why);
        return cap;
    };
    if (u.num_reals() > opts.dim_cap)
        return fail("exact integration handles at most " + std::to_string(opts.dim_cap) +
                    " real variables, got " + std::to_string(u.num_reals()));
    if (!f.all_atoms_linear()) return fail("formula has nonlinear atoms");
    if (!w.guards_all_linear()) return fail("weight guards have nonlinear atoms");
    if (w.degree_bound() > opts.degree_cap)
        return fail("weight degree bound " + std::to_string(w.degree_bound()) +
                    " exceeds the cap of " + std::to_string(opts.degree_cap));
    std::vector<Polynomial> atoms = f.collect_atoms();
    std::vector<Polynomial> guard_atoms;
    w.collect_guard_atoms(guard_atoms);
    for (const auto& g : guard_atoms) {
        bool seen = false;
        for (const auto& p : atoms)
            if (p == g) { seen = true; break; }
        if (!seen) atoms.push_back(g);
    }
    if (atoms.size() > opts.atom_cap)
        return fail("formula and weight guards use " + std::to_string(atoms.size()) +
                    " distinct atoms, cap is " + std::to_string(opts.atom_cap));
    return cap;
}

// Exact integral of a conditioned (Boolean-free) weight over the solution
// set of a Boolean-free formula, intersected with the box.
inline Rat inner_integral_exact(const Formula& real_formula, const WeightSpec& conditioned,
                                const EngineOptions& opts,
                                std::vector<std::pair<std::size_t, std::vector<Rat>>>* record = nullptr) {
    static const Assignment no_bools;
    Rat total = 0;
    auto pieces = conditioned.pieces(no_bools);
    for (std::size_t pi = 0; pi < pieces.size(); ++pi) {
        const auto& piece = pieces[pi];
        Formula region = Formula::conj2(real_formula, piece.guard);
        if (region.is_false()) continue;
        Decomposition dec = decompose(region, opts.atom_cap, opts.candidate_cap);
        std::vector<Rat> cell_values;
        for (const auto& cell : dec.cells) {
            Rat v = integrate_poly_polytope(piece.poly, cell.poly, opts.degree_cap, opts.dim_cap,
                                            opts.candidate_cap);
            total += v;
            if (record) cell_values.push_back(std::move(v));
        }
        if (record) record->emplace_back(pi, std::move(cell_values));
    }
    return total;
}

inline McEstimate inner_integral_mc(const Formula& real_formula, const WeightSpec& conditioned,
                                    std::uint64_t samples, std::uint64_t seed,
                                    unsigned threads = 1) {
    const Universe& u = *real_formula.universe();
    const detail::FlatFormula member = detail::FlatFormula::of(real_formula);
    const detail::FlatWeight density = detail::FlatWeight::of(conditioned);
    return mc_integrate(
        u, [&](const std::vector<double>& x) { return member.eval(x); },
        [&](const std::vector<double>& x) { return density.eval(x); }, samples, seed, threads);
}

inline IntegrationResult lwmi_integrate(const Formula& f, const WeightSpec& w,
                                        const EngineOptions& opts) {
    const Universe& u = *f.universe();
    if (!w.universe()->same_shape(u))
        throw input_error("formula and weight have different universes");
    const std::size_t n = u.num_reals();

    std::vector<Assignment> models = enumerate_models(f, opts.enum_cap);

    IntegrationResult res;

    // No real variables: the integral over the empty factor is the weight
    // itself, so the whole thing collapses to the exact Boolean sum.
    if (n == 0) {
        const RatPoint no_reals;
        Rat total = 0;
        for (const auto& b : models) {
            Rat v = w.eval(b, no_reals);
            if (v < 0) throw nonnegativity_error("weight is negative at assignment " + b.to_string());
            total += v;
            res.breakdown.push_back({b, Value::of(v)});
        }
        res.method = Method::Exact;
        res.value = Value::of(total);
        return res;
    }

    Method method;
    if (opts.backend == Backend::Exact || opts.backend == Backend::Auto) {
        Capability cap = exact_capability(f, w, opts);
        if (cap.exact_ok)
            method = Method::Exact;
        else if (opts.backend == Backend::Exact)
            throw backend_unavailable("exact backend cannot handle this problem: " + cap.reason);
        else
            method = Method::Mc;
    } else {
        method = Method::Mc;
    }

    if (method == Method::Exact) {
        std::vector<Rat> contrib(models.size());
        std::vector<std::vector<CellRecord>> records(models.size());
        detail::parallel_for(models.size(), opts.threads, [&](std::size_t mi) {
            const Assignment& b = models[mi];
            Formula fb = f.condition(b);
            WeightSpec wb = w.condition(b);
            if (opts.record_cells) {
                std::vector<std::pair<std::size_t, std::vector<Rat>>> rec;
                contrib[mi] = inner_integral_exact(fb, wb, opts, &rec);
                for (const auto& [pi, cells] : rec)
                    for (std::size_t ci = 0; ci < cells.size(); ++ci)
                        records[mi].push_back({b.lex_index(), pi, ci, cells[ci]});
            } else {
                contrib[mi] = inner_integral_exact(fb, wb, opts);
            }
        });
        Rat total = 0;
        for (std::size_t mi = 0; mi < models.size(); ++mi) {
            total += contrib[mi];
            res.breakdown.push_back({models[mi], Value::of(contrib[mi])});
            for (auto& r : records[mi]) res.cell_records.push_back(std::move(r));
        }
        res.method = Method::Exact;
        res.value = Value::of(total);
        return res;
    }

    // Monte Carlo: decorrelated sub-seed per assignment, quadrature-combined
    // standard errors.
    res.method = Method::Mc;
    res.samples = opts.mc_samples;
    res.seed = opts.mc_seed;
    double total = 0, var = 0;
    for (const auto& b : models) {
        Formula fb = f.condition(b);
        WeightSpec wb = w.condition(b);
        McEstimate est = inner_integral_mc(fb, wb, opts.mc_samples,
                                           detail::sub_seed(opts.mc_seed, b.lex_index()),
                                           opts.threads);
        total += est.value;
        var += est.stderr_ * est.stderr_;
        res.breakdown.push_back({b, Value::of_double(est.value), est.stderr_});
    }
    res.value = Value::of_double(total);
    res.stderr_ = std::sqrt(var);
    return res;
}

} // namespace lwmi
