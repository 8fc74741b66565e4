#pragma once

#include <cstdint>
#include <vector>

#include "lwmi/detail/rng.hpp"
#include "lwmi/formula.hpp"
#include "lwmi/geometry.hpp"

namespace lwmi {

// ===========================================================================
// Region decomposition. A Boolean-free formula over N reals carves the
// bounding box into cells, one per satisfying sign vector of its atoms:
// atom i held true contributes p_i <= 0, atom i held false contributes the
// complement, represented as -p_i <= 0 (the shared boundary p_i = 0 is a
// null set, so cells may overlap there without affecting any integral).
//
// All-linear formulas give polytope cells with exact emptiness and volume;
// any nonlinear atom makes the cell semialgebraic, where emptiness is only
// probed by sampling and integration falls back to Monte Carlo.
// ===========================================================================

struct RegionCell {
    bool polytope_kind;
    std::vector<bool> signs;              // aligned with the decomposition's atom list
    std::vector<Polynomial> constraints;  // sign-resolved atoms, each "p <= 0"
    Polytope poly;                        // only for polytope cells; includes the box

    // Exact membership (box checked separately by callers that sample).
    bool satisfies_constraints(const RatPoint& x) const {
        for (const auto& p : constraints)
            if (p.eval(x) > 0) return false;
        return true;
    }
};

struct Decomposition {
    std::vector<Polynomial> atoms; // distinct, first-occurrence order
    std::vector<RegionCell> cells;
    bool exact; // every cell is a polytope
};

inline Polytope box_polytope(const Universe& u) {
    const std::size_t n = u.num_reals();
    std::vector<HalfSpace> hs;
    hs.reserve(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
        HalfSpace up{std::vector<Rat>(n, Rat(0)), u.real(j).upper};
        up.a[j] = 1;
        hs.push_back(std::move(up));
        HalfSpace lo{std::vector<Rat>(n, Rat(0)), Rat(-u.real(j).lower)};
        lo.a[j] = -1;
        hs.push_back(std::move(lo));
    }
    return Polytope(n, std::move(hs));
}

namespace detail {

inline bool eval_skeleton(const Formula& f, const std::vector<Polynomial>& atoms,
                          const std::vector<bool>& signs) {
    switch (f.kind()) {
        case Formula::Kind::True: return true;
        case Formula::Kind::False: return false;
        case Formula::Kind::BoolVar:
            throw input_error("region decomposition expects a Boolean-free formula");
        case Formula::Kind::Atom:
            for (std::size_t i = 0; i < atoms.size(); ++i)
                if (atoms[i] == f.atom_poly()) return signs[i];
            throw error("atom missing from its own formula's atom list");
        case Formula::Kind::Not: return !eval_skeleton(f.kids()[0], atoms, signs);
        case Formula::Kind::And:
            for (const auto& k : f.kids())
                if (!eval_skeleton(k, atoms, signs)) return false;
            return true;
        case Formula::Kind::Or:
            for (const auto& k : f.kids())
                if (eval_skeleton(k, atoms, signs)) return true;
            return false;
    }
    return false;
}

inline HalfSpace linear_poly_to_halfspace(const Polynomial& p, std::size_t n) {
    HalfSpace h{std::vector<Rat>(n), Rat(-p.constant_term())};
    for (std::size_t j = 0; j < n; ++j) h.a[j] = p.linear_coeff(j);
    return h;
}

// Deterministic sample inside the box; exact rational coordinates derived
// from double draws.
inline RatPoint sampled_box_point(const Universe& u, std::uint64_t seed, std::uint64_t index) {
    const std::size_t n = u.num_reals();
    RatPoint x(n);
    for (std::size_t j = 0; j < n; ++j) {
        Rat t(stream_u01(seed, index * n + j));
        x[j] = u.real(j).lower + t * (u.real(j).upper - u.real(j).lower);
    }
    return x;
}

inline constexpr std::uint64_t EMPTINESS_SEED = 0x7e57ab1eddecafULL;
inline constexpr std::uint64_t EMPTINESS_SAMPLES = 2048;

} // namespace detail

// Emptiness of a single cell. Exact for polytope cells; for semialgebraic
// cells a fixed budget of seeded samples is tried and "no hit" is only
// presumed emptiness (result.second reports whether the answer is exact).
inline std::pair<bool, bool> cell_is_empty(const RegionCell& cell, const Universe& u,
                                           std::uint64_t candidate_cap = 1000000) {
    if (cell.polytope_kind) return {polytope_is_empty(cell.poly, candidate_cap), true};
    for (std::uint64_t i = 0; i < detail::EMPTINESS_SAMPLES; ++i) {
        RatPoint x = detail::sampled_box_point(u, detail::EMPTINESS_SEED, i);
        if (cell.satisfies_constraints(x)) return {false, true}; // witness found
    }
    return {true, false};
}

// Enumerates satisfying sign vectors of the formula's atoms and keeps the
// nonempty cells. Cells cover the solution set within the box and overlap
// only on atom boundaries (null sets).
inline Decomposition decompose(const Formula& f, unsigned atom_cap = 20,
                               std::uint64_t candidate_cap = 1000000) {
    const Universe& u = *f.universe();
    if (f.mentions_bools())
        throw input_error("region decomposition expects a Boolean-free formula");
    if (u.num_reals() == 0) throw input_error("region decomposition needs real variables");

    Decomposition d;
    d.atoms = f.collect_atoms();
    d.exact = true;
    const std::size_t a = d.atoms.size();
    if (a > atom_cap)
        throw capacity_error("formula has " + std::to_string(a) + " distinct atoms, cap is " +
                             std::to_string(atom_cap));

    const std::size_t n = u.num_reals();
    const Polytope box = box_polytope(u);
    bool all_linear = true;
    for (const auto& p : d.atoms)
        if (!p.is_linear()) all_linear = false;

    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << a); ++mask) {
        std::vector<bool> signs(a);
        for (std::size_t i = 0; i < a; ++i) signs[i] = ((mask >> i) & 1) == 0;
        if (!detail::eval_skeleton(f, d.atoms, signs)) continue;

        RegionCell cell;
        cell.polytope_kind = all_linear;
        cell.signs = signs;
        for (std::size_t i = 0; i < a; ++i)
            cell.constraints.push_back(signs[i] ? d.atoms[i] : d.atoms[i].negated());

        if (all_linear) {
            std::vector<HalfSpace> hs;
            for (const auto& p : cell.constraints)
                hs.push_back(detail::linear_poly_to_halfspace(p, n));
            for (const auto& h : box.halfspaces()) hs.push_back(h);
            cell.poly = Polytope(n, std::move(hs));
            if (polytope_is_empty(cell.poly, candidate_cap)) continue;
        } else {
            d.exact = false;
            if (cell_is_empty(cell, u, candidate_cap).first) continue;
        }
        d.cells.push_back(std::move(cell));
    }
    if (!all_linear) d.exact = false;
    return d;
}

} // namespace lwmi
