#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lwmi/detail/parallel.hpp"
#include "lwmi/formula.hpp"
#include "lwmi/weight.hpp"

namespace lwmi {

// ===========================================================================
// Midpoint-rule grid oracle. A deliberately separate evaluation stack in
// plain doubles: it walks the formula and weight trees through its own
// compiled form, never touching the decomposition, triangulation or exact
// integration code, so agreement with the exact route is meaningful
// evidence rather than the same bug twice.
//
// The estimate is sum over assignments and grid cells of
// [formula holds at the cell midpoint] * weight(midpoint) * cell volume.
// ===========================================================================

namespace oracle_detail {

struct CompiledPoly {
    struct Term {
        double coeff;
        std::vector<std::pair<unsigned, unsigned>> varexp; // (variable, exponent)
    };
    std::vector<Term> terms;

    double eval(const std::vector<double>& x) const {
        double acc = 0;
        for (const auto& t : terms) {
            double v = t.coeff;
            for (const auto& [j, e] : t.varexp) {
                double b = x[j];
                for (unsigned k = 0; k < e; ++k) v *= b;
            }
            acc += v;
        }
        return acc;
    }
};

struct CompiledFormula {
    enum class Op { True, False, Var, Atom, Not, And, Or };
    Op op = Op::True;
    unsigned var = 0;
    CompiledPoly poly;
    std::vector<CompiledFormula> kids;

    bool eval(const std::vector<bool>& b, const std::vector<double>& x) const {
        switch (op) {
            case Op::True: return true;
            case Op::False: return false;
            case Op::Var: return b[var];
            case Op::Atom: return poly.eval(x) <= 0.0;
            case Op::Not: return !kids[0].eval(b, x);
            case Op::And:
                for (const auto& k : kids)
                    if (!k.eval(b, x)) return false;
                return true;
            case Op::Or:
                for (const auto& k : kids)
                    if (k.eval(b, x)) return true;
                return false;
        }
        return false;
    }
};

struct CompiledWeight {
    enum class Op { Const, Var, Add, Mul, Pow, Ite };
    Op op = Op::Const;
    double c = 0;
    unsigned var = 0;
    unsigned exp = 0;
    CompiledFormula cond;
    std::vector<CompiledWeight> kids;

    double eval(const std::vector<bool>& b, const std::vector<double>& x) const {
        switch (op) {
            case Op::Const: return c;
            case Op::Var: return x[var];
            case Op::Add: {
                double s = 0;
                for (const auto& k : kids) s += k.eval(b, x);
                return s;
            }
            case Op::Mul: {
                double p = 1;
                for (const auto& k : kids) p *= k.eval(b, x);
                return p;
            }
            case Op::Pow: {
                double base = kids[0].eval(b, x), p = 1;
                for (unsigned i = 0; i < exp; ++i) p *= base;
                return p;
            }
            case Op::Ite: return cond.eval(b, x) ? kids[0].eval(b, x) : kids[1].eval(b, x);
        }
        return 0;
    }
};

inline CompiledPoly compile_poly(const Polynomial& p) {
    CompiledPoly out;
    for (const auto& [exps, coeff] : p.terms()) {
        CompiledPoly::Term t;
        t.coeff = rat_to_double(coeff);
        for (unsigned j = 0; j < exps.size(); ++j)
            if (exps[j] > 0) t.varexp.push_back({j, exps[j]});
        out.terms.push_back(std::move(t));
    }
    return out;
}

inline CompiledFormula compile_formula(const Formula& f) {
    CompiledFormula out;
    switch (f.kind()) {
        case Formula::Kind::True: out.op = CompiledFormula::Op::True; break;
        case Formula::Kind::False: out.op = CompiledFormula::Op::False; break;
        case Formula::Kind::BoolVar:
            out.op = CompiledFormula::Op::Var;
            out.var = static_cast<unsigned>(f.bool_index());
            break;
        case Formula::Kind::Atom:
            out.op = CompiledFormula::Op::Atom;
            out.poly = compile_poly(f.atom_poly());
            break;
        case Formula::Kind::Not: out.op = CompiledFormula::Op::Not; break;
        case Formula::Kind::And: out.op = CompiledFormula::Op::And; break;
        case Formula::Kind::Or: out.op = CompiledFormula::Op::Or; break;
    }
    for (const auto& k : f.kids()) out.kids.push_back(compile_formula(k));
    return out;
}

inline CompiledWeight compile_weight(const WeightSpec& w) {
    CompiledWeight out;
    switch (w.kind()) {
        case WeightSpec::Kind::Const:
            out.op = CompiledWeight::Op::Const;
            out.c = rat_to_double(w.value());
            break;
        case WeightSpec::Kind::RealVar:
            out.op = CompiledWeight::Op::Var;
            out.var = static_cast<unsigned>(w.var_index());
            break;
        case WeightSpec::Kind::Add: out.op = CompiledWeight::Op::Add; break;
        case WeightSpec::Kind::Mul: out.op = CompiledWeight::Op::Mul; break;
        case WeightSpec::Kind::Pow:
            out.op = CompiledWeight::Op::Pow;
            out.exp = w.exponent();
            break;
        case WeightSpec::Kind::Ite:
            out.op = CompiledWeight::Op::Ite;
            out.cond = compile_formula(w.cond());
            break;
    }
    for (const auto& k : w.kids()) out.kids.push_back(compile_weight(k));
    return out;
}

struct Kahan {
    double sum = 0, carry = 0;
    void add(double v) {
        double y = v - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

} // namespace oracle_detail

// Midpoint-rule estimate with `resolution` cells per axis. The grid size
// resolution^N is capped; the Boolean side is a full 2^M scan.
inline double grid_oracle(const Formula& f, const WeightSpec& w, unsigned resolution,
                          unsigned threads = 1, std::uint64_t grid_cap = 100000000) {
    const Universe& u = *f.universe();
    const std::size_t m = u.num_bools(), n = u.num_reals();
    constexpr std::size_t assignment_cap = 24;
    if (resolution < 2) throw input_error("grid oracle needs resolution >= 2");
    if (m > assignment_cap)
        throw capacity_error("grid oracle scans 2^M assignments, cap is M <= " +
                             std::to_string(assignment_cap));

    double cells = 1;
    for (std::size_t j = 0; j < n; ++j) cells *= static_cast<double>(resolution);
    if (cells > static_cast<double>(grid_cap))
        throw capacity_error("grid of " + std::to_string(resolution) + "^" + std::to_string(n) +
                             " cells exceeds the cap");

    oracle_detail::CompiledFormula cf = oracle_detail::compile_formula(f);
    oracle_detail::CompiledWeight cw = oracle_detail::compile_weight(w);

    std::vector<double> lo(n), step(n);
    double cellvol = 1;
    for (std::size_t j = 0; j < n; ++j) {
        lo[j] = rat_to_double(u.real(j).lower);
        step[j] = (rat_to_double(u.real(j).upper) - lo[j]) / resolution;
        cellvol *= step[j];
    }

    const std::uint64_t num_b = std::uint64_t(1) << m;

    if (n == 0) {
        oracle_detail::Kahan acc;
        std::vector<double> no_x;
        for (std::uint64_t ib = 0; ib < num_b; ++ib) {
            std::vector<bool> b(m);
            for (std::size_t j = 0; j < m; ++j) b[j] = ((ib >> (m - 1 - j)) & 1u) == 0;
            if (cf.eval(b, no_x)) acc.add(cw.eval(b, no_x));
        }
        return acc.sum;
    }

    // One slot per (assignment, first-axis stripe); slots are filled in
    // parallel and combined in slot order, so the result is independent of
    // the thread count.
    const std::uint64_t slots = num_b * resolution;
    std::vector<double> slot_sum(slots, 0.0);
    std::uint64_t inner = 1;
    for (std::size_t j = 1; j < n; ++j) inner *= resolution;

    detail::parallel_for(slots, threads, [&](std::size_t slot) {
        const std::uint64_t ib = slot / resolution;
        const unsigned i0 = static_cast<unsigned>(slot % resolution);
        std::vector<bool> b(m);
        for (std::size_t j = 0; j < m; ++j) b[j] = ((ib >> (m - 1 - j)) & 1u) == 0;

        std::vector<double> x(n);
        x[0] = lo[0] + (i0 + 0.5) * step[0];
        std::vector<unsigned> idx(n, 0);
        oracle_detail::Kahan acc;
        for (std::uint64_t c = 0; c < inner; ++c) {
            for (std::size_t j = 1; j < n; ++j) x[j] = lo[j] + (idx[j] + 0.5) * step[j];
            if (cf.eval(b, x)) acc.add(cw.eval(b, x));
            for (std::size_t j = n; j-- > 1;) {
                if (++idx[j] < resolution) break;
                idx[j] = 0;
            }
        }
        slot_sum[slot] = acc.sum;
    });

    oracle_detail::Kahan total;
    for (double s : slot_sum) total.add(s);
    return total.sum * cellvol;
}

} // namespace lwmi
