#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <lwmi/errors.hpp>
#include <lwmi/formula.hpp>
#include <lwmi/weight.hpp>

// Flattened double-precision evaluators for the sampling path. A million
// samples must not re-walk shared AST nodes or convert rational
// coefficients on every draw, so the conditioned formula and weight are
// compiled once into plain structs of doubles before the loop starts.
// The exact route never touches these.

namespace lwmi::detail {

struct FlatPoly {
    struct Term {
        double c = 0;
        std::vector<std::pair<std::size_t, unsigned>> pows;
    };
    std::vector<Term> terms;

    static FlatPoly of(const Polynomial& p) {
        FlatPoly fp;
        for (const auto& [exps, coeff] : p.terms()) {
            Term t;
            t.c = rat_to_double(coeff);
            for (std::size_t j = 0; j < exps.size(); ++j)
                if (exps[j] > 0) t.pows.emplace_back(j, exps[j]);
            fp.terms.push_back(std::move(t));
        }
        return fp;
    }

    double eval(const std::vector<double>& x) const {
        double acc = 0;
        for (const auto& t : terms) {
            double v = t.c;
            for (const auto& [j, e] : t.pows) {
                const double b = x[j];
                for (unsigned k = 0; k < e; ++k) v *= b;
            }
            acc += v;
        }
        return acc;
    }
};

// Real-only formula: Boolean variables must already be conditioned away.
struct FlatFormula {
    enum class K { True, False, Atom, Not, And, Or };
    K k = K::True;
    FlatPoly atom; // K::Atom, satisfied when atom(x) <= 0
    std::vector<FlatFormula> kids;

    static FlatFormula of(const Formula& f) {
        FlatFormula out;
        switch (f.kind()) {
            case Formula::Kind::True: out.k = K::True; break;
            case Formula::Kind::False: out.k = K::False; break;
            case Formula::Kind::BoolVar:
                throw input_error("sampling path requires a fully conditioned formula");
            case Formula::Kind::Atom:
                out.k = K::Atom;
                out.atom = FlatPoly::of(f.atom_poly());
                break;
            case Formula::Kind::Not:
                out.k = K::Not;
                out.kids.push_back(of(f.kids()[0]));
                break;
            case Formula::Kind::And:
            case Formula::Kind::Or:
                out.k = f.kind() == Formula::Kind::And ? K::And : K::Or;
                for (const auto& kid : f.kids()) out.kids.push_back(of(kid));
                break;
        }
        return out;
    }

    bool eval(const std::vector<double>& x) const {
        switch (k) {
            case K::True: return true;
            case K::False: return false;
            case K::Atom: return atom.eval(x) <= 0;
            case K::Not: return !kids[0].eval(x);
            case K::And:
                for (const auto& kid : kids)
                    if (!kid.eval(x)) return false;
                return true;
            case K::Or:
                for (const auto& kid : kids)
                    if (kid.eval(x)) return true;
                return false;
        }
        return false;
    }
};

// Real-only weight expression with flattened guards.
struct FlatWeight {
    enum class K { Const, Var, Add, Mul, Pow, Ite };
    K k = K::Const;
    double c = 0;
    std::size_t var = 0;
    unsigned exp = 0;
    FlatFormula cond; // K::Ite
    std::vector<FlatWeight> kids;

    static FlatWeight of(const WeightSpec& w) {
        FlatWeight out;
        switch (w.kind()) {
            case WeightSpec::Kind::Const:
                out.k = K::Const;
                out.c = rat_to_double(w.value());
                break;
            case WeightSpec::Kind::RealVar:
                out.k = K::Var;
                out.var = w.var_index();
                break;
            case WeightSpec::Kind::Add:
            case WeightSpec::Kind::Mul:
                out.k = w.kind() == WeightSpec::Kind::Add ? K::Add : K::Mul;
                for (const auto& kid : w.kids()) out.kids.push_back(of(kid));
                break;
            case WeightSpec::Kind::Pow:
                out.k = K::Pow;
                out.exp = w.exponent();
                out.kids.push_back(of(w.kids()[0]));
                break;
            case WeightSpec::Kind::Ite:
                out.k = K::Ite;
                out.cond = FlatFormula::of(w.cond());
                out.kids.push_back(of(w.kids()[0]));
                out.kids.push_back(of(w.kids()[1]));
                break;
        }
        return out;
    }

    double eval(const std::vector<double>& x) const {
        switch (k) {
            case K::Const: return c;
            case K::Var: return x[var];
            case K::Add: {
                double acc = 0;
                for (const auto& kid : kids) acc += kid.eval(x);
                return acc;
            }
            case K::Mul: {
                double acc = 1;
                for (const auto& kid : kids) acc *= kid.eval(x);
                return acc;
            }
            case K::Pow: {
                const double b = kids[0].eval(x);
                double acc = 1;
                for (unsigned i = 0; i < exp; ++i) acc *= b;
                return acc;
            }
            case K::Ite: return cond.eval(x) ? kids[0].eval(x) : kids[1].eval(x);
        }
        return 0;
    }
};

} // namespace lwmi::detail
