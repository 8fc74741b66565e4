#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <vector>

#include "lwmi/errors.hpp"
#include "lwmi/rational.hpp"

namespace lwmi {

// ===========================================================================
// Sparse multivariate polynomial with rational coefficients.
//
// Terms map an exponent vector (one entry per variable) to a nonzero
// coefficient; the zero polynomial has no terms. All arithmetic is exact.
// ===========================================================================

class Polynomial {
  public:
    using Exponents = std::vector<unsigned>;
    using TermMap = std::map<Exponents, Rat>;

    explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}

    static Polynomial constant(std::size_t nvars, const Rat& c) {
        Polynomial p(nvars);
        if (c != 0) p.terms_.emplace(Exponents(nvars, 0), c);
        return p;
    }

    static Polynomial variable(std::size_t nvars, std::size_t j) {
        Polynomial p(nvars);
        Exponents e(nvars, 0);
        e.at(j) = 1;
        p.terms_.emplace(std::move(e), Rat(1));
        return p;
    }

    static Polynomial monomial(std::size_t nvars, Exponents exps, const Rat& coeff) {
        Polynomial p(nvars);
        if (coeff != 0) p.terms_.emplace(std::move(exps), coeff);
        return p;
    }

    std::size_t nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    unsigned total_degree() const {
        unsigned d = 0;
        for (const auto& [e, c] : terms_) {
            unsigned t = 0;
            for (unsigned k : e) t += k;
            d = std::max(d, t);
        }
        return d;
    }

    bool is_linear() const { return total_degree() <= 1; }

    Rat constant_term() const {
        auto it = terms_.find(Exponents(nvars_, 0));
        return it == terms_.end() ? Rat(0) : it->second;
    }

    // Coefficient of the degree-1 term in variable j (useful for linear forms).
    Rat linear_coeff(std::size_t j) const {
        Exponents e(nvars_, 0);
        e[j] = 1;
        auto it = terms_.find(e);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    void add_term(const Exponents& exps, const Rat& coeff) {
        if (coeff == 0) return;
        auto [it, fresh] = terms_.emplace(exps, coeff);
        if (!fresh) {
            it->second += coeff;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Polynomial& operator+=(const Polynomial& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }

    Polynomial& operator-=(const Polynomial& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, Rat(-c));
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

    friend Polynomial operator-(const Polynomial& a) { return a.scaled(Rat(-1)); }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial r(a.nvars_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exponents e(a.nvars_);
                for (std::size_t j = 0; j < a.nvars_; ++j) e[j] = ea[j] + eb[j];
                r.add_term(e, ca * cb);
            }
        return r;
    }

    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    Polynomial scaled(const Rat& s) const {
        Polynomial r(nvars_);
        if (s == 0) return r;
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, c * s);
        return r;
    }

    Polynomial negated() const { return scaled(Rat(-1)); }

    Polynomial pow(unsigned k) const {
        Polynomial r = constant(nvars_, 1);
        for (unsigned i = 0; i < k; ++i) r *= *this;
        return r;
    }

    // Exact evaluation at a rational point.
    Rat eval(const std::vector<Rat>& x) const {
        Rat acc = 0;
        for (const auto& [e, c] : terms_) {
            Rat t = c;
            for (std::size_t j = 0; j < nvars_; ++j)
                for (unsigned k = 0; k < e[j]; ++k) t *= x[j];
            acc += t;
        }
        return acc;
    }

    double eval_double(const std::vector<double>& x) const {
        double acc = 0;
        for (const auto& [e, c] : terms_) {
            double t = rat_to_double(c);
            for (std::size_t j = 0; j < nvars_; ++j)
                for (unsigned k = 0; k < e[j]; ++k) t *= x[j];
            acc += t;
        }
        return acc;
    }

    // Divides by the absolute value of the first term's coefficient, making
    // the representation of "p <= 0" scale-invariant without flipping it.
    Polynomial scale_normalized() const {
        if (terms_.empty()) return *this;
        return scaled(Rat(1) / rat_abs(terms_.begin()->second));
    }

    bool operator==(const Polynomial& o) const {
        return nvars_ == o.nvars_ && terms_ == o.terms_;
    }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }
    bool operator<(const Polynomial& o) const {
        if (nvars_ != o.nvars_) return nvars_ < o.nvars_;
        return terms_ < o.terms_;
    }

  private:
    std::size_t nvars_;
    TermMap terms_;
};

} // namespace lwmi
