#pragma once

#include <vector>

#include "lwmi/geometry.hpp"
#include "lwmi/polynomial.hpp"

namespace lwmi {

// ===========================================================================
// Exact integrals of polynomials over simplices and polytopes.
//
// A monomial over the standard simplex {t >= 0, sum t <= 1} integrates in
// closed form:  integral of t1^b1...tn^bn  =  (prod bj!) / (n + sum bj)!.
// A general simplex is handled by the affine substitution onto the standard
// simplex (Jacobian |det|), a polytope by summing over its triangulation.
// ===========================================================================

// Dirichlet formula over the standard simplex {t >= 0, sum t <= 1}.
inline Rat integrate_monomial_standard_simplex(const std::vector<unsigned>& exps) {
    const std::size_t n = exps.size();
    Int num = 1;
    unsigned total = 0;
    for (unsigned b : exps) {
        for (unsigned i = 2; i <= b; ++i) num *= Int(i);
        total += b;
    }
    Int den = 1;
    for (unsigned i = 2; i <= n + total; ++i) den *= Int(i);
    return Rat(num, den);
}

namespace detail {

// p composed with x = v0 + sum_j tj (vj - v0), as a polynomial in t.
inline Polynomial compose_with_simplex(const Polynomial& p, const Simplex& s) {
    const std::size_t n = p.nvars();
    std::vector<Polynomial> coord(n, Polynomial(n));
    for (std::size_t i = 0; i < n; ++i) {
        coord[i] = Polynomial::constant(n, s.verts[0][i]);
        for (std::size_t j = 0; j < n; ++j)
            coord[i] += Polynomial::variable(n, j).scaled(s.verts[j + 1][i] - s.verts[0][i]);
    }
    Polynomial out(n);
    for (const auto& [exps, coeff] : p.terms()) {
        Polynomial term = Polynomial::constant(n, coeff);
        for (std::size_t i = 0; i < n; ++i)
            for (unsigned k = 0; k < exps[i]; ++k) term *= coord[i];
        out += term;
    }
    return out;
}

} // namespace detail

inline Rat integrate_poly_simplex(const Polynomial& p, const Simplex& s) {
    const std::size_t n = p.nvars();
    if (s.verts.size() != n + 1) throw input_error("simplex vertex count does not match dimension");
    std::vector<std::vector<Rat>> M(n, std::vector<Rat>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) M[i][j] = s.verts[i + 1][j] - s.verts[0][j];
    Rat jac = rat_abs(detail::determinant(std::move(M)));
    if (jac == 0) return 0;

    Polynomial q = detail::compose_with_simplex(p, s);
    Rat acc = 0;
    for (const auto& [exps, coeff] : q.terms())
        acc += coeff * integrate_monomial_standard_simplex(exps);
    return acc * jac;
}

inline Rat integrate_monomial_simplex(const std::vector<unsigned>& exps, const Simplex& s) {
    return integrate_poly_simplex(Polynomial::monomial(exps.size(), exps, Rat(1)), s);
}

inline Rat integrate_poly_polytope(const Polynomial& p, const Polytope& poly,
                                   unsigned degree_cap = 8, std::size_t dim_cap = 3,
                                   std::uint64_t candidate_cap = 1000000) {
    if (p.total_degree() > degree_cap)
        throw capacity_error("polynomial degree " + std::to_string(p.total_degree()) +
                             " exceeds the cap of " + std::to_string(degree_cap));
    Rat acc = 0;
    for (const auto& s : triangulate(poly, dim_cap, candidate_cap))
        acc += integrate_poly_simplex(p, s);
    return acc;
}

} // namespace lwmi
