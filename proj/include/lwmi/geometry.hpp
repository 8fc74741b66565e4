#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "lwmi/errors.hpp"
#include "lwmi/polynomial.hpp"
#include "lwmi/rational.hpp"
#include "lwmi/universe.hpp"

namespace lwmi {

// ===========================================================================
// Exact polytope geometry. Everything here is rational arithmetic: vertex
// enumeration by solving constraint subsets, fan triangulation from the
// lexicographically smallest vertex, volumes as sums of |det|/N!.
//
// Polytopes are given as halfspace intersections a.x <= c and are expected
// to be bounded (callers always intersect with the variable box).
// ===========================================================================

struct HalfSpace {
    std::vector<Rat> a;
    Rat c;
};

struct Simplex {
    std::vector<RatPoint> verts; // dim+1 points of dimension dim
};

namespace detail {

// Gaussian elimination; returns the unique solution of A x = b or nullopt
// when A is singular.
inline std::optional<RatPoint> solve_linear(std::vector<std::vector<Rat>> A, RatPoint b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && A[piv][col] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || A[r][col] == 0) continue;
            Rat f = A[r][col] / A[col][col];
            for (std::size_t k = col; k < n; ++k) A[r][k] -= f * A[col][k];
            b[r] -= f * b[col];
        }
    }
    RatPoint x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / A[i][i];
    return x;
}

inline Rat determinant(std::vector<std::vector<Rat>> A) {
    const std::size_t n = A.size();
    Rat det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && A[piv][col] == 0) ++piv;
        if (piv == n) return Rat(0);
        if (piv != col) {
            std::swap(A[piv], A[col]);
            det = -det;
        }
        det *= A[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (A[r][col] == 0) continue;
            Rat f = A[r][col] / A[col][col];
            for (std::size_t k = col; k < n; ++k) A[r][k] -= f * A[col][k];
        }
    }
    return det;
}

inline std::size_t matrix_rank(std::vector<std::vector<Rat>> A) {
    if (A.empty()) return 0;
    const std::size_t rows = A.size(), cols = A[0].size();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t piv = rank;
        while (piv < rows && A[piv][col] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(A[piv], A[rank]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || A[r][col] == 0) continue;
            Rat f = A[r][col] / A[rank][col];
            for (std::size_t k = col; k < cols; ++k) A[r][k] -= f * A[rank][k];
        }
        ++rank;
    }
    return rank;
}

// Affine dimension of a point set (dimension of its affine hull).
inline std::size_t affine_dim(const std::vector<RatPoint>& pts) {
    if (pts.size() <= 1) return 0;
    std::vector<std::vector<Rat>> diffs;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        std::vector<Rat> d(pts[0].size());
        for (std::size_t j = 0; j < d.size(); ++j) d[j] = pts[i][j] - pts[0][j];
        diffs.push_back(std::move(d));
    }
    return matrix_rank(std::move(diffs));
}

inline Int binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    Int r = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
        r *= Int(n - i);
        r /= Int(i + 1);
    }
    return r;
}

} // namespace detail

class Polytope {
  public:
    Polytope() : dim_(0) {}

    Polytope(std::size_t dim, std::vector<HalfSpace> halfspaces) : dim_(dim) {
        for (auto& h : halfspaces) {
            if (h.a.size() != dim) throw input_error("halfspace dimension mismatch");
            std::size_t lead = 0;
            while (lead < dim && h.a[lead] == 0) ++lead;
            if (lead == dim) {
                // 0.x <= c: vacuous or contradictory
                if (h.c < 0) contradictory_ = true;
                continue;
            }
            Rat s = rat_abs(h.a[lead]);
            for (auto& ai : h.a) ai /= s;
            h.c /= s;
            bool dup = false;
            for (const auto& g : hs_)
                if (g.a == h.a && g.c == h.c) { dup = true; break; }
            if (!dup) hs_.push_back(std::move(h));
        }
    }

    std::size_t dim() const { return dim_; }
    const std::vector<HalfSpace>& halfspaces() const { return hs_; }
    bool trivially_contradictory() const { return contradictory_; }

    bool contains(const RatPoint& x) const {
        if (contradictory_) return false;
        for (const auto& h : hs_) {
            Rat s = 0;
            for (std::size_t j = 0; j < dim_; ++j) s += h.a[j] * x[j];
            if (s > h.c) return false;
        }
        return true;
    }

    // Intersect with one more halfspace.
    Polytope cut(const HalfSpace& h) const {
        std::vector<HalfSpace> hs = hs_;
        hs.push_back(h);
        Polytope p(dim_, std::move(hs));
        p.contradictory_ = p.contradictory_ || contradictory_;
        return p;
    }

  private:
    std::size_t dim_;
    std::vector<HalfSpace> hs_;
    bool contradictory_ = false;
};

// All vertices (extreme points), deduplicated, in lexicographic order.
// Works subset-by-subset: every vertex of a bounded H-polytope solves some
// dim-subset of its constraints with equality. The candidate count
// C(m, dim) is capped.
inline std::vector<RatPoint> vertex_enumeration(const Polytope& p,
                                                std::uint64_t candidate_cap = 1000000) {
    const std::size_t n = p.dim();
    if (p.trivially_contradictory()) return {};
    if (n == 0) return {};
    const auto& hs = p.halfspaces();
    const std::size_t m = hs.size();
    if (m < n) return {}; // unbounded or empty; no vertex can be determined

    if (detail::binomial(m, n) > Int(candidate_cap))
        throw capacity_error("vertex enumeration: C(" + std::to_string(m) + "," +
                             std::to_string(n) + ") candidate subsets exceed the cap");

    std::set<RatPoint> verts;
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    while (true) {
        std::vector<std::vector<Rat>> A(n);
        RatPoint b(n);
        for (std::size_t i = 0; i < n; ++i) {
            A[i] = hs[idx[i]].a;
            b[i] = hs[idx[i]].c;
        }
        if (auto x = detail::solve_linear(std::move(A), std::move(b)); x && p.contains(*x))
            verts.insert(std::move(*x));

        // next combination
        std::size_t k = n;
        while (k > 0 && idx[k - 1] == m - n + k - 1) --k;
        if (k == 0) break;
        ++idx[k - 1];
        for (std::size_t i = k; i < n; ++i) idx[i] = idx[i - 1] + 1;
    }
    return {verts.begin(), verts.end()};
}

inline bool polytope_is_empty(const Polytope& p, std::uint64_t candidate_cap = 1000000) {
    if (p.trivially_contradictory()) return true;
    return vertex_enumeration(p, candidate_cap).empty();
}

namespace detail {

struct TightTable {
    // tight[h][v]: vertex v satisfies halfspace h with equality
    std::vector<std::vector<bool>> tight;
};

inline void fan_triangulate(const std::vector<RatPoint>& verts,
                            const std::vector<std::size_t>& face, std::size_t d,
                            const TightTable& tt, std::vector<std::size_t>& chain,
                            std::vector<std::vector<std::size_t>>& out) {
    // face: sorted vertex indices; verts is lex-sorted, so face[0] is the
    // lexicographically smallest vertex of the face.
    if (d == 1) {
        std::vector<std::size_t> simplex = chain;
        simplex.push_back(face.front());
        simplex.push_back(face.back());
        out.push_back(std::move(simplex));
        return;
    }
    const std::size_t apex = face[0];
    std::set<std::vector<std::size_t>> subfaces;
    for (const auto& row : tt.tight) {
        std::vector<std::size_t> sub;
        bool apex_in = false, whole = true;
        for (std::size_t v : face) {
            if (row[v]) {
                sub.push_back(v);
                if (v == apex) apex_in = true;
            } else {
                whole = false;
            }
        }
        if (whole || apex_in || sub.size() < d) continue;
        std::vector<RatPoint> pts;
        pts.reserve(sub.size());
        for (std::size_t v : sub) pts.push_back(verts[v]);
        if (affine_dim(pts) != d - 1) continue;
        subfaces.insert(std::move(sub));
    }
    chain.push_back(apex);
    for (const auto& sub : subfaces) fan_triangulate(verts, sub, d - 1, tt, chain, out);
    chain.pop_back();
}

} // namespace detail

// Splits a full-dimensional polytope into simplices sharing interiors only
// on null sets: a recursive fan from the lexicographically smallest vertex
// over the facets that miss it. Exact and deterministic. Degenerate
// (lower-dimensional or empty) polytopes yield no simplices.
inline std::vector<Simplex> triangulate(const Polytope& p, std::size_t dim_cap = 3,
                                        std::uint64_t candidate_cap = 1000000) {
    const std::size_t n = p.dim();
    if (n == 0 || n > dim_cap)
        throw backend_unavailable("triangulation handles dimensions 1.." + std::to_string(dim_cap) +
                                  ", got " + std::to_string(n));
    std::vector<RatPoint> verts = vertex_enumeration(p, candidate_cap);
    if (verts.size() < n + 1) return {};
    if (detail::affine_dim(verts) < n) return {};

    detail::TightTable tt;
    tt.tight.resize(p.halfspaces().size());
    for (std::size_t h = 0; h < p.halfspaces().size(); ++h) {
        const auto& hs = p.halfspaces()[h];
        tt.tight[h].resize(verts.size());
        for (std::size_t v = 0; v < verts.size(); ++v) {
            Rat s = 0;
            for (std::size_t j = 0; j < n; ++j) s += hs.a[j] * verts[v][j];
            tt.tight[h][v] = (s == hs.c);
        }
    }

    std::vector<std::size_t> all(verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i) all[i] = i;
    std::vector<std::vector<std::size_t>> index_simplices;
    std::vector<std::size_t> chain;
    detail::fan_triangulate(verts, all, n, tt, chain, index_simplices);

    std::vector<Simplex> out;
    out.reserve(index_simplices.size());
    for (const auto& is : index_simplices) {
        Simplex s;
        s.verts.reserve(is.size());
        for (std::size_t v : is) s.verts.push_back(verts[v]);
        out.push_back(std::move(s));
    }
    return out;
}

inline Rat simplex_volume(const Simplex& s) {
    const std::size_t n = s.verts.empty() ? 0 : s.verts.size() - 1;
    if (n == 0) return 0;
    std::vector<std::vector<Rat>> M(n, std::vector<Rat>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) M[i][j] = s.verts[i + 1][j] - s.verts[0][j];
    Rat det = detail::determinant(std::move(M));
    Int fact = 1;
    for (std::size_t i = 2; i <= n; ++i) fact *= Int(i);
    return rat_abs(det) / Rat(fact);
}

inline Rat polytope_volume(const Polytope& p, std::size_t dim_cap = 3,
                           std::uint64_t candidate_cap = 1000000) {
    Rat v = 0;
    for (const auto& s : triangulate(p, dim_cap, candidate_cap)) v += simplex_volume(s);
    return v;
}

} // namespace lwmi
