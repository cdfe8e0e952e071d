#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "apack/linalg.hpp"

namespace apack {

/// Positive definite Gram matrix of a lattice basis; all lattice geometry
/// here is done in basis coordinates, exactly.
struct GramLattice {
    RatMat g;  // symmetric, positive definite

    std::size_t rank() const { return g.size(); }

    Rational quad(const IntVec& x) const {
        Rational q = 0;
        for (std::size_t r = 0; r < g.size(); ++r)
            for (std::size_t c = 0; c < g.size(); ++c) q += g[r][c] * Rational(x[r] * x[c]);
        return q;
    }

    Rational inner(const IntVec& x, const IntVec& y) const {
        Rational q = 0;
        for (std::size_t r = 0; r < g.size(); ++r)
            for (std::size_t c = 0; c < g.size(); ++c) q += g[r][c] * Rational(x[r] * y[c]);
        return q;
    }
};

namespace detail {

struct Ldl {
    RatMat l;        // unit lower triangular
    RatVec d;        // positive pivots
};

inline Ldl ldl_decompose(const RatMat& g) {
    std::size_t n = g.size();
    Ldl out{rat_identity(n), RatVec(n, 0)};
    RatMat a = g;
    for (std::size_t k = 0; k < n; ++k) {
        out.d[k] = a[k][k];
        if (out.d[k] <= 0) throw structural_error("lattice Gram matrix not positive definite");
        for (std::size_t r = k + 1; r < n; ++r) {
            out.l[r][k] = a[r][k] / a[k][k];
            for (std::size_t c = k; c < n; ++c) a[r][c] -= out.l[r][k] * a[k][c];
        }
    }
    return out;
}

inline void enumerate_rec(const Ldl& f, std::size_t k, RatVec& shift, IntVec& x,
                          const Rational& budget,
                          const std::function<void(const IntVec&, const Rational&)>& emit) {
    // scan x[k] outward from the real minimizer; contribution grows monotonically
    const Rational& s = shift[k];
    Int center = rround(-s);
    for (int dir = 0; dir < 2; ++dir) {
        Int xv = dir == 0 ? center : center - 1;
        Int step = dir == 0 ? 1 : -1;
        while (true) {
            Rational y = Rational(xv) + s;
            Rational contrib = f.d[k] * y * y;
            if (contrib > budget) break;
            x[k] = xv;
            if (k == 0) {
                emit(x, budget - contrib);
            } else {
                RatVec saved = shift;
                for (std::size_t r = 0; r < k; ++r) shift[r] += f.l[k][r] * Rational(xv);
                enumerate_rec(f, k - 1, shift, x, budget - contrib, emit);
                shift = saved;
            }
            xv += step;
        }
    }
}

}  // namespace detail

/// All x with quad(x - center) <= bound.
inline std::vector<IntVec> short_vectors_near(const GramLattice& lat, const RatVec& center,
                                              const Rational& bound) {
    if (bound < 0) return {};
    auto f = detail::ldl_decompose(lat.g);
    std::size_t n = lat.rank();
    RatVec shift(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        shift[k] = -center[k];
        for (std::size_t j = k + 1; j < n; ++j) shift[k] -= f.l[j][k] * center[j];
    }
    std::vector<IntVec> out;
    IntVec x(n, 0);
    detail::enumerate_rec(f, n - 1, shift, x, bound,
                          [&](const IntVec& v, const Rational&) { out.push_back(v); });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// All nonzero x with quad(x) <= bound, one per +/- pair.
inline std::vector<IntVec> short_vectors(const GramLattice& lat, const Rational& bound) {
    auto f = detail::ldl_decompose(lat.g);
    std::size_t n = lat.rank();
    std::vector<IntVec> out;
    RatVec shift(n, 0);
    IntVec x(n, 0);
    detail::enumerate_rec(f, n - 1, shift, x,
                          bound, [&](const IntVec& v, const Rational&) {
        if (std::all_of(v.begin(), v.end(), [](const Int& t) { return t == 0; })) return;
        // keep one representative of {v, -v}
        for (std::size_t k = n; k-- > 0;) {
            if (v[k] == 0) continue;
            if (v[k] > 0) out.push_back(v);
            break;
        }
    });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// First k successive minima as exact squared lengths.
inline RatVec successive_minima(const GramLattice& lat, std::size_t k) {
    std::size_t n = lat.rank();
    if (k > n) throw structural_error("more minima requested than lattice rank");
    Rational bound = lat.g[0][0];
    for (std::size_t r = 1; r < n; ++r) bound = std::max(bound, lat.g[r][r]);
    while (true) {
        auto vecs = short_vectors(lat, bound);
        std::sort(vecs.begin(), vecs.end(), [&](const IntVec& a, const IntVec& b) {
            return lat.quad(a) < lat.quad(b);
        });
        RatVec minima;
        RatMat chosen;
        for (const auto& v : vecs) {
            RatMat trial = chosen;
            trial.emplace_back();
            for (const auto& t : v) trial.back().push_back(Rational(t));
            if (rat_rank(trial) > chosen.size()) {
                chosen = trial;
                minima.push_back(lat.quad(v));
                if (minima.size() == k) return minima;
            }
        }
        bound *= 2;
    }
}

namespace detail {

// Superbase rows b_1..b_{r+1} summing to zero with all pairwise inner
// products <= 0 (Selling reduction; Lagrange handles rank 2 the same way).
inline IntMat selling_superbase(const GramLattice& lat) {
    std::size_t n = lat.rank();
    IntMat b(n + 1, IntVec(n, 0));
    for (std::size_t k = 0; k < n; ++k) b[k][k] = 1;
    for (std::size_t k = 0; k < n; ++k) b[n][k] = -1;
    for (int guard = 0; guard < 10000; ++guard) {
        bool flipped = false;
        for (std::size_t p = 0; p <= n && !flipped; ++p)
            for (std::size_t q = p + 1; q <= n && !flipped; ++q) {
                if (lat.inner(b[p], b[q]) <= 0) continue;
                // b_p <- -b_p, others in the superbase absorb it
                for (std::size_t r = 0; r <= n; ++r) {
                    if (r == p || r == q) continue;
                    for (std::size_t k = 0; k < n; ++k) b[r][k] += b[p][k];
                }
                for (std::size_t k = 0; k < n; ++k) b[p][k] = -b[p][k];
                flipped = true;
            }
        if (!flipped) return b;
    }
    throw structural_error("Selling reduction did not terminate");
}

}  // namespace detail

/// Exact squared covering radius for lattices of rank 1..3: maximum squared
/// norm over the Voronoi cell vertices. Relevant vectors come from the
/// partial sums of a Selling-reduced superbase.
inline Rational covering_radius_sq(const GramLattice& lat) {
    std::size_t n = lat.rank();
    if (n == 0 || n > 3) throw structural_error("covering radius implemented for rank 1..3");
    if (n == 1) return lat.g[0][0] / 4;

    auto base = detail::selling_superbase(lat);
    std::vector<IntVec> rel;  // one per antipodal pair
    std::size_t m = base.size();
    for (std::size_t mask = 1; mask + 1 < (std::size_t(1) << m); ++mask) {
        if (!(mask & 1) && !((mask >> (m - 1)) & 1)) continue;  // fix sign by first/last bit
        IntVec v(n, 0);
        for (std::size_t p = 0; p < m; ++p)
            if (mask & (std::size_t(1) << p))
                for (std::size_t k = 0; k < n; ++k) v[k] += base[p][k];
        if (std::all_of(v.begin(), v.end(), [](const Int& t) { return t == 0; })) continue;
        rel.push_back(v);
    }
    std::sort(rel.begin(), rel.end());
    rel.erase(std::unique(rel.begin(), rel.end()), rel.end());

    // vertices: points with `rank` tight facets, inside all half-spaces
    Rational best = 0;
    std::vector<std::size_t> idx(rel.size());
    for (std::size_t a = 0; a < rel.size(); ++a)
        for (std::size_t b = a + 1; b < rel.size(); ++b) {
            if (n == 2) {
                RatMat sys{{0, 0}, {0, 0}};
                RatVec rhs(2);
                const IntVec* pick[2] = {&rel[a], &rel[b]};
                for (int r = 0; r < 2; ++r) {
                    for (std::size_t k = 0; k < n; ++k) {
                        Rational coef = 0;
                        for (std::size_t c = 0; c < n; ++c)
                            coef += lat.g[k][c] * Rational((*pick[r])[c]);
                        sys[r][k] = 2 * coef;
                    }
                    rhs[r] = lat.quad(*pick[r]);
                }
                auto x = rat_solve(sys, rhs);
                if (!x) continue;
                bool inside = true;
                for (const auto& w : rel) {
                    Rational tw = 0;
                    for (std::size_t k = 0; k < n; ++k)
                        for (std::size_t c = 0; c < n; ++c)
                            tw += Rational((*x)[k]) * lat.g[k][c] * Rational(w[c]);
                    if (2 * tw > lat.quad(w) || -2 * tw > lat.quad(w)) { inside = false; break; }
                }
                if (!inside) continue;
                Rational norm2 = 0;
                for (std::size_t k = 0; k < n; ++k)
                    for (std::size_t c = 0; c < n; ++c) norm2 += (*x)[k] * lat.g[k][c] * (*x)[c];
                best = std::max(best, norm2);
            } else {
                for (std::size_t c3 = b + 1; c3 < rel.size(); ++c3) {
                    RatMat sys(3, RatVec(3, 0));
                    RatVec rhs(3);
                    const IntVec* pick[3] = {&rel[a], &rel[b], &rel[c3]};
                    for (int r = 0; r < 3; ++r) {
                        for (std::size_t k = 0; k < n; ++k) {
                            Rational coef = 0;
                            for (std::size_t c = 0; c < n; ++c)
                                coef += lat.g[k][c] * Rational((*pick[r])[c]);
                            sys[r][k] = 2 * coef;
                        }
                        rhs[r] = lat.quad(*pick[r]);
                    }
                    auto x = rat_solve(sys, rhs);
                    if (!x) continue;
                    bool inside = true;
                    for (const auto& w : rel) {
                        Rational tw = 0;
                        for (std::size_t k = 0; k < n; ++k)
                            for (std::size_t c = 0; c < n; ++c)
                                tw += (*x)[k] * lat.g[k][c] * Rational(w[c]);
                        if (2 * tw > lat.quad(w) || -2 * tw > lat.quad(w)) { inside = false; break; }
                    }
                    if (!inside) continue;
                    Rational norm2 = 0;
                    for (std::size_t k = 0; k < n; ++k)
                        for (std::size_t c = 0; c < n; ++c)
                            norm2 += (*x)[k] * lat.g[k][c] * (*x)[c];
                    best = std::max(best, norm2);
                }
            }
        }
    if (best == 0) throw structural_error("degenerate Voronoi cell");
    return best;
}

}  // namespace apack
