#pragma once

#include <optional>
#include <vector>

#include "apack/rational.hpp"

namespace apack {

using RatVec = std::vector<Rational>;
using RatMat = std::vector<RatVec>;  // row-major

inline RatMat rat_identity(std::size_t n) {
    RatMat m(n, RatVec(n, 0));
    for (std::size_t k = 0; k < n; ++k) m[k][k] = 1;
    return m;
}

inline Rational rat_det(RatMat m) {
    std::size_t n = m.size();
    Rational det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != col) { std::swap(m[piv], m[col]); det = -det; }
        det *= m[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (m[r][col] == 0) continue;
            Rational f = m[r][col] / m[col][col];
            for (std::size_t k = col; k < n; ++k) m[r][k] -= f * m[col][k];
        }
    }
    return det;
}

/// Solves A x = rhs for square nonsingular A; empty optional when singular.
inline std::optional<RatVec> rat_solve(RatMat a, RatVec rhs) {
    std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(rhs[piv], rhs[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            Rational f = a[r][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) a[r][k] -= f * a[col][k];
            rhs[r] -= f * rhs[col];
        }
    }
    RatVec x(n);
    for (std::size_t k = 0; k < n; ++k) x[k] = rhs[k] / a[k][k];
    return x;
}

inline std::optional<RatMat> rat_inverse(const RatMat& a) {
    std::size_t n = a.size();
    RatMat aug = a, inv = rat_identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && aug[piv][col] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(aug[piv], aug[col]);
        std::swap(inv[piv], inv[col]);
        Rational d = aug[col][col];
        for (std::size_t k = 0; k < n; ++k) { aug[col][k] /= d; inv[col][k] /= d; }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || aug[r][col] == 0) continue;
            Rational f = aug[r][col];
            for (std::size_t k = 0; k < n; ++k) {
                aug[r][k] -= f * aug[col][k];
                inv[r][k] -= f * inv[col][k];
            }
        }
    }
    return inv;
}

inline std::size_t rat_rank(RatMat m) {
    if (m.empty()) return 0;
    std::size_t rows = m.size(), cols = m[0].size(), rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t piv = rank;
        while (piv < rows && m[piv][col] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[rank]);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            if (m[r][col] == 0) continue;
            Rational f = m[r][col] / m[rank][col];
            for (std::size_t k = col; k < cols; ++k) m[r][k] -= f * m[rank][k];
        }
        ++rank;
    }
    return rank;
}

using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;

/// Basis (as rows) of the integer kernel {x : x A = 0} of an integer matrix,
/// computed by column-style Hermite elimination on [A | I].
inline IntMat int_left_kernel(const IntMat& a) {
    std::size_t rows = a.size();
    if (rows == 0) return {};
    std::size_t cols = a[0].size();
    IntMat work = a;
    IntMat track(rows, IntVec(rows, 0));
    for (std::size_t r = 0; r < rows; ++r) track[r][r] = 1;

    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        // use gcd elimination to clear the column below `row`
        while (true) {
            std::size_t piv = rows;
            for (std::size_t r = row; r < rows; ++r)
                if (work[r][col] != 0 && (piv == rows || abs(work[r][col]) < abs(work[piv][col])))
                    piv = r;
            if (piv == rows) break;
            std::swap(work[piv], work[row]);
            std::swap(track[piv], track[row]);
            bool clean = true;
            for (std::size_t r = row + 1; r < rows; ++r) {
                if (work[r][col] == 0) continue;
                Int q = floor_div(work[r][col], work[row][col]);
                for (std::size_t k = 0; k < cols; ++k) work[r][k] -= q * work[row][k];
                for (std::size_t k = 0; k < rows; ++k) track[r][k] -= q * track[row][k];
                if (work[r][col] != 0) clean = false;
            }
            if (clean) { ++row; break; }
        }
    }
    IntMat kernel;
    for (std::size_t r = row; r < rows; ++r) kernel.push_back(track[r]);
    return kernel;
}

/// Clears denominators and divides by content: the primitive integer vector
/// spanning the same line.
inline IntVec primitive_integer_vector(const RatVec& v) {
    Int mult = 1;
    for (const auto& q : v) mult = lcm(mult, denom(q));
    IntVec w(v.size());
    Int content = 0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        w[k] = numer(v[k]) * (mult / denom(v[k]));
        content = gcd(content, w[k]);
    }
    if (content > 1)
        for (auto& x : w) x /= content;
    return w;
}

}  // namespace apack
