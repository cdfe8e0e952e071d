#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "apack/orders.hpp"
#include "apack/quat.hpp"

namespace apack {

/// Inversive coordinates (bend, co-bend, bend-center) of an oriented
/// (dim-2)-sphere. Exact throughout; `normalized` marks coordinates scaled by
/// sqrt(nrm(u)), which keeps every entry rational. q_form is 1 on
/// unnormalized coordinates and nrm(u) on normalized ones.
struct InvCoord {
    Rational bend;
    Rational cobend;
    QuatElem xi;
    bool normalized = true;

    bool is_plane() const { return bend == 0; }

    bool operator==(const InvCoord& o) const {
        return bend == o.bend && cobend == o.cobend && xi == o.xi && normalized == o.normalized;
    }
};

inline Rational q_form(const InvCoord& c) { return -c.bend * c.cobend + norm(c.xi); }

inline Rational b_form(const InvCoord& c1, const InvCoord& c2) {
    if (c1.normalized != c2.normalized)
        throw structural_error("b_form across normalization flavors");
    return -(c1.bend * c2.cobend + c2.bend * c1.cobend) / 2 + dot(c1.xi, c2.xi);
}

/// The base plane S_u through the origin with normal u, in normalized
/// coordinates (0, 0, u); flip the sign of u for the opposite orientation.
inline InvCoord base_plane(const QuatElem& u) { return InvCoord{0, 0, u, true}; }

// ---------------------------------------------------------------------------
// 2x2 matrices over the algebra
// ---------------------------------------------------------------------------

struct Mat2 {
    QuatElem a, b, c, d;

    AlgebraSig sig() const { return a.sig; }

    static Mat2 identity(const AlgebraSig& s) {
        return {QuatElem::one(s), QuatElem::zero(s), QuatElem::zero(s), QuatElem::one(s)};
    }
    /// Cohn matrix W(alpha) = [[alpha, 1], [-1, 0]].
    static Mat2 cohn(const QuatElem& alpha) {
        const AlgebraSig& s = alpha.sig;
        return {alpha, QuatElem::one(s), -QuatElem::one(s), QuatElem::zero(s)};
    }
    static Mat2 translation(const QuatElem& w) {
        const AlgebraSig& s = w.sig;
        return {QuatElem::one(s), w, QuatElem::zero(s), QuatElem::one(s)};
    }

    bool operator==(const Mat2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
};

inline Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

inline Mat2 operator-(const Mat2& m) { return {-m.a, -m.b, -m.c, -m.d}; }

/// sigma-hat for the relevant involution: [[s(d), -s(b)], [-s(c), s(a)]]
/// with s = identity (dim 3) or dagger (dim 4).
inline Mat2 sigma_hat(const Mat2& m) {
    if (m.sig().involution == Involution::orthogonal)
        return {dagger(m.d), -dagger(m.b), -dagger(m.c), dagger(m.a)};
    return {m.d, -m.b, -m.c, m.a};
}

/// Study determinant: the determinant of the matrix viewed over C^4; equals
/// (ad - bc)^2-style reduced norm and is 1 exactly on SL(2,H).
inline Rational study_det(const Mat2& m) {
    return norm(m.a) * norm(m.d) + norm(m.b) * norm(m.c) - trace(m.c * conj(m.a) * m.b * conj(m.d));
}

/// Membership in G(Z)/G(Q): determinant one (dim 3), sigma-hat inverse
/// (dim 4), Study determinant one (dim 5).
inline bool in_special_group(const Mat2& m) {
    int dim = m.sig().dim;
    if (dim == 3) return (m.a * m.d - m.b * m.c) == QuatElem::one(m.sig());
    if (dim == 4) return sigma_hat(m) * m == Mat2::identity(m.sig());
    return study_det(m) == 1;
}

inline Mat2 inverse(const Mat2& m) {
    if (m.sig().dim != 5) {
        Mat2 adj = sigma_hat(m);
        if (adj * m == Mat2::identity(m.sig())) return adj;
    }
    // generic 2x2 inverse over a division algebra via Schur complement
    if (!m.a.is_zero()) {
        QuatElem ai = ::apack::inverse(m.a);
        QuatElem schur = m.d - m.c * ai * m.b;
        if (schur.is_zero()) throw structural_error("matrix not invertible");
        QuatElem si = ::apack::inverse(schur);
        return {ai + ai * m.b * si * m.c * ai, -(ai * m.b * si), -(si * m.c * ai), si};
    }
    if (m.b.is_zero() || m.c.is_zero()) throw structural_error("matrix not invertible");
    // row-swap and invert, then swap columns back
    Mat2 inv_swapped = inverse(Mat2{m.c, m.d, m.a, m.b});
    return {inv_swapped.b, inv_swapped.a, inv_swapped.d, inv_swapped.c};
}

/// Hermitian conjugation action on inversive coordinates:
/// [[k2', xi'], [conj(xi'), k1']] = M [[k2, xi], [conj(xi), k1]] conj(M)^T.
inline InvCoord act(const Mat2& m, const InvCoord& s) {
    const QuatElem &a = m.a, &b = m.b, &c = m.c, &d = m.d;
    QuatElem k2(a.sig, s.cobend), k1(a.sig, s.bend);
    const QuatElem& xi = s.xi;
    QuatElem xibar = conj(xi);

    QuatElem p11 = a * k2 + b * xibar, p12 = a * xi + b * k1;
    QuatElem p21 = c * k2 + d * xibar, p22 = c * xi + d * k1;
    QuatElem r11 = p11 * conj(a) + p12 * conj(b);
    QuatElem r12 = p11 * conj(c) + p12 * conj(d);
    QuatElem r21 = p21 * conj(a) + p22 * conj(b);
    QuatElem r22 = p21 * conj(c) + p22 * conj(d);

    if (r22 != QuatElem(a.sig, r22.c[0]) || r11 != QuatElem(a.sig, r11.c[0]) || r12 != conj(r21))
        throw structural_error("action did not produce a Hermitian matrix");
    return InvCoord{r22.c[0], r11.c[0], r12, s.normalized};
}

/// z -> -conj(z) on coordinates; an orientation-keeping sphere map used to
/// express reflections through unit spheres.
inline InvCoord negate_conjugate(const InvCoord& s) {
    return InvCoord{s.bend, s.cobend, -conj(s.xi), s.normalized};
}

/// Reflection through the unit sphere centered at z, as a sphere map:
/// phi_z = [[-z, 1 - nrm(z)], [-1, -conj(z)]] composed with z -> -conj(z).
inline InvCoord reflect_unit_sphere(const QuatElem& z, const InvCoord& s) {
    const AlgebraSig& sig = z.sig;
    Mat2 m{-z, QuatElem(sig, 1 - norm(z)), -QuatElem::one(sig), -conj(z)};
    return act(m, negate_conjugate(s));
}

/// One left step S -> W(alpha).S, specialized from the conjugation identity;
/// stays in exact normalized coordinates.
inline InvCoord cohn_step(const QuatElem& alpha, const InvCoord& s) {
    InvCoord r;
    r.normalized = s.normalized;
    r.bend = s.cobend;
    r.cobend = s.cobend * norm(alpha) + trace(alpha * s.xi) + s.bend;
    r.xi = -(s.cobend * alpha) - conj(s.xi);
    return r;
}

/// Translation step S -> S + w.
inline InvCoord translate_step(const QuatElem& w, const InvCoord& s) {
    InvCoord r;
    r.normalized = s.normalized;
    r.bend = s.bend;
    r.cobend = s.cobend + trace(w * conj(s.xi)) + s.bend * norm(w);
    r.xi = s.xi + s.bend * w;
    return r;
}

// ---------------------------------------------------------------------------
// words in the Cohn generators
// ---------------------------------------------------------------------------

/// Word in the W(alpha) generators of the group they generate; letters act
/// left to right, i.e. the word (a_1, ..., a_k) names W(a_1) ... W(a_k).
struct GroupWord {
    std::vector<QuatElem> letters;

    Mat2 evaluate(const AlgebraSig& sig) const {
        Mat2 m = Mat2::identity(sig);
        for (const auto& l : letters) m = m * Mat2::cohn(l);
        return m;
    }
};

/// Normalized inversive coordinates of gamma.S_u straight from the matrix
/// entries: kappa_u = c u conj(d) - d u conj(c), and cyclically.
inline InvCoord inv_u_of_matrix(const Mat2& m, const QuatElem& u) {
    QuatElem kap = m.c * u * conj(m.d) - m.d * u * conj(m.c);
    QuatElem kpr = m.a * u * conj(m.b) - m.b * u * conj(m.a);
    QuatElem xi = m.a * u * conj(m.d) - m.b * u * conj(m.c);
    if (kap != QuatElem(u.sig, kap.c[0]) || kpr != QuatElem(u.sig, kpr.c[0]))
        throw structural_error("bend entries are not scalar");
    return InvCoord{kap.c[0], kpr.c[0], xi, true};
}

inline InvCoord inv_u_of_word(const GroupWord& w, const QuatElem& u) {
    return inv_u_of_matrix(w.evaluate(u.sig), u);
}

/// Same value along the incremental route, for cross-validation.
inline InvCoord inv_u_of_word_stepwise(const GroupWord& w, const QuatElem& u) {
    InvCoord s = base_plane(u);
    for (std::size_t k = w.letters.size(); k-- > 0;) s = cohn_step(w.letters[k], s);
    return s;
}

// ---------------------------------------------------------------------------
// floating-point view (rendering / diagnostics only)
// ---------------------------------------------------------------------------

struct FloatSphere {
    std::array<double, 4> center{};
    double radius = 0;
    double bend = 0;   // geometric bend, sign carried
    bool plane = false;
};

inline FloatSphere to_float_sphere(const InvCoord& c, const Int& nrm_u) {
    FloatSphere f;
    double scale = c.normalized ? std::sqrt(nrm_u.convert_to<double>()) : 1.0;
    if (c.is_plane()) {
        f.plane = true;
        for (int k = 0; k < 4; ++k) f.center[k] = to_double(c.xi.c[k]) / scale;  // unit normal
        f.radius = to_double(c.cobend) / (2 * scale);  // signed offset along the normal
        return f;
    }
    double kappa = to_double(c.bend) / scale;
    for (int k = 0; k < 4; ++k) f.center[k] = to_double(c.xi.c[k] / c.bend);
    f.radius = std::abs(1.0 / kappa);
    f.bend = kappa;
    return f;
}

}  // namespace apack
