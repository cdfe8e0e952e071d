#pragma once

#include <array>
#include <ostream>
#include <sstream>
#include <string>

#include "apack/rational.hpp"

namespace apack {

enum class Involution { standard, orthogonal };

/// Signature of the ambient algebra: a rational quaternion algebra (a,b/Q)
/// with basis 1,i,j,ij, or an imaginary quadratic field Q(sqrt(a)) as the
/// degenerate dim-3 case (j,ij components identically zero, b unused).
struct AlgebraSig {
    int dim = 3;  // 3, 4 or 5
    Rational a;   // i^2
    Rational b;   // j^2 (dims 4, 5)
    Involution involution = Involution::standard;

    static AlgebraSig field(const Rational& a) {
        if (a >= 0) throw structural_error("field generator square must be negative");
        return {3, a, 0, Involution::standard};
    }
    static AlgebraSig quaternion(int dim, const Rational& a, const Rational& b) {
        if (dim != 4 && dim != 5) throw structural_error("quaternion signature needs dim 4 or 5");
        if (a >= 0 || b >= 0) throw structural_error("definite algebra needs a < 0 and b < 0");
        return {dim, a, b, dim == 4 ? Involution::orthogonal : Involution::standard};
    }

    bool operator==(const AlgebraSig& o) const {
        return dim == o.dim && a == o.a && b == o.b && involution == o.involution;
    }
    bool operator!=(const AlgebraSig& o) const { return !(*this == o); }
};

/// Element of the algebra given by `sig`, as exact coordinates on 1,i,j,ij.
struct QuatElem {
    AlgebraSig sig;
    std::array<Rational, 4> c{};  // 1, i, j, ij components

    QuatElem() = default;
    QuatElem(const AlgebraSig& s, Rational x, Rational y = 0, Rational z = 0, Rational t = 0)
        : sig(s), c{std::move(x), std::move(y), std::move(z), std::move(t)} {
        if (sig.dim == 3 && (c[2] != 0 || c[3] != 0))
            throw structural_error("dim-3 element with j/ij components");
    }

    static QuatElem zero(const AlgebraSig& s) { return QuatElem(s, 0); }
    static QuatElem one(const AlgebraSig& s) { return QuatElem(s, 1); }
    static QuatElem i(const AlgebraSig& s) { return QuatElem(s, 0, 1); }
    static QuatElem j(const AlgebraSig& s) { return QuatElem(s, 0, 0, 1); }
    static QuatElem ij(const AlgebraSig& s) { return QuatElem(s, 0, 0, 0, 1); }

    bool is_zero() const { return c[0] == 0 && c[1] == 0 && c[2] == 0 && c[3] == 0; }

    bool operator==(const QuatElem& o) const { return sig == o.sig && c == o.c; }
    bool operator!=(const QuatElem& o) const { return !(*this == o); }
};

inline void require_same_sig(const QuatElem& x, const QuatElem& y) {
    if (x.sig != y.sig) throw structural_error("algebra signature mismatch");
}

inline QuatElem operator+(const QuatElem& x, const QuatElem& y) {
    require_same_sig(x, y);
    QuatElem r = x;
    for (int k = 0; k < 4; ++k) r.c[k] += y.c[k];
    return r;
}

inline QuatElem operator-(const QuatElem& x, const QuatElem& y) {
    require_same_sig(x, y);
    QuatElem r = x;
    for (int k = 0; k < 4; ++k) r.c[k] -= y.c[k];
    return r;
}

inline QuatElem operator-(const QuatElem& x) {
    QuatElem r = x;
    for (auto& v : r.c) v = -v;
    return r;
}

inline QuatElem operator*(const Rational& s, const QuatElem& x) {
    QuatElem r = x;
    for (auto& v : r.c) v *= s;
    return r;
}

// Product under i^2 = a, j^2 = b, ij = -ji.
inline QuatElem operator*(const QuatElem& x, const QuatElem& y) {
    require_same_sig(x, y);
    const Rational &a = x.sig.a, &b = x.sig.b;
    const auto &p = x.c, &q = y.c;
    QuatElem r;
    r.sig = x.sig;
    r.c[0] = p[0] * q[0] + a * p[1] * q[1] + b * p[2] * q[2] - a * b * p[3] * q[3];
    r.c[1] = p[0] * q[1] + p[1] * q[0] - b * p[2] * q[3] + b * p[3] * q[2];
    r.c[2] = p[0] * q[2] + p[2] * q[0] + a * p[1] * q[3] - a * p[3] * q[1];
    r.c[3] = p[0] * q[3] + p[3] * q[0] + p[1] * q[2] - p[2] * q[1];
    return r;
}

/// Standard involution x + yi + zj + tij -> x - yi - zj - tij.
inline QuatElem conj(const QuatElem& x) {
    QuatElem r = x;
    r.c[1] = -r.c[1];
    r.c[2] = -r.c[2];
    r.c[3] = -r.c[3];
    return r;
}

/// Orthogonal involution: negates only the ij component. Defined only on
/// signatures carrying it.
inline QuatElem dagger(const QuatElem& x) {
    if (x.sig.involution != Involution::orthogonal)
        throw structural_error("dagger on a signature without orthogonal involution");
    QuatElem r = x;
    r.c[3] = -r.c[3];
    return r;
}

inline Rational trace(const QuatElem& x) { return 2 * x.c[0]; }

inline Rational norm(const QuatElem& x) {
    const Rational &a = x.sig.a, &b = x.sig.b;
    return x.c[0] * x.c[0] - a * x.c[1] * x.c[1] - b * x.c[2] * x.c[2] + a * b * x.c[3] * x.c[3];
}

inline bool is_trace_zero(const QuatElem& x) { return x.c[0] == 0; }

/// Fixed under the signature's involution (all of R for standard involution
/// in dims 3 and 5; the 1,i,j span for the orthogonal one).
inline bool in_plus_part(const QuatElem& x) {
    return x.sig.involution != Involution::orthogonal || x.c[3] == 0;
}

inline QuatElem inverse(const QuatElem& x) {
    Rational n = norm(x);
    if (n == 0) throw structural_error("inverse of zero / null element");
    return Rational(1) / n * conj(x);
}

// tr(x * conj(y)) / 2, the Euclidean inner product on R(R).
inline Rational dot(const QuatElem& x, const QuatElem& y) {
    require_same_sig(x, y);
    const Rational &a = x.sig.a, &b = x.sig.b;
    return x.c[0] * y.c[0] - a * x.c[1] * y.c[1] - b * x.c[2] * y.c[2] + a * b * x.c[3] * y.c[3];
}

inline std::string to_string(const QuatElem& x) {
    static const char* unit[4] = {"", "*i", "*j", "*k"};
    std::string out;
    for (int k = 0; k < 4; ++k) {
        if (x.sig.dim == 3 && k >= 2) break;
        if (!out.empty()) out += x.c[k] < 0 ? " - " : " + ";
        else if (x.c[k] < 0) out += "-";
        out += to_string(abs(x.c[k])) + unit[k];
    }
    return out.empty() ? "0" : out;
}

/// Parses the `p/q + p/q*i + p/q*j + p/q*k` format emitted by to_string.
inline QuatElem parse_quat(const AlgebraSig& sig, const std::string& text) {
    QuatElem r = QuatElem::zero(sig);
    std::string term;
    int sign = 1;
    auto flush = [&]() {
        if (term.empty()) return;
        int k = 0;
        auto star = term.find('*');
        std::string coef = term;
        if (star != std::string::npos) {
            char u = term[star + 1];
            k = u == 'i' ? 1 : u == 'j' ? 2 : 3;
            coef = term.substr(0, star);
        } else if (term == "i" || term == "j" || term == "k") {
            k = term[0] == 'i' ? 1 : term[0] == 'j' ? 2 : 3;
            coef = "1";
        }
        r.c[k] += sign * parse_rational(coef);
        term.clear();
    };
    for (char ch : text) {
        if (ch == ' ') continue;
        if (ch == '+' && !term.empty()) { flush(); sign = 1; }
        else if (ch == '-' && !term.empty() && term.back() != '/') { flush(); sign = -1; }
        else if (ch == '+') sign = 1;
        else if (ch == '-') sign = -sign;
        else term += ch;
    }
    flush();
    if (sig.dim == 3 && (r.c[2] != 0 || r.c[3] != 0))
        throw structural_error("dim-3 element with j/ij components");
    return r;
}

inline std::ostream& operator<<(std::ostream& os, const QuatElem& x) { return os << to_string(x); }

}  // namespace apack
