#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace apack {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Thrown when an input violates a structural precondition (bad signature,
// non-order basis, mixed normalization, ...).
struct structural_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when two independently computed values that must agree do not.
struct consistency_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Int numer(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Int denom(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rational& q) { return denom(q) == 1; }

inline Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int lcm(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }

/// g = gcd(a, b) together with x, y satisfying a x + b y = g.
inline Int ext_gcd(const Int& a, const Int& b, Int& x, Int& y) {
    if (b == 0) {
        x = a < 0 ? -1 : 1;
        y = 0;
        return abs(a);
    }
    Int x1, y1;
    Int g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

// Largest g with g*Z containing both arguments, i.e. gcd extended to Q.
inline Rational rational_gcd(const Rational& a, const Rational& b) {
    if (a == 0) return abs(b);
    if (b == 0) return abs(a);
    Int n = gcd(numer(a) * denom(b), numer(b) * denom(a));
    return Rational(n, denom(a) * denom(b));
}

inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

inline Int rfloor(const Rational& q) { return floor_div(numer(q), denom(q)); }

inline Int rround(const Rational& q) { return rfloor(q + Rational(1, 2)); }

inline Int isqrt(const Int& n) {
    if (n < 0) throw structural_error("isqrt of negative");
    return boost::multiprecision::sqrt(n);
}

inline bool is_square(const Int& n, Int* root = nullptr) {
    if (n < 0) return false;
    Int r = isqrt(n);
    if (root) *root = r;
    return r * r == n;
}

// n = s * m^2 with s square-free; returns s (sign preserved).
inline Int squarefree_part(Int n) {
    if (n == 0) return 0;
    Int sign = n < 0 ? -1 : 1;
    n = abs(n);
    Int s = 1;
    for (Int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            if (e % 2) s *= p;
        }
    }
    return sign * s * n;
}

inline bool is_squarefree(const Int& n) { return n != 0 && abs(squarefree_part(n)) == abs(n); }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline std::string to_string(const Rational& q) {
    std::string s = numer(q).str();
    if (denom(q) != 1) s += "/" + denom(q).str();
    return s;
}

inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(Int(s));
    return Rational(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
}

}  // namespace apack
