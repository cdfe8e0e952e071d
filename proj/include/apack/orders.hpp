#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "apack/lattice.hpp"
#include "apack/quat.hpp"

namespace apack {

// ---------------------------------------------------------------------------
// small number theory
// ---------------------------------------------------------------------------

inline std::vector<std::pair<Int, int>> factorize(Int n) {
    n = abs(n);
    std::vector<std::pair<Int, int>> out;
    for (Int p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline int legendre_symbol(Int a, const Int& p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) return 0;
    Int r = boost::multiprecision::powm(a, (p - 1) / 2, p);
    return r == 1 ? 1 : -1;
}

/// Hilbert symbol (a,b)_p for nonzero integers, p an odd prime, 2, or 0
/// standing for the real place.
inline int hilbert_symbol(Int a, Int b, const Int& p) {
    if (a == 0 || b == 0) throw structural_error("hilbert symbol of zero");
    if (p == 0) return (a < 0 && b < 0) ? -1 : 1;
    auto split = [&](Int v) {
        int e = 0;
        while (v % p == 0) { v /= p; ++e; }
        return std::make_pair(e, v);
    };
    auto [alpha, u] = split(a);
    auto [beta, v] = split(b);
    if (p == 2) {
        auto eps = [](const Int& w) { return int(((w - 1) / 2) % 2 != 0); };
        auto omg = [](const Int& w) { return int(((w * w - 1) / 8) % 2 != 0); };
        int e = eps(u) * eps(v) + alpha * omg(v) + beta * omg(u);
        return e % 2 ? -1 : 1;
    }
    int sign = 1;
    if ((alpha * beta) % 2 && ((p - 1) / 2) % 2) sign = -sign;
    if (beta % 2 && legendre_symbol(u, p) == -1) sign = -sign;
    if (alpha % 2 && legendre_symbol(v, p) == -1) sign = -sign;
    return sign;
}

/// Product of the finite primes where (a,b/Q) ramifies.
inline Int quaternion_algebra_disc(const Rational& a, const Rational& b) {
    Int an = numer(a) * denom(a), bn = numer(b) * denom(b);
    std::set<Int> primes{2};
    for (auto& [p, e] : factorize(an)) primes.insert(p);
    for (auto& [p, e] : factorize(bn)) primes.insert(p);
    Int d = 1;
    for (const Int& p : primes)
        if (hilbert_symbol(an, bn, p) == -1) d *= p;
    return d;
}

/// |iota(disc(dagger))| for the involution negating ij: the square class of
/// (ij)^2 = -ab meets Z in the multiples of its square-free part.
inline Int involution_disc(const AlgebraSig& sig) {
    Int n = numer(sig.a) * denom(sig.a) * numer(sig.b) * denom(sig.b);
    return abs(squarefree_part(n));
}

// ---------------------------------------------------------------------------
// orders
// ---------------------------------------------------------------------------

/// Z-order inside the algebra `sig`, given by basis rows on 1,i,j,ij.
/// Rank 2 for dim 3, rank 4 for dims 4 and 5. Construction validates ring
/// closure, unit membership and (dim 4) dagger stability.
struct ArithOrder {
    AlgebraSig sig;
    std::vector<QuatElem> basis;
    Int discrd = 0;       // reduced discriminant (|disc| for dim 3)
    Int disc_abs = 0;     // |det tr(e_k conj(e_l))|
    std::string table_ref;

    RatMat basis_inv;     // inverse of the square coordinate matrix

    std::size_t rank() const { return basis.size(); }

    RatVec coords_of(const QuatElem& x) const {
        std::size_t n = rank();
        RatVec rhs(n);
        for (std::size_t k = 0; k < n; ++k) rhs[k] = x.c[k];
        RatVec out(n, 0);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) out[r] += basis_inv[r][c] * rhs[c];
        return out;
    }

    bool contains(const QuatElem& x) const {
        if (x.sig != sig) return false;
        if (sig.dim == 3 && (x.c[2] != 0 || x.c[3] != 0)) return false;
        for (const auto& q : coords_of(x))
            if (!is_integer(q)) return false;
        return true;
    }

    QuatElem from_coords(const RatVec& c) const {
        QuatElem x = QuatElem::zero(sig);
        for (std::size_t k = 0; k < basis.size(); ++k) x = x + c[k] * basis[k];
        return x;
    }
};

inline ArithOrder make_order(const AlgebraSig& sig, std::vector<QuatElem> rows,
                             std::string table_ref = "") {
    ArithOrder o;
    o.sig = sig;
    o.basis = std::move(rows);
    o.table_ref = std::move(table_ref);
    std::size_t n = sig.dim == 3 ? 2 : 4;
    if (o.basis.size() != n) throw structural_error("order basis has wrong rank");

    RatMat m(n, RatVec(n));
    for (std::size_t r = 0; r < n; ++r) {
        if (o.basis[r].sig != sig) throw structural_error("order basis element in wrong algebra");
        for (std::size_t c = 0; c < n; ++c) m[r][c] = o.basis[r].c[c];
    }
    auto inv = rat_inverse(m);
    if (!inv) throw structural_error("order basis not linearly independent");
    // coords_of solves x = c * basis, i.e. c = x * m^{-1}
    RatMat minv_t(n, RatVec(n));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) minv_t[r][c] = (*inv)[c][r];
    o.basis_inv = minv_t;

    if (!o.contains(QuatElem::one(sig))) throw structural_error("order does not contain 1");
    for (const auto& x : o.basis)
        for (const auto& y : o.basis)
            if (!o.contains(x * y)) throw structural_error("order basis not closed under product");
    if (sig.involution == Involution::orthogonal)
        for (const auto& x : o.basis)
            if (!o.contains(dagger(x))) throw structural_error("order not dagger-stable");

    RatMat gram(n, RatVec(n));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            gram[r][c] = trace(o.basis[r] * conj(o.basis[c]));
            if (!is_integer(gram[r][c]))
                throw structural_error("trace form not integral on order basis");
        }
    Rational det = rat_det(gram);
    o.disc_abs = abs(numer(det));
    if (sig.dim == 3) {
        o.discrd = o.disc_abs;
    } else {
        Int root;
        if (!is_square(o.disc_abs, &root))
            throw structural_error("quaternion order discriminant is not a square");
        o.discrd = root;
    }
    return o;
}

/// Basis of the involution-fixed part R(Z)^+ (the whole order in dims 3, 5).
inline std::vector<QuatElem> plus_part_basis(const ArithOrder& o) {
    if (o.sig.involution != Involution::orthogonal) return o.basis;
    // integer combinations with vanishing ij component
    Int mult = 1;
    for (const auto& e : o.basis) mult = lcm(mult, denom(e.c[3]));
    IntMat constraint(o.basis.size(), IntVec(1));
    for (std::size_t k = 0; k < o.basis.size(); ++k)
        constraint[k][0] = numer(o.basis[k].c[3]) * (mult / denom(o.basis[k].c[3]));
    IntMat kernel = int_left_kernel(constraint);
    std::vector<QuatElem> out;
    for (const auto& row : kernel) {
        QuatElem x = QuatElem::zero(o.sig);
        for (std::size_t k = 0; k < row.size(); ++k) x = x + Rational(row[k]) * o.basis[k];
        out.push_back(x);
    }
    if (out.size() != 3) throw structural_error("plus part has unexpected rank");
    return out;
}

inline GramLattice dot_gram(const std::vector<QuatElem>& basis) {
    GramLattice lat;
    lat.g.assign(basis.size(), RatVec(basis.size()));
    for (std::size_t r = 0; r < basis.size(); ++r)
        for (std::size_t c = 0; c < basis.size(); ++c) lat.g[r][c] = dot(basis[r], basis[c]);
    return lat;
}

inline Int reduced_discriminant(const ArithOrder& o) { return o.discrd; }

/// Maximality test: discrd(O) = disc(H) for dim 5, and
/// discrd(O) = lcm(|disc(H)|, |iota(disc(dagger))|) for dim 4 dagger-orders.
inline bool is_maximal(const ArithOrder& o) {
    if (o.sig.dim == 3) return true;  // full ring of integers by construction
    Int dh = quaternion_algebra_disc(o.sig.a, o.sig.b);
    if (o.sig.dim == 5) return o.discrd == dh;
    return o.discrd == lcm(dh, involution_disc(o.sig));
}

// ---------------------------------------------------------------------------
// covering vectors
// ---------------------------------------------------------------------------

/// Sublattice of `span` orthogonal to u, as elements.
inline std::vector<QuatElem> orthogonal_sublattice(const std::vector<QuatElem>& span,
                                                   const QuatElem& u) {
    Int mult = 1;
    std::vector<Rational> dots;
    for (const auto& e : span) {
        dots.push_back(dot(e, u));
        mult = lcm(mult, denom(dots.back()));
    }
    IntMat constraint(span.size(), IntVec(1));
    for (std::size_t k = 0; k < span.size(); ++k)
        constraint[k][0] = numer(dots[k]) * (mult / denom(dots[k]));
    IntMat kernel = int_left_kernel(constraint);
    std::vector<QuatElem> out;
    for (const auto& row : kernel) {
        QuatElem x = QuatElem::zero(u.sig);
        for (std::size_t k = 0; k < row.size(); ++k) x = x + Rational(row[k]) * span[k];
        out.push_back(x);
    }
    return out;
}

/// Open unit balls centered on S_u's lattice points cover S_u, i.e. the
/// covering radius of S_u cap R(Z)^+ is strictly below 1.
inline bool is_covering_vector(const ArithOrder& o, const QuatElem& u) {
    if (u.is_zero()) throw std::domain_error("covering test needs a nonzero vector");
    if (!is_trace_zero(u) || !in_plus_part(u))
        throw structural_error("covering vector must be trace-zero in the plus part");
    auto plus = plus_part_basis(o);
    auto sub = orthogonal_sublattice(plus, u);
    if (sub.size() + 1 != plus.size()) throw structural_error("orthogonal sublattice rank");
    return covering_radius_sq(dot_gram(sub)) < 1;
}

struct CoveringData {
    ArithOrder order;
    QuatElem u;                         // normalized covering vector
    std::vector<QuatElem> su_basis;     // basis of S_u cap R(Z)^+
    QuatElem tau;                       // completes su_basis to R(Z)^+
    Int nrm_u = 0;
    Int ideal_norm = 0;                 // |(RuR) cap Z|, the congruence modulus
    Rational tau_dot_u;                 // positive
    // relation between the congruence modulus and the reduced discriminant
    Rational p_ratio;
    std::string p_convention;

    std::vector<QuatElem> plus_basis;   // su_basis followed by tau

    int dim() const { return order.sig.dim; }
    std::size_t plus_rank() const { return plus_basis.size(); }
};

/// Least positive integer in the two-sided ideal of the order generated by u.
inline Int ideal_z_intersection(const ArithOrder& o, const QuatElem& u) {
    std::size_t r = o.rank();
    // rows: coordinates of e_i u e_j over the order basis
    RatMat rows;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            rows.push_back(o.coords_of(o.basis[i] * u * o.basis[j]));
    Int den = 1;
    for (const auto& row : rows)
        for (const auto& v : row) den = lcm(den, denom(v));
    IntMat scaled;
    for (const auto& row : rows) {
        IntVec iv(r);
        for (std::size_t k = 0; k < r; ++k) iv[k] = numer(row[k]) * (den / denom(row[k]));
        scaled.push_back(iv);
    }
    // Hermite-style echelon of the scaled lattice
    std::size_t lead = 0;
    for (std::size_t col = 0; col < r && lead < scaled.size(); ++col) {
        while (true) {
            std::size_t piv = scaled.size();
            for (std::size_t k = lead; k < scaled.size(); ++k)
                if (scaled[k][col] != 0 &&
                    (piv == scaled.size() || abs(scaled[k][col]) < abs(scaled[piv][col])))
                    piv = k;
            if (piv == scaled.size()) break;
            std::swap(scaled[piv], scaled[lead]);
            bool clean = true;
            for (std::size_t k = lead + 1; k < scaled.size(); ++k) {
                if (scaled[k][col] == 0) continue;
                Int q = floor_div(scaled[k][col], scaled[lead][col]);
                for (std::size_t c = 0; c < r; ++c) scaled[k][c] -= q * scaled[lead][c];
                if (scaled[k][col] != 0) clean = false;
            }
            if (clean) { ++lead; break; }
        }
    }
    scaled.resize(lead);
    // minimal t > 0 with t * coords(1) inside the lattice
    RatVec one = o.coords_of(QuatElem::one(o.sig));
    RatMat square(r, RatVec(r, 0));
    for (std::size_t k = 0; k < lead; ++k)
        for (std::size_t c = 0; c < r; ++c) square[k][c] = Rational(scaled[k][c]);
    if (lead != r) throw structural_error("two-sided ideal has deficient rank");
    // solve y * square = t * den * one; t0 = lcm of denominators of the solve at t=1
    RatMat tr_mat(r, RatVec(r));
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) tr_mat[a][b] = square[b][a];
    RatVec rhs(r);
    for (std::size_t k = 0; k < r; ++k) rhs[k] = Rational(den) * one[k];
    auto y = rat_solve(tr_mat, rhs);
    if (!y) throw structural_error("two-sided ideal solve failed");
    Int t0 = 1;
    for (const auto& v : *y) t0 = lcm(t0, denom(v));
    return t0;
}

namespace detail {

inline bool lex_less(const QuatElem& x, const QuatElem& y) { return x.c < y.c; }

inline QuatElem pick_tau(const std::vector<QuatElem>& plus, const QuatElem& u,
                         const Rational& g) {
    GramLattice lat = dot_gram(plus);
    Rational bound = lat.g[0][0];
    for (std::size_t r = 1; r < plus.size(); ++r) bound = std::max(bound, lat.g[r][r]);
    for (int tries = 0; tries < 20; ++tries, bound *= 2) {
        std::optional<QuatElem> best;
        Rational best_norm;
        for (const auto& coords : short_vectors(lat, bound)) {
            QuatElem x = QuatElem::zero(u.sig);
            for (std::size_t k = 0; k < coords.size(); ++k)
                x = x + Rational(coords[k]) * plus[k];
            Rational d = dot(x, u);
            if (abs(d) != g) continue;
            if (d < 0) x = -x;
            Rational n = norm(x);
            if (!best || n < best_norm || (n == best_norm && lex_less(x, *best))) {
                best = x;
                best_norm = n;
            }
        }
        if (best) return *best;
    }
    throw structural_error("no lattice completion found");
}

}  // namespace detail

/// Scales u to a primitive element of R(Z), computes the S_u sublattice and a
/// minimal-norm completion tau, and checks the norm/discriminant relation.
inline CoveringData normalize_covering_vector(const ArithOrder& o, const QuatElem& u_in) {
    CoveringData cd;
    cd.order = o;

    RatVec coords = o.coords_of(u_in);
    IntVec prim = primitive_integer_vector(coords);
    QuatElem u = QuatElem::zero(o.sig);
    for (std::size_t k = 0; k < prim.size(); ++k) u = u + Rational(prim[k]) * o.basis[k];
    if (!is_trace_zero(u) || !in_plus_part(u))
        throw structural_error("covering vector must be trace-zero in the plus part");
    cd.u = u;

    if (!is_covering_vector(o, u)) throw structural_error("not a covering vector");

    auto plus = plus_part_basis(o);
    cd.su_basis = orthogonal_sublattice(plus, u);

    Rational g = 0;
    for (const auto& e : plus) g = rational_gcd(g, dot(e, u));
    cd.tau = detail::pick_tau(plus, u, g);
    cd.tau_dot_u = g;

    cd.plus_basis = cd.su_basis;
    cd.plus_basis.push_back(cd.tau);
    // index check via Gram determinants: det(G_cand) = det(G_plus) * index^2
    Rational dp = rat_det(dot_gram(plus).g);
    Rational dc = rat_det(dot_gram(cd.plus_basis).g);
    if (dp != dc) throw structural_error("su basis plus tau does not span R(Z)^+");

    Rational nu = norm(u);
    if (!is_integer(nu)) throw consistency_error("covering vector norm not integral");
    cd.nrm_u = numer(nu);
    if (!is_squarefree(cd.nrm_u))
        throw consistency_error("normalized covering vector norm is not square-free");
    cd.ideal_norm = ideal_z_intersection(o, u);

    // p * |(RuR) cap Z| = |discrd| with p from a small dim-dependent set; the
    // ideal intersection equals nrm(u) except on the refined dim-4 rows.
    // For dim 3 both the |disc| and square-free-part conventions are recorded.
    auto in_set = [](const Rational& p, std::initializer_list<Rational> set) {
        return std::find(set.begin(), set.end(), p) != set.end();
    };
    if (o.sig.dim == 3) {
        Rational p_disc = Rational(o.disc_abs) / nu;
        Rational p_sqfree = Rational(abs(squarefree_part(o.disc_abs))) / nu;
        if (cd.ideal_norm != cd.nrm_u)
            throw consistency_error("dim-3 ideal norm differs from nrm(u)");
        if (in_set(p_sqfree, {1, 2})) {
            cd.p_ratio = p_sqfree;
            cd.p_convention = "squarefree(disc)";
        } else if (in_set(p_disc, {1, 2})) {
            cd.p_ratio = p_disc;
            cd.p_convention = "|disc|";
        } else {
            throw consistency_error("dim-3 norm/discriminant relation failed");
        }
    } else if (o.sig.dim == 4) {
        cd.p_ratio = Rational(o.discrd) / Rational(cd.ideal_norm);
        cd.p_convention = "discrd/|ideal cap Z|";
        if (!in_set(cd.p_ratio, {1, 2, 3, 7, 11}))
            throw consistency_error("dim-4 norm/discriminant relation failed");
    } else {
        if (cd.ideal_norm != cd.nrm_u)
            throw consistency_error("dim-5 ideal norm differs from nrm(u)");
        cd.p_ratio = nu / Rational(o.discrd);
        cd.p_convention = "nrm(u)/discrd";
        if (!in_set(cd.p_ratio, {Rational(1, 2), 1, Rational(3, 2), 2, 3, 5}))
            throw consistency_error("dim-5 norm/discriminant relation failed");
    }
    return cd;
}

// ---------------------------------------------------------------------------
// classification tables
// ---------------------------------------------------------------------------

namespace tables {

struct Dim4Row {
    Rational a;
    const char* label;
    bool (*admits)(const Int& n);          // n < 0, |n| square-free assumed
    std::array<std::array<Rational, 4>, 4> rows;
    Rational discrd_factor;                 // |discrd| = factor * |n|
};

inline Rational h(int num, int den) { return Rational(num, den); }

inline const std::vector<Dim4Row>& dim4_rows() {
    static const std::vector<Dim4Row> rows = {
        {-1, "(-1,n) n=-1 mod 4", +[](const Int& n) { return ((n % 4) + 4) % 4 == 3; },
         {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {h(1, 2), h(1, 2), h(1, 2), h(1, 2)}}}, 2},
        {-1, "(-1,n) n=2 mod 4", +[](const Int& n) { return ((n % 4) + 4) % 4 == 2; },
         {{{1, 0, 0, 0}, {0, 1, 0, 0}, {h(1, 2), h(1, 2), h(1, 2), 0}, {0, 0, h(1, 2), h(1, 2)}}}, 1},
        {-1, "(-1,n) n=1 mod 4 (A)", +[](const Int& n) { return ((n % 4) + 4) % 4 == 1; },
         {{{1, 0, 0, 0}, {0, 1, 0, 0}, {h(1, 2), 0, h(1, 2), 0}, {0, h(1, 2), 0, h(1, 2)}}}, 1},
        {-1, "(-1,n) n=1 mod 4 (B)", +[](const Int& n) { return ((n % 4) + 4) % 4 == 1; },
         {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, h(1, 2), h(1, 2), 0}, {h(1, 2), 0, 0, h(1, 2)}}}, 1},
        {-2, "(-2,n) n=-1 mod 4", +[](const Int& n) { return ((n % 4) + 4) % 4 == 3; },
         {{{1, 0, 0, 0}, {0, 1, 0, 0}, {h(1, 2), h(1, 2), h(1, 2), 0}, {0, h(1, 2), 0, h(1, 2)}}}, 2},
        {-2, "(-2,n) n=1 mod 4", +[](const Int& n) { return ((n % 4) + 4) % 4 == 1; },
         {{{1, 0, 0, 0}, {0, 1, 0, 0}, {h(1, 2), 0, h(1, 2), 0}, {0, h(1, 2), 0, h(1, 2)}}}, 2},
        {-2, "(-2,n) n/2=-1 mod 8",
         +[](const Int& n) { return n % 2 == 0 && ((n / 2 % 8) + 8) % 8 == 7; },
         {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, h(1, 2), h(1, 2), 0}, {h(1, 2), 0, h(1, 2), h(1, 4)}}}, 1},
        {-2, "(-2,n) n/2=-3 mod 8",
         +[](const Int& n) { return n % 2 == 0 && ((n / 2 % 8) + 8) % 8 == 5; },
         {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, h(1, 2), h(1, 2), 0}, {h(1, 2), 0, 0, h(1, 4)}}}, 1},
        {-2, "(-2,n) n/2=3 mod 8",
         +[](const Int& n) { return n % 2 == 0 && ((n / 2 % 8) + 8) % 8 == 3; },
         {{{1, 0, 0, 0}, {0, 1, 0, 0}, {h(1, 2), h(1, 4), h(1, 4), 0}, {0, h(1, 4), h(-1, 4), h(1, 4)}}}, h(1, 2)},
        {-2, "(-2,n) n/2=1 mod 8",
         +[](const Int& n) { return n % 2 == 0 && ((n / 2 % 8) + 8) % 8 == 1; },
         {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, h(1, 4), h(1, 4), 0}, {h(1, 2), 0, 0, h(1, 4)}}}, h(1, 2)},
        {-3, "(-3,n) 3 not| n", +[](const Int& n) { return n % 3 != 0; },
         {{{1, 0, 0, 0}, {h(1, 2), h(1, 2), 0, 0}, {0, 0, 1, 0}, {0, 0, h(1, 2), h(1, 2)}}}, 3},
        {-3, "(-3,n) n/3=-1 mod 3",
         +[](const Int& n) { return n % 3 == 0 && ((n / 3 % 3) + 3) % 3 == 2; },
         {{{1, 0, 0, 0}, {h(1, 2), h(1, 2), 0, 0}, {0, 0, 1, 0}, {0, 0, h(1, 2), h(1, 6)}}}, 1},
        {-3, "(-3,n) n/3=1 mod 3",
         +[](const Int& n) { return n % 3 == 0 && ((n / 3 % 3) + 3) % 3 == 1; },
         {{{1, 0, 0, 0}, {h(1, 2), h(1, 2), 0, 0}, {0, h(1, 3), h(1, 3), 0}, {0, 0, h(1, 2), h(1, 6)}}}, h(1, 3)},
        {-7, "(-7,n) 7 not| n", +[](const Int& n) { return n % 7 != 0; },
         {{{1, 0, 0, 0}, {h(1, 2), h(1, 2), 0, 0}, {0, 0, 1, 0}, {0, 0, h(1, 2), h(1, 2)}}}, 7},
        {-7, "(-7,n) 7|n", +[](const Int& n) { return n % 7 == 0; },
         {{{1, 0, 0, 0}, {h(1, 2), h(1, 2), 0, 0}, {0, 0, 1, 0}, {0, 0, h(1, 2), h(1, 14)}}}, 1},
        {-11, "(-11,n) 11 not| n", +[](const Int& n) { return n % 11 != 0; },
         {{{1, 0, 0, 0}, {h(1, 2), h(1, 2), 0, 0}, {0, 0, 1, 0}, {0, 0, h(1, 2), h(1, 2)}}}, 11},
        {-11, "(-11,n) n/11 nonsquare mod 11",
         +[](const Int& n) { return n % 11 == 0 && legendre_symbol(n / 11, 11) == -1; },
         {{{1, 0, 0, 0}, {h(1, 2), h(1, 2), 0, 0}, {0, 0, 1, 0}, {0, 0, h(1, 2), h(1, 22)}}}, 1},
        {-11, "(-11,n) n/11=-2 mod 11",
         +[](const Int& n) { return n % 11 == 0 && ((n / 11 % 11) + 11) % 11 == 9; },
         {{{1, 0, 0, 0}, {h(1, 2), h(1, 2), 0, 0}, {0, h(3, 11), h(1, 11), 0}, {0, 0, h(1, 2), h(1, 22)}}}, h(1, 11)},
        {-11, "(-11,n) n/11=5 mod 11",
         +[](const Int& n) { return n % 11 == 0 && ((n / 11 % 11) + 11) % 11 == 5; },
         {{{1, 0, 0, 0}, {h(1, 2), h(1, 2), 0, 0}, {0, h(4, 11), h(1, 11), 0}, {0, 0, h(1, 2), h(1, 22)}}}, h(1, 11)},
        {-11, "(-11,n) n/11=4 mod 11",
         +[](const Int& n) { return n % 11 == 0 && ((n / 11 % 11) + 11) % 11 == 4; },
         {{{1, 0, 0, 0}, {h(1, 2), h(1, 2), 0, 0}, {0, h(2, 11), h(1, 11), 0}, {0, 0, h(1, 2), h(1, 22)}}}, h(1, 11)},
        {-11, "(-11,n) n/11=3 mod 11",
         +[](const Int& n) { return n % 11 == 0 && ((n / 11 % 11) + 11) % 11 == 3; },
         {{{1, 0, 0, 0}, {h(1, 2), h(1, 2), 0, 0}, {0, h(5, 11), h(1, 11), 0}, {0, 0, h(1, 2), h(1, 22)}}}, h(1, 11)},
        {-11, "(-11,n) n/11=1 mod 11",
         +[](const Int& n) { return n % 11 == 0 && ((n / 11 % 11) + 11) % 11 == 1; },
         {{{1, 0, 0, 0}, {h(1, 2), h(1, 2), 0, 0}, {0, h(1, 11), h(1, 11), 0}, {0, 0, h(1, 2), h(1, 22)}}}, h(1, 11)},
    };
    return rows;
}

struct Dim5Row {
    Rational a, b;
    std::array<std::array<Rational, 4>, 4> rows;
    int discrd;
    int u_div;                   // u = ij / u_div
    std::vector<Int> u_norms;    // norms of all normalized covering vectors
};

inline const std::vector<Dim5Row>& dim5_rows() {
    static const std::vector<Dim5Row> rows = {
        {-1, -1, {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {h(1, 2), h(1, 2), h(1, 2), h(1, 2)}}},
         2, 1, {1, 2, 3, 6, 10}},
        {-1, -3, {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, h(1, 2), h(1, 2), 0}, {h(1, 2), 0, 0, h(1, 2)}}},
         3, 1, {3, 6}},
        {-2, -10, {{{1, 0, 0, 0}, {0, 1, 0, 0}, {h(1, 2), h(1, 4), h(1, 4), 0}, {h(1, 2), h(1, 2), 0, h(1, 4)}}},
         5, 2, {5, 10}},
        {-1, -7, {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, h(1, 2), h(1, 2), 0}, {h(1, 2), 0, 0, h(1, 2)}}},
         7, 1, {7}},
        {-2, -26, {{{1, 0, 0, 0}, {0, 1, 0, 0}, {h(1, 2), h(1, 4), h(1, 4), 0}, {h(1, 2), h(1, 2), 0, h(1, 4)}}},
         13, 2, {13}},
    };
    return rows;
}

}  // namespace tables

inline ArithOrder ring_of_integers(const Int& n) {
    if (n <= 0 || !is_squarefree(n)) throw structural_error("need square-free n > 0");
    AlgebraSig sig = AlgebraSig::field(Rational(-n));
    std::vector<QuatElem> rows{QuatElem::one(sig)};
    if (((n % 4) + 4) % 4 == 3)  // -n = 1 mod 4
        rows.push_back(QuatElem(sig, Rational(1, 2), Rational(1, 2)));
    else
        rows.push_back(QuatElem::i(sig));
    return make_order(sig, rows, "dim3:n=" + n.str());
}

inline ArithOrder dim4_order(const tables::Dim4Row& row, const Int& n) {
    if (n >= 0 || !is_squarefree(n) || !row.admits(n))
        throw structural_error("n not admissible for this family row");
    AlgebraSig sig = AlgebraSig::quaternion(4, row.a, Rational(n));
    std::vector<QuatElem> rows;
    for (const auto& r : row.rows) rows.emplace_back(sig, r[0], r[1], r[2], r[3]);
    ArithOrder o = make_order(sig, rows, std::string("T1:") + row.label + ":n=" + n.str());
    if (Rational(o.discrd) != row.discrd_factor * Rational(abs(n)))
        throw consistency_error("dim-4 reduced discriminant mismatch");
    if (!is_maximal(o)) throw consistency_error("dim-4 table order not maximal");
    return o;
}

inline ArithOrder dim5_order(const tables::Dim5Row& row) {
    AlgebraSig sig = AlgebraSig::quaternion(5, row.a, row.b);
    std::vector<QuatElem> rows;
    for (const auto& r : row.rows) rows.emplace_back(sig, r[0], r[1], r[2], r[3]);
    std::ostringstream label;
    label << "T2:(" << row.a << "," << row.b << ")";
    ArithOrder o = make_order(sig, rows, label.str());
    if (o.discrd != row.discrd) throw consistency_error("dim-5 reduced discriminant mismatch");
    if (!is_maximal(o)) throw consistency_error("dim-5 table order not maximal");
    return o;
}

inline CoveringData covering_data_for(const ArithOrder& o) {
    QuatElem u;
    if (o.sig.dim == 3) {
        u = QuatElem::i(o.sig);  // sqrt(-n)
    } else if (o.sig.dim == 4) {
        u = QuatElem::j(o.sig);
    } else {
        Int g = gcd(abs(numer(o.sig.a)), abs(numer(o.sig.b)));
        u = Rational(1, g) * QuatElem::ij(o.sig);
    }
    return normalize_covering_vector(o, u);
}

/// All norms of normalized covering vectors of a dim-5 order. Candidate
/// hyperplanes are spanned by 1 and two elements of norm at most 4 (the
/// orthogonal sublattice of a covering vector has a reduced basis of such
/// elements), so the scan below is exhaustive.
inline std::set<Int> covering_vector_norms(const ArithOrder& o) {
    if (o.sig.dim != 5) throw structural_error("covering vector sweep is for dim 5");
    GramLattice lat = dot_gram(o.basis);
    auto shorts = short_vectors(lat, 4);
    std::vector<QuatElem> elems;
    for (const auto& v : shorts) {
        RatVec c(v.size());
        for (std::size_t k = 0; k < v.size(); ++k) c[k] = Rational(v[k]);
        elems.push_back(o.from_coords(c));
    }
    std::set<std::array<Rational, 4>> seen;
    std::set<Int> norms;
    QuatElem one = QuatElem::one(o.sig);
    for (std::size_t p = 0; p < elems.size(); ++p)
        for (std::size_t q = p + 1; q < elems.size(); ++q) {
            // orthogonal direction to span(1, e_p, e_q)
            RatMat sys(3, RatVec(4));
            const QuatElem* gens[3] = {&one, &elems[p], &elems[q]};
            RatMat check(3, RatVec(4));
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 4; ++c) check[r][c] = gens[r]->c[c];
            if (rat_rank(check) != 3) continue;
            // dot(x, g) = 0 as linear equations in structural coords of x
            const Rational &a = o.sig.a, &b = o.sig.b;
            for (int r = 0; r < 3; ++r) {
                sys[r][0] = gens[r]->c[0];
                sys[r][1] = -a * gens[r]->c[1];
                sys[r][2] = -b * gens[r]->c[2];
                sys[r][3] = a * b * gens[r]->c[3];
            }
            IntMat isys(3, IntVec(4));
            Int mult = 1;
            for (auto& rowv : sys)
                for (auto& x : rowv) mult = lcm(mult, denom(x));
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 4; ++c)
                    isys[r][c] = numer(sys[r][c]) * (mult / denom(sys[r][c]));
            // kernel of the transpose: x with isys * x = 0
            IntMat t(4, IntVec(3));
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 4; ++c) t[c][r] = isys[r][c];
            IntMat kern = int_left_kernel(t);
            if (kern.size() != 1) continue;
            QuatElem u(o.sig, Rational(kern[0][0]), Rational(kern[0][1]), Rational(kern[0][2]),
                       Rational(kern[0][3]));
            if (!is_trace_zero(u)) continue;
            IntVec prim = primitive_integer_vector(o.coords_of(u));
            QuatElem un = QuatElem::zero(o.sig);
            for (std::size_t k = 0; k < prim.size(); ++k)
                un = un + Rational(prim[k]) * o.basis[k];
            for (std::size_t k = 4; k-- > 0;) {
                if (un.c[k] == 0) continue;
                if (un.c[k] < 0) un = -un;
                break;
            }
            if (seen.count(un.c)) continue;
            seen.insert(un.c);
            if (is_covering_vector(o, un)) norms.insert(numer(norm(un)));
        }
    return norms;
}

struct MinkowskiGate {
    int bound = 119;             // |disc(R(Q))| < 119, from 12*pi^2 < 119
    std::vector<Int> candidates; // eligible algebra discriminants below the bound
    std::vector<Int> admitted;
    std::vector<Int> pruned;
};

/// Candidate discriminants of definite rational quaternion algebras: square
/// free with an odd number of prime factors.
inline MinkowskiGate dim5_search_gate() {
    MinkowskiGate gate;
    for (Int d = 2; d < gate.bound; ++d) {
        if (!is_squarefree(d)) continue;
        if (factorize(d).size() % 2 == 0) continue;
        gate.candidates.push_back(d);
        bool kept = false;
        for (const auto& row : tables::dim5_rows())
            if (row.discrd == d) kept = true;
        (kept ? gate.admitted : gate.pruned).push_back(d);
    }
    return gate;
}

struct CatalogEntry {
    CoveringData cover;
    std::set<Int> all_u_norms;  // dim 5 only: every normalized covering norm
};

/// Catalog of orders with covering vectors up to the discriminant bound.
/// dim 3: one ring of integers per square-free n; dim 4: Table-style family
/// instances; dim 5: the five classes (bound ignored beyond the gate).
inline std::vector<CatalogEntry> enumerate_covering_orders(int dim, const Int& disc_bound) {
    std::vector<CatalogEntry> out;
    if (dim == 3) {
        for (Int n = 1; ; ++n) {
            if (!is_squarefree(n)) continue;
            Int disc = ((n % 4) + 4) % 4 == 3 ? n : 4 * n;
            if (disc > disc_bound) {
                if (n > disc_bound) break;
                continue;
            }
            out.push_back({covering_data_for(ring_of_integers(n)), {}});
        }
    } else if (dim == 4) {
        for (const auto& row : tables::dim4_rows()) {
            for (Int m = 1; row.discrd_factor * m <= disc_bound; ++m) {
                Int n = -m;
                if (!is_squarefree(n) || !row.admits(n)) continue;
                try {
                    out.push_back({covering_data_for(dim4_order(row, n)), {}});
                } catch (const consistency_error&) {
                    // family basis non-maximal at this n; a finer row covers it
                }
            }
        }
    } else if (dim == 5) {
        for (const auto& row : tables::dim5_rows()) {
            ArithOrder o = dim5_order(row);
            CatalogEntry e{covering_data_for(o), covering_vector_norms(o)};
            std::set<Int> expect(row.u_norms.begin(), row.u_norms.end());
            if (e.all_u_norms != expect)
                throw consistency_error("dim-5 covering vector norm set mismatch");
            out.push_back(std::move(e));
        }
    } else {
        throw structural_error("dim must be 3, 4 or 5");
    }
    return out;
}

/// Invariant fingerprint used to flag candidate isomorphisms between catalog
/// entries: reduced discriminant plus the first successive minima.
inline std::string order_fingerprint(const ArithOrder& o) {
    auto minima = successive_minima(dot_gram(o.basis), o.rank());
    std::string s = "d" + o.discrd.str();
    for (const auto& m : minima) s += ":" + to_string(m);
    return s;
}

}  // namespace apack
