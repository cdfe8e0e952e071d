#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "apack/orders.hpp"
#include "apack/quat.hpp"

using namespace apack;

namespace {

std::mt19937_64 rng(20260809);

Rational random_rational() {
    std::uniform_int_distribution<int> num(-8, 8), den(1, 4);
    return Rational(num(rng), den(rng));
}

QuatElem random_elem(const AlgebraSig& sig) {
    QuatElem x = QuatElem::zero(sig);
    int n = sig.dim == 3 ? 2 : 4;
    for (int k = 0; k < n; ++k) x.c[k] = random_rational();
    return x;
}

// Independent multiplication oracle: left-regular representation matrices
// assembled from the defining relations, multiplied as 4x4 matrices.
RatMat left_rep(const QuatElem& x) {
    const Rational &a = x.sig.a, &b = x.sig.b;
    // columns are the images of 1, i, j, ij under left multiplication by the
    // basis vectors, combined with x's coordinates
    RatMat m(4, RatVec(4, 0));
    auto add = [&](int row, int col, const Rational& v) { m[row][col] += v; };
    // x0 * identity
    for (int k = 0; k < 4; ++k) add(k, k, x.c[0]);
    // x1 * L_i : i*1=i, i*i=a, i*j=ij, i*ij=aj
    add(1, 0, x.c[1]); add(0, 1, x.c[1] * a); add(3, 2, x.c[1]); add(2, 3, x.c[1] * a);
    // x2 * L_j : j*1=j, j*i=-ij, j*j=b, j*ij=-bi
    add(2, 0, x.c[2]); add(3, 1, -x.c[2]); add(0, 2, x.c[2] * b); add(1, 3, -x.c[2] * b);
    // x3 * L_ij : ij*1=ij, ij*i=-aj, ij*j=bi, ij*ij=-ab
    add(3, 0, x.c[3]); add(2, 1, -x.c[3] * a); add(1, 2, x.c[3] * b); add(0, 3, -x.c[3] * a * b);
    return m;
}

QuatElem oracle_mul(const QuatElem& x, const QuatElem& y) {
    RatMat m = left_rep(x);
    QuatElem r = QuatElem::zero(x.sig);
    for (int row = 0; row < 4; ++row)
        for (int col = 0; col < 4; ++col) r.c[row] += m[row][col] * y.c[col];
    return r;
}

const AlgebraSig Q11 = AlgebraSig::quaternion(5, -1, -1);
const AlgebraSig Q15 = AlgebraSig::quaternion(5, -1, -5);
const AlgebraSig D4 = AlgebraSig::quaternion(4, -1, -6);
const AlgebraSig F5 = AlgebraSig::field(-5);

}  // namespace

TEST_CASE("defining relations") {
    QuatElem i = QuatElem::i(Q11), j = QuatElem::j(Q11), ij = QuatElem::ij(Q11);
    CHECK(i * j == ij);
    CHECK(j * i == -ij);
    CHECK(i * i == Rational(-1) * QuatElem::one(Q11));
    QuatElem x = random_elem(Q11);
    CHECK(x * QuatElem::one(Q11) == x);
    QuatElem lhs = (QuatElem::one(Q11) + i) * (QuatElem::one(Q11) + j);
    CHECK(lhs == QuatElem::one(Q11) + i + j + ij);
}

TEST_CASE("multiplication matches regular representation oracle") {
    for (int t = 0; t < 200; ++t) {
        const AlgebraSig& sig = t % 2 ? Q15 : Q11;
        QuatElem x = random_elem(sig), y = random_elem(sig);
        CHECK(x * y == oracle_mul(x, y));
    }
}

TEST_CASE("associativity and distributivity") {
    for (int t = 0; t < 100; ++t) {
        QuatElem x = random_elem(Q15), y = random_elem(Q15), z = random_elem(Q15);
        CHECK((x * y) * z == x * (y * z));
        CHECK(x * (y + z) == x * y + x * z);
    }
}

TEST_CASE("conjugation and dagger") {
    QuatElem w(Q11, 1, 1, 1, 1);
    CHECK(conj(w) == QuatElem(Q11, 1, -1, -1, -1));
    QuatElem wd(D4, 1, 1, 1, 1);
    CHECK(dagger(wd) == QuatElem(D4, 1, 1, 1, -1));
    CHECK(dagger(QuatElem::one(D4)) == QuatElem::one(D4));
    CHECK_THROWS_AS(dagger(QuatElem::one(Q11)), structural_error);
    CHECK(conj(QuatElem(F5, 3)) == QuatElem(F5, 3));
    for (int t = 0; t < 100; ++t) {
        QuatElem x = random_elem(Q11), y = random_elem(Q11);
        CHECK(conj(conj(x)) == x);
        CHECK(conj(x * y) == conj(y) * conj(x));
        QuatElem xd = random_elem(D4), yd = random_elem(D4);
        CHECK(dagger(dagger(xd)) == xd);
        CHECK(dagger(xd * yd) == dagger(yd) * dagger(xd));
    }
}

TEST_CASE("trace and norm") {
    CHECK(norm(QuatElem(Q15, 1, 1, 1)) == 7);
    CHECK(norm(QuatElem::zero(Q15)) == 0);
    for (int t = 0; t < 100; ++t) {
        QuatElem x = random_elem(Q15), y = random_elem(Q15);
        CHECK(trace(x) == trace(conj(x)));
        CHECK(norm(x * y) == norm(x) * norm(y));
        CHECK(x * conj(x) == QuatElem(Q15, norm(x)));
        CHECK(norm(x) >= 0);
        if (!x.is_zero()) CHECK(norm(x) > 0);
        // trace-zero part is closed under x -> -conj(x)
        QuatElem u = x - QuatElem(Q15, x.c[0]);
        CHECK(conj(u) == -u);
    }
}

TEST_CASE("text round trip") {
    QuatElem x(Q15, Rational(-3, 2), 0, Rational(5, 7), 1);
    CHECK(parse_quat(Q15, to_string(x)) == x);
    QuatElem y(F5, Rational(1, 2), Rational(-2, 3));
    CHECK(parse_quat(F5, to_string(y)) == y);
    CHECK(parse_quat(Q11, "1 + i - j + 2*k") == QuatElem(Q11, 1, 1, -1, 2));
}

TEST_CASE("successive minima of standard lattices") {
    GramLattice z2{{{1, 0}, {0, 1}}};
    auto m = successive_minima(z2, 2);
    CHECK(m == RatVec{1, 1});
    GramLattice skew{{{2, 1}, {1, 3}}};
    auto m2 = successive_minima(skew, 2);
    CHECK(m2[0] == 2);
    CHECK(m2[1] == 3);
}

TEST_CASE("covering radius closed forms") {
    GramLattice z2{{{1, 0}, {0, 1}}};
    CHECK(covering_radius_sq(z2) == Rational(1, 2));
    GramLattice hex{{{1, Rational(1, 2)}, {Rational(1, 2), 1}}};  // hexagonal
    CHECK(covering_radius_sq(hex) == Rational(1, 3));
    GramLattice z3{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    CHECK(covering_radius_sq(z3) == Rational(3, 4));
    GramLattice z1{{{9}}};
    CHECK(covering_radius_sq(z1) == Rational(9, 4));
}

TEST_CASE("covering radius agrees with grid sampling oracle") {
    std::uniform_int_distribution<int> entry(-2, 2);
    int done = 0;
    while (done < 20) {
        std::size_t n = 2 + done % 2;
        RatMat basis(n, RatVec(n));
        for (auto& row : basis)
            for (auto& v : row) v = entry(rng);
        if (rat_rank(basis) != n) continue;
        GramLattice lat;
        lat.g.assign(n, RatVec(n, 0));
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t k = 0; k < n; ++k) lat.g[r][c] += basis[r][k] * basis[c][k];
        double mu2 = to_double(covering_radius_sq(lat));
        // sample the fundamental cell, measure distance to nearby lattice points
        int grid = 9;
        double worst = 0;
        for (int s = 0; s < (n == 2 ? grid * grid : grid * grid * grid); ++s) {
            double frac[3] = {0, 0, 0};
            int idx = s;
            for (std::size_t k = 0; k < n; ++k) { frac[k] = (idx % grid + 0.5) / grid; idx /= grid; }
            double best = 1e18;
            for (int dx = -2; dx <= 2; ++dx)
                for (int dy = -2; dy <= 2; ++dy)
                    for (int dz = (n == 3 ? -2 : 0); dz <= (n == 3 ? 2 : 0); ++dz) {
                        double d2 = 0;
                        double diff[3] = {frac[0] - dx, frac[1] - dy, frac[2] - dz};
                        for (std::size_t k = 0; k < n; ++k) {
                            double coord = 0;
                            for (std::size_t l = 0; l < n; ++l)
                                coord += diff[l] * to_double(basis[l][k]);
                            d2 += coord * coord;
                        }
                        best = std::min(best, d2);
                    }
            worst = std::max(worst, best);
        }
        CHECK(worst <= mu2 * 1.0001);
        CHECK(worst >= mu2 * 0.5);  // coarse grid still gets near the deep hole
        ++done;
    }
}

TEST_CASE("ring of integers discriminants") {
    CHECK(reduced_discriminant(ring_of_integers(5)) == 20);
    CHECK(reduced_discriminant(ring_of_integers(6)) == 24);
    CHECK(reduced_discriminant(ring_of_integers(3)) == 3);
    CHECK(reduced_discriminant(ring_of_integers(1)) == 4);
}

TEST_CASE("hurwitz order") {
    ArithOrder hurwitz = dim5_order(tables::dim5_rows()[0]);
    CHECK(reduced_discriminant(hurwitz) == 2);
    CHECK(is_maximal(hurwitz));
    CHECK(is_covering_vector(hurwitz, QuatElem::ij(hurwitz.sig)));
    auto minima = successive_minima(dot_gram(hurwitz.basis), 1);
    CHECK(minima[0] == 1);
}

TEST_CASE("table-1 order for (-1,-6)") {
    const auto& rows = tables::dim4_rows();
    const tables::Dim4Row* row = nullptr;
    for (const auto& r : rows)
        if (r.a == -1 && r.admits(-6)) row = &r;
    REQUIRE(row != nullptr);
    ArithOrder o = dim4_order(*row, -6);
    CHECK(reduced_discriminant(o) == 6);
    CHECK(is_covering_vector(o, QuatElem::j(o.sig)));
    auto cd = covering_data_for(o);
    CHECK(cd.nrm_u == 6);
    CHECK(cd.su_basis.size() == 2);
    CHECK(cd.p_ratio == 1);
}

TEST_CASE("synthetic non-covering lattice") {
    GramLattice scaled{{{9}}};
    CHECK(covering_radius_sq(scaled) >= 1);
}

TEST_CASE("refined family rows use the ideal intersection as modulus") {
    // (-3,-6): the order carries the (i+j)/3 refinement; nrm(j) = 6 but the
    // two-sided ideal of j meets Z in 2Z, matching discrd = 2
    const tables::Dim4Row& fam = tables::dim4_rows()[12];
    REQUIRE(fam.admits(-6));
    ArithOrder o = dim4_order(fam, -6);
    CHECK(o.discrd == 2);
    CHECK(is_maximal(o));
    auto cd = covering_data_for(o);
    CHECK(cd.nrm_u == 6);
    CHECK(cd.ideal_norm == 2);
    CHECK(cd.p_ratio == 1);
}

TEST_CASE("covering data for rings of integers") {
    auto cd = covering_data_for(ring_of_integers(5));
    CHECK(cd.nrm_u == 5);
    CHECK(cd.p_convention == "squarefree(disc)");
    CHECK(cd.p_ratio == 1);
    CHECK(cd.su_basis.size() == 1);
    CHECK(dot(cd.tau, cd.u) > 0);
}

TEST_CASE("third minimum of the (-1,-7) su lattice") {
    auto cd = covering_data_for(dim5_order(tables::dim5_rows()[3]));
    REQUIRE(cd.su_basis.size() == 3);
    auto minima = successive_minima(dot_gram(cd.su_basis), 3);
    CHECK(minima[2] <= 4);
}

TEST_CASE("hilbert symbols and algebra discriminants") {
    CHECK(quaternion_algebra_disc(-1, -1) == 2);
    CHECK(quaternion_algebra_disc(-1, -3) == 3);
    CHECK(quaternion_algebra_disc(-2, -10) == 5);
    CHECK(quaternion_algebra_disc(-1, -7) == 7);
    CHECK(quaternion_algebra_disc(-2, -26) == 13);
    CHECK(hilbert_symbol(-1, -1, 0) == -1);
    CHECK(hilbert_symbol(-1, -1, 2) == -1);
    CHECK(hilbert_symbol(-1, -1, 3) == 1);
}
