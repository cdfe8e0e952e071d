#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "apack/inversive.hpp"

using namespace apack;

namespace {

std::mt19937_64 rng(71);

QuatElem random_order_element(const ArithOrder& o, int spread = 3) {
    std::uniform_int_distribution<int> pick(-spread, spread);
    QuatElem x = QuatElem::zero(o.sig);
    for (const auto& e : o.basis) x = x + Rational(pick(rng)) * e;
    return x;
}

QuatElem random_plus_element(const CoveringData& cd, int spread = 2) {
    std::uniform_int_distribution<int> pick(-spread, spread);
    QuatElem x = QuatElem::zero(cd.order.sig);
    for (const auto& e : cd.plus_basis) x = x + Rational(pick(rng)) * e;
    return x;
}

GroupWord random_word(const CoveringData& cd, std::size_t len) {
    GroupWord w;
    for (std::size_t k = 0; k < len; ++k) w.letters.push_back(random_plus_element(cd));
    return w;
}

CoveringData cover_z_sqrt_m5() { return covering_data_for(ring_of_integers(5)); }

CoveringData cover_dim4() {
    for (const auto& row : tables::dim4_rows())
        if (row.a == -1 && row.admits(-6)) return covering_data_for(dim4_order(row, -6));
    throw std::logic_error("row not found");
}

CoveringData cover_dim5() { return covering_data_for(dim5_order(tables::dim5_rows()[3])); }

}  // namespace

TEST_CASE("q and b basics") {
    auto cd = cover_z_sqrt_m5();
    InvCoord su = base_plane(cd.u);
    CHECK(q_form(su) == cd.nrm_u);
    CHECK(b_form(su, su) == q_form(su));
    CHECK_THROWS_AS(b_form(su, InvCoord{0, 0, cd.u, false}), structural_error);
    // parallel planes one lattice height apart are tangent at infinity
    InvCoord shifted{0, 2 * Rational(cd.nrm_u), cd.u, true};
    CHECK(b_form(su, shifted) == cd.nrm_u);
}

TEST_CASE("action of identity, W(0), and translations") {
    for (auto cd : {cover_z_sqrt_m5(), cover_dim4(), cover_dim5()}) {
        InvCoord su = base_plane(cd.u);
        const AlgebraSig& sig = cd.order.sig;
        CHECK(act(Mat2::identity(sig), su) == su);
        CHECK(act(Mat2::cohn(QuatElem::zero(sig)), su) == su);
        InvCoord t = act(Mat2::translation(cd.u), su);
        CHECK(t.bend == 0);
        CHECK(t.cobend == 2 * Rational(cd.nrm_u));
        CHECK(t.xi == cd.u);
    }
}

TEST_CASE("action preserves q exactly on random words") {
    int checked = 0;
    for (auto cd : {cover_z_sqrt_m5(), cover_dim4(), cover_dim5()}) {
        for (int t = 0; t < 334; ++t) {
            GroupWord w = random_word(cd, 1 + t % 8);
            Mat2 m = w.evaluate(cd.order.sig);
            CHECK(in_special_group(m));
            InvCoord img = act(m, base_plane(cd.u));
            CHECK(q_form(img) == cd.nrm_u);
            ++checked;
        }
    }
    CHECK(checked >= 1000);
}

TEST_CASE("action is a homomorphism") {
    for (auto cd : {cover_z_sqrt_m5(), cover_dim4(), cover_dim5()}) {
        for (int t = 0; t < 50; ++t) {
            Mat2 m = random_word(cd, 3).evaluate(cd.order.sig);
            Mat2 n = random_word(cd, 3).evaluate(cd.order.sig);
            InvCoord su = base_plane(cd.u);
            CHECK(act(m * n, su) == act(m, act(n, su)));
        }
    }
}

TEST_CASE("cohn factorization identities") {
    for (auto cd : {cover_z_sqrt_m5(), cover_dim4(), cover_dim5()}) {
        const AlgebraSig& sig = cd.order.sig;
        for (int t = 0; t < 25; ++t) {
            QuatElem alpha = random_plus_element(cd);
            Mat2 upper{QuatElem::one(sig), alpha, QuatElem::zero(sig), QuatElem::one(sig)};
            Mat2 lower{QuatElem::one(sig), QuatElem::zero(sig), alpha, QuatElem::one(sig)};
            CHECK(upper == -(Mat2::cohn(-alpha) * Mat2::cohn(QuatElem::zero(sig))));
            CHECK(lower == -(Mat2::cohn(QuatElem::zero(sig)) * Mat2::cohn(alpha)));
        }
    }
}

TEST_CASE("closed form matches hermitian action") {
    for (auto cd : {cover_z_sqrt_m5(), cover_dim4(), cover_dim5()}) {
        for (int t = 0; t < 60; ++t) {
            GroupWord w = random_word(cd, 1 + t % 6);
            Mat2 m = w.evaluate(cd.order.sig);
            InvCoord via_act = act(m, base_plane(cd.u));
            InvCoord via_formula = inv_u_of_matrix(m, cd.u);
            InvCoord via_steps = inv_u_of_word_stepwise(w, cd.u);
            CHECK(via_act == via_formula);
            CHECK(via_act == via_steps);
        }
    }
}

TEST_CASE("congruence of normalized coordinates") {
    // inv_u(gamma.S_u) = (0,0,u) mod nrm(u), checked on random words
    for (auto cd : {cover_z_sqrt_m5(), cover_dim4(), cover_dim5()}) {
        Rational n(cd.nrm_u);
        for (int t = 0; t < 40; ++t) {
            InvCoord s = inv_u_of_word(random_word(cd, 1 + t % 7), cd.u);
            CHECK(is_integer(s.bend / n));
            CHECK(is_integer(s.cobend / n));
            QuatElem diff = Rational(1) / n * (s.xi - cd.u);
            CHECK(cd.order.contains(diff));
        }
    }
}

TEST_CASE("specific word for Z[sqrt(-5)]") {
    auto cd = cover_z_sqrt_m5();
    const AlgebraSig& sig = cd.order.sig;
    GroupWord w{{QuatElem::one(sig), cd.u}};  // W(1) W(sqrt(-5))
    InvCoord s = inv_u_of_word(w, cd.u);
    CHECK(is_integer(s.bend / 5));
    CHECK(is_integer(s.cobend / 5));
    CHECK(cd.order.contains(Rational(1, 5) * (s.xi - cd.u)));
}

TEST_CASE("reflection through unit sphere is an involution") {
    for (auto cd : {cover_z_sqrt_m5(), cover_dim4()}) {
        for (int t = 0; t < 30; ++t) {
            QuatElem z = random_plus_element(cd);
            GroupWord w = random_word(cd, 2);
            InvCoord s = inv_u_of_word(w, cd.u);
            InvCoord r = reflect_unit_sphere(z, s);
            CHECK(q_form(r) == q_form(s));
            CHECK(reflect_unit_sphere(z, r) == s);
        }
    }
}

TEST_CASE("matrix inverse") {
    for (auto cd : {cover_z_sqrt_m5(), cover_dim5()}) {
        for (int t = 0; t < 30; ++t) {
            Mat2 m = random_word(cd, 3).evaluate(cd.order.sig);
            CHECK(inverse(m) * m == Mat2::identity(cd.order.sig));
        }
    }
}

TEST_CASE("float view") {
    auto cd = cover_z_sqrt_m5();
    InvCoord s = inv_u_of_word(GroupWord{{cd.u}}, cd.u);
    FloatSphere f = to_float_sphere(s, cd.nrm_u);
    if (!s.is_plane()) {
        CHECK(f.radius > 0);
        CHECK(std::abs(f.bend * f.radius) == doctest::Approx(1.0));
    }
}
