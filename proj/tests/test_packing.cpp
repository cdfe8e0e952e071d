#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "apack/packing.hpp"

using namespace apack;

namespace {

CoveringData cover_m5() { return covering_data_for(ring_of_integers(5)); }
CoveringData cover_m1() { return covering_data_for(ring_of_integers(1)); }

CoveringData cover_dim4() {
    for (const auto& row : tables::dim4_rows())
        if (row.a == -1 && row.admits(-6)) return covering_data_for(dim4_order(row, -6));
    throw std::logic_error("row not found");
}

CoveringData cover_dim5() { return covering_data_for(dim5_order(tables::dim5_rows()[3])); }

}  // namespace

TEST_CASE("superpacking census basics for Z[sqrt(-5)]") {
    auto cd = cover_m5();
    EnumerateOptions opt;
    opt.bend_bound = 0;
    opt.max_depth = 0;
    auto census = enumerate_superpacking(cd, opt);
    REQUIRE(census.size() == 1);  // just the base plane
    CHECK(census.spheres.begin()->first.bend == 0);

    opt.bend_bound = 30;
    opt.max_depth = 64;
    opt.gen_norm_bound = 9;
    census = enumerate_superpacking(cd, opt);
    // congruences confine normalized bends to 10Z with one class per bend
    CHECK(census.size() == 7);
    CHECK(census.frontier_exhausted);
    for (const auto& [key, idx] : census.spheres) CHECK(is_integer(key.bend / 10));

    Rational n(cd.nrm_u);
    for (const auto& [key, idx] : census.spheres) {
        const InvCoord& s = census.pool[idx].rep;
        CHECK(q_form(s) == n);
        CHECK(is_integer(s.bend / n));
        CHECK(is_integer(s.cobend / n));
        CHECK(cd.order.contains(Rational(1) / n * (s.xi - cd.u)));
    }
}

TEST_CASE("pairwise b-form congruence on the census") {
    auto cd = cover_m5();
    EnumerateOptions opt;
    opt.bend_bound = 25;
    auto census = enumerate_superpacking(cd, opt);
    Rational n(cd.nrm_u);
    std::vector<const InvCoord*> reps;
    for (const auto& [key, idx] : census.spheres) reps.push_back(&census.pool[idx].rep);
    for (std::size_t i = 0; i < reps.size(); ++i)
        for (std::size_t j = i; j < reps.size(); ++j) {
            Rational b = b_form(*reps[i], *reps[j]);
            CHECK(is_integer(2 * (b - n) / (n * n)));
        }
}

TEST_CASE("census closed under the negate-conjugate symmetry") {
    auto cd = cover_m5();
    EnumerateOptions opt;
    opt.bend_bound = 20;
    auto census = enumerate_superpacking(cd, opt);
    PlusFrame frame(cd);
    detail::Canonicalizer canon(frame, PackingKind::superpacking);
    for (const auto& [key, idx] : census.spheres) {
        InvCoord mapped = negate_conjugate(census.pool[idx].rep);
        auto [red, w] = canon.reduce(mapped);
        CHECK(census.spheres.count(detail::key_of(red, frame)) == 1);
    }
}

TEST_CASE("determinism across traversal orders and threads") {
    auto cd = cover_m5();
    EnumerateOptions a, b;
    a.bend_bound = b.bend_bound = 20;
    a.threads = 1;
    b.threads = 4;
    b.gen_norm_bound = a.gen_norm_bound;
    auto ca = enumerate_superpacking(cd, a);
    auto cb = enumerate_superpacking(cd, b);
    REQUIRE(ca.size() == cb.size());
    auto ia = ca.spheres.begin();
    auto ib = cb.spheres.begin();
    for (; ia != ca.spheres.end(); ++ia, ++ib) CHECK(ia->first == ib->first);
}

TEST_CASE("generator norm bound saturation") {
    // past a modest cutoff, admitting more Cohn generators changes nothing
    auto cd = cover_m5();
    EnumerateOptions a, b;
    a.bend_bound = b.bend_bound = 25;
    a.gen_norm_bound = 9;
    b.gen_norm_bound = 20;
    auto ca = enumerate_superpacking(cd, a);
    auto cb = enumerate_superpacking(cd, b);
    REQUIRE(ca.size() == cb.size());
    auto ia = ca.spheres.begin();
    for (auto ib = cb.spheres.begin(); ib != cb.spheres.end(); ++ia, ++ib)
        CHECK(ia->first == ib->first);
}

TEST_CASE("monotonicity in the bend bound") {
    auto cd = cover_m5();
    EnumerateOptions small, large;
    small.bend_bound = 15;
    large.bend_bound = 30;
    auto cs = enumerate_superpacking(cd, small);
    auto cl = enumerate_superpacking(cd, large);
    for (const auto& [key, idx] : cs.spheres) CHECK(cl.spheres.count(key) == 1);
    CHECK(cl.size() >= cs.size());
}

TEST_CASE("apollonian census for Z[sqrt(-5)]") {
    auto cd = cover_m5();
    EnumerateOptions opt;
    opt.bend_bound = 0;
    opt.max_depth = 0;
    auto census = enumerate_apollonian(cd, opt);
    REQUIRE(census.size() == 2);  // the two planes

    opt.bend_bound = 30;
    opt.max_depth = 64;
    auto full = enumerate_apollonian(cd, opt);
    CHECK(full.frontier_exhausted);
    std::size_t planes = 0;
    for (const auto& [key, idx] : full.spheres) {
        if (key.bend == 0) { ++planes; continue; }
        CHECK(key.bend > 0);
        const InvCoord& s = full.pool[idx].rep;
        // contained between the planes
        CHECK(dot(s.xi, cd.u) >= cd.nrm_u);
        CHECK(s.bend * cd.tau_dot_u - dot(s.xi, cd.u) >= cd.nrm_u);
    }
    CHECK(planes == 2);
    CHECK(full.bend_counts.begin()->first == 10);  // largest circles touch a plane

    auto report = immediate_tangency_check(full);
    CHECK(report.interior_violations == 0);
    CHECK(report.immediate_violations == 0);
    CHECK(report.tangencies > 0);
    CHECK(report.all_points_rational);
}

TEST_CASE("apollonian census sits inside the super-packing") {
    auto cd = cover_m5();
    EnumerateOptions aopt, sopt;
    aopt.bend_bound = 12;
    sopt.bend_bound = 12;
    sopt.gen_norm_bound = 16;
    auto apollonian = enumerate_apollonian(cd, aopt);
    auto super = enumerate_superpacking(cd, sopt);
    CHECK(apollonian_not_in_superpacking(apollonian, super) == 0);
}

TEST_CASE("gaussian control case still enumerates") {
    auto cd = cover_m1();
    CHECK(cd.nrm_u == 1);
    EnumerateOptions opt;
    opt.bend_bound = 40;
    auto census = enumerate_apollonian(cd, opt);
    CHECK(census.size() == 15);
    // strip-gasket bends: 2, 8, 18, 24, 32
    CHECK(census.bend_counts.begin()->first == 2);
    CHECK(census.bend_counts.rbegin()->first == 32);
    auto report = immediate_tangency_check(census);
    CHECK(report.interior_violations == 0);
    CHECK(report.immediate_violations == 0);
}

TEST_CASE("apollonian censuses exist in dims 4 and 5") {
    for (auto cd : {cover_dim4(), cover_dim5()}) {
        EnumerateOptions opt;
        opt.bend_bound = 3 * cd.nrm_u;
        opt.max_depth = 12;
        auto census = enumerate_apollonian(cd, opt);
        CHECK(census.size() > 2);
        for (const auto& [key, idx] : census.spheres)
            CHECK(q_form(census.pool[idx].rep) == cd.nrm_u);
        auto report = immediate_tangency_check(census);
        CHECK(report.interior_violations == 0);
        CHECK(report.immediate_violations == 0);
    }
}

TEST_CASE("word reconstruction evaluates back to the representative") {
    auto cd = cover_m5();
    EnumerateOptions opt;
    opt.bend_bound = 15;
    auto census = enumerate_superpacking(cd, opt);
    for (const auto& [key, idx] : census.spheres) {
        auto word = census.word_of(idx);
        InvCoord s = base_plane(cd.u);
        for (auto it = word.rbegin(); it != word.rend(); ++it) {
            switch (it->kind) {
                case WordLetter::cohn: s = cohn_step(it->payload, s); break;
                case WordLetter::translate: s = translate_step(it->payload, s); break;
                case WordLetter::reflect: s = reflect_unit_sphere(it->payload, s); break;
            }
        }
        CHECK(s == census.pool[idx].rep);
    }
}
