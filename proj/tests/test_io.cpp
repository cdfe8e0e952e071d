#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "apack/json_io.hpp"
#include "apack/svg.hpp"

using namespace apack;

TEST_CASE("cover round trip through json") {
    for (auto cd : {covering_data_for(ring_of_integers(5)),
                    covering_data_for(dim5_order(tables::dim5_rows()[3]))}) {
        Json j = to_json(cd);
        CoveringData back = cover_from_json(j);
        CHECK(back.order.sig == cd.order.sig);
        CHECK(back.order.discrd == cd.order.discrd);
        CHECK(back.u == cd.u);
        CHECK(back.nrm_u == cd.nrm_u);
        CHECK(back.ideal_norm == cd.ideal_norm);
    }
}

TEST_CASE("census jsonl round trip") {
    auto cd = covering_data_for(ring_of_integers(5));
    EnumerateOptions opt;
    opt.bend_bound = 50;
    auto census = enumerate_apollonian(cd, opt);
    std::stringstream buf;
    write_census_jsonl(buf, census);
    PackingCensus back = read_census_jsonl(buf);
    REQUIRE(back.size() == census.size());
    auto ia = census.spheres.begin();
    auto ib = back.spheres.begin();
    for (; ia != census.spheres.end(); ++ia, ++ib) {
        CHECK(ia->first == ib->first);
        CHECK(census.pool[ia->second].rep == back.pool[ib->second].rep);
    }
    CHECK(back.bend_counts == census.bend_counts);
    CHECK(back.bend_bound == census.bend_bound);
}

TEST_CASE("sphere record carries a float view") {
    auto cd = covering_data_for(ring_of_integers(5));
    EnumerateOptions opt;
    opt.bend_bound = 10;
    auto census = enumerate_apollonian(cd, opt);
    for (const auto& [key, idx] : census.spheres) {
        Json j = sphere_to_json(census.pool[idx].rep, cd.nrm_u);
        CHECK(j.at("float").at("center").size() == 2);
        if (key.bend != 0) {
            double r = j.at("float").at("radius").get<double>();
            CHECK(r == doctest::Approx(std::sqrt(5.0) / to_double(key.bend)));
        }
    }
}

TEST_CASE("svg output is well formed") {
    auto cd = covering_data_for(ring_of_integers(5));
    EnumerateOptions opt;
    opt.bend_bound = 50;
    auto census = enumerate_apollonian(cd, opt);
    std::stringstream svg;
    write_svg(svg, census);
    std::string text = svg.str();
    CHECK(text.find("<svg") == 0);
    CHECK(text.find("<circle") != std::string::npos);
    CHECK(text.rfind("</svg>") != std::string::npos);
    auto dim5 = covering_data_for(dim5_order(tables::dim5_rows()[3]));
    EnumerateOptions small;
    small.bend_bound = 0;
    auto c5 = enumerate_apollonian(dim5, small);
    std::stringstream out5;
    CHECK_THROWS_AS(write_svg(out5, c5), structural_error);
}

TEST_CASE("quaternion text format") {
    AlgebraSig sig = AlgebraSig::quaternion(5, -2, -26);
    QuatElem x(sig, Rational(1, 2), Rational(1, 2), 0, Rational(-5, 4));
    CHECK(to_string(x) == "1/2 + 1/2*i + 0*j - 5/4*k");
    CHECK(parse_quat(sig, to_string(x)) == x);
}
