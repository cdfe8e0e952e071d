#pragma once

#include <fstream>
#include <json.hpp>

#include "apack/forbidden.hpp"

namespace apack {

using Json = nlohmann::json;

inline std::array<double, 4> euclidean_coords(const QuatElem& x) {
    double wa = std::sqrt(-to_double(x.sig.a));
    double wb = x.sig.dim == 3 ? 0.0 : std::sqrt(-to_double(x.sig.b));
    return {to_double(x.c[0]), to_double(x.c[1]) * wa, to_double(x.c[2]) * wb,
            to_double(x.c[3]) * wa * wb};
}

inline Json to_json(const AlgebraSig& sig) {
    Json j{{"dim", sig.dim}, {"a", to_string(sig.a)},
           {"involution", sig.involution == Involution::orthogonal ? "orthogonal" : "standard"}};
    if (sig.dim != 3) j["b"] = to_string(sig.b);
    return j;
}

inline AlgebraSig sig_from_json(const Json& j) {
    int dim = j.at("dim").get<int>();
    Rational a = parse_rational(j.at("a").get<std::string>());
    if (dim == 3) return AlgebraSig::field(a);
    return AlgebraSig::quaternion(dim, a, parse_rational(j.at("b").get<std::string>()));
}

inline Json to_json(const CoveringData& cd) {
    Json basis = Json::array();
    for (const auto& e : cd.order.basis) basis.push_back(to_string(e));
    Json su = Json::array();
    for (const auto& e : cd.su_basis) su.push_back(to_string(e));
    return Json{{"sig", to_json(cd.order.sig)},
                {"basis", basis},
                {"discrd", cd.order.discrd.str()},
                {"disc_abs", cd.order.disc_abs.str()},
                {"covering_vector", to_string(cd.u)},
                {"su_basis", su},
                {"tau", to_string(cd.tau)},
                {"nrm_u", cd.nrm_u.str()},
                {"ideal_norm", cd.ideal_norm.str()},
                {"p_ratio", to_string(cd.p_ratio)},
                {"p_convention", cd.p_convention},
                {"table_ref", cd.order.table_ref},
                {"fingerprint", order_fingerprint(cd.order)}};
}

inline CoveringData cover_from_json(const Json& j) {
    AlgebraSig sig = sig_from_json(j.at("sig"));
    std::vector<QuatElem> basis;
    for (const auto& e : j.at("basis")) basis.push_back(parse_quat(sig, e.get<std::string>()));
    ArithOrder o = make_order(sig, basis, j.value("table_ref", ""));
    return normalize_covering_vector(o, parse_quat(sig, j.at("covering_vector").get<std::string>()));
}

inline Json sphere_to_json(const InvCoord& s, const Int& nrm_u) {
    FloatSphere f = to_float_sphere(s, nrm_u);
    QuatElem center_elem = s.is_plane() ? s.xi : Rational(1) / s.bend * s.xi;
    auto eu = euclidean_coords(center_elem);
    int ambient = s.xi.sig.dim - 1;
    Json center = Json::array();
    for (int k = 0; k < ambient; ++k) center.push_back(eu[k]);
    return Json{{"bend", to_string(s.bend)},
                {"cobend", to_string(s.cobend)},
                {"xi", Json::array({to_string(s.xi.c[0]), to_string(s.xi.c[1]),
                                    to_string(s.xi.c[2]), to_string(s.xi.c[3])})},
                {"normalized", s.normalized},
                {"float", Json{{"center", center}, {"radius", f.radius}, {"plane", f.plane}}}};
}

inline InvCoord sphere_from_json(const Json& j, const AlgebraSig& sig) {
    InvCoord s;
    s.bend = parse_rational(j.at("bend").get<std::string>());
    s.cobend = parse_rational(j.at("cobend").get<std::string>());
    const auto& xi = j.at("xi");
    s.xi = QuatElem(sig, parse_rational(xi[0].get<std::string>()),
                    parse_rational(xi[1].get<std::string>()),
                    parse_rational(xi[2].get<std::string>()),
                    parse_rational(xi[3].get<std::string>()));
    s.normalized = j.at("normalized").get<bool>();
    return s;
}

/// Census as JSON lines: one header object, then one sphere per line.
inline void write_census_jsonl(std::ostream& os, const PackingCensus& census) {
    Json counts = Json::object();
    for (const auto& [bend, count] : census.bend_counts) counts[bend.str()] = count;
    Json header{{"cover", to_json(census.cover)},
                {"kind", census.kind == PackingKind::apollonian ? "apollonian" : "superpacking"},
                {"bend_bound", census.bend_bound.str()},
                {"gen_norm_bound", to_string(census.gen_norm_bound)},
                {"overshoot", census.overshoot},
                {"spheres", census.size()},
                {"depth", census.depth_reached},
                {"exhausted", census.frontier_exhausted},
                {"slack_discoveries", census.slack_discoveries},
                {"counts", counts}};
    os << header.dump() << "\n";
    for (const auto& [key, idx] : census.spheres) {
        Json rec = sphere_to_json(census.pool[idx].rep, census.cover.nrm_u);
        rec["depth"] = census.pool[idx].depth;
        os << rec.dump() << "\n";
    }
}

/// Reads a census written by write_census_jsonl; words are not persisted, so
/// entries come back as seeds of depth 0.
inline PackingCensus read_census_jsonl(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw structural_error("empty census file");
    Json header = Json::parse(line);
    PackingCensus census;
    census.cover = cover_from_json(header.at("cover"));
    census.kind = header.at("kind").get<std::string>() == "apollonian"
                      ? PackingKind::apollonian
                      : PackingKind::superpacking;
    census.bend_bound = Int(header.at("bend_bound").get<std::string>());
    census.gen_norm_bound = parse_rational(header.at("gen_norm_bound").get<std::string>());
    census.overshoot = header.value("overshoot", 1);
    census.depth_reached = header.value("depth", 0);
    census.frontier_exhausted = header.value("exhausted", false);
    census.slack_discoveries = header.value("slack_discoveries", std::int64_t(0));
    PlusFrame frame(census.cover);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        Json rec = Json::parse(line);
        InvCoord s = sphere_from_json(rec, census.cover.order.sig);
        CensusEntry e{s, -1, {WordLetter::cohn, QuatElem::zero(census.cover.order.sig)},
                      QuatElem::zero(census.cover.order.sig),
                      QuatElem::zero(census.cover.order.sig), rec.value("depth", 0),
                      s.is_plane()};
        census.spheres.emplace(detail::key_of(s, frame), census.pool.size());
        census.pool.push_back(e);
        if (s.bend != 0) {
            if (!is_integer(s.bend)) throw consistency_error("non-integral bend in census file");
            ++census.bend_counts[numer(s.bend)];
        }
    }
    return census;
}

inline Json to_json(const CongruenceClass& cls) {
    Json residues = Json::array();
    for (std::size_t k = 0; k < cls.residues.size() && k < 32; ++k)
        residues.push_back(to_string(cls.residues[k]));
    return Json{{"step", to_string(cls.step)},
                {"residues", residues},
                {"residue_count", cls.residues.size()},
                {"refinement", cls.refinement.str()},
                {"min_abs", to_string(cls.min_abs)},
                {"misses_interval", cls.misses_interval},
                {"description", cls.describe()}};
}

inline Json to_json(const ForbiddenBall& ball) {
    Json j{{"sig", to_json(ball.sig)},
           {"scale2", to_string(ball.scale2)},
           {"dir_bend", to_string(ball.dir.bend)},
           {"dir_cobend", to_string(ball.dir.cobend)},
           {"dir_xi", Json::array({to_string(ball.dir.xi.c[0]), to_string(ball.dir.xi.c[1]),
                                   to_string(ball.dir.xi.c[2]), to_string(ball.dir.xi.c[3])})},
           {"nrm_u", ball.nrm_u.str()},
           {"table_ref", ball.table_ref},
           {"printed_scale_matches", ball.printed_scale_matches}};
    auto [center, r2] = ball_geometry(ball);
    j["float"] = Json{{"center", Json::array({center[0], center[1], center[2], center[3]})},
                      {"radius", std::sqrt(r2)}};
    return j;
}

inline Json to_json(const ForbiddenReport& report, const ForbiddenBall& ball,
                    const DensityUpperBound& bound) {
    return Json{{"cover", ball.cover ? to_json(*ball.cover) : Json(nullptr)},
                {"table_ref", report.table_ref},
                {"inv", to_json(ball)},
                {"congruence_class", to_json(report.certificate)},
                {"symbolic_pass", report.symbolic_pass},
                {"empirical_scanned", report.empirical_scanned},
                {"empirical_pass", report.empirical_pass},
                {"min_abs_b", report.min_abs_b},
                {"density_upper_bound", bound.ball_bound},
                {"strip_bound", bound.strip_bound},
                {"strip_leftover", bound.strip_leftover}};
}

inline Json to_json(const DensityReport& r) {
    Json partial = Json::array();
    for (const auto& [bend, sum] : r.table.exact_sums)
        partial.push_back(Json{{"bend", bend.str()},
                               {"kappa_sum", to_string(sum)},
                               {"density", to_double(sum) * r.table.scale}});
    Json fit{{"fittable", r.fit.fittable}};
    if (r.fit.fittable) {
        fit["alpha"] = r.fit.alpha;
        fit["std_error"] = r.fit.std_error;
        fit["alpha_alt_window"] = r.fit.alpha_alt;
        fit["residual"] = r.fit.residual;
        fit["window"] = Json::array({std::exp(r.fit.window_lo), std::exp(r.fit.window_hi)});
        fit["bend_quantum"] = r.fit.bend_quantum.str();
        fit["lambda"] = r.fit.lambda;
    } else {
        fit["reason"] = r.fit.reason;
    }
    Json j{{"cover_label", r.cover_label},
           {"disc_abs", r.disc_abs.str()},
           {"nrm_u", r.nrm_u.str()},
           {"cell_volume", r.cell_vol},
           {"cell_volume_squared", to_string(r.cell_volume_squared)},
           {"partial_density", partial},
           {"float_error_bound", r.table.float_error},
           {"fit", fit},
           {"provenance", Json{{"bend_bound", r.bend_bound.str()},
                               {"depth", r.depth},
                               {"exhausted", r.exhausted},
                               {"slack_discoveries", r.slack_discoveries}}}};
    if (r.upper_bound) j["upper_bound"] = *r.upper_bound;
    if (r.model)
        j["zeta_model"] = Json{{"shape", r.model->shape},
                               {"zeta_argument", r.model->zeta_argument},
                               {"disc_scaling", r.model->disc_scaling}};
    return j;
}

}  // namespace apack
