// Command-line front end: classification catalogs, packing censuses,
// forbidden-ball verification, density reports and SVG renders.
//
// Exit codes: 0 ok, 1 usage / unknown cover, 2 golden mismatch,
// 3 census not saturated.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "apack/json_io.hpp"
#include "apack/svg.hpp"

using namespace apack;

namespace {

struct CoverSelect {
    int dim = 0;
    std::string family;   // dim 4: "(-1,n)" style
    long long n = 0;      // dim 3: positive square-free; dim 4: negative
    long long discrd = 0; // dim 5 selector
    std::string basis_json;

    void attach(CLI::App* cmd) {
        cmd->add_option("--dim", dim, "ambient dimension (3, 4 or 5)")->required();
        cmd->add_option("--family", family, "dim-4 family, e.g. \"(-1,n)\"");
        cmd->add_option("--n", n, "dim-3 square-free n > 0, or dim-4 n < 0");
        cmd->add_option("--discrd", discrd, "dim-5 reduced discriminant (2,3,5,7,13)");
        cmd->add_option("--basis-json", basis_json, "explicit cover description (JSON file)");
    }

    CoveringData resolve() const {
        if (!basis_json.empty()) {
            std::ifstream in(basis_json);
            if (!in) throw structural_error("cannot open " + basis_json);
            Json j = Json::parse(in);
            return cover_from_json(j);
        }
        if (dim == 3) {
            if (n <= 0) throw structural_error("dim 3 needs --n > 0 (square-free)");
            return covering_data_for(ring_of_integers(Int(n)));
        }
        if (dim == 4) {
            if (n >= 0) throw structural_error("dim 4 needs --n < 0");
            Rational a = family.empty() ? Rational(-1)
                                        : parse_rational(family.substr(1, family.find(',') - 1));
            std::vector<const tables::Dim4Row*> hits;
            for (const auto& row : tables::dim4_rows())
                if (row.a == a && row.admits(Int(n)) && is_squarefree(Int(n))) hits.push_back(&row);
            if (hits.empty()) throw structural_error("no classification row matches this n");
            // rows overlapping on n (the two 1-mod-4 lattices) need the family
            // label spelled out with an A/B suffix
            const tables::Dim4Row* pick = hits.front();
            if (hits.size() > 1 && family.find('B') != std::string::npos) pick = hits.back();
            CoveringData cd = covering_data_for(dim4_order(*pick, Int(n)));
            return cd;
        }
        if (dim == 5) {
            for (const auto& row : tables::dim5_rows())
                if (row.discrd == discrd) return covering_data_for(dim5_order(row));
            throw structural_error("dim-5 discrd must be one of 2, 3, 5, 7, 13");
        }
        throw structural_error("dim must be 3, 4 or 5");
    }
};

int write_or_print(const Json& j, const std::string& path) {
    if (path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(path);
        out << j.dump(2) << "\n";
    }
    return 0;
}

Json catalog_json(int dim, const Int& bound) {
    Json arr = Json::array();
    for (const auto& entry : enumerate_covering_orders(dim, bound)) {
        Json j = to_json(entry.cover);
        if (!entry.all_u_norms.empty()) {
            Json norms = Json::array();
            for (const auto& v : entry.all_u_norms) norms.push_back(v.str());
            j["covering_vector_norms"] = norms;
        }
        arr.push_back(j);
    }
    return arr;
}

// order-insensitive comparison keyed on table_ref
int diff_catalogs(const Json& got, const Json& want) {
    std::map<std::string, Json> g, w;
    for (const auto& e : got) g[e.at("table_ref").get<std::string>()] = e;
    for (const auto& e : want) w[e.at("table_ref").get<std::string>()] = e;
    int mismatches = 0;
    for (const auto& [key, val] : w) {
        auto it = g.find(key);
        if (it == g.end()) {
            std::cerr << "missing catalog row: " << key << "\n";
            ++mismatches;
        } else if (it->second != val) {
            std::cerr << "catalog row differs: " << key << "\n";
            std::cerr << "  expected: " << val.dump() << "\n";
            std::cerr << "  got:      " << it->second.dump() << "\n";
            ++mismatches;
        }
    }
    for (const auto& [key, val] : g)
        if (!w.count(key)) {
            std::cerr << "unexpected catalog row: " << key << "\n";
            ++mismatches;
        }
    return mismatches;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Apollonian-type sphere packings over arithmetic orders"};
    app.require_subcommand(1);
    unsigned threads = default_thread_count();
    app.add_option("--threads", threads, "worker threads for census enumeration");

    // ---- classify ----
    auto* classify = app.add_subcommand("classify", "enumerate orders with covering vectors");
    int cdim = 0;
    long long disc_bound = 50;
    std::string out_path, golden_path;
    classify->add_option("--dim", cdim, "dimension")->required();
    classify->add_option("--disc-bound", disc_bound, "discriminant bound (dims 3, 4)");
    classify->add_option("--out", out_path, "write orders.json here");
    classify->add_option("--golden", golden_path, "compare against a committed catalog");

    // ---- enumerate ----
    auto* enumerate = app.add_subcommand("enumerate", "breadth-first packing census");
    CoverSelect esel;
    esel.attach(enumerate);
    long long bend_bound = 30, depth_bound = 256;
    double gen_norm_bound = 9;
    int overshoot = 2;
    std::string census_out, svg_out;
    int svg_cells = 3;
    double svg_stroke = 0.01;
    std::string packing_kind = "apollonian";
    enumerate->add_option("--bend-bound", bend_bound, "largest normalized bend kept");
    enumerate->add_option("--depth", depth_bound, "breadth-first depth cap");
    enumerate->add_option("--gen-norm-bound", gen_norm_bound,
                          "norm cutoff for Cohn generators (superpacking)");
    enumerate->add_option("--overshoot", overshoot, "internal search bound multiplier");
    enumerate->add_option("--packing", packing_kind, "apollonian or super");
    enumerate->add_option("--out", census_out, "census.jsonl path");
    enumerate->add_option("--svg", svg_out, "SVG render path (dim 3 only)");
    enumerate->add_option("--cells", svg_cells, "fundamental cells tiled in the render");
    enumerate->add_option("--stroke", svg_stroke, "render stroke width");

    // ---- verify ----
    auto* verify = app.add_subcommand("verify", "forbidden-ball certificates against a census");
    CoverSelect vsel;
    vsel.attach(verify);
    std::string verify_census, verify_out;
    verify->add_option("--census", verify_census, "census.jsonl to scan")->required();
    verify->add_option("--out", verify_out, "forbidden-report.json path");

    // ---- density ----
    auto* density = app.add_subcommand("density", "density report from a census");
    CoverSelect dsel;
    dsel.attach(density);
    std::string density_census, density_out;
    int lambda = 1;
    density->add_option("--census", density_census, "census.jsonl (apollonian)")->required();
    density->add_option("--out", density_out, "density-report.json path");
    density->add_option("--lambda", lambda, "integer lambda in the bend-count exponent");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*classify) {
            Json catalog = catalog_json(cdim, Int(disc_bound));
            if (cdim == 5) {
                auto gate = dim5_search_gate();
                std::cerr << "minkowski gate: |disc(R(Q))| < " << gate.bound
                          << " (12*pi^2 = " << 12 * M_PI * M_PI << "); candidates "
                          << gate.candidates.size() << ", admitted " << gate.admitted.size()
                          << ", pruned " << gate.pruned.size() << "\n";
            }
            if (!golden_path.empty()) {
                std::ifstream gin(golden_path);
                if (!gin) {
                    std::cerr << "cannot open golden file " << golden_path << "\n";
                    return 1;
                }
                Json want = Json::parse(gin);
                if (int bad = diff_catalogs(catalog, want)) {
                    std::cerr << bad << " catalog mismatches\n";
                    return 2;
                }
            }
            return write_or_print(catalog, out_path);
        }

        if (*enumerate) {
            CoveringData cd = esel.resolve();
            EnumerateOptions opt;
            opt.bend_bound = Int(bend_bound);
            opt.max_depth = int(depth_bound);
            opt.gen_norm_bound = Rational(Int(std::llround(gen_norm_bound * 4)), 4);
            opt.overshoot = overshoot;
            opt.threads = threads;
            PackingCensus census = packing_kind == "super"
                                       ? enumerate_superpacking(cd, opt)
                                       : enumerate_apollonian(cd, opt);
            if (!census_out.empty()) {
                std::ofstream out(census_out);
                write_census_jsonl(out, census);
            } else {
                write_census_jsonl(std::cout, census);
            }
            if (!svg_out.empty()) {
                if (cd.order.sig.dim != 3) {
                    std::cerr << "svg rendering only supports dim 3\n";
                    return 1;
                }
                RenderOptions ropt;
                ropt.cells = svg_cells;
                ropt.stroke = svg_stroke;
                std::ofstream svg(svg_out);
                write_svg(svg, census, ropt);
            }
            std::cerr << "census: " << census.size() << " spheres, depth "
                      << census.depth_reached << ", exhausted " << census.frontier_exhausted
                      << ", slack discoveries " << census.slack_discoveries << "\n";
            if (!census.frontier_exhausted) {
                std::cerr << "warning: breadth-first frontier not exhausted\n";
                return 3;
            }
            return 0;
        }

        if (*verify) {
            CoveringData cd = vsel.resolve();
            std::ifstream cin_file(verify_census);
            if (!cin_file) {
                std::cerr << "cannot open census " << verify_census << "\n";
                return 1;
            }
            PackingCensus census = read_census_jsonl(cin_file);
            auto result = table_forbidden_ball(cd);
            if (std::holds_alternative<NotCovered>(result)) {
                Json j{{"cover", to_json(cd)},
                       {"status", "NotCovered"},
                       {"reason", std::get<NotCovered>(result).reason}};
                write_or_print(j, verify_out);
                return 0;
            }
            const ForbiddenBall& ball = std::get<ForbiddenBall>(result);
            ForbiddenReport report = verify_forbidden(ball, census);
            DensityUpperBound bound = density_upper_bound(ball);
            Json j = to_json(report, ball, bound);
            bool ok = report.symbolic_pass && report.empirical_pass;
            if (!report.symbolic_pass && report.empirical_pass) {
                // catalog rows with garbled coordinates: fall back to the
                // orthogonal-sphere construction for the symbolic side
                if (auto orth = orthogonal_ball(cd)) {
                    ForbiddenReport alt = verify_forbidden(*orth, census);
                    j["orthogonal_fallback"] =
                        to_json(alt, *orth, density_upper_bound(*orth));
                    ok = alt.symbolic_pass && alt.empirical_pass;
                }
            }
            write_or_print(j, verify_out);
            if (!ok) {
                std::cerr << "certificate FAILED\n";
                return 2;
            }
            return 0;
        }

        if (*density) {
            CoveringData cd = dsel.resolve();
            std::ifstream cin_file(density_census);
            if (!cin_file) {
                std::cerr << "cannot open census " << density_census << "\n";
                return 1;
            }
            PackingCensus census = read_census_jsonl(cin_file);
            DensityReport report = build_density_report(census, lambda);
            auto ball = table_forbidden_ball(cd);
            if (std::holds_alternative<ForbiddenBall>(ball))
                report.upper_bound = density_upper_bound(std::get<ForbiddenBall>(ball)).ball_bound;
            write_or_print(to_json(report), density_out);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
