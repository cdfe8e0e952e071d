#pragma once

#include <fstream>
#include <sstream>

#include "apack/json_io.hpp"

namespace apack {

struct RenderOptions {
    int cells = 3;            // fundamental cells tiled horizontally
    double stroke = 0.01;
    double pixels_per_unit = 160;
    bool color_by_bend = true;
};

namespace detail {

inline std::string bend_color(double bend, bool colored) {
    if (!colored || bend <= 0) return "#444444";
    // cycle hue with the bend magnitude
    int hue = int(std::fmod(std::log2(bend) * 67.0, 360.0));
    std::ostringstream os;
    os << "hsl(" << hue << ",70%,45%)";
    return os.str();
}

}  // namespace detail

/// Renders a dim-3 census as circles tiled over `cells` fundamental cells.
/// The two bounding planes come out as horizontal lines.
inline void write_svg(std::ostream& os, const PackingCensus& census,
                      const RenderOptions& opt = {}) {
    const CoveringData& cd = census.cover;
    if (cd.order.sig.dim != 3)
        throw structural_error("svg rendering is for dim 3 censuses");
    double n = Int(cd.nrm_u).convert_to<double>();
    double height = to_double(cd.tau_dot_u) / std::sqrt(n);
    double cell_width = 1.0;  // su lattice is generated by 1
    {
        auto eu = euclidean_coords(cd.su_basis[0]);
        cell_width = std::abs(eu[0]);
    }
    double w = opt.cells * cell_width, h = height;
    double margin = 0.05 * std::max(w, h);
    double scale = opt.pixels_per_unit;
    auto X = [&](double x) { return (x + margin) * scale; };
    auto Y = [&](double y) { return (h + margin - y) * scale; };

    os << "<svg xmlns='http://www.w3.org/2000/svg' width='"
       << int((w + 2 * margin) * scale) << "' height='" << int((h + 2 * margin) * scale)
       << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    // bounding lines
    for (double y : {0.0, height})
        os << "<line x1='" << X(-margin) << "' y1='" << Y(y) << "' x2='" << X(w + margin)
           << "' y2='" << Y(y) << "' stroke='#222222' stroke-width='"
           << opt.stroke * 2 * scale << "'/>\n";
    for (const auto& [key, idx] : census.spheres) {
        const InvCoord& s = census.pool[idx].rep;
        if (s.is_plane()) continue;
        QuatElem center_elem = Rational(1) / s.bend * s.xi;
        auto eu = euclidean_coords(center_elem);
        double r = std::sqrt(n) / to_double(s.bend);
        for (int cell = -1; cell <= opt.cells; ++cell) {
            double cx = eu[0] + cell * cell_width;
            if (cx + r < -margin || cx - r > w + margin) continue;
            os << "<circle cx='" << X(cx) << "' cy='" << Y(eu[1]) << "' r='" << r * scale
               << "' fill='none' stroke='"
               << detail::bend_color(to_double(s.bend), opt.color_by_bend)
               << "' stroke-width='" << opt.stroke * scale << "'/>\n";
        }
    }
    os << "</svg>\n";
}

}  // namespace apack
