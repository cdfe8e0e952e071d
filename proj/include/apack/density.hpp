#pragma once

#include <cmath>
#include <limits>
#include <optional>

#include "apack/packing.hpp"

namespace apack {

/// Exact squared covolume of R(R)^+/R(Z)^+ from the Gram matrix of the plus
/// basis, cross-checked against the closed form in terms of the order
/// discriminant (|disc|/4, |disc|/(4 iota), |disc|/16 for dims 3, 4, 5).
inline Rational cell_volume_sq(const CoveringData& cd) {
    Rational gram = rat_det(dot_gram(cd.plus_basis).g);
    const ArithOrder& o = cd.order;
    Rational closed;
    if (o.sig.dim == 3) closed = Rational(o.disc_abs) / 4;
    else if (o.sig.dim == 4) closed = Rational(o.disc_abs) / (4 * involution_disc(o.sig));
    else closed = Rational(o.disc_abs) / 16;
    if (gram != closed)
        throw consistency_error("covolume: Gram determinant disagrees with the closed form");
    return gram;
}

inline double cell_volume(const CoveringData& cd) {
    return std::sqrt(to_double(cell_volume_sq(cd)));
}

inline double ball_volume_constant(int dim) {
    switch (dim) {
        case 3: return M_PI;                // disk area, r^2
        case 4: return 4.0 * M_PI / 3.0;    // ball, r^3
        default: return M_PI * M_PI / 2.0;  // 4-ball, r^4
    }
}

struct DensityTable {
    // bend bound -> exact sum of kappa^{-(dim-1)} over census classes
    std::vector<std::pair<Int, Rational>> exact_sums;
    double scale = 0;             // C * nrm^{(dim-1)/2} / cell volume
    double float_error = 0;       // bound on conversion error of the scale

    double value_at(const Int& bound) const {
        double best = 0;
        for (const auto& [b, s] : exact_sums)
            if (b <= bound) best = to_double(s);
        return best * scale;
    }
    double final_value() const {
        return exact_sums.empty() ? 0 : to_double(exact_sums.back().second) * scale;
    }
};

/// Monotone table of density lower bounds: for each census bend T, the part
/// of the fundamental cell covered by sphere interiors with bend <= T. The
/// kappa sums are exact; floats enter only through one final scale factor.
inline DensityTable partial_density(const PackingCensus& census) {
    if (census.kind != PackingKind::apollonian)
        throw structural_error("density is defined over an Apollonian census");
    bool has_plane = false;
    for (const auto& [key, idx] : census.spheres)
        if (key.bend == 0) has_plane = true;
    if (!has_plane) throw structural_error("census is missing its bounding planes");

    const CoveringData& cd = census.cover;
    int dim = cd.order.sig.dim;
    DensityTable table;
    Rational running = 0;
    for (const auto& [bend, count] : census.bend_counts) {
        Rational kappa(bend);
        Rational term = Rational(count);
        for (int k = 0; k < dim - 1; ++k) term /= kappa;
        running += term;
        table.exact_sums.emplace_back(bend, running);
    }
    double nrm = Int(cd.nrm_u).convert_to<double>();
    table.scale = ball_volume_constant(dim) * std::pow(nrm, (dim - 1) / 2.0) / cell_volume(cd);
    table.float_error = 8 * std::numeric_limits<double>::epsilon() * table.scale *
                        (table.exact_sums.empty() ? 0.0 : to_double(running));
    return table;
}

// ---------------------------------------------------------------------------
// bend census exponent
// ---------------------------------------------------------------------------

struct AlphaFit {
    bool fittable = false;
    std::string reason;       // when not fittable
    double alpha = 0;         // lambda * slope of log N(T) vs log T
    double std_error = 0;
    double window_lo = 0, window_hi = 0;
    double alpha_alt = 0;     // disjoint lower window, stability diagnostic
    double residual = 0;      // rms residual over the main window
    Int bend_quantum = 0;     // gcd of the observed normalized bends
    int lambda = 1;
};

/// Least-squares slope of log(cumulative count) against log(bend) over the
/// top window of the census, reported together with a disjoint-window fit.
inline AlphaFit bend_census_fit(const PackingCensus& census, int lambda = 1) {
    AlphaFit fit;
    fit.lambda = lambda;
    if (census.bend_counts.size() < 10) {
        fit.reason = "need at least 10 distinct bends";
        return fit;
    }
    std::vector<std::pair<double, double>> pts;  // (log T, log N)
    Int quantum = 0;
    std::int64_t cum = 0;
    for (const auto& [bend, count] : census.bend_counts) {
        quantum = gcd(quantum, bend);
        cum += count;
        pts.emplace_back(std::log(bend.convert_to<double>()), std::log(double(cum)));
    }
    fit.bend_quantum = quantum;

    auto slope_of = [&](double lo, double hi, double* stderr_out, double* rms_out) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (const auto& [x, y] : pts) {
            if (x < lo || x > hi) continue;
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++n;
        }
        if (n < 3) return std::numeric_limits<double>::quiet_NaN();
        double denom = n * sxx - sx * sx;
        double slope = (n * sxy - sx * sy) / denom;
        double intercept = (sy - slope * sx) / n;
        double ss = 0;
        for (const auto& [x, y] : pts) {
            if (x < lo || x > hi) continue;
            double e = y - slope * x - intercept;
            ss += e * e;
        }
        if (rms_out) *rms_out = std::sqrt(ss / n);
        if (stderr_out) *stderr_out = std::sqrt(ss / (n - 2) / denom * n);
        return slope;
    };

    double top = pts.back().first;
    fit.window_lo = top - std::log(8.0);
    fit.window_hi = top;
    double slope = slope_of(fit.window_lo, fit.window_hi, &fit.std_error, &fit.residual);
    double alt = slope_of(top - std::log(64.0), fit.window_lo, nullptr, nullptr);
    if (std::isnan(slope)) {
        fit.reason = "too few bends in the fitting window";
        return fit;
    }
    fit.fittable = true;
    fit.alpha = lambda * slope;
    fit.alpha_alt = std::isnan(alt) ? fit.alpha : lambda * alt;
    fit.std_error *= lambda;
    return fit;
}

// ---------------------------------------------------------------------------
// asymptotic model
// ---------------------------------------------------------------------------

/// Closed-form density shape with the unknown group constant set to 1:
/// (1/alpha) pi^{n/2} nrm(u)^{(n-a)/2} / (q^{2-a} Gamma(n/2+1)) zeta(n-a)
/// times the covolume scaling, a = alpha/lambda, q = measured bend quantum.
struct DensityModel {
    double shape = 0;
    double zeta_argument = 0;
    double disc_scaling = 0;  // the 1/sqrt(|disc|)-type factor alone
};

inline DensityModel density_model(const CoveringData& cd, double alpha, int lambda,
                                  const Int& bend_quantum) {
    int n = cd.order.sig.dim;
    double a = alpha / lambda;
    DensityModel m;
    m.zeta_argument = n - a;
    double nrm = Int(cd.nrm_u).convert_to<double>();
    double q = bend_quantum.convert_to<double>();
    double disc = Int(cd.order.disc_abs).convert_to<double>();
    if (n == 3) m.disc_scaling = 2.0 / std::sqrt(disc);
    else if (n == 4)
        m.disc_scaling = 2.0 * std::sqrt(involution_disc(cd.order.sig).convert_to<double>()) /
                         std::sqrt(disc);
    else m.disc_scaling = 4.0 / std::sqrt(disc);
    m.shape = (1.0 / alpha) * std::pow(M_PI, n / 2.0) * std::pow(nrm, (n - a) / 2.0) /
              (std::pow(q, 2.0 - a) * std::tgamma(n / 2.0 + 1.0)) * std::riemann_zeta(n - a) *
              m.disc_scaling;
    return m;
}

// ---------------------------------------------------------------------------
// assembled report
// ---------------------------------------------------------------------------

struct DensityReport {
    std::string cover_label;
    Int disc_abs;
    Int nrm_u;
    Rational cell_volume_squared;
    double cell_vol = 0;
    DensityTable table;
    std::optional<double> upper_bound;  // forbidden-ball bound, when available
    AlphaFit fit;
    std::optional<DensityModel> model;
    // census provenance
    Int bend_bound;
    int depth = 0;
    bool exhausted = false;
    std::int64_t slack_discoveries = 0;
};

inline DensityReport build_density_report(const PackingCensus& census, int lambda = 1) {
    DensityReport r;
    const CoveringData& cd = census.cover;
    r.cover_label = cd.order.table_ref;
    r.disc_abs = cd.order.disc_abs;
    r.nrm_u = cd.nrm_u;
    r.cell_volume_squared = cell_volume_sq(cd);
    r.cell_vol = cell_volume(cd);
    r.table = partial_density(census);
    r.fit = bend_census_fit(census, lambda);
    if (r.fit.fittable) r.model = density_model(cd, r.fit.alpha, lambda, r.fit.bend_quantum);
    r.bend_bound = census.bend_bound;
    r.depth = census.depth_reached;
    r.exhausted = census.frontier_exhausted;
    r.slack_discoveries = census.slack_discoveries;
    return r;
}

}  // namespace apack
