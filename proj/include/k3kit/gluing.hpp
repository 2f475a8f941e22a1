#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <set>
#include <vector>

#include "k3kit/diophantine.hpp"
#include "k3kit/errors.hpp"
#include "k3kit/geometry.hpp"
#include "k3kit/numeric.hpp"

namespace k3kit::glue {

using lat::Side;

/// Parameters of the glued pair: linearized neighborhoods of radius R,
/// gluing fiber s, translation xi.
struct GluingConfig {
    cx tau{0, 1};
    dio::DiophantinePair pair;
    double R = 2;
    cx s{0.01, 0};
    cx xi{0, 0};

    void validate() const {
        if (tau.imag() <= 0) throw Error("GluingConfig: Im tau must be positive");
        if (R <= 1) throw Error("GluingConfig: R must exceed 1");
        double as = std::abs(s);
        if (as <= 0 || as >= 1) throw Error("GluingConfig: need 0 < |s| < 1");
    }
    double sqrt_abs_s() const { return std::sqrt(std::abs(s)); }
    double s_phase_turns() const { return frac(std::arg(s) / (2.0 * pi)); }
};

enum class Chart { Wplus, Wminus, Vfamily };

/// Point in a chart. The w-coordinate of a W-chart is held in polar form
/// relative to the symmetric radius sqrt|s|:
///     w = sqrt|s| * exp(log_mod) * exp(2 pi i phase).
/// Deck transformations only rotate the phase and the gluing w -> s/w only
/// negates log_mod, so |w|-level identities hold exactly. A Vfamily point
/// stores the w+-polar data together with its fiber value s; the w- slot is
/// implied by w+ w- = s, which makes the fiber identity structural.
struct ChartPoint {
    Chart chart = Chart::Wplus;
    cx z{0, 0};
    double log_mod = 0;
    double phase = 0;  // turns
    cx fiber_s{0, 0};  // Vfamily only

    static ChartPoint from_w(Chart c, cx z, cx w, const GluingConfig& cfg) {
        if (std::abs(w) <= 0) throw Error("ChartPoint: w must be nonzero");
        ChartPoint pt;
        pt.chart = c;
        pt.z = z;
        pt.log_mod = std::log(std::abs(w) / cfg.sqrt_abs_s());
        pt.phase = frac(std::arg(w) / (2.0 * pi));
        return pt;
    }
    double w_mod(const GluingConfig& cfg) const { return cfg.sqrt_abs_s() * std::exp(log_mod); }
    cx w(const GluingConfig& cfg) const { return w_mod(cfg) * cis_turns(phase); }
    Side side() const {
        if (chart == Chart::Vfamily) throw Error("family point has no single side");
        return chart == Chart::Wplus ? Side::plus : Side::minus;
    }
};

/// Moves z into the fundamental parallelogram {x1 + tau x2 : 0 <= x_i < 1}
/// and rotates the w-phase by the deck factors exp(-+(k1 p + k2 q) 2 pi i);
/// log_mod is untouched, so |w| is preserved exactly.
inline ChartPoint normalize_point(const GluingConfig& cfg, const ChartPoint& pt) {
    if (pt.chart == Chart::Vfamily) throw Error("normalize_point expects a W-chart point");
    double x2 = pt.z.imag() / cfg.tau.imag();
    double x1 = pt.z.real() - x2 * cfg.tau.real();
    double k1 = std::floor(x1), k2 = std::floor(x2);
    ChartPoint out = pt;
    out.z = cx(x1 - k1, 0) + (x2 - k2) * cfg.tau;
    double sign = pt.chart == Chart::Wplus ? -1.0 : 1.0;
    out.phase = frac(pt.phase + sign * (k1 * cfg.pair.p() + k2 * cfg.pair.q()));
    return out;
}

struct RegionTags {
    bool in_W = false;    //  |w| < R
    bool in_Ms = false;   //  |w| > sqrt|s|/R  (complement of the deleted disc)
    bool in_Vs = false;   //  sqrt|s|/R < |w| < sqrt|s| R, both strict
    bool outside = false; //  not in M_s
};

inline RegionTags region_of(const GluingConfig& cfg, const ChartPoint& pt) {
    if (pt.chart == Chart::Vfamily) throw Error("region_of expects a W-chart point");
    const double logR = std::log(cfg.R);
    RegionTags t;
    t.in_W = pt.log_mod < logR - std::log(cfg.sqrt_abs_s());
    t.in_Ms = pt.log_mod > -logR;
    t.in_Vs = pt.log_mod > -logR && pt.log_mod < logR;
    t.outside = !t.in_Ms;
    return t;
}

/// The gluing biholomorphism f_s : V_s^+ -> V_s^-,
/// [(z+,w+)] -> [(z+ + xi, s/w+)], normalized afterwards.
inline ChartPoint glue_fs(const GluingConfig& cfg, const ChartPoint& pt) {
    if (pt.chart != Chart::Wplus) throw Error("glue_fs expects a V_s^+ point");
    if (!region_of(cfg, pt).in_Vs) throw OutOfAnnulus();
    ChartPoint out;
    out.chart = Chart::Wminus;
    out.z = pt.z + cfg.xi;
    out.log_mod = -pt.log_mod;  // |s/w| = |s| / |w|, reflected about sqrt|s|
    out.phase = frac(cfg.s_phase_turns() - pt.phase);
    return out;
}

inline ChartPoint glue_fs_inverse(const GluingConfig& cfg, const ChartPoint& pt) {
    if (pt.chart != Chart::Wminus) throw Error("glue_fs_inverse expects a V_s^- point");
    if (!region_of(cfg, pt).in_Vs) throw OutOfAnnulus();
    ChartPoint out;
    out.chart = Chart::Wplus;
    out.z = pt.z - cfg.xi;
    out.log_mod = -pt.log_mod;
    out.phase = frac(cfg.s_phase_turns() - pt.phase);
    return out;
}

/// Product of the two moduli across the gluing, evaluated through the stored
/// representation; equals |s| exactly because log_mod negates.
inline double glued_modulus_product(const GluingConfig& cfg, const ChartPoint& plus,
                                    const ChartPoint& minus) {
    return std::abs(cfg.s) * std::exp(plus.log_mod + minus.log_mod);
}

namespace detail {
inline ChartPoint family_point(cx z, double log_mod, double phase, cx s) {
    ChartPoint pt;
    pt.chart = Chart::Vfamily;
    pt.z = z;
    pt.log_mod = log_mod;
    pt.phase = phase;
    pt.fiber_s = s;
    return pt;
}
} // namespace detail

/// Chart maps into the total family space:
///   f+ : ((z+,w+), s) -> [(z+, w+, s/w+)]
///   f- : ((z-,w-), s) -> [(z- - xi, s/w-, w-)]
/// The family point keeps (w+, s); w- = s/w+ is implied, so w+ w- = s holds
/// exactly. `enforce_region` pins the map to its chart domain
/// sqrt|s| R < |w^±| < R; the raw formulas are meaningful beyond it.
inline ChartPoint family_chart_plus(const GluingConfig& cfg, const ChartPoint& pt, cx s,
                                    bool enforce_region = true) {
    if (pt.chart != Chart::Wplus) throw Error("family_chart_plus expects a W+ point");
    GluingConfig at = cfg;
    at.s = s;
    double u = s == cfg.s ? pt.log_mod : std::log(pt.w_mod(cfg) / at.sqrt_abs_s());
    if (enforce_region && !(u > std::log(at.R) && pt.w_mod(cfg) < at.R)) throw OutOfRegion();
    return detail::family_point(pt.z, u, pt.phase, s);
}

inline ChartPoint family_chart_minus(const GluingConfig& cfg, const ChartPoint& pt, cx s,
                                     bool enforce_region = true) {
    if (pt.chart != Chart::Wminus) throw Error("family_chart_minus expects a W- point");
    GluingConfig at = cfg;
    at.s = s;
    double u = s == cfg.s ? pt.log_mod : std::log(pt.w_mod(cfg) / at.sqrt_abs_s());
    if (enforce_region && !(u > std::log(at.R) && pt.w_mod(cfg) < at.R)) throw OutOfRegion();
    // w- is the stored coordinate; the w+ slot carries s/w-
    return detail::family_point(pt.z - cfg.xi, -u, frac(at.s_phase_turns() - pt.phase), s);
}

/// w+ and w- coordinates of a family point; their product is the fiber.
inline std::pair<cx, cx> family_w_coords(const ChartPoint& fam) {
    if (fam.chart != Chart::Vfamily) throw Error("family_w_coords expects a family point");
    double r = std::sqrt(std::abs(fam.fiber_s));
    double sphase = frac(std::arg(fam.fiber_s) / (2.0 * pi));
    cx wp = r * std::exp(fam.log_mod) * cis_turns(fam.phase);
    cx wm = r * std::exp(-fam.log_mod) * cis_turns(frac(sphase - fam.phase));
    return {wp, wm};
}

/// Inverse of f- on its image (the w- slot must lie in the chart range when
/// `enforce_region` is set).
inline ChartPoint family_chart_minus_inverse(const GluingConfig& cfg, const ChartPoint& fam,
                                             bool enforce_region = true) {
    if (fam.chart != Chart::Vfamily) throw Error("expects a family point");
    GluingConfig at = cfg;
    at.s = fam.fiber_s;
    if (enforce_region &&
        !(-fam.log_mod > std::log(at.R) && at.sqrt_abs_s() * std::exp(-fam.log_mod) < at.R))
        throw OutOfRegion();
    ChartPoint out;
    out.chart = Chart::Wminus;
    out.z = fam.z + cfg.xi;
    out.log_mod = -fam.log_mod;
    out.phase = frac(at.s_phase_turns() - fam.phase);
    return out;
}

/// Ratio f_s^*(dz^- ^ dw^-/w^-) / (dz^+ ^ dw^+/w^+), evaluated from the
/// closed-form partials of glue_fs; the expected value is -1 at every point:
/// d(s/w) = -(s/w^2) dw and division by s/w leaves -dw/w.
inline cx two_form_jacobian(const GluingConfig& cfg, const ChartPoint& pt) {
    if (!region_of(cfg, pt).in_Vs) throw OutOfAnnulus();
    cx wp = pt.w(cfg);
    cx dwm_dwp = -cfg.s / (wp * wp);          // d(s/w+)/dw+; dz-/dz+ = 1
    cx wm = glue_fs(cfg, pt).w(cfg);
    return dwm_dwp * wp / wm;
}

/// Traces the immersed line F(z) = [(z, w0)] through the deck normalization
/// and returns torus coordinates (x1 mod 1, x2 mod 1, arg(w)/2pi mod 1).
/// Sampling is a deterministic square grid with irrational spacing whose box
/// side doubles as the sample count quadruples; the seed shifts the grid
/// origin. |w| is constant along the output by construction.
inline std::vector<std::array<double, 3>> trace_leaf(const GluingConfig& cfg, cx w0,
                                                     long long n_samples, std::uint64_t seed) {
    ChartPoint base = ChartPoint::from_w(Chart::Wplus, cx(0, 0), w0, cfg);
    double logR = std::log(cfg.R);
    if (!(base.log_mod > -logR && base.w_mod(cfg) < cfg.R)) throw OutOfAnnulus();
    const double spacing = 0.6180339887498949;  // 1/golden, avoids lattice locking
    long long k = 1;
    while (k * k < n_samples) ++k;
    std::uint64_t state = seed * 0x9e3779b97f4a7c15ULL + 1;
    double ox = double(splitmix64(state) >> 11) * 0x1.0p-53;
    double oy = double(splitmix64(state) >> 11) * 0x1.0p-53;
    std::vector<std::array<double, 3>> out;
    out.reserve(static_cast<std::size_t>(n_samples));
    const double half = double(k - 1) / 2.0;
    for (long long i = 0; i < k && static_cast<long long>(out.size()) < n_samples; ++i)
        for (long long j = 0; j < k && static_cast<long long>(out.size()) < n_samples; ++j) {
            cx z((double(i) - half + ox) * spacing, (double(j) - half + oy) * spacing);
            ChartPoint pt = base;
            pt.z = z;
            ChartPoint norm = normalize_point(cfg, pt);
            double x2 = norm.z.imag() / cfg.tau.imag();
            double x1 = norm.z.real() - x2 * cfg.tau.real();
            out.push_back({frac(x1), frac(x2), norm.phase});
        }
    return out;
}

/// Box-counting discrepancy over the dyadic boxes of depth <= 4 per axis:
/// max over boxes prod_i [a_i 2^{-d_i}, (a_i+1) 2^{-d_i}) of
/// |empirical - volume|. Counting is exact via a depth-4 histogram.
inline double discrepancy(const std::vector<std::array<double, 3>>& points) {
    if (points.empty()) throw Error("discrepancy of an empty point set");
    constexpr int D = 4, G = 1 << D;
    static_assert(G == 16);
    std::vector<long long> hist(G * G * G, 0);
    for (const auto& pt : points) {
        int a = std::min(G - 1, int(pt[0] * G));
        int b = std::min(G - 1, int(pt[1] * G));
        int c = std::min(G - 1, int(pt[2] * G));
        ++hist[(a * G + b) * G + c];
    }
    // summed-area table, indices are exclusive upper corners
    std::vector<long long> pref((G + 1) * (G + 1) * (G + 1), 0);
    auto P = [&](int a, int b, int c) -> long long& { return pref[(a * (G + 1) + b) * (G + 1) + c]; };
    for (int a = 1; a <= G; ++a)
        for (int b = 1; b <= G; ++b)
            for (int c = 1; c <= G; ++c)
                P(a, b, c) = hist[((a - 1) * G + (b - 1)) * G + (c - 1)] + P(a - 1, b, c) +
                             P(a, b - 1, c) + P(a, b, c - 1) - P(a - 1, b - 1, c) -
                             P(a - 1, b, c - 1) - P(a, b - 1, c - 1) + P(a - 1, b - 1, c - 1);
    auto box_count = [&](int a0, int a1, int b0, int b1, int c0, int c1) {
        return P(a1, b1, c1) - P(a0, b1, c1) - P(a1, b0, c1) - P(a1, b1, c0) + P(a0, b0, c1) +
               P(a0, b1, c0) + P(a1, b0, c0) - P(a0, b0, c0);
    };
    const double n = double(points.size());
    double worst = 0;
    for (int d1 = 0; d1 <= D; ++d1)
        for (int d2 = 0; d2 <= D; ++d2)
            for (int d3 = 0; d3 <= D; ++d3) {
                int w1 = G >> d1, w2 = G >> d2, w3 = G >> d3;
                double vol = 1.0 / double((1 << d1) * (1 << d2) * (1 << d3));
                for (int a = 0; a < (1 << d1); ++a)
                    for (int b = 0; b < (1 << d2); ++b)
                        for (int c = 0; c < (1 << d3); ++c) {
                            long long cnt = box_count(a * w1, (a + 1) * w1, b * w2, (b + 1) * w2,
                                                      c * w3, (c + 1) * w3);
                            worst = std::max(worst, std::abs(double(cnt) / n - vol));
                        }
            }
    return worst;
}

} // namespace k3kit::glue
