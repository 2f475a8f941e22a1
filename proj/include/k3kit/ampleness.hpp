#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include "k3kit/errors.hpp"
#include "k3kit/gluing.hpp"
#include "k3kit/numeric.hpp"

namespace k3kit::ample {

/// Radii, gluing scale and weight coefficients of the metric construction:
/// 0 < sqrt(eps0) R < R1 < R2 < R, |s| < eps0. b_over is the curvature
/// coefficient pi (L.C) / Im tau of the base factor.
struct WeightParams {
    cx s{0.01, 0};
    double R1 = 0.5, R2 = 1.0, R = 2.0;
    double eps = 1e-3;
    double eps0 = 0.05;
    double c = 0.002;
    double b_over = 3 * pi;
    double eta = 0.5;  // regularized-max band half-width

    void validate() const {
        double as = std::abs(s);
        if (!(as > 0 && as < 1)) throw Error("WeightParams: need 0 < |s| < 1");
        if (!(eps0 > 0 && as < eps0)) throw Error("WeightParams: need |s| < eps0");
        if (!(std::sqrt(eps0) * R < R1 && R1 < R2 && R2 < R))
            throw Error("WeightParams: need sqrt(eps0) R < R1 < R2 < R");
        if (!(eps > 0 && c > 0 && b_over > 0 && eta > 0))
            throw Error("WeightParams: eps, c, b_over, eta must be positive");
    }
};

namespace detail {

// Mollified |t| with a C^1 polynomial kernel supported on [-a, a]:
// phi = |.| * rho_a with rho(s) = (15/16)(1-s^2)^2. Closed form on |u| <= 1:
// phi(a u) = a (15/8) [u I0(u) - I1(u) + 1/6], I0 = u - (2/3)u^3 + u^5/5,
// I1 = u^2/2 - u^4/2 + u^6/6. phi >= |t|, phi(0) = 0.3125 a, |phi'| <= 1,
// phi'' >= 0, and phi meets |t| to third order at |t| = a.
inline double mollified_abs(double t, double a) {
    double u = std::abs(t) / a;
    if (u >= 1.0) return std::abs(t);
    double I0 = u - (2.0 / 3.0) * u * u * u + std::pow(u, 5) / 5.0;
    double I1 = u * u / 2.0 - std::pow(u, 4) / 2.0 + std::pow(u, 6) / 6.0;
    return a * (15.0 / 8.0) * (u * I0 - I1 + 1.0 / 6.0);
}

} // namespace detail

/// Smooth symmetric convex regularization of max(x,y): equals max whenever
/// |x-y| >= 2 eta (exactly, by construction), and max <= M_eta <= max + eta;
/// monotone in each argument.
inline double regularized_max(double x, double y, double eta) {
    if (eta <= 0) throw Error("regularized_max requires eta > 0");
    if (std::abs(x - y) >= 2.0 * eta) return std::max(x, y);
    return 0.5 * ((x + y) + detail::mollified_abs(x - y, 2.0 * eta));
}

/// Radial weight profile: (log(t^2/|s|))^2 below R2, constant beyond R, and a
/// monotone C^1 quintic-smoothstep blend of the derivative on [R2, R].
inline double lambda_weight(double t, const WeightParams& wp) {
    if (t <= 0) throw Error("lambda_weight requires t > 0");
    const double as = std::abs(wp.s);
    if (t < wp.R2) {
        double u = std::log(t * t / as);
        return u * u;
    }
    const double lamR2 = [&] {
        double u = std::log(wp.R2 * wp.R2 / as);
        return u * u;
    }();
    const double dlamR2 = 4.0 * std::log(wp.R2 * wp.R2 / as) / wp.R2;
    const double span = wp.R - wp.R2;
    double x = std::min(1.0, (t - wp.R2) / span);
    // integral of 1 - smoothstep5: G(x) = x - (x^6 - 3 x^5 + 2.5 x^4)
    double G = x - (std::pow(x, 6) - 3.0 * std::pow(x, 5) + 2.5 * std::pow(x, 4));
    return lamR2 + dlamR2 * span * G;
}

/// psi = lambda(|w|) on the W-chart; the inner branch is evaluated straight
/// from the stored log-modulus, log(|w|^2/|s|) = 2u, so the gluing symmetry
/// psi^-(g(z), s/w) = psi^+(z, w) is exact.
inline double psi(const glue::ChartPoint& pt, const glue::GluingConfig& cfg,
                  const WeightParams& wp, lat::Side side) {
    if (pt.chart == glue::Chart::Vfamily) throw Error("psi expects a W-chart point");
    if (pt.side() != side) throw Error("psi: point side does not match");
    if (wp.s != cfg.s) throw Error("psi: WeightParams.s differs from GluingConfig.s");
    if (!std::isfinite(pt.log_mod)) throw OnZeroSection();
    const double uR2 = std::log(wp.R2 / cfg.sqrt_abs_s());
    if (pt.log_mod < uR2) {
        double v = 2.0 * pt.log_mod;
        return v * v;
    }
    return lambda_weight(pt.w_mod(cfg), wp);
}

using Hermitian2 = std::array<std::array<cx, 2>, 2>;

inline std::pair<double, double> hermitian_eigenvalues(const Hermitian2& h) {
    double A = h[0][0].real(), C = h[1][1].real();
    double disc = std::sqrt((A - C) * (A - C) + 4.0 * std::norm(h[0][1]));
    return {(A + C - disc) / 2.0, (A + C + disc) / 2.0};
}

/// Complex Hessian (d^2 f / d zeta_i d zeta_j~) of a real-valued function of
/// (z, w) by central finite differences at steps (hz, hw).
inline Hermitian2 complex_hessian(const std::function<double(cx, cx)>& f, cx z, cx w, double hz,
                                  double hw) {
    auto at = [&](double az, double bz, double aw, double bw) {
        return f(z + cx(az, bz), w + cx(aw, bw));
    };
    const double f0 = at(0, 0, 0, 0);
    auto second = [&](int coord, int part, double h) {  // d^2/dt^2 along one real axis
        double fp = coord == 0 ? (part == 0 ? at(h, 0, 0, 0) : at(0, h, 0, 0))
                               : (part == 0 ? at(0, 0, h, 0) : at(0, 0, 0, h));
        double fm = coord == 0 ? (part == 0 ? at(-h, 0, 0, 0) : at(0, -h, 0, 0))
                               : (part == 0 ? at(0, 0, -h, 0) : at(0, 0, 0, -h));
        return (fp - 2.0 * f0 + fm) / (h * h);
    };
    auto mixed = [&](int p1, int p2) {  // d^2/(d z-axis p1)(d w-axis p2)
        auto pick = [&](double sz, double sw) {
            double az = p1 == 0 ? sz * hz : 0, bz = p1 == 1 ? sz * hz : 0;
            double aw = p2 == 0 ? sw * hw : 0, bw = p2 == 1 ? sw * hw : 0;
            return at(az, bz, aw, bw);
        };
        return (pick(1, 1) - pick(1, -1) - pick(-1, 1) + pick(-1, -1)) / (4.0 * hz * hw);
    };
    Hermitian2 out;
    out[0][0] = cx((second(0, 0, hz) + second(0, 1, hz)) / 4.0, 0);
    out[1][1] = cx((second(1, 0, hw) + second(1, 1, hw)) / 4.0, 0);
    double faa = mixed(0, 0), fbb = mixed(1, 1), fab = mixed(1, 0), fba = mixed(0, 1);
    out[0][1] = cx((faa + fbb) / 4.0, (fba - fab) / 4.0);
    out[1][0] = std::conj(out[0][1]);
    return out;
}

/// Finite-difference complex Hessian of psi at a point with 0 < |w| < R2;
/// the closed-form value is [[0,0],[0,2/|w|^2]].
inline Hermitian2 psi_hessian_check(const glue::ChartPoint& pt, const glue::GluingConfig& cfg,
                                    const WeightParams& wp) {
    double t = pt.w_mod(cfg);
    if (!(t > 0 && t < wp.R2)) throw Error("psi_hessian_check requires 0 < |w| < R2");
    auto f = [&](cx, cx w) {
        double u = std::log(std::norm(w) / std::abs(wp.s));
        return u * u;
    };
    return complex_hessian(f, pt.z, pt.w(cfg), 1e-4 * (1.0 + std::abs(pt.z)), 1e-4 * t);
}

/// Coefficient matrix diag(b_over, 2c/|w|^2) of the model Kaehler form
/// omega^± near C; positive definite on 0 < |w| < sqrt(eps0) R.
inline Hermitian2 model_kahler_form(const glue::ChartPoint& pt, const glue::GluingConfig& cfg,
                                    const WeightParams& wp) {
    double t = pt.w_mod(cfg);
    if (!(t > 0 && t < std::sqrt(wp.eps0) * wp.R)) throw OutOfRegion();
    Hermitian2 m{};
    m[0][0] = cx(wp.b_over, 0);
    m[1][1] = cx(2.0 * wp.c / (t * t), 0);
    return m;
}

/// Local weight of h_L in the default model: the base profile b_over |z|^2
/// shared with the h_C weight, the log|w|^2 pole profile of sections
/// vanishing on C, and a small smooth correction with strictly positive
/// complex Hessian. Sharing the base profile keeps the difference
/// phi_L - phi_C a function of |w| up to the small correction, so the
/// regularized-max branch geography is radial as in the construction.
struct DefaultSectionWeight {
    double b_over = 3 * pi;
    double kappa = 0.05;
    double ripple = 0.01;

    double operator()(cx z, cx w) const {
        double f = z.imag() * z.imag() + ripple * std::cos(2.0 * pi * z.real());
        return b_over * std::norm(z) + std::log(std::norm(w)) + kappa * (std::norm(w) + f);
    }
};

/// Local weight of pi^* h_C with curvature b_over i dz^dz~.
inline double base_weight(const WeightParams& wp, cx z) { return wp.b_over * std::norm(z); }

enum class Branch { L, C, blend };

struct GluedWeight {
    double value = 0;
    Branch branch = Branch::blend;
};

/// phi = M_eta(phi_L, phi_C + log eps): the weight of the regularized-max
/// metric h^{-1} = RegMax(h_L^{-1}, eps pi^* h_C^{-1}). Small eps pushes the
/// L-branch outward and leaves the C-branch near the curve.
inline GluedWeight glued_weight(const glue::ChartPoint& pt, const glue::GluingConfig& cfg,
                                const WeightParams& wp,
                                const std::function<double(cx, cx)>& phiL) {
    if (pt.chart == glue::Chart::Vfamily) throw Error("glued_weight expects a W-chart point");
    cx w = pt.w(cfg);
    double a = phiL(pt.z, w);
    double b = base_weight(wp, pt.z) + std::log(wp.eps);
    GluedWeight out;
    out.value = regularized_max(a, b, wp.eta);
    double diff = a - b;
    out.branch = diff >= 2.0 * wp.eta ? Branch::L : (diff <= -2.0 * wp.eta ? Branch::C : Branch::blend);
    return out;
}

struct PositivityAudit {
    double min_eig = std::numeric_limits<double>::infinity();
    double min_eig_inner = std::numeric_limits<double>::infinity();  // |w| <  R1
    double min_eig_mid = std::numeric_limits<double>::infinity();    // R1 <= |w| < R2
    double min_eig_blend = std::numeric_limits<double>::infinity();  // R2 <= |w| < R
    long long n_L = 0, n_C = 0, n_blend = 0;
    long long samples = 0;
};

/// Samples the complex Hessian of phi + c psi over the annulus
/// sqrt|s|/R < |w| < R and records the smallest eigenvalue per region plus
/// branch statistics. Steps are Richardson-checked: each Hessian is formed at
/// h and h/2 and extrapolated.
inline PositivityAudit audit_positivity(const glue::GluingConfig& cfg, const WeightParams& wp,
                                        const std::function<double(cx, cx)>& phiL,
                                        long long n_samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u_lo = -std::log(cfg.R), u_hi = std::log(cfg.R / cfg.sqrt_abs_s());
    auto total = [&](cx z, cx w) {
        double t = std::abs(w);
        double phi = regularized_max(phiL(z, w), base_weight(wp, z) + std::log(wp.eps), wp.eta);
        return phi + wp.c * lambda_weight(t, wp);
    };
    PositivityAudit audit;
    audit.samples = n_samples;
    for (long long i = 0; i < n_samples; ++i) {
        double x1 = unit(rng), x2 = unit(rng);
        cx z = cx(x1, 0) + x2 * cfg.tau;
        double u = u_lo + (u_hi - u_lo) * unit(rng);
        double t = cfg.sqrt_abs_s() * std::exp(u);
        cx w = t * cis_turns(unit(rng));
        double hz = 1e-4 * (1.0 + std::abs(z)), hw = 1e-4 * t;
        Hermitian2 h1 = complex_hessian(total, z, w, hz, hw);
        Hermitian2 h2 = complex_hessian(total, z, w, hz / 2, hw / 2);
        Hermitian2 h;
        for (int r = 0; r < 2; ++r)
            for (int c2 = 0; c2 < 2; ++c2) h[r][c2] = (4.0 * h2[r][c2] - h1[r][c2]) / 3.0;
        double eig = hermitian_eigenvalues(h).first;
        audit.min_eig = std::min(audit.min_eig, eig);
        if (t < wp.R1) audit.min_eig_inner = std::min(audit.min_eig_inner, eig);
        else if (t < wp.R2) audit.min_eig_mid = std::min(audit.min_eig_mid, eig);
        else audit.min_eig_blend = std::min(audit.min_eig_blend, eig);
        glue::ChartPoint pt = glue::ChartPoint::from_w(glue::Chart::Wplus, z, w, cfg);
        switch (glued_weight(pt, cfg, wp, phiL).branch) {
            case Branch::L: ++audit.n_L; break;
            case Branch::C: ++audit.n_C; break;
            default: ++audit.n_blend;
        }
    }
    return audit;
}

/// Line search for the psi-coefficient: the largest c on a geometric grid
/// whose sampled Hessian stays positive definite.
inline double choose_c(const glue::GluingConfig& cfg, WeightParams wp,
                       const std::function<double(cx, cx)>& phiL, long long n_samples,
                       std::uint64_t seed) {
    double best = 0;
    for (double cand = 1e-5; cand < 1.0; cand *= 2.0) {
        wp.c = cand;
        if (audit_positivity(cfg, wp, phiL, n_samples, seed).min_eig > 0) best = cand;
    }
    if (best == 0) throw Error("choose_c: no positive c found");
    return best;
}

} // namespace k3kit::ample
