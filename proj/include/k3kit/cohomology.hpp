#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <vector>

#include "k3kit/diophantine.hpp"
#include "k3kit/errors.hpp"
#include "k3kit/numeric.hpp"

namespace k3kit::cohom {

/// Monodromy exponents (mod 1, balanced to [-1/2,1/2)) of a flat unitary
/// character along the two torus generators. The mode-n twist of the normal
/// bundle carries (theta1, theta2) = (-n p, -n q) mod 1.
struct FlatCharacter {
    double theta1 = 0, theta2 = 0;

    static FlatCharacter for_mode(const dio::DiophantinePair& pair, long long n) {
        FlatCharacter c;
        c.theta1 = static_cast<double>(balanced_frac(quad(-n) * pair.p_hi));
        c.theta2 = static_cast<double>(balanced_frac(quad(-n) * pair.q_hi));
        return c;
    }
};

using ModeIndex = std::pair<int, int>;

/// Finitely supported Fourier data of a character-twisted function on the
/// real 2-torus: f(x) = sum c_m exp(2 pi i ((m1+theta1) x1 + (m2+theta2) x2)).
struct TorusFourierSection {
    FlatCharacter character;
    std::map<ModeIndex, cx> coeffs;

    double sup_norm_estimate() const {  // l1 bound on the sup norm
        double s = 0;
        for (const auto& [m, c] : coeffs) s += std::abs(c);
        return s;
    }
};

/// Constant in |kappa_m| = const(tau) * |(m2+theta2) - (m1+theta1) tau|.
inline double kappa_norm_constant(cx tau) { return pi / tau.imag(); }

/// Eigenvalue of the twisted dbar operator on the basis exponential indexed
/// by m, with z = x1 + tau x2:
///   kappa_m = (pi / Im tau) ((m1+theta1) tau - (m2+theta2)).
/// kappa_m = 0 iff (m1+theta1) tau = (m2+theta2).
inline cx dbar_eigenvalue(cx tau, const FlatCharacter& ch, ModeIndex m) {
    return (pi / tau.imag()) * ((double(m.first) + ch.theta1) * tau -
                                (double(m.second) + ch.theta2));
}

/// Diagonal solve u_m = f_m / kappa_m. Exact kernel modes with nonzero data
/// are obstructed (ZeroMode); nonzero eigenvalues below the floor are treated
/// as resonances rather than divided through.
inline TorusFourierSection solve_twisted_dbar(cx tau, const TorusFourierSection& f,
                                              double floor = 1e-14) {
    TorusFourierSection u;
    u.character = f.character;
    for (const auto& [m, c] : f.coeffs) {
        if (c == cx(0, 0)) continue;
        cx k = dbar_eigenvalue(tau, f.character, m);
        double ak = std::abs(k);
        if (ak == 0) throw ZeroMode();
        if (ak < floor) throw Resonance(m.first, m.second);
        u.coeffs[m] = c / k;
    }
    return u;
}

/// Coefficientwise residual of dbar u = f, relative to the data size.
inline double solve_residual(cx tau, const TorusFourierSection& u, const TorusFourierSection& f) {
    double num = 0, den = 0;
    for (const auto& [m, c] : f.coeffs) den = std::max(den, std::abs(c));
    std::map<ModeIndex, cx> r;
    for (const auto& [m, c] : u.coeffs) r[m] = dbar_eigenvalue(tau, u.character, m) * c;
    for (const auto& [m, c] : f.coeffs) r[m] -= c;
    for (const auto& [m, c] : r) num = std::max(num, std::abs(c));
    return den == 0 ? num : num / den;
}

struct ModeRow {
    long long n = 0;
    double denominator = 0;  // min |kappa_m| over the support
    double g_norm = 0;       // sup-norm estimate of the solution
    double bound = 0;        // K_hat * M * n^alpha_hat / ell^n
};

/// Per-mode solve report with the empirically fitted Ueda-type growth bound
/// ||g_n|| <= K_hat * M * n^alpha_hat / ell^n, M = max_n ||f_n|| ell^n.
struct SeriesSolveReport {
    std::vector<ModeRow> modes;
    double K_hat = 0, alpha_hat = 0;
    double M = 0;
    double ell = 0;
    double certified_radius = 0;
    double largest_neglected_inv_kappa = 0;  // conditioning indicator
};

namespace detail {

inline void fit_growth_bound(SeriesSolveReport& rep) {
    // r_n := ||g_n|| ell^n / M must satisfy r_n <= K_hat n^alpha_hat.
    // alpha_hat is the largest observed log r_n / log n (n >= 2, clamped at
    // 0), then K_hat = max r_n n^(-alpha_hat); the bound holds by
    // construction on every listed mode.
    if (rep.M == 0) {
        rep.K_hat = rep.alpha_hat = 0;
        for (auto& row : rep.modes) row.bound = 0;
        return;
    }
    double alpha = 0;
    std::vector<double> logr(rep.modes.size());
    for (std::size_t i = 0; i < rep.modes.size(); ++i) {
        const auto& row = rep.modes[i];
        logr[i] = row.g_norm == 0 ? -std::numeric_limits<double>::infinity()
                                  : std::log(row.g_norm) + double(row.n) * std::log(rep.ell) -
                                        std::log(rep.M);
        if (row.n >= 2 && std::isfinite(logr[i]))
            alpha = std::max(alpha, logr[i] / std::log(double(row.n)));
    }
    double logK = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rep.modes.size(); ++i)
        if (std::isfinite(logr[i]))
            logK = std::max(logK, logr[i] - alpha * std::log(double(rep.modes[i].n)));
    rep.alpha_hat = alpha;
    rep.K_hat = std::isfinite(logK) ? std::exp(logK) : 0;
    for (auto& row : rep.modes)
        row.bound = rep.K_hat * rep.M * std::exp(alpha * std::log(double(row.n)) -
                                                 double(row.n) * std::log(rep.ell));
}

inline void check_not_torsion(const dio::DiophantinePair& pair, long long n) {
    if (pair.exactness != dio::Exactness::rational) return;
    if (denominator(Rational(n) * pair.p_rat) == 1 && denominator(Rational(n) * pair.q_rat) == 1)
        throw TorsionLevel(n);
}

} // namespace detail

/// Solves the vertical modes n = 1..N produced by `mode_at` and fits the
/// growth bound. Characters must be the mode-n twists of the pair.
inline SeriesSolveReport solve_vertical_series(cx tau, const dio::DiophantinePair& pair,
                                               const std::function<TorusFourierSection(long long)>& mode_at,
                                               long long n_modes, double ell,
                                               double floor = 1e-14) {
    if (ell <= 0) throw Error("solve_vertical_series requires ell > 0");
    SeriesSolveReport rep;
    rep.ell = rep.certified_radius = ell;
    rep.modes.reserve(static_cast<std::size_t>(n_modes));
    double logM = -std::numeric_limits<double>::infinity();
    for (long long n = 1; n <= n_modes; ++n) {
        detail::check_not_torsion(pair, n);
        TorusFourierSection f = mode_at(n);
        TorusFourierSection g = solve_twisted_dbar(tau, f, floor);
        ModeRow row;
        row.n = n;
        row.g_norm = g.sup_norm_estimate();
        double dmin = std::numeric_limits<double>::infinity();
        for (const auto& [m, c] : f.coeffs)
            if (c != cx(0, 0))
                dmin = std::min(dmin, std::abs(dbar_eigenvalue(tau, f.character, m)));
        row.denominator = std::isfinite(dmin) ? dmin : 0;
        double fn = f.sup_norm_estimate();
        if (fn > 0) logM = std::max(logM, std::log(fn) + double(n) * std::log(ell));
        // conditioning indicator: largest |kappa|^{-1} on the ring just
        // outside the truncated support
        int lo1 = 0, hi1 = 0, lo2 = 0, hi2 = 0;
        for (const auto& [m, c] : f.coeffs) {
            lo1 = std::min(lo1, m.first); hi1 = std::max(hi1, m.first);
            lo2 = std::min(lo2, m.second); hi2 = std::max(hi2, m.second);
        }
        for (int m1 = lo1 - 1; m1 <= hi1 + 1; ++m1)
            for (int m2 = lo2 - 1; m2 <= hi2 + 1; ++m2) {
                if (m1 != lo1 - 1 && m1 != hi1 + 1 && m2 != lo2 - 1 && m2 != hi2 + 1) continue;
                double ak = std::abs(dbar_eigenvalue(tau, f.character, {m1, m2}));
                if (ak > 0)
                    rep.largest_neglected_inv_kappa =
                        std::max(rep.largest_neglected_inv_kappa, 1.0 / ak);
            }
        rep.modes.push_back(row);
    }
    rep.M = std::isfinite(logM) ? std::exp(logM) : 0;
    detail::fit_growth_bound(rep);
    return rep;
}

inline SeriesSolveReport solve_vertical_series(cx tau, const dio::DiophantinePair& pair,
                                               const std::vector<TorusFourierSection>& modes,
                                               double ell, double floor = 1e-14) {
    return solve_vertical_series(
        tau, pair, [&](long long n) { return modes[static_cast<std::size_t>(n - 1)]; },
        static_cast<long long>(modes.size()), ell, floor);
}

/// Splits off the n = 0 datum (the class on C, untouched) and certifies that
/// the vertical part n >= 1 is exact: the bundle datum is pulled back from C.
struct PullbackCertificate {
    TorusFourierSection base_class;
    SeriesSolveReport report;
};

inline PullbackCertificate certify_pullback_triviality(const std::vector<TorusFourierSection>& series,
                                                       cx tau, const dio::DiophantinePair& pair,
                                                       double ell, double floor = 1e-14) {
    if (series.empty()) throw Error("certify_pullback_triviality: empty series");
    PullbackCertificate cert;
    cert.base_class = series.front();
    std::vector<TorusFourierSection> rest(series.begin() + 1, series.end());
    cert.report = solve_vertical_series(tau, pair, rest, ell, floor);
    return cert;
}

} // namespace k3kit::cohom
