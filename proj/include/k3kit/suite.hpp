#pragma once

#include <chrono>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "k3kit/ampleness.hpp"
#include "k3kit/chern.hpp"
#include "k3kit/cohomology.hpp"
#include "k3kit/config.hpp"
#include "k3kit/gluing.hpp"
#include "k3kit/serialization.hpp"
#include "k3kit/theta.hpp"

namespace k3kit::suite {

using cfg::ToolConfig;
using ser::json;

struct CheckResult {
    std::string name;
    bool pass = false;
    double residual = 0;
    double time_ms = 0;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;
    bool all_pass = true;
};

namespace detail {

inline void run_check(SuiteReport& rep, const std::string& name,
                      const std::function<std::pair<bool, double>()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    r.name = name;
    try {
        auto [pass, residual] = body();
        r.pass = pass;
        r.residual = residual;
    } catch (const std::exception& e) {
        r.pass = false;
        r.residual = std::numeric_limits<double>::quiet_NaN();
        r.name += std::string(" [") + e.what() + "]";
    }
    r.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rep.checks.push_back(r);
    rep.all_pass = rep.all_pass && r.pass;
}

/// Admissible Hermitian data for the lattice of (tau, p, q): integer Im b,
/// Im(b tau), and a tuned so the third integrality value is an integer.
inline theta::HermitianData random_admissible_H(std::mt19937_64& rng, cx tau, double p, double q,
                                                bool allow_zero_b = true) {
    std::uniform_int_distribution<int> small(-3, 3);
    int n1 = small(rng), n2 = small(rng), k = small(rng);
    if (!allow_zero_b && n1 == 0 && n2 == 0) n1 = 1;
    theta::HermitianData H;
    H.b = cx((n2 - n1 * tau.real()) / tau.imag(), n1);
    H.a = (k - p * n2 + q * n1) / tau.imag();
    return H;
}

inline lat::SurfaceClass random_degree_matched_partner(std::mt19937_64& rng,
                                                       const lat::SurfaceClass& Lp) {
    std::uniform_int_distribution<long long> entry(-20, 20);
    lat::SurfaceClass Lm;
    Lm.side = lat::Side::minus;
    for (int i = 0; i < 10; ++i) Lm.q[i] = entry(rng);
    long long b = lat::degree_on_C(Lp);
    // pin q9 so the degrees match
    long long partial = 3 * Lm.q[0];
    for (int j = 1; j <= 8; ++j) partial -= Lm.q[j];
    Lm.q[9] = partial - b;
    return Lm;
}

} // namespace detail

inline SuiteReport run_lattice_suite(const ToolConfig& config) {
    SuiteReport rep;
    rep.suite = "lattice";
    detail::run_check(rep, "gram_even_unimodular_signature", [&] {
        const auto& g = lat::gram_matrix_k3();
        bool ok = g.even && abs(g.det) == 1 && g.signature.positive == 3 &&
                  g.signature.negative == 19 && g.signature.zero == 0;
        return std::make_pair(ok, 0.0);
    });
    detail::run_check(rep, "c_blocks_unimodular_negdef_e8", [&] {
        bool ok = true;
        for (auto side : {lat::Side::plus, lat::Side::minus}) {
            auto c = lat::c_basis_gram(side);
            xla::IMat m(8, std::vector<BigInt>(8));
            for (int i = 0; i < 8; ++i)
                for (int j = 0; j < 8; ++j) m[i][j] = c[i][j];
            auto sig = xla::signature_symmetric(m);
            ok = ok && xla::det_bareiss(m) == 1 && sig.positive == 0 && sig.negative == 8 &&
                 lat::matches_negated_e8_cartan(c);
        }
        return std::make_pair(ok, 0.0);
    });
    detail::run_check(rep, "decompose_reconstruction_orthogonal", [&] {
        std::mt19937_64 rng(config.seed);
        std::uniform_int_distribution<long long> entry(-100, 100);
        for (int trial = 0; trial < 1000; ++trial) {
            lat::SurfaceClass q;
            q.side = trial % 2 == 0 ? lat::Side::plus : lat::Side::minus;
            for (int i = 0; i < 10; ++i) q.q[i] = entry(rng);
            auto d = lat::decompose_surface_class(q);  // verifies reconstruction
            long long cE9 = static_cast<long long>(numerator(d.cE9 * Rational(1)));
            if (intersect_surface(q, lat::SurfaceClass::C(q.side)) != cE9) return std::make_pair(false, 1.0);
            if (intersect_surface(q, lat::SurfaceClass::E(9, q.side)) != q.q[9]) return std::make_pair(false, 1.0);
            if (lat::degree_on_C(q) != cE9) return std::make_pair(false, 1.0);
        }
        return std::make_pair(true, 0.0);
    });
    return rep;
}

inline SuiteReport run_theta_suite(const ToolConfig& config) {
    SuiteReport rep;
    rep.suite = "theta";
    theta::ToroidalLattice tl(config.geometry.tau, config.geometry.pair);
    const double p = config.geometry.pair.p(), q = config.geometry.pair.q();
    std::mt19937_64 rng(config.seed + 1);
    std::uniform_real_distribution<double> box(-1.5, 1.5), turn(0, 1);
    std::uniform_int_distribution<long long> kk(-2, 2);
    auto random_rho = [&] {
        theta::SemiCharacter rho;
        rho.rho1 = cis_turns(turn(rng));
        rho.rho2 = cis_turns(turn(rng));
        rho.rho3 = cis_turns(turn(rng));
        return rho;
    };
    auto random_x = [&] { return theta::C2{cx(box(rng), box(rng)), cx(box(rng), box(rng))}; };

    detail::run_check(rep, "cocycle_identity", [&] {
        double worst = 0;
        for (int t = 0; t < 500; ++t) {
            theta::HermitianData H = config.theta_override
                                         ? *config.theta_override
                                         : detail::random_admissible_H(rng, tl.tau, p, q);
            auto rho = random_rho();
            std::array<long long, 3> l1{kk(rng), kk(rng), kk(rng)}, l2{kk(rng), kk(rng), kk(rng)};
            auto x = random_x();
            std::array<long long, 3> sum{l1[0] + l2[0], l1[1] + l2[1], l1[2] + l2[2]};
            cx lhs = theta::detail::cocycle_eval_raw(H, rho, tl, sum, x);
            theta::C2 xs{x[0] + tl.vector(l2)[0], x[1] + tl.vector(l2)[1]};
            cx rhs = theta::detail::cocycle_eval_raw(H, rho, tl, l1, xs) *
                     theta::detail::cocycle_eval_raw(H, rho, tl, l2, x);
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(1e-300, std::abs(lhs)));
        }
        return std::make_pair(worst < config.tolerances.cocycle, worst);
    });
    detail::run_check(rep, "metric_invariance", [&] {
        double worst = 0;
        for (int t = 0; t < 500; ++t) {
            theta::HermitianData H = config.theta_override
                                         ? *config.theta_override
                                         : detail::random_admissible_H(rng, tl.tau, p, q);
            auto rho = random_rho();
            std::array<long long, 3> l{kk(rng), kk(rng), kk(rng)};
            auto x = random_x();
            cx zeta = cx(box(rng), box(rng));
            cx al = theta::detail::cocycle_eval_raw(H, rho, tl, l, x);
            theta::C2 xl{x[0] + tl.vector(l)[0], x[1] + tl.vector(l)[1]};
            double lhs = theta::metric_norm(H, xl, al * zeta);
            double rhs = theta::metric_norm(H, x, zeta);
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(1e-300, rhs));
        }
        return std::make_pair(worst < config.tolerances.cocycle, worst);
    });
    detail::run_check(rep, "intersections_closed_vs_quadrature", [&] {
        double worst = 0;
        for (int t = 0; t < 50; ++t) {
            theta::HermitianData H = detail::random_admissible_H(rng, tl.tau, p, q);
            auto closed = theta::intersection_numbers(H, tl);
            double w0 = 0.25 + 0.5 * turn(rng);
            worst = std::max(worst, std::abs(theta::integrate_chern_cycle(H, tl, theta::Cycle::ab, w0, 16) - closed.I_ab));
            worst = std::max(worst, std::abs(theta::integrate_chern_cycle(H, tl, theta::Cycle::bg, w0, 16) - closed.I_bg));
            worst = std::max(worst, std::abs(theta::integrate_chern_cycle(H, tl, theta::Cycle::ga, w0, 16) - closed.I_ga));
            for (double v : {closed.I_ab, closed.I_bg, closed.I_ga})
                if (!near_integer(v, config.tolerances.integrality)) return std::make_pair(false, v);
        }
        return std::make_pair(worst < config.tolerances.quadrature, worst);
    });
    detail::run_check(rep, "extendability_two_routes", [&] {
        for (int t = 0; t < 100; ++t) {
            theta::HermitianData H = detail::random_admissible_H(rng, tl.tau, p, q);
            theta::is_extendable(H, tl);  // throws if the routes disagree
        }
        return std::make_pair(true, 0.0);
    });
    detail::run_check(rep, "cocycle_negative_control", [&] {
        // deliberately non-integral H must violate the identity somewhere
        theta::HermitianData H;
        H.a = 0.7;
        H.b = cx(0.31, 2.2360679774997896);
        double worst = 0;
        for (int t = 0; t < 200; ++t) {
            auto rho = random_rho();
            std::array<long long, 3> l1{kk(rng), kk(rng), kk(rng)}, l2{kk(rng), kk(rng), kk(rng)};
            auto x = random_x();
            std::array<long long, 3> sum{l1[0] + l2[0], l1[1] + l2[1], l1[2] + l2[2]};
            cx lhs = theta::detail::cocycle_eval_raw(H, rho, tl, sum, x);
            theta::C2 xs{x[0] + tl.vector(l2)[0], x[1] + tl.vector(l2)[1]};
            cx rhs = theta::detail::cocycle_eval_raw(H, rho, tl, l1, xs) *
                     theta::detail::cocycle_eval_raw(H, rho, tl, l2, x);
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(1e-300, std::abs(lhs)));
        }
        return std::make_pair(worst > 1e-3, worst);
    });
    return rep;
}

inline SuiteReport run_cohomology_suite(const ToolConfig& config) {
    SuiteReport rep;
    rep.suite = "cohomology";
    const cx tau = config.geometry.tau;
    const auto& pair = config.geometry.pair;
    std::mt19937_64 rng(config.seed + 2);
    std::uniform_real_distribution<double> amp(-1, 1), th(-0.5, 0.5);
    std::uniform_int_distribution<int> mode(-6, 6);

    detail::run_check(rep, "roundtrip_manufactured", [&] {
        double worst = 0;
        for (int t = 0; t < 100; ++t) {
            cohom::TorusFourierSection f;
            f.character = {th(rng), th(rng)};
            for (int j = 0; j < 25; ++j) f.coeffs[{mode(rng), mode(rng)}] = cx(amp(rng), amp(rng));
            try {
                auto u = cohom::solve_twisted_dbar(tau, f, config.tolerances.resonance_floor);
                worst = std::max(worst, cohom::solve_residual(tau, u, f));
            } catch (const ZeroMode&) {
                --t;  // resample characters that hit the kernel exactly
            }
        }
        return std::make_pair(worst < 1e-12, worst);
    });
    detail::run_check(rep, "growth_bound_holds_n200", [&] {
        const double ell = 0.5, M = 1.0;
        auto mode_at = [&](long long n) {
            cohom::TorusFourierSection f;
            f.character = cohom::FlatCharacter::for_mode(pair, n);
            f.coeffs[{0, 0}] = cx(M * std::pow(ell, -double(n)), 0);
            return f;
        };
        auto repo = cohom::solve_vertical_series(tau, pair, mode_at, 200, ell);
        for (const auto& row : repo.modes)
            if (row.g_norm > row.bound * (1 + 1e-12)) return std::make_pair(false, row.g_norm);
        return std::make_pair(true, repo.alpha_hat);
    });
    detail::run_check(rep, "uniqueness_and_restore", [&] {
        cohom::TorusFourierSection f;
        f.character = {0.21, -0.37};
        for (int j = 0; j < 12; ++j) f.coeffs[{mode(rng), mode(rng)}] = cx(amp(rng), amp(rng));
        auto u1 = cohom::solve_twisted_dbar(tau, f);
        auto u2 = cohom::solve_twisted_dbar(tau, f);
        cohom::TorusFourierSection g = f;
        g.coeffs[{9, 9}] = cx(1, 1);
        g.coeffs.erase({9, 9});
        auto u3 = cohom::solve_twisted_dbar(tau, g);
        bool same = u1.coeffs == u2.coeffs && u1.coeffs == u3.coeffs;
        return std::make_pair(same, 0.0);
    });
    detail::run_check(rep, "kappa_min_tracks_pic0", [&] {
        double worst = 0;
        for (long long n = 1; n <= 100; ++n) {
            auto ch = cohom::FlatCharacter::for_mode(pair, n);
            double kmin = std::numeric_limits<double>::infinity();
            for (int m1 = -3; m1 <= 3; ++m1)
                for (int m2 = -3; m2 <= 3; ++m2)
                    kmin = std::min(kmin, std::abs(cohom::dbar_eigenvalue(tau, ch, {m1, m2})));
            double expect = cohom::kappa_norm_constant(tau) * dio::pic0_distance(tau, pair, n);
            worst = std::max(worst, std::abs(kmin - expect) / std::max(1e-30, expect));
        }
        return std::make_pair(worst < 1e-9, worst);
    });
    return rep;
}

inline SuiteReport run_gluing_suite(const ToolConfig& config) {
    SuiteReport rep;
    rep.suite = "gluing";
    const auto& gc = config.gluing;
    std::mt19937_64 rng(config.seed + 3);
    std::uniform_real_distribution<double> unit(0, 1), box(-3, 3);
    const double logR = std::log(gc.R);
    auto random_vs_point = [&] {
        glue::ChartPoint pt;
        pt.chart = glue::Chart::Wplus;
        pt.z = cx(box(rng), 0) + box(rng) * gc.tau;
        pt.log_mod = -logR + 2 * logR * unit(rng);
        pt.phase = unit(rng);
        return pt;
    };

    detail::run_check(rep, "modulus_product_exact", [&] {
        double worst = 0;
        for (int t = 0; t < 10000; ++t) {
            auto pt = random_vs_point();
            auto im = glue::glue_fs(gc, pt);
            worst = std::max(worst, std::abs(glue::glued_modulus_product(gc, pt, im) - std::abs(gc.s)));
        }
        return std::make_pair(worst == 0.0, worst);
    });
    detail::run_check(rep, "roundtrip_mod_deck", [&] {
        double worst = 0;
        for (int t = 0; t < 10000; ++t) {
            auto pt = glue::normalize_point(gc, random_vs_point());
            auto back = glue::normalize_point(gc, glue::glue_fs_inverse(gc, glue::glue_fs(gc, pt)));
            worst = std::max(worst, std::abs(back.z - pt.z));
            worst = std::max(worst, std::abs(back.log_mod - pt.log_mod));
            double dphase = std::abs(balanced_frac(back.phase - pt.phase));
            worst = std::max(worst, dphase);
        }
        return std::make_pair(worst < config.tolerances.exact_float, worst);
    });
    detail::run_check(rep, "normalize_preserves_modulus_idempotent", [&] {
        for (int t = 0; t < 10000; ++t) {
            auto pt = random_vs_point();
            auto n1 = glue::normalize_point(gc, pt);
            auto n2 = glue::normalize_point(gc, n1);
            if (n1.log_mod != pt.log_mod) return std::make_pair(false, 1.0);
            if (n2.z != n1.z || n2.phase != n1.phase || n2.log_mod != n1.log_mod)
                return std::make_pair(false, 2.0);
        }
        return std::make_pair(true, 0.0);
    });
    detail::run_check(rep, "two_form_jacobian_is_minus_one", [&] {
        double worst = 0;
        for (int t = 0; t < 1000; ++t) {
            auto pt = random_vs_point();
            worst = std::max(worst, std::abs(glue::two_form_jacobian(gc, pt) - cx(-1, 0)));
        }
        return std::make_pair(worst < config.tolerances.exact_float, worst);
    });
    detail::run_check(rep, "family_fiber_and_overlap", [&] {
        double worst = 0;
        for (int t = 0; t < 1000; ++t) {
            auto pt = random_vs_point();
            auto fam = glue::family_chart_plus(gc, pt, gc.s, false);
            if (fam.fiber_s != gc.s) return std::make_pair(false, 1.0);
            auto [wp, wm] = glue::family_w_coords(fam);
            worst = std::max(worst, std::abs(wp * wm - gc.s) / std::abs(gc.s));
            // f_-^{-1} o f_+ agrees with the gluing map
            auto via_family = glue::family_chart_minus_inverse(gc, fam, false);
            auto direct = glue::glue_fs(gc, pt);
            worst = std::max(worst, std::abs(via_family.z - direct.z));
            worst = std::max(worst, std::abs(via_family.log_mod - direct.log_mod));
            worst = std::max(worst, std::abs(balanced_frac(via_family.phase - direct.phase)));
        }
        return std::make_pair(worst < config.tolerances.exact_float, worst);
    });
    detail::run_check(rep, "leaf_modulus_drift_zero", [&] {
        auto pts = glue::trace_leaf(gc, cx(0.5 * (gc.sqrt_abs_s() + gc.R), 0), 1000, config.seed);
        double disc = glue::discrepancy(pts);
        return std::make_pair(disc < 1.0, disc);
    });
    return rep;
}

inline SuiteReport run_ampleness_suite(const ToolConfig& config) {
    SuiteReport rep;
    rep.suite = "ampleness";
    const auto& wp = config.weights;
    const auto& gc = config.gluing;
    std::mt19937_64 rng(config.seed + 4);
    std::uniform_real_distribution<double> unit(0, 1), sym(-3, 3);

    detail::run_check(rep, "regularized_max_properties", [&] {
        double eta = 0.1;
        for (int t = 0; t < 10000; ++t) {
            double x = sym(rng), y = sym(rng);
            double m = ample::regularized_max(x, y, eta);
            double mx = std::max(x, y);
            if (std::abs(x - y) >= 2 * eta && m != mx) return std::make_pair(false, m - mx);
            if (m < mx - 1e-12 || m > mx + eta + 1e-12) return std::make_pair(false, m - mx);
            if (ample::regularized_max(y, x, eta) != m) return std::make_pair(false, 1.0);
            double up = ample::regularized_max(x + 0.05, y, eta);
            if (up + 1e-12 < m) return std::make_pair(false, up - m);
            double xm = sym(rng), ym = sym(rng);
            double mid = ample::regularized_max((x + xm) / 2, (y + ym) / 2, eta);
            double avg = 0.5 * (m + ample::regularized_max(xm, ym, eta));
            if (mid > avg + 1e-12) return std::make_pair(false, mid - avg);
        }
        return std::make_pair(true, 0.0);
    });
    detail::run_check(rep, "psi_gluing_symmetry_exact", [&] {
        double worst = 0;
        const double logR = std::log(gc.R);
        for (int t = 0; t < 2000; ++t) {
            glue::ChartPoint pt;
            pt.chart = glue::Chart::Wplus;
            pt.z = cx(unit(rng), 0) + unit(rng) * gc.tau;
            pt.log_mod = -logR + 2 * logR * unit(rng);
            pt.phase = unit(rng);
            double lhs = ample::psi(glue::glue_fs(gc, pt), gc, wp, lat::Side::minus);
            double rhs = ample::psi(pt, gc, wp, lat::Side::plus);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        return std::make_pair(worst < config.tolerances.exact_float, worst);
    });
    detail::run_check(rep, "psi_hessian_matches_model", [&] {
        double worst = 0;
        for (int t = 0; t < 200; ++t) {
            glue::ChartPoint pt;
            pt.chart = glue::Chart::Wplus;
            pt.z = cx(unit(rng), 0) + unit(rng) * gc.tau;
            double tmod = gc.sqrt_abs_s() / gc.R +
                          unit(rng) * (wp.R2 * 0.9 - gc.sqrt_abs_s() / gc.R);
            pt.log_mod = std::log(tmod / gc.sqrt_abs_s());
            pt.phase = unit(rng);
            auto h = ample::psi_hessian_check(pt, gc, wp);
            double expect = 2.0 / (tmod * tmod);
            worst = std::max(worst, std::abs(h[1][1].real() - expect) / expect);
            worst = std::max(worst, std::abs(h[0][0].real()) / expect);
            worst = std::max(worst, std::abs(h[0][1]) / expect);
        }
        return std::make_pair(worst < 1e-5, worst);
    });
    detail::run_check(rep, "glued_weight_positive", [&] {
        auto audit = ample::audit_positivity(gc, wp, ample::DefaultSectionWeight{wp.b_over}, 500,
                                             config.seed + 5);
        return std::make_pair(audit.min_eig > 0, audit.min_eig);
    });
    return rep;
}

inline SuiteReport run_chern_suite(const ToolConfig& config) {
    SuiteReport rep;
    rep.suite = "chern";
    std::mt19937_64 rng(config.seed + 6);
    std::uniform_int_distribution<long long> entry(-20, 20);
    std::uniform_real_distribution<double> unit(-1, 1);
    auto random_pair = [&] {
        lat::SurfaceClass Lp;
        Lp.side = lat::Side::plus;
        for (int i = 0; i < 10; ++i) Lp.q[i] = entry(rng);
        return std::make_pair(Lp, detail::random_degree_matched_partner(rng, Lp));
    };

    detail::run_check(rep, "vanishing_blocks_and_degree_pairings", [&] {
        for (int t = 0; t < 200; ++t) {
            auto [Lp, Lm] = random_pair();
            auto c1 = chern::chern_class(Lp, Lm);
            long long b = lat::degree_on_C(Lp);
            lat::MarkedClass A_ab, A_bg, A_ga;
            A_ab.v[lat::kAab] = 1;
            A_bg.v[lat::kAbg] = 1;
            A_ga.v[lat::kAga] = 1;
            if (c1.v[lat::kAbg] != 0 || c1.v[lat::kBa] != 0 || c1.v[lat::kAga] != 0 ||
                c1.v[lat::kBb] != 0)
                return std::make_pair(false, 1.0);
            if (lat::intersect_marked(c1, A_ab) != b) return std::make_pair(false, 2.0);
            if (lat::intersect_marked(c1, A_bg) != 0 || lat::intersect_marked(c1, A_ga) != 0)
                return std::make_pair(false, 3.0);
        }
        return std::make_pair(true, 0.0);
    });
    detail::run_check(rep, "self_intersection_identity", [&] {
        for (int t = 0; t < 200; ++t) {
            auto [Lp, Lm] = random_pair();
            auto c1 = chern::chern_class(Lp, Lm);
            long long lhs = lat::intersect_marked(c1, c1);
            long long rhs = intersect_surface(Lp, Lp) + intersect_surface(Lm, Lm);
            if (lhs != rhs) return std::make_pair(false, double(lhs - rhs));
        }
        return std::make_pair(true, 0.0);
    });
    detail::run_check(rep, "sigma_orthogonality_symbolic_zero", [&] {
        auto Lp = lat::SurfaceClass::H(lat::Side::plus);
        auto Lm = lat::SurfaceClass::H(lat::Side::minus);
        auto res = chern::verify_sigma_orthogonality_symbolic(config.geometry, Lp, Lm,
                                                              config.tolerances.residual);
        return std::make_pair(res.is_zero(), double(res.terms.size()));
    });
    detail::run_check(rep, "sigma_orthogonality_numeric", [&] {
        double worst = 0;
        for (int t = 0; t < 50; ++t) {
            geo::GeometryParams g = config.geometry;
            g.p0_plus = cx(unit(rng), unit(rng));
            g.p0_minus = cx(unit(rng), unit(rng));
            for (int j = 0; j < 8; ++j) {
                g.p_plus[j] = cx(unit(rng), unit(rng));
                g.p_minus[j] = cx(unit(rng), unit(rng));
            }
            g.close_torrelation();
            g.x = cx(unit(rng), unit(rng));
            g.y = cx(unit(rng), unit(rng));
            g.xi.reset();
            auto [Lp, Lm] = random_pair();
            if (lat::degree_on_C(Lp) == 0) { --t; continue; }
            worst = std::max(worst, std::abs(chern::verify_sigma_orthogonality(g, Lp, Lm)));
        }
        return std::make_pair(worst < config.tolerances.residual, worst);
    });
    detail::run_check(rep, "xi_sensitivity", [&] {
        geo::GeometryParams g = config.geometry;
        auto Lp = lat::SurfaceClass::H(lat::Side::plus);
        auto Lm = lat::SurfaceClass::H(lat::Side::minus);
        if (!g.x) g.x = cx(0.3, 0.1);
        if (!g.y) g.y = cx(-0.2, 0.4);
        g.xi = geo::compute_xi(Lp, Lm, g) + cx(1e-3, 0);
        double res = std::abs(chern::verify_sigma_orthogonality(g, Lp, Lm));
        return std::make_pair(res >= 1e-4, res);
    });
    detail::run_check(rep, "picard_kernel_contains_c1_rank_le_2", [&] {
        auto Lp = lat::SurfaceClass::H(lat::Side::plus);
        auto Lm = lat::SurfaceClass::H(lat::Side::minus);
        auto sigma = chern::substitute_xifix_and_torrelation(
            chern::sigma_vector(config.geometry, config.tolerances.residual), Lp, Lm);
        auto declared = config.independent_symbols
                            ? *config.independent_symbols
                            : chern::default_independent_symbols();
        auto pic1 = chern::generic_picard_lattice(sigma, declared);
        auto pic2 = chern::generic_picard_lattice(sigma, declared);
        bool stable = pic1.rank == pic2.rank;
        for (std::size_t i = 0; stable && i < pic1.basis.size(); ++i)
            stable = pic1.basis[i].v == pic2.basis[i].v;
        bool ok = stable && pic1.rank >= 1 && pic1.rank <= 2 &&
                  chern::lattice_contains(pic1, chern::chern_class(Lp, Lm));
        return std::make_pair(ok, double(pic1.rank));
    });
    return rep;
}

inline SuiteReport run_suite(const ToolConfig& config, const std::string& which) {
    if (which == "lattice") return run_lattice_suite(config);
    if (which == "theta") return run_theta_suite(config);
    if (which == "cohomology") return run_cohomology_suite(config);
    if (which == "gluing") return run_gluing_suite(config);
    if (which == "ampleness") return run_ampleness_suite(config);
    if (which == "chern") return run_chern_suite(config);
    if (which == "all") {
        SuiteReport all;
        all.suite = "all";
        for (const char* name : {"lattice", "theta", "cohomology", "gluing", "ampleness", "chern"}) {
            SuiteReport sub = run_suite(config, name);
            for (auto& c : sub.checks) {
                c.name = std::string(name) + "." + c.name;
                all.checks.push_back(c);
            }
            all.all_pass = all.all_pass && sub.all_pass;
        }
        return all;
    }
    throw Error("unknown suite: " + which);
}

inline json to_json(const SuiteReport& rep, bool include_timings) {
    json checks = json::array();
    for (const auto& c : rep.checks) {
        json j{{"name", c.name}, {"pass", c.pass}, {"residual", c.residual}};
        if (include_timings) j["time_ms"] = c.time_ms;
        checks.push_back(j);
    }
    return json{{"suite", rep.suite}, {"all_pass", rep.all_pass}, {"checks", checks}};
}

/// Report of `lattice verify`.
inline json lattice_verify_json() {
    const auto& g = lat::gram_matrix_k3();
    json gram = json::array();
    for (int i = 0; i < 22; ++i) {
        json row = json::array();
        for (int j = 0; j < 22; ++j) row.push_back(g.gram[i][j]);
        gram.push_back(row);
    }
    return json{{"gram", gram},
                {"det", g.det.str()},
                {"signature", {g.signature.positive, g.signature.negative}},
                {"even", g.even},
                {"e8_check", lat::matches_negated_e8_cartan(lat::c_basis_gram())}};
}

} // namespace k3kit::suite
