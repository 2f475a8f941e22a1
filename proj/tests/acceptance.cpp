// Acceptance suite: one line per criterion, exit 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <vector>

#include "k3kit/ampleness.hpp"
#include "k3kit/chern.hpp"
#include "k3kit/cohomology.hpp"
#include "k3kit/diophantine.hpp"
#include "k3kit/gluing.hpp"
#include "k3kit/lattice.hpp"
#include "k3kit/theta.hpp"

using namespace k3kit;

namespace {

int failures = 0;

void criterion(int n, const char* desc, bool pass, double seconds, double limit) {
    bool ok = pass && seconds < limit;
    std::printf("[%s] criterion %2d: %s (%.2fs, limit %.0fs)%s\n", ok ? "PASS" : "FAIL", n, desc,
                seconds, limit, pass ? "" : " [condition failed]");
    if (!ok) ++failures;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

dio::DiophantinePair sqrt_pair() {
    return dio::DiophantinePair::decimal(sqrt(quad(2)) - 1, sqrt(quad(3)) - 1);
}

glue::GluingConfig fixture_gluing() {
    glue::GluingConfig gc;
    gc.tau = {0, 1};
    gc.pair = sqrt_pair();
    gc.R = 2.0;
    gc.s = {0.002, 0.0};
    gc.xi = {0.1, 0.05};
    return gc;
}

ample::WeightParams fixture_weights() {
    ample::WeightParams wp;
    wp.s = {0.002, 0.0};
    wp.R1 = 0.5;
    wp.R2 = 1.0;
    wp.R = 2.0;
    wp.eps = 0.05;
    wp.eps0 = 0.0035;
    wp.c = 0.002;
    wp.b_over = 3 * pi;
    wp.eta = 0.5;
    return wp;
}

theta::HermitianData admissible(std::mt19937_64& rng, const theta::ToroidalLattice& tl) {
    std::uniform_int_distribution<int> small(-3, 3);
    int n1 = small(rng), n2 = small(rng), k = small(rng);
    theta::HermitianData H;
    H.b = cx((n2 - n1 * tl.tau.real()) / tl.tau.imag(), n1);
    H.a = (k - tl.pair.p() * n2 + tl.pair.q() * n1) / tl.tau.imag();
    return H;
}

geo::GeometryParams fixture_geometry(std::uint64_t seed) {
    geo::GeometryParams g;
    g.tau = {0, 1};
    g.pair = sqrt_pair();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    g.p0_plus = {u(rng), u(rng)};
    g.p0_minus = {u(rng), u(rng)};
    for (int j = 0; j < 8; ++j) {
        g.p_plus[j] = {u(rng), u(rng)};
        g.p_minus[j] = {u(rng), u(rng)};
    }
    g.close_torrelation();
    g.x = cx(u(rng), u(rng));
    g.y = cx(u(rng), u(rng));
    return g;
}

lat::SurfaceClass random_degree_matched(std::mt19937_64& rng, const lat::SurfaceClass& Lp) {
    std::uniform_int_distribution<long long> entry(-20, 20);
    lat::SurfaceClass Lm;
    Lm.side = lat::Side::minus;
    for (int i = 0; i < 10; ++i) Lm.q[i] = entry(rng);
    long long partial = 3 * Lm.q[0];
    for (int j = 1; j <= 8; ++j) partial -= Lm.q[j];
    Lm.q[9] = partial - lat::degree_on_C(Lp);
    return Lm;
}

void run_criterion_1() {
    Timer t;
    const auto& g = lat::gram_matrix_k3();
    bool pass = g.even && abs(g.det) == 1 && g.signature.positive == 3 &&
                g.signature.negative == 19 && g.signature.zero == 0;
    for (auto side : {lat::Side::plus, lat::Side::minus}) {
        auto c = lat::c_basis_gram(side);
        xla::IMat m(8, std::vector<BigInt>(8));
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) m[i][j] = c[i][j];
        auto sig = xla::signature_symmetric(m);
        pass = pass && xla::det_bareiss(m) == 1 && sig.positive == 0 && sig.negative == 8 &&
               lat::matches_negated_e8_cartan(c);
    }
    criterion(1, "lattice: Gram even/unimodular/(3,19); C-blocks negated E8", pass, t.elapsed(), 1);
}

void run_criterion_2() {
    Timer t;
    theta::ToroidalLattice tl(cx(0, 1), sqrt_pair());
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.5, 1.5), turn(0, 1);
    std::uniform_int_distribution<long long> kk(-2, 2);
    auto rho_of = [&] {
        return theta::SemiCharacter{cis_turns(turn(rng)), cis_turns(turn(rng)), cis_turns(turn(rng))};
    };
    double worst_cocycle = 0, worst_metric = 0;
    for (int i = 0; i < 500; ++i) {
        auto H = admissible(rng, tl);
        auto rho = rho_of();
        std::array<long long, 3> l1{kk(rng), kk(rng), kk(rng)}, l2{kk(rng), kk(rng), kk(rng)};
        theta::C2 x{cx(u(rng), u(rng)), cx(u(rng), u(rng))};
        std::array<long long, 3> sum{l1[0] + l2[0], l1[1] + l2[1], l1[2] + l2[2]};
        cx lhs = theta::detail::cocycle_eval_raw(H, rho, tl, sum, x);
        theta::C2 xs{x[0] + tl.vector(l2)[0], x[1] + tl.vector(l2)[1]};
        cx rhs = theta::detail::cocycle_eval_raw(H, rho, tl, l1, xs) *
                 theta::detail::cocycle_eval_raw(H, rho, tl, l2, x);
        worst_cocycle = std::max(worst_cocycle, std::abs(lhs - rhs) / std::abs(lhs));
        cx zeta{u(rng), u(rng)};
        cx al = theta::detail::cocycle_eval_raw(H, rho, tl, l1, x);
        theta::C2 xl{x[0] + tl.vector(l1)[0], x[1] + tl.vector(l1)[1]};
        double m1 = theta::metric_norm(H, xl, al * zeta);
        double m2 = theta::metric_norm(H, x, zeta);
        worst_metric = std::max(worst_metric, std::abs(m1 - m2) / std::max(1e-300, m2));
    }
    double worst_bad = 0;
    theta::HermitianData bad{0.7, {0.31, std::sqrt(5.0)}, 0};
    for (int i = 0; i < 500; ++i) {
        auto rho = rho_of();
        std::array<long long, 3> l1{kk(rng), kk(rng), kk(rng)}, l2{kk(rng), kk(rng), kk(rng)};
        theta::C2 x{cx(u(rng), u(rng)), cx(u(rng), u(rng))};
        std::array<long long, 3> sum{l1[0] + l2[0], l1[1] + l2[1], l1[2] + l2[2]};
        cx lhs = theta::detail::cocycle_eval_raw(bad, rho, tl, sum, x);
        theta::C2 xs{x[0] + tl.vector(l2)[0], x[1] + tl.vector(l2)[1]};
        cx rhs = theta::detail::cocycle_eval_raw(bad, rho, tl, l1, xs) *
                 theta::detail::cocycle_eval_raw(bad, rho, tl, l2, x);
        worst_bad = std::max(worst_bad, std::abs(lhs - rhs) / std::abs(lhs));
    }
    bool pass = worst_cocycle < 1e-9 && worst_metric < 1e-9 && worst_bad > 1e-3;
    criterion(2, "theta: cocycle + metric invariance < 1e-9; negative control > 1e-3", pass,
              t.elapsed(), 5);
}

void run_criterion_3() {
    Timer t;
    theta::ToroidalLattice tl(cx(0, 1), sqrt_pair());
    std::mt19937_64 rng(303);
    double worst = 0;
    bool integers_ok = true;
    for (int i = 0; i < 50; ++i) {
        auto H = admissible(rng, tl);
        auto closed = theta::intersection_numbers(H, tl);
        worst = std::max(worst, std::abs(theta::integrate_chern_cycle(H, tl, theta::Cycle::ab, 0.5, 16) - closed.I_ab));
        worst = std::max(worst, std::abs(theta::integrate_chern_cycle(H, tl, theta::Cycle::bg, 0.5, 16) - closed.I_bg));
        worst = std::max(worst, std::abs(theta::integrate_chern_cycle(H, tl, theta::Cycle::ga, 0.5, 16) - closed.I_ga));
        integers_ok = integers_ok && near_integer(closed.I_ab, 1e-9) &&
                      near_integer(closed.I_bg, 1e-9) && near_integer(closed.I_ga, 1e-9);
    }
    // non-integral H: integrality_check fails and the pairings drift off Z
    std::uniform_real_distribution<double> u(0.1, 0.9);
    bool negative_ok = true;
    for (int i = 0; i < 20; ++i) {
        theta::HermitianData H{u(rng), {u(rng), u(rng) + 0.5}, 0};
        if (theta::integrality_check(H, tl).ok) continue;
        auto v = theta::intersection_numbers(H, tl);
        bool some_non_integer = !near_integer(v.I_ab, 1e-9) || !near_integer(v.I_bg, 1e-9) ||
                                !near_integer(v.I_ga, 1e-9);
        negative_ok = negative_ok && some_non_integer;
    }
    criterion(3, "theta: quadrature matches closed forms to 1e-6; integer iff integral",
              worst < 1e-6 && integers_ok && negative_ok, t.elapsed(), 10);
}

void run_criterion_4() {
    Timer t;
    theta::ToroidalLattice tl(cx(0, 1), sqrt_pair());
    std::mt19937_64 rng(404);
    bool pass = true;
    for (int i = 0; i < 100; ++i) {
        auto H = admissible(rng, tl);
        try {
            bool ext = theta::is_extendable(H, tl);  // throws if routes disagree
            pass = pass && (ext == (std::abs(H.b) <= 1e-9));
        } catch (const Error&) {
            pass = false;
        }
    }
    criterion(4, "theta: extendability <=> (I_bg, I_ga) = (0,0), two routes agree", pass,
              t.elapsed(), 5);
}

void run_criterion_5() {
    Timer t;
    cx tau{0, 1};
    std::mt19937_64 rng(505);
    std::uniform_real_distribution<double> amp(-1, 1), th(-0.5, 0.5);
    std::uniform_int_distribution<int> mode(-6, 6);
    double worst_rt = 0;
    for (int i = 0; i < 100; ++i) {
        cohom::TorusFourierSection f;
        f.character = {th(rng), th(rng)};
        for (int j = 0; j < 25; ++j) f.coeffs[{mode(rng), mode(rng)}] = cx(amp(rng), amp(rng));
        try {
            auto u = cohom::solve_twisted_dbar(tau, f);
            worst_rt = std::max(worst_rt, cohom::solve_residual(tau, u, f));
        } catch (const ZeroMode&) {
            --i;
        }
    }

    auto pair = sqrt_pair();
    const double ell = 0.5;
    auto mode_at = [&](long long n) {
        cohom::TorusFourierSection f;
        f.character = cohom::FlatCharacter::for_mode(pair, n);
        f.coeffs[{0, 0}] = cx(std::pow(ell, -double(n)), 0);
        return f;
    };
    auto rep = cohom::solve_vertical_series(tau, pair, mode_at, 200, ell);
    bool bound_holds = true;
    for (const auto& row : rep.modes) bound_holds = bound_holds && row.g_norm <= row.bound * (1 + 1e-12);

    // Liouville pair (2L, L), L = sum 10^(-k!) truncated at k = 4: the fitted
    // exponent grows as the scan reaches the deeper denominator dips
    quad L("0.110001000000000000000001");
    auto liou = dio::DiophantinePair::decimal(2 * L, L);
    auto liou_mode = [&](long long n) {
        cohom::TorusFourierSection f;
        f.character = cohom::FlatCharacter::for_mode(liou, n);
        f.coeffs[{0, 0}] = cx(1, 0);
        return f;
    };
    auto liou3 = cohom::solve_vertical_series(tau, liou, liou_mode, 1000, 1.0, 1e-30);
    auto liou6 = cohom::solve_vertical_series(tau, liou, liou_mode, 1000000, 1.0, 1e-30);
    bool liou_grows = liou6.alpha_hat > liou3.alpha_hat;

    criterion(5, "cohomology: round-trip < 1e-12; bound holds n<=200; Liouville alpha grows",
              worst_rt < 1e-12 && bound_holds && liou_grows, t.elapsed(), 60);
}

void run_criterion_6() {
    Timer t;
    auto gc = fixture_gluing();
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> unit(0, 1), box(-3, 3);
    auto random_vs = [&] {
        glue::ChartPoint pt;
        pt.chart = glue::Chart::Wplus;
        pt.z = cx(box(rng), 0) + box(rng) * gc.tau;
        pt.log_mod = std::log(gc.R) * (2 * unit(rng) - 1);
        pt.phase = unit(rng);
        return pt;
    };
    bool product_exact = true, fiber_exact = true;
    double worst_rt = 0, worst_jac = 0;
    for (int i = 0; i < 10000; ++i) {
        auto pt = glue::normalize_point(gc, random_vs());
        auto im = glue::glue_fs(gc, pt);
        product_exact = product_exact &&
                        glue::glued_modulus_product(gc, pt, im) == std::abs(gc.s);
        auto back = glue::normalize_point(gc, glue::glue_fs_inverse(gc, im));
        worst_rt = std::max({worst_rt, std::abs(back.z - pt.z),
                             std::abs(back.log_mod - pt.log_mod),
                             std::abs(balanced_frac(back.phase - pt.phase))});
        if (i < 1000) {
            worst_jac = std::max(worst_jac,
                                 std::abs(glue::two_form_jacobian(gc, pt) - cx(-1, 0)));
            auto fam = glue::family_chart_plus(gc, pt, gc.s, false);
            fiber_exact = fiber_exact && fam.fiber_s == gc.s && fam.log_mod == pt.log_mod;
        }
    }
    criterion(6, "gluing: |w+||w-| = |s| exact; round-trip; Jacobian -1 < 1e-12; fiber exact",
              product_exact && fiber_exact && worst_rt < 1e-12 && worst_jac < 1e-12,
              t.elapsed(), 30);
}

void run_criterion_7() {
    Timer t;
    auto gc = fixture_gluing();
    cx w0{0.3, 0.0};
    auto d3 = glue::discrepancy(glue::trace_leaf(gc, w0, 1000, 42));
    auto d5 = glue::discrepancy(glue::trace_leaf(gc, w0, 100000, 42));

    glue::GluingConfig tc = gc;
    tc.pair = dio::DiophantinePair::rational(Rational(1, 2), Rational(1, 3));
    auto torsion_trace = glue::trace_leaf(tc, w0, 100000, 42);
    std::set<long long> thirds;
    for (const auto& p : torsion_trace) thirds.insert(llround(p[2] * 1e9));
    double torsion_disc = glue::discrepancy(torsion_trace);
    // 2-torus floor: at most 6 of the 16 depth-4 slabs in the third axis are
    // populated, so some full-marginal box has empirical 0 and volume 1/16
    const double floor2t = 1.0 / 16.0;

    // |w| drift through the deck normalization is exactly zero
    bool drift_zero = true;
    glue::ChartPoint base = glue::ChartPoint::from_w(glue::Chart::Wplus, cx(0, 0), w0, gc);
    std::mt19937_64 rng(707);
    std::uniform_real_distribution<double> box(-40, 40);
    for (int i = 0; i < 100000; ++i) {
        glue::ChartPoint pt = base;
        pt.z = cx(box(rng), box(rng));
        drift_zero = drift_zero && glue::normalize_point(gc, pt).log_mod == base.log_mod;
    }
    criterion(7, "leaf: diophantine discrepancy shrinks; torsion stays above 2-torus floor",
              d5 < d3 && thirds.size() <= 6 && torsion_disc > floor2t && drift_zero,
              t.elapsed(), 30);
}

void run_criterion_8() {
    Timer t;
    std::mt19937_64 rng(808);
    std::uniform_int_distribution<long long> entry(-20, 20);
    lat::MarkedClass A_ab;
    A_ab.v[lat::kAab] = 1;
    bool classes_ok = true;
    for (int i = 0; i < 1000; ++i) {
        lat::SurfaceClass Lp;
        Lp.side = lat::Side::plus;
        for (int j = 0; j < 10; ++j) Lp.q[j] = entry(rng);
        auto Lm = random_degree_matched(rng, Lp);
        auto c1 = chern::chern_class(Lp, Lm);
        classes_ok = classes_ok && c1.v[lat::kAbg] == 0 && c1.v[lat::kBa] == 0 &&
                     c1.v[lat::kAga] == 0 && c1.v[lat::kBb] == 0 &&
                     lat::intersect_marked(c1, A_ab) == lat::degree_on_C(Lp) &&
                     lat::intersect_marked(c1, c1) ==
                         intersect_surface(Lp, Lp) + intersect_surface(Lm, Lm);
    }

    auto Lp = lat::SurfaceClass::H(lat::Side::plus);
    auto Lm = lat::SurfaceClass::H(lat::Side::minus);
    bool symbolic_zero =
        chern::verify_sigma_orthogonality_symbolic(fixture_geometry(1), Lp, Lm).is_zero();

    double worst = 0;
    for (int i = 0; i < 50; ++i) {
        auto g = fixture_geometry(2000 + i);
        lat::SurfaceClass L1;
        L1.side = lat::Side::plus;
        for (int j = 0; j < 10; ++j) L1.q[j] = entry(rng);
        auto L2 = random_degree_matched(rng, L1);
        if (lat::degree_on_C(L1) == 0) { --i; continue; }
        worst = std::max(worst, std::abs(chern::verify_sigma_orthogonality(g, L1, L2)));
    }

    auto gperp = fixture_geometry(3);
    gperp.xi = geo::compute_xi(Lp, Lm, gperp) + cx(1e-3, 0);
    double sens = std::abs(chern::verify_sigma_orthogonality(gperp, Lp, Lm));

    criterion(8, "chern: vanishing blocks, degree, self-intersection; residuals and sensitivity",
              classes_ok && symbolic_zero && worst < 1e-9 && sens >= 1e-4, t.elapsed(), 30);
}

void run_criterion_9() {
    Timer t;
    auto g = fixture_geometry(9);
    auto Lp = lat::SurfaceClass::H(lat::Side::plus);
    auto Lm = lat::SurfaceClass::H(lat::Side::minus);
    auto sigma = chern::substitute_xifix_and_torrelation(chern::sigma_vector(g), Lp, Lm);
    auto declared = chern::default_independent_symbols();
    auto p1 = chern::generic_picard_lattice(sigma, declared);
    auto p2 = chern::generic_picard_lattice(sigma, declared);
    bool stable = p1.rank == p2.rank;
    for (std::size_t i = 0; stable && i < p1.basis.size(); ++i)
        stable = p1.basis[i].v == p2.basis[i].v;
    auto c1 = chern::chern_class(Lp, Lm);
    // the computed rank, stored as the frozen fixture of this configuration
    const int frozen_rank = 1;
    bool pass = stable && p1.rank == frozen_rank && p1.rank <= 2 &&
                chern::lattice_contains(p1, c1);
    criterion(9, "picard: kernel contains c1, rank 1 <= 2, stable across runs", pass,
              t.elapsed(), 5);
}

void run_criterion_10() {
    Timer t;
    auto gc = fixture_gluing();
    auto wp = fixture_weights();
    std::mt19937_64 rng(1010);
    std::uniform_real_distribution<double> u(-2, 2), unit(0, 1);

    bool regmax_ok = true;
    const double eta = 0.1;
    for (int i = 0; i < 10000; ++i) {
        double x = u(rng), y = u(rng);
        double m = ample::regularized_max(x, y, eta);
        double mx = std::max(x, y);
        regmax_ok = regmax_ok && m >= mx - 1e-14 && m <= mx + eta + 1e-14 &&
                    (std::abs(x - y) < 2 * eta || m == mx) &&
                    ample::regularized_max(y, x, eta) == m;
        double x2 = u(rng), y2 = u(rng);
        double mid = ample::regularized_max((x + x2) / 2, (y + y2) / 2, eta);
        regmax_ok = regmax_ok &&
                    mid <= 0.5 * (m + ample::regularized_max(x2, y2, eta)) + 1e-12;
    }

    double worst_psi = 0;
    const double logR = std::log(gc.R);
    for (int i = 0; i < 2000; ++i) {
        glue::ChartPoint pt;
        pt.chart = glue::Chart::Wplus;
        pt.z = cx(unit(rng), 0) + unit(rng) * gc.tau;
        pt.log_mod = logR * (2 * unit(rng) - 1);
        pt.phase = unit(rng);
        worst_psi = std::max(worst_psi,
                             std::abs(ample::psi(glue::glue_fs(gc, pt), gc, wp, lat::Side::minus) -
                                      ample::psi(pt, gc, wp, lat::Side::plus)));
    }

    double worst_hess = 0;
    for (int i = 0; i < 1000; ++i) {
        double tmod = gc.sqrt_abs_s() / gc.R + unit(rng) * (0.9 * wp.R2 - gc.sqrt_abs_s() / gc.R);
        glue::ChartPoint pt = glue::ChartPoint::from_w(
            glue::Chart::Wplus, cx(unit(rng), 0) + unit(rng) * gc.tau,
            tmod * cis_turns(unit(rng)), gc);
        auto h = ample::psi_hessian_check(pt, gc, wp);
        double expect = 2.0 / (tmod * tmod);
        worst_hess = std::max({worst_hess, std::abs(h[1][1].real() - expect) / expect,
                               std::abs(h[0][0].real()) / expect, std::abs(h[0][1]) / expect});
    }

    auto audit = ample::audit_positivity(gc, wp, ample::DefaultSectionWeight{wp.b_over}, 10000, 9);
    criterion(10, "ampleness: regmax properties; psi gluing < 1e-12; Hessian 1e-5; min eig > 0",
              regmax_ok && worst_psi < 1e-12 && worst_hess < 1e-5 && audit.min_eig > 0,
              t.elapsed(), 60);
}

} // namespace

int main() {
    run_criterion_1();
    run_criterion_2();
    run_criterion_3();
    run_criterion_4();
    run_criterion_5();
    run_criterion_6();
    run_criterion_7();
    run_criterion_8();
    run_criterion_9();
    run_criterion_10();
    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all 10 acceptance criteria passed\n");
    return 0;
}
