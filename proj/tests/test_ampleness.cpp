#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "k3kit/ampleness.hpp"

using namespace k3kit;
using ample::WeightParams;
using glue::Chart;
using glue::ChartPoint;
using glue::GluingConfig;

namespace {

GluingConfig fixture_gluing() {
    GluingConfig gc;
    gc.tau = {0, 1};
    gc.pair = dio::DiophantinePair::decimal(sqrt(quad(2)) - 1, sqrt(quad(3)) - 1);
    gc.R = 2.0;
    gc.s = {0.002, 0.0};
    gc.xi = {0.1, 0.05};
    return gc;
}

WeightParams fixture_weights() {
    WeightParams wp;
    wp.s = {0.002, 0.0};
    wp.R1 = 0.5;
    wp.R2 = 1.0;
    wp.R = 2.0;
    wp.eps = 0.05;
    wp.eps0 = 0.0035;
    wp.c = 0.002;
    wp.b_over = 3 * pi;
    wp.eta = 0.5;
    wp.validate();
    return wp;
}

} // namespace

TEST_CASE("regularized max: the four defining properties", "[ampleness]") {
    const double eta = 0.1;
    CHECK(ample::regularized_max(1.0, 0.0, eta) == 1.0);  // outside the band, exact
    double diag = ample::regularized_max(0.0, 0.0, eta);
    CHECK(diag >= 0.0);
    CHECK(diag <= eta);

    std::mt19937_64 rng(67);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int t = 0; t < 10000; ++t) {
        double x = u(rng), y = u(rng);
        double m = ample::regularized_max(x, y, eta);
        double mx = std::max(x, y);
        REQUIRE(m >= mx - 1e-14);
        REQUIRE(m <= mx + eta + 1e-14);
        if (std::abs(x - y) >= 2 * eta) REQUIRE(m == mx);
        REQUIRE(ample::regularized_max(y, x, eta) == m);
        // monotone in each argument
        REQUIRE(ample::regularized_max(x + 0.01, y, eta) >= m - 1e-14);
        REQUIRE(ample::regularized_max(x, y + 0.01, eta) >= m - 1e-14);
        // convexity along a random segment, midpoint rule
        double x2 = u(rng), y2 = u(rng);
        double mid = ample::regularized_max((x + x2) / 2, (y + y2) / 2, eta);
        double avg = 0.5 * (m + ample::regularized_max(x2, y2, eta));
        REQUIRE(mid <= avg + 1e-12);
    }
    CHECK_THROWS_AS(ample::regularized_max(0, 0, 0.0), Error);
}

TEST_CASE("lambda weight: values, constancy, C1 blend", "[ampleness]") {
    auto wp = fixture_weights();
    const double rs = std::sqrt(std::abs(wp.s));
    CHECK_THAT(ample::lambda_weight(rs, wp), Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(ample::lambda_weight(rs * std::exp(1.0), wp),
               Catch::Matchers::WithinAbs(4.0, 1e-10));
    CHECK(ample::lambda_weight(wp.R, wp) == ample::lambda_weight(wp.R + 0.4, wp));
    // monotone from the symmetric center through the blend and beyond
    double prev = ample::lambda_weight(rs, wp);
    for (double t = rs + 0.01; t < wp.R + 0.5; t += 0.01) {
        double v = ample::lambda_weight(t, wp);
        REQUIRE(v >= prev - 1e-12);
        prev = v;
    }
    // C1 across R2 and R by symmetric differences
    for (double t0 : {wp.R2, wp.R}) {
        const double h = 1e-6;
        double d_in = (ample::lambda_weight(t0 - h, wp) - ample::lambda_weight(t0 - 3 * h, wp)) / (2 * h);
        double d_out = (ample::lambda_weight(t0 + 3 * h, wp) - ample::lambda_weight(t0 + h, wp)) / (2 * h);
        CHECK_THAT(d_in - d_out, Catch::Matchers::WithinAbs(0.0, 1e-3));
        double v_in = ample::lambda_weight(t0 - h, wp), v_out = ample::lambda_weight(t0 + h, wp);
        CHECK_THAT(v_in - v_out, Catch::Matchers::WithinAbs(0.0, 4 * h * (1 + std::abs(d_in))));
    }
}

TEST_CASE("psi: gluing symmetry is exact, depends only on |w|", "[ampleness]") {
    auto gc = fixture_gluing();
    auto wp = fixture_weights();
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> unit(0, 1);
    const double logR = std::log(gc.R);
    for (int t = 0; t < 2000; ++t) {
        ChartPoint pt;
        pt.chart = Chart::Wplus;
        pt.z = cx(unit(rng), 0) + unit(rng) * gc.tau;
        pt.log_mod = logR * (2 * unit(rng) - 1);
        pt.phase = unit(rng);
        double plus = ample::psi(pt, gc, wp, lat::Side::plus);
        double minus = ample::psi(glue::glue_fs(gc, pt), gc, wp, lat::Side::minus);
        REQUIRE(plus == minus);  // exact: (2u)^2 vs (-2u)^2
    }
    // symmetric center
    ChartPoint center = ChartPoint::from_w(Chart::Wplus, cx(0.3, 0.1), cx(gc.sqrt_abs_s(), 0), gc);
    CHECK_THAT(ample::psi(center, gc, wp, lat::Side::plus), Catch::Matchers::WithinAbs(0.0, 1e-20));
    // same modulus, different phase and z: same value
    ChartPoint a = ChartPoint::from_w(Chart::Wplus, cx(0.1, 0.7), cx(0.21, 0.0), gc);
    ChartPoint b = ChartPoint::from_w(Chart::Wplus, cx(0.9, 0.2), cx(0.0, 0.21), gc);
    CHECK(ample::psi(a, gc, wp, lat::Side::plus) == ample::psi(b, gc, wp, lat::Side::plus));
    CHECK_THROWS_AS(ample::psi(a, gc, wp, lat::Side::minus), Error);
}

TEST_CASE("psi Hessian matches [[0,0],[0,2/|w|^2]]", "[ampleness]") {
    auto gc = fixture_gluing();
    auto wp = fixture_weights();
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> unit(0, 1);
    double worst = 0;
    for (int t = 0; t < 100; ++t) {
        double tmod = gc.sqrt_abs_s() / gc.R +
                      unit(rng) * (0.9 * wp.R2 - gc.sqrt_abs_s() / gc.R);
        ChartPoint pt = ChartPoint::from_w(Chart::Wplus, cx(unit(rng), 0) + unit(rng) * gc.tau,
                                           tmod * cis_turns(unit(rng)), gc);
        auto h = ample::psi_hessian_check(pt, gc, wp);
        double expect = 2.0 / (tmod * tmod);
        worst = std::max(worst, std::abs(h[1][1].real() - expect) / expect);
        worst = std::max(worst, std::abs(h[0][0].real()) / expect);
        worst = std::max(worst, std::abs(h[0][1]) / expect);
    }
    CHECK(worst < 1e-5);
    // |w| = sqrt|s| pins the scale 2/|s|
    ChartPoint at_center = ChartPoint::from_w(Chart::Wplus, cx(0.4, 0.2),
                                              cx(fixture_gluing().sqrt_abs_s(), 0), gc);
    auto h = ample::psi_hessian_check(at_center, gc, wp);
    CHECK_THAT(h[1][1].real(), Catch::Matchers::WithinRel(2.0 / std::abs(wp.s), 1e-5));
}

TEST_CASE("model Kaehler form: positivity and additive composition", "[ampleness]") {
    auto gc = fixture_gluing();
    auto wp = fixture_weights();
    std::mt19937_64 rng(79);
    std::uniform_real_distribution<double> unit(0, 1);
    const double tmax = std::sqrt(wp.eps0) * wp.R;
    for (int t = 0; t < 200; ++t) {
        double tmod = gc.sqrt_abs_s() / gc.R + unit(rng) * (0.98 * tmax - gc.sqrt_abs_s() / gc.R);
        ChartPoint pt = ChartPoint::from_w(Chart::Wplus, cx(unit(rng), 0) + unit(rng) * gc.tau,
                                           tmod * cis_turns(unit(rng)), gc);
        auto m = ample::model_kahler_form(pt, gc, wp);
        auto [lo, hi] = ample::hermitian_eigenvalues(m);
        REQUIRE(lo > 0);
        REQUIRE_THAT(lo, Catch::Matchers::WithinRel(std::min(wp.b_over, 2 * wp.c / (tmod * tmod)), 1e-12));
        REQUIRE_THAT(m[0][0].real() * m[1][1].real(),
                     Catch::Matchers::WithinRel(2 * wp.c * wp.b_over / (tmod * tmod), 1e-12));
        // omega = b_over dz dz~ + c * ddbar(psi) on the inner region
        auto hess = ample::psi_hessian_check(pt, gc, wp);
        REQUIRE_THAT(m[1][1].real(), Catch::Matchers::WithinRel(wp.c * hess[1][1].real(), 1e-4));
    }
    // determinant grows without bound towards the zero section
    double d_prev = 0;
    for (double tmod : {0.1, 0.05, 0.02, 0.01}) {
        ChartPoint pt = ChartPoint::from_w(Chart::Wplus, cx(0.2, 0.3), cx(tmod, 0), gc);
        auto m = ample::model_kahler_form(pt, gc, wp);
        double det = m[0][0].real() * m[1][1].real();
        REQUIRE(det > d_prev);
        d_prev = det;
    }
    ChartPoint far = ChartPoint::from_w(Chart::Wplus, cx(0, 0), cx(1.0, 0), gc);
    CHECK_THROWS_AS(ample::model_kahler_form(far, gc, wp), OutOfRegion);
}

TEST_CASE("glued weight: branch regions and sampled positivity", "[ampleness]") {
    auto gc = fixture_gluing();
    auto wp = fixture_weights();
    ample::DefaultSectionWeight phiL{wp.b_over};

    ChartPoint deep = ChartPoint::from_w(Chart::Wplus, cx(0.4, 0.3), cx(1e-4, 0), gc);
    CHECK(ample::glued_weight(deep, gc, wp, phiL).branch == ample::Branch::C);
    ChartPoint inner = ChartPoint::from_w(Chart::Wplus, cx(0.4, 0.3), cx(0.08, 0.02), gc);
    CHECK(ample::glued_weight(inner, gc, wp, phiL).branch == ample::Branch::C);
    ChartPoint outer = ChartPoint::from_w(Chart::Wplus, cx(0.4, 0.3), cx(1.4, -0.9), gc);
    CHECK(ample::glued_weight(outer, gc, wp, phiL).branch == ample::Branch::L);
    ChartPoint at_R1 = ChartPoint::from_w(Chart::Wplus, cx(0.9, 0.8), cx(wp.R1 * 1.05, 0), gc);
    CHECK(ample::glued_weight(at_R1, gc, wp, phiL).branch == ample::Branch::L);

    auto audit = ample::audit_positivity(gc, wp, phiL, 2000, 12345);
    CHECK(audit.min_eig > 0);
    CHECK(audit.n_C > 0);
    CHECK(audit.n_L > 0);
    // psh preservation with tolerance, as the weakest acceptable floor
    CHECK(audit.min_eig >= -1e-6);
}

TEST_CASE("choose_c finds a positive coefficient", "[ampleness]") {
    auto gc = fixture_gluing();
    auto wp = fixture_weights();
    double c = ample::choose_c(gc, wp, ample::DefaultSectionWeight{wp.b_over}, 300, 7);
    CHECK(c > 0);
    wp.c = c;
    CHECK(ample::audit_positivity(gc, wp, ample::DefaultSectionWeight{wp.b_over}, 300, 7).min_eig > 0);
}

TEST_CASE("weight params validation", "[ampleness]") {
    auto wp = fixture_weights();
    wp.R1 = 0.05;  // below sqrt(eps0) R
    CHECK_THROWS_AS(wp.validate(), Error);
    wp = fixture_weights();
    wp.s = {2.0, 0};
    CHECK_THROWS_AS(wp.validate(), Error);
    wp = fixture_weights();
    wp.eps0 = 1e-4;  // |s| >= eps0
    CHECK_THROWS_AS(wp.validate(), Error);
}
