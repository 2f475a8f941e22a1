#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>

#include "k3kit/diophantine.hpp"
#include "k3kit/errors.hpp"
#include "k3kit/numeric.hpp"

namespace k3kit::theta {

using C2 = std::array<cx, 2>;

/// Rank-3 lattice of the toroidal group U_{tau,(p,q)}: generators
/// (0,1), (1,p), (tau,q) in C^2. The second coordinates are real.
struct ToroidalLattice {
    cx tau;
    dio::DiophantinePair pair;

    ToroidalLattice(cx t, dio::DiophantinePair pr) : tau(t), pair(std::move(pr)) {
        if (tau.imag() <= 0) throw Error("ToroidalLattice requires Im tau > 0");
    }

    C2 generator(int i) const {
        switch (i) {
            case 1: return {cx(0, 0), cx(1, 0)};
            case 2: return {cx(1, 0), cx(pair.p(), 0)};
            case 3: return {tau, cx(pair.q(), 0)};
            default: throw Error("generator index must be 1, 2 or 3");
        }
    }
    /// k1*lam1 + k2*lam2 + k3*lam3
    C2 vector(const std::array<long long, 3>& k) const {
        cx z = cx(double(k[1]), 0) + double(k[2]) * tau;
        cx eta = cx(double(k[0]), 0) + double(k[1]) * pair.p() + double(k[2]) * pair.q();
        return {z, eta};
    }
};

/// Hermitian form [[a, b], [conj(b), c]] with a, c real.
struct HermitianData {
    double a = 0;
    cx b{0, 0};
    double c = 0;
};

inline cx hermitian_pairing(const HermitianData& H, const C2& x, const C2& y) {
    return H.a * x[0] * std::conj(y[0]) + H.b * x[0] * std::conj(y[1]) +
           std::conj(H.b) * x[1] * std::conj(y[0]) + H.c * x[1] * std::conj(y[1]);
}

struct IntegralityResult {
    bool ok = false;
    std::array<double, 3> values{};  // Im H(l2,l1), Im H(l3,l1), Im H(l3,l2)
};

/// Checks Im H(lambda,mu) in Z on the three generator pairs; those values
/// generate all of Im H on the lattice.
inline IntegralityResult integrality_check(const HermitianData& H, const ToroidalLattice& lat,
                                           double tol = 1e-9) {
    IntegralityResult r;
    r.values[0] = hermitian_pairing(H, lat.generator(2), lat.generator(1)).imag();
    r.values[1] = hermitian_pairing(H, lat.generator(3), lat.generator(1)).imag();
    r.values[2] = hermitian_pairing(H, lat.generator(3), lat.generator(2)).imag();
    r.ok = near_integer(r.values[0], tol) && near_integer(r.values[1], tol) &&
           near_integer(r.values[2], tol);
    return r;
}

/// Values of a semi-character on the three generators.
struct SemiCharacter {
    cx rho1{1, 0}, rho2{1, 0}, rho3{1, 0};
};

namespace detail {

inline cx unit_pow(cx u, long long k) {
    double ang = std::atan2(u.imag(), u.real());
    return cis_turns(double(k) * ang / (2.0 * pi));
}

// Extension and cocycle with the fixed decomposition order and no
// integrality gate; the negative controls drive these with inadmissible H.
inline cx semicharacter_extend_raw(const SemiCharacter& rho, const HermitianData& H,
                                   const ToroidalLattice& lat, const std::array<long long, 3>& k) {
    // rho(k*lam) = rho(lam)^k since Im H(lam,lam) = 0
    cx r1 = unit_pow(rho.rho1, k[0]);
    cx r2 = unit_pow(rho.rho2, k[1]);
    cx r3 = unit_pow(rho.rho3, k[2]);
    C2 v1 = lat.vector({k[0], 0, 0});
    C2 v2 = lat.vector({0, k[1], 0});
    C2 v3 = lat.vector({0, 0, k[2]});
    cx r12 = r1 * r2 * std::exp(cx(0, pi * hermitian_pairing(H, v1, v2).imag()));
    C2 v12 = lat.vector({k[0], k[1], 0});
    return r12 * r3 * std::exp(cx(0, pi * hermitian_pairing(H, v12, v3).imag()));
}

inline cx cocycle_eval_raw(const HermitianData& H, const SemiCharacter& rho,
                           const ToroidalLattice& lat, const std::array<long long, 3>& lam,
                           const C2& x) {
    cx r = semicharacter_extend_raw(rho, H, lat, lam);
    C2 v = lat.vector(lam);
    cx expo = pi * hermitian_pairing(H, x, v) + (pi / 2.0) * hermitian_pairing(H, v, v);
    return r * std::exp(expo);
}

} // namespace detail

/// Extends rho to k1*lam1 + k2*lam2 + k3*lam3 by applying the semi-character
/// rule left to right in the fixed generator order. Integrality of Im H makes
/// the result independent of the decomposition order; that independence is
/// property-tested, not assumed.
inline cx semicharacter_extend(const SemiCharacter& rho, const HermitianData& H,
                               const ToroidalLattice& lat, const std::array<long long, 3>& k,
                               double tol = 1e-9) {
    if (!integrality_check(H, lat, tol).ok) throw NotIntegral();
    return detail::semicharacter_extend_raw(rho, H, lat, k);
}

/// alpha_lambda(x) = rho(lambda) exp(pi H(x,lambda) + (pi/2) H(lambda,lambda)).
inline cx cocycle_eval(const HermitianData& H, const SemiCharacter& rho,
                       const ToroidalLattice& lat, const std::array<long long, 3>& lam,
                       const C2& x, double tol = 1e-9) {
    if (!integrality_check(H, lat, tol).ok) throw NotIntegral();
    return detail::cocycle_eval_raw(H, rho, lat, lam, x);
}

/// Gauge factor beta(z,eta) = exp(-pi c eta^2 / 2) that transports
/// L_{H,rho} to L_{H0,rho} with the (2,2)-entry removed.
struct GaugeBeta {
    double c = 0;
    cx operator()(const C2& x) const { return std::exp(cx(-pi * c / 2.0, 0) * x[1] * x[1]); }
};

inline std::pair<HermitianData, GaugeBeta> gauge_remove_c(const HermitianData& H) {
    return {HermitianData{H.a, H.b, 0.0}, GaugeBeta{H.c}};
}

/// |zeta|^2_{h,x} = exp(-pi H(x,x)) |zeta|^2.
inline double metric_norm(const HermitianData& H, const C2& x, cx zeta) {
    double hxx = hermitian_pairing(H, x, x).real();
    return std::exp(-pi * hxx) * std::norm(zeta);
}

/// Coefficients (a, b) of Theta = pi (a dz^dz~ + b dz^deta~ + b~ deta^dz~);
/// requires the gauge with c = 0.
struct CurvatureForm {
    double a = 0;
    cx b{0, 0};
};

inline CurvatureForm curvature_form(const HermitianData& H) {
    if (H.c != 0) throw CNotRemoved();
    return {H.a, H.b};
}

struct IntersectionNumbers {
    double I_ab = 0, I_bg = 0, I_ga = 0;
};

/// Closed-form pairings of c1(L_{H,rho}) with the cycles A_ab, A_bg, A_ga:
///   I_ab = a Im tau + p Im(b tau) - q Im b,  I_bg = -Im(b tau),  I_ga = -Im b.
/// They coincide with Im H(x_b,x_a), Im H(x_g,x_b), Im H(x_g,x_a) for
/// x_a = (1,p), x_b = (tau,q), x_g = (0,1); both routes are evaluated and
/// must agree.
inline IntersectionNumbers intersection_numbers(const HermitianData& H,
                                                const ToroidalLattice& lat) {
    if (H.c != 0) throw CNotRemoved();
    const double p = lat.pair.p(), q = lat.pair.q();
    IntersectionNumbers r;
    r.I_ab = H.a * lat.tau.imag() + p * (H.b * lat.tau).imag() - q * H.b.imag();
    r.I_bg = -(H.b * lat.tau).imag();
    r.I_ga = -H.b.imag();
    const C2 xa{cx(1, 0), cx(p, 0)}, xb{lat.tau, cx(q, 0)}, xg{cx(0, 0), cx(1, 0)};
    double v1 = hermitian_pairing(H, xb, xa).imag();
    double v2 = hermitian_pairing(H, xg, xb).imag();
    double v3 = hermitian_pairing(H, xg, xa).imag();
    if (std::abs(v1 - r.I_ab) > 1e-9 * (1 + std::abs(v1)) ||
        std::abs(v2 - r.I_bg) > 1e-9 * (1 + std::abs(v2)) ||
        std::abs(v3 - r.I_ga) > 1e-9 * (1 + std::abs(v3)))
        throw Error("intersection_numbers: closed form disagrees with Im H route");
    return r;
}

enum class Cycle { ab, bg, ga };

/// Numerical integral over [0,1]^2 of the pullback of (i/2pi) Theta under the
/// cycle embedding, midpoint rule. The cycles are parameterized through the
/// eta-coordinate of the toroidal group, w = exp(2 pi i eta), with
/// Im eta_0 = -log(w0_modulus)/(2 pi). The pulled-back form is constant, so
/// any grid is exact up to rounding; partials are taken by central
/// differences to keep the quadrature independent of the closed form.
inline double integrate_chern_cycle(const HermitianData& H, const ToroidalLattice& lat,
                                    Cycle cycle, double w0_modulus, int grid) {
    if (H.c != 0) throw CNotRemoved();
    if (grid < 16) throw Error("integrate_chern_cycle requires grid >= 16");
    if (w0_modulus <= 0) throw Error("w0_modulus must be positive");
    const double p = lat.pair.p(), q = lat.pair.q();
    const cx eta0 = cx(0, -std::log(w0_modulus) / (2.0 * pi));
    // (u,v) |-> (z, eta); orientation conventions: d alpha ^ d beta,
    // d beta ^ d gamma, d alpha ^ d gamma
    auto param = [&](double u, double v) -> C2 {
        switch (cycle) {
            case Cycle::ab: return {cx(u, 0) + v * lat.tau, cx(p * u + q * v, 0) + eta0};
            case Cycle::bg: return {u * lat.tau, cx(q * u + v, 0) + eta0};
            default: return {cx(u, 0), cx(p * u + v, 0) + eta0};
        }
    };
    const double h = 1e-5;
    double sum = 0;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            double u = (i + 0.5) / grid, v = (j + 0.5) / grid;
            C2 du1 = param(u + h, v), du0 = param(u - h, v);
            C2 dv1 = param(u, v + h), dv0 = param(u, v - h);
            cx zu = (du1[0] - du0[0]) / (2 * h), zv = (dv1[0] - dv0[0]) / (2 * h);
            cx eu = (du1[1] - du0[1]) / (2 * h), ev = (dv1[1] - dv0[1]) / (2 * h);
            // (i/2)(a dz^dz~ + b dz^deta~ + b~ deta^dz~) evaluated on (du,dv)
            cx val = cx(0, 0.5) * (H.a * (zu * std::conj(zv) - zv * std::conj(zu)) +
                                   H.b * (zu * std::conj(ev) - zv * std::conj(eu)) +
                                   std::conj(H.b) * (eu * std::conj(zv) - ev * std::conj(zu)));
            sum += val.real();
        }
    return sum / (grid * grid);
}

/// Extendability across the zero section: true iff b = 0, equivalently
/// (L.A_bg) = (L.A_ga) = 0. Both routes are evaluated and must agree.
inline bool is_extendable(const HermitianData& H, const ToroidalLattice& lat, double tol = 1e-9) {
    if (H.c != 0) throw CNotRemoved();
    bool via_b = std::abs(H.b) <= tol;
    auto inum = intersection_numbers(H, lat);
    bool via_cycles = std::abs(inum.I_bg) <= tol * (1 + std::abs(lat.tau)) &&
                      std::abs(inum.I_ga) <= tol;
    if (via_b != via_cycles) throw Error("is_extendable: routes disagree");
    return via_b;
}

} // namespace k3kit::theta
