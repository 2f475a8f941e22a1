#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace k3kit {

using cx = std::complex<double>;

/// 113-bit binary float, selected by K3KIT_PRECISION=mp128.
using quad = boost::multiprecision::cpp_bin_float_quad;

inline constexpr double pi = std::numbers::pi;

/// Fractional part in [0,1).
template <class Real>
Real frac(const Real& x) {
    using std::floor;
    Real f = x - floor(x);
    if (f >= Real(1)) f -= Real(1);  // guard against floor rounding at negative epsilons
    if (f < Real(0)) f += Real(1);
    return f;
}

/// Balanced fractional part in [-1/2, 1/2): distance representative to the nearest integer.
template <class Real>
Real balanced_frac(const Real& x) {
    using std::floor;
    Real f = x - floor(x + Real(0.5));
    if (f < Real(-0.5)) f += Real(1);
    if (f >= Real(0.5)) f -= Real(1);
    return f;
}

template <class Real>
long long nearest_int(const Real& x) {
    using std::floor;
    return static_cast<long long>(floor(x + Real(0.5)));
}

inline bool near_integer(double x, double tol) {
    return std::abs(x - std::round(x)) <= tol;
}

/// exp(2*pi*i*t) for t measured in turns.
inline cx cis_turns(double t) {
    return {std::cos(2.0 * pi * t), std::sin(2.0 * pi * t)};
}

/// Deterministic 64-bit mix, used to derive reproducible stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Default absolute tolerances, overridable through ToolConfig.tolerances.
struct Tolerances {
    double integrality = 1e-9;   // "Im H in Z" checks
    double cocycle = 1e-9;       // relative, multiplicative identities
    double quadrature = 1e-6;    // cycle integration vs closed form
    double residual = 1e-9;      // numeric orthogonality residuals
    double exact_float = 1e-12;  // identities exact up to rounding
    double resonance_floor = 1e-14;
};

} // namespace k3kit
