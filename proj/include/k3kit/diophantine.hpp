#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "k3kit/errors.hpp"
#include "k3kit/numeric.hpp"
#include "k3kit/rational.hpp"

namespace k3kit::dio {

enum class Exactness { rational, decimal };
enum class Classification { Torsion, NonTorsion, Undecided };

inline const char* to_string(Classification c) {
    switch (c) {
        case Classification::Torsion: return "torsion";
        case Classification::NonTorsion: return "non-torsion";
        default: return "undecided";
    }
}

/// A pair (p,q) of monodromy exponents. Rational pairs are stored exactly;
/// decimal pairs carry their stated precision in bits and keep a quad copy
/// so that large-n scans do not lose the fractional parts.
struct DiophantinePair {
    Exactness exactness = Exactness::decimal;
    Rational p_rat{0}, q_rat{0};  // valid when exactness == rational
    quad p_hi{0}, q_hi{0};
    int precision_bits = 53;

    static DiophantinePair rational(Rational p, Rational q) {
        DiophantinePair d;
        d.exactness = Exactness::rational;
        d.p_rat = std::move(p);
        d.q_rat = std::move(q);
        d.p_hi = to_real<quad>(d.p_rat);
        d.q_hi = to_real<quad>(d.q_rat);
        d.precision_bits = 113;
        return d;
    }
    static DiophantinePair decimal(quad p, quad q, int bits = 113) {
        DiophantinePair d;
        d.exactness = Exactness::decimal;
        d.p_hi = p;
        d.q_hi = q;
        d.precision_bits = bits;
        return d;
    }

    double p() const { return static_cast<double>(p_hi); }
    double q() const { return static_cast<double>(q_hi); }
    template <class Real> Real p_as() const { return static_cast<Real>(p_hi); }
    template <class Real> Real q_as() const { return static_cast<Real>(q_hi); }
};

/// Torsion search cap for decimal inputs: continued-fraction reconstruction
/// never looks past this denominator.
inline const BigInt kTorsionDenominatorCap = BigInt(1000000);

/// Rational pairs decide exactly. Decimal pairs: if some rational with
/// denominator <= 10^6 is consistent with the stated precision the question
/// stays open (Undecided); otherwise NonTorsion, meaning "no torsion found
/// within precision".
inline Classification classify_pair(const DiophantinePair& pair) {
    if (pair.exactness == Exactness::rational) return Classification::Torsion;
    using std::ldexp;
    quad tol = ldexp(quad(1), -(std::max(pair.precision_bits, 8) - 2));
    quad scale_p = std::max(quad(1), abs(pair.p_hi));
    quad scale_q = std::max(quad(1), abs(pair.q_hi));
    auto cp = reconstruct_rational<quad>(pair.p_hi, kTorsionDenominatorCap, tol * scale_p);
    auto cq = reconstruct_rational<quad>(pair.q_hi, kTorsionDenominatorCap, tol * scale_q);
    if (cp && cq) return Classification::Undecided;
    return Classification::NonTorsion;
}

struct ExponentReport {
    long long n_max = 0;
    std::vector<std::pair<long long, double>> delta;  // (n, delta_n)
    double alpha_hat = 0;
    double A_hat = 0;
};

namespace detail {

template <class Real>
Real delta_at(const Real& p, const Real& q, long long n) {
    using std::sqrt;
    Real dp = balanced_frac(Real(n) * p);
    Real dq = balanced_frac(Real(n) * q);
    return sqrt(dp * dp + dq * dq);
}

// Exact squared distance for rational pairs; zero detects a torsion hit.
inline Rational delta_sq_exact(const Rational& p, const Rational& q, long long n) {
    auto bal = [](const Rational& x) {
        BigInt num = numerator(x), den = denominator(x);
        // nearest integer: floor(x + 1/2)
        BigInt k = (2 * num + den) / (2 * den);
        if ((2 * num + den) < 0 && (2 * num + den) % (2 * den) != 0) k -= 1;
        return x - Rational(k);
    };
    Rational dp = bal(Rational(n) * p), dq = bal(Rational(n) * q);
    return dp * dp + dq * dq;
}

} // namespace detail

/// delta_n = min over integer (mu,nu) of |n(p+qi) - (mu+nu i)|; the min is
/// attained at the nearest-integer rounding of (np, nq). alpha_hat is the
/// largest observed log(1/delta_n)/log(n) for 2 <= n <= n_max, and A_hat the
/// smallest delta_n * n^alpha_hat, so delta_n >= A_hat * n^(-alpha_hat) holds
/// for every listed n by construction.
///
/// Throws TorsionHit as soon as some delta_n vanishes (exact inputs) or
/// underflows the working precision (decimal inputs).
template <class Real = double>
ExponentReport approximation_exponent(const DiophantinePair& pair, long long n_max) {
    using std::log;
    if (n_max < 2) throw Error("approximation_exponent requires n_max >= 2");
    ExponentReport rep;
    rep.n_max = n_max;
    rep.delta.reserve(static_cast<std::size_t>(n_max));
    const bool exact = pair.exactness == Exactness::rational;
    const Real p = pair.template p_as<Real>(), q = pair.template q_as<Real>();
    double alpha = 0;
    for (long long n = 1; n <= n_max; ++n) {
        double d;
        if (exact) {
            Rational d2 = detail::delta_sq_exact(pair.p_rat, pair.q_rat, n);
            if (d2 == 0) throw TorsionHit(n);
            d = std::sqrt(static_cast<double>(to_real<quad>(d2)));
        } else {
            d = static_cast<double>(detail::delta_at<Real>(p, q, n));
            if (d == 0) throw TorsionHit(n);
        }
        rep.delta.emplace_back(n, d);
        if (n >= 2) alpha = std::max(alpha, std::log(1.0 / d) / std::log(double(n)));
    }
    rep.alpha_hat = alpha;
    double logA = std::numeric_limits<double>::infinity();
    for (const auto& [n, d] : rep.delta)
        logA = std::min(logA, std::log(d) + alpha * std::log(double(n)));
    rep.A_hat = std::exp(logA);
    return rep;
}

/// Singular values of the R-linear map (r1,r2) |-> r2 - r1*tau, which carries
/// the Z^2-distance of Definition-style delta_n onto the <1,tau> distance.
/// c1*delta_n <= pic0_distance <= c2*delta_n for every n.
struct NormEquivalence {
    double c1 = 1, c2 = 1;
};

inline NormEquivalence norm_equivalence(cx tau) {
    double t2 = std::norm(tau);
    double tr = t2 + 1.0;
    double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * tau.imag() * tau.imag()));
    return {std::sqrt((tr - disc) / 2.0), std::sqrt((tr + disc) / 2.0)};
}

/// Euclidean distance in C from n*(q - p*tau) to the lattice <1,tau>: the
/// Pic^0 distance of the class of N^n to the trivial class. The minimum is
/// searched over all lattice points within one covering radius of the target,
/// i.e. a small window around the coordinate-wise rounding.
template <class Real = double>
double pic0_distance(cx tau, const DiophantinePair& pair, long long n) {
    if (n < 1) throw Error("pic0_distance requires n >= 1");
    using C = std::complex<Real>;
    const C t(Real(tau.real()), Real(tau.imag()));
    const C target = Real(n) * (pair.template q_as<Real>() - pair.template p_as<Real>() * t);
    // real coordinates of the target in the basis (1, tau)
    Real y = target.imag() / t.imag();
    Real x = target.real() - y * t.real();
    long long mu0 = nearest_int(x), nu0 = nearest_int(y);
    Real best = std::numeric_limits<Real>::infinity();
    for (long long dm = -2; dm <= 2; ++dm)
        for (long long dn = -2; dn <= 2; ++dn) {
            C lat = C(Real(mu0 + dm), 0) + Real(nu0 + dn) * t;
            best = std::min(best, abs(target - lat));
        }
    return static_cast<double>(best);
}

} // namespace k3kit::dio
