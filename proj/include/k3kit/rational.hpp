#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>

#include "k3kit/errors.hpp"
#include "k3kit/numeric.hpp"

namespace k3kit {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

/// num/den with the sign normalized into the numerator (the underlying
/// two-argument constructor insists on a positive denominator).
inline Rational make_rational(BigInt num, BigInt den) {
    if (den == 0) throw ParseError("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return Rational(std::move(num), std::move(den));
}

/// Parses "num/den" or a plain integer string.
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s));
        return make_rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
    } catch (const ParseError&) {
        throw;
    } catch (const std::runtime_error&) {
        throw ParseError("not a rational: " + s);
    }
}

template <class Real>
Real to_real(const Rational& r) {
    return static_cast<Real>(numerator(r)) / static_cast<Real>(denominator(r));
}

/// Best rational approximation of x with denominator <= max_den, by the
/// continued fraction of x. Returns the first convergent within tol of x,
/// or nullopt if none with an admissible denominator matches.
template <class Real>
std::optional<Rational> reconstruct_rational(Real x, const BigInt& max_den, const Real& tol) {
    using std::abs;
    using std::floor;
    BigInt p0 = 1, q0 = 0;  // convergents p/q, one step behind
    BigInt p1, q1 = 1;
    Real r = x;
    Real a0 = floor(r);
    if (abs(a0) > Real(1e17)) return std::nullopt;
    p1 = BigInt(static_cast<long long>(static_cast<double>(a0)));
    for (int it = 0; it < 128; ++it) {
        if (q1 > 0 && q1 <= max_den) {
            Real approx = static_cast<Real>(p1) / static_cast<Real>(q1);
            if (abs(x - approx) <= tol) return Rational(p1, q1);
        }
        if (q1 > max_den) break;
        Real f = r - floor(r);
        if (f <= Real(0)) break;
        r = Real(1) / f;
        Real af = floor(r);
        if (af > Real(1e17)) break;  // x is this convergent to working precision
        BigInt a(static_cast<long long>(static_cast<double>(af)));
        BigInt p2 = a * p1 + p0, q2 = a * q1 + q0;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    }
    return std::nullopt;
}

} // namespace k3kit
