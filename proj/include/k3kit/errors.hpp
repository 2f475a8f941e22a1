#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace k3kit {

/// Base class for all domain errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// diophantine
struct TorsionHit : Error {
    long long level;
    explicit TorsionHit(long long n)
        : Error("torsion hit at level n=" + std::to_string(n)), level(n) {}
};

// lattice
struct SideMismatch : Error {
    SideMismatch() : Error("surface classes live on different sides") {}
};

// theta
struct NotIntegral : Error {
    NotIntegral() : Error("Im H is not integral on the lattice") {}
};
struct CNotRemoved : Error {
    CNotRemoved() : Error("Hermitian form still has c != 0; apply gauge_remove_c first") {}
};

// cohomology
struct Resonance : Error {
    int m1, m2;
    Resonance(int a, int b)
        : Error("near-resonant mode (" + std::to_string(a) + "," + std::to_string(b) + ")"),
          m1(a), m2(b) {}
};
struct ZeroMode : Error {
    ZeroMode() : Error("obstructed class: nonzero coefficient on a kernel mode") {}
};
struct TorsionLevel : Error {
    long long level;
    explicit TorsionLevel(long long n)
        : Error("pair is torsion at level n=" + std::to_string(n)), level(n) {}
};

// gluing
struct OutOfAnnulus : Error {
    OutOfAnnulus() : Error("point lies outside the required annulus") {}
};
struct OutOfRegion : Error {
    OutOfRegion() : Error("point lies outside the chart region") {}
};
struct ZeroDegree : Error {
    ZeroDegree() : Error("line bundle has degree zero on C") {}
};
struct DegreeMismatch : Error {
    DegreeMismatch() : Error("degrees on C of the two bundles differ") {}
};

// ampleness
struct OnZeroSection : Error {
    OnZeroSection() : Error("weight is undefined on the zero section w=0") {}
};

// chern
struct TorrelationViolated : Error {
    TorrelationViolated() : Error("9*p0 - sum p_j != +-mu within tolerance") {}
};
struct NonIntegralProjection : Error {
    NonIntegralProjection() : Error("C-block projection of an integral class is not integral") {}
};
struct NoIndependenceDeclared : Error {
    NoIndependenceDeclared() : Error("no set of Q-independent symbols was declared") {}
};

// config
struct ParseError : Error {
    using Error::Error;
};
struct ValidationError : Error {
    std::vector<std::string> violations;
    explicit ValidationError(std::vector<std::string> v)
        : Error("config validation failed: " + join(v)), violations(std::move(v)) {}
    static std::string join(const std::vector<std::string>& v) {
        std::string s;
        for (const auto& x : v) {
            if (!s.empty()) s += "; ";
            s += x;
        }
        return s;
    }
};

} // namespace k3kit
