#pragma once

#include <array>
#include <complex>
#include <optional>

#include "k3kit/diophantine.hpp"
#include "k3kit/errors.hpp"
#include "k3kit/lattice.hpp"
#include "k3kit/numeric.hpp"

namespace k3kit::geo {

/// Blow-up centers and gluing scalars of one member of the family. The nine
/// points per side are complex numbers on C = C/<1,tau> subject to the
/// relation 9 p0 - sum_j p_j = +-mu with mu = q - p tau; x and y stay opaque
/// (numeric values optional), and xi is either prescribed or derived from a
/// pair of line bundles.
struct GeometryParams {
    cx tau{0, 1};
    dio::DiophantinePair pair;
    cx p0_plus{0, 0}, p0_minus{0, 0};
    std::array<cx, 9> p_plus{}, p_minus{};
    std::optional<cx> x, y;
    cx s{0, 0};
    std::optional<cx> xi;

    cx mu() const { return cx(pair.q(), 0) - cx(pair.p(), 0) * tau; }

    cx torrelation_residual(lat::Side side) const {
        const bool plus = side == lat::Side::plus;
        const auto& pts = plus ? p_plus : p_minus;
        cx sum{0, 0};
        for (const auto& pj : pts) sum += pj;
        return 9.0 * (plus ? p0_plus : p0_minus) - sum - (plus ? mu() : -mu());
    }

    void validate_torrelation(double tol = 1e-9) const {
        if (std::abs(torrelation_residual(lat::Side::plus)) > tol ||
            std::abs(torrelation_residual(lat::Side::minus)) > tol)
            throw TorrelationViolated();
    }

    /// Fills p9 on both sides so the torrelation holds exactly (up to
    /// rounding) given p0 and p1..p8.
    void close_torrelation() {
        cx sp{0, 0}, sm{0, 0};
        for (int j = 0; j < 8; ++j) { sp += p_plus[j]; sm += p_minus[j]; }
        p_plus[8] = 9.0 * p0_plus - sp - mu();
        p_minus[8] = 9.0 * p0_minus - sm + mu();
    }
};

/// (p^{side} . L) in the I_{1,9} form with complex point coefficients,
/// p = 3 p0 H - sum_j p_j E_j.
inline cx point_class_pairing(const GeometryParams& g, lat::Side side, const lat::SurfaceClass& L) {
    if (L.side != side) throw SideMismatch();
    const cx p0 = side == lat::Side::plus ? g.p0_plus : g.p0_minus;
    const auto& pts = side == lat::Side::plus ? g.p_plus : g.p_minus;
    cx acc = 3.0 * p0 * double(L.q[0]);
    for (int j = 1; j <= 9; ++j) acc -= pts[j - 1] * double(L.q[j]);
    return acc;
}

/// xi = (1/b) ((p^- . L^-) - (p^+ . L^+)) with b the common degree on C.
inline cx compute_xi(const lat::SurfaceClass& Lplus, const lat::SurfaceClass& Lminus,
                     const GeometryParams& points) {
    long long bp = lat::degree_on_C(Lplus), bm = lat::degree_on_C(Lminus);
    if (bp != bm) throw DegreeMismatch();
    if (bp == 0) throw ZeroDegree();
    cx plus = point_class_pairing(points, lat::Side::plus, Lplus);
    cx minus = point_class_pairing(points, lat::Side::minus, Lminus);
    return (minus - plus) / double(bp);
}

} // namespace k3kit::geo
