#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "k3kit/errors.hpp"
#include "k3kit/exactlinalg.hpp"
#include "k3kit/geometry.hpp"
#include "k3kit/lattice.hpp"
#include "k3kit/numeric.hpp"

namespace k3kit::chern {

using lat::MarkedClass;
using lat::Side;
using lat::SurfaceClass;

/// Symbol alphabet of the period computations. The period form never needs
/// symbol products once c9- is eliminated through the xi relation, so scalars
/// stay Q-linear in these.
enum class Symbol : int {
    one = 0, tau, mu, x, y, xi,
    p0p, p1p, p2p, p3p, p4p, p5p, p6p, p7p, p8p, p9p,
    p0m, p1m, p2m, p3m, p4m, p5m, p6m, p7m, p8m, p9m,
};
inline constexpr int kSymbolCount = 26;

inline Symbol point_symbol(Side side, int j) {  // j = 0..9
    int base = side == Side::plus ? static_cast<int>(Symbol::p0p) : static_cast<int>(Symbol::p0m);
    return static_cast<Symbol>(base + j);
}

inline std::string symbol_name(Symbol s) {
    static const char* fixed[] = {"one", "tau", "mu", "x", "y", "xi"};
    int i = static_cast<int>(s);
    if (i < 6) return fixed[i];
    int j = (i - 6) % 10;
    return "p" + std::to_string(j) + ((i - 6) < 10 ? "+" : "-");
}

inline std::optional<Symbol> symbol_from_name(const std::string& name) {
    for (int i = 0; i < kSymbolCount; ++i)
        if (symbol_name(static_cast<Symbol>(i)) == name) return static_cast<Symbol>(i);
    return std::nullopt;
}

/// Finite Q-linear combination of symbols; addition and scalar multiplication
/// are exact, numeric evaluation substitutes complex values.
struct SymbolicScalar {
    std::map<Symbol, Rational> terms;

    SymbolicScalar() = default;
    static SymbolicScalar constant(Rational r) {
        SymbolicScalar s;
        if (r != 0) s.terms[Symbol::one] = std::move(r);
        return s;
    }
    static SymbolicScalar symbol(Symbol sym, Rational coeff = Rational(1)) {
        SymbolicScalar s;
        if (coeff != 0) s.terms[sym] = std::move(coeff);
        return s;
    }
    bool is_zero() const { return terms.empty(); }

    SymbolicScalar& operator+=(const SymbolicScalar& o) {
        for (const auto& [sym, c] : o.terms) {
            auto it = terms.find(sym);
            if (it == terms.end()) {
                if (c != 0) terms[sym] = c;
            } else {
                it->second += c;
                if (it->second == 0) terms.erase(it);
            }
        }
        return *this;
    }
    SymbolicScalar& operator-=(const SymbolicScalar& o) { return *this += o * Rational(-1); }
    SymbolicScalar operator+(const SymbolicScalar& o) const { auto r = *this; return r += o; }
    SymbolicScalar operator-(const SymbolicScalar& o) const { auto r = *this; return r -= o; }
    SymbolicScalar operator*(const Rational& f) const {
        SymbolicScalar r;
        if (f == 0) return r;
        for (const auto& [sym, c] : terms) r.terms[sym] = c * f;
        return r;
    }

    /// Replaces every occurrence of `sym` by `replacement`.
    SymbolicScalar substituted(Symbol sym, const SymbolicScalar& replacement) const {
        SymbolicScalar r = *this;
        auto it = r.terms.find(sym);
        if (it == r.terms.end()) return r;
        Rational coeff = it->second;
        r.terms.erase(it);
        r += replacement * coeff;
        return r;
    }

    cx eval(const std::array<std::optional<cx>, kSymbolCount>& values) const {
        cx acc{0, 0};
        for (const auto& [sym, c] : terms) {
            const auto& v = values[static_cast<std::size_t>(static_cast<int>(sym))];
            if (!v) throw Error("symbol " + symbol_name(sym) + " has no numeric value");
            acc += static_cast<double>(to_real<quad>(c)) * (*v);
        }
        return acc;
    }
};

/// Numeric symbol table of a parameter draw.
inline std::array<std::optional<cx>, kSymbolCount> symbol_values(const geo::GeometryParams& g) {
    std::array<std::optional<cx>, kSymbolCount> v;
    v[static_cast<int>(Symbol::one)] = cx(1, 0);
    v[static_cast<int>(Symbol::tau)] = g.tau;
    v[static_cast<int>(Symbol::mu)] = g.mu();
    if (g.x) v[static_cast<int>(Symbol::x)] = *g.x;
    if (g.y) v[static_cast<int>(Symbol::y)] = *g.y;
    if (g.xi) v[static_cast<int>(Symbol::xi)] = *g.xi;
    v[static_cast<int>(Symbol::p0p)] = g.p0_plus;
    v[static_cast<int>(Symbol::p0m)] = g.p0_minus;
    for (int j = 1; j <= 9; ++j) {
        v[static_cast<int>(point_symbol(Side::plus, j))] = g.p_plus[j - 1];
        v[static_cast<int>(point_symbol(Side::minus, j))] = g.p_minus[j - 1];
    }
    return v;
}

/// The 17 arc coefficients: c_{nu,nu+1}^± = ±(p_nu^± - p_{nu+1}^±),
/// c_678^± = ±(-3 p0^± + p6^± + p7^± + p8^±), c_9^- = (p9^+ + xi) - p9^-.
struct CCoefficients {
    std::array<SymbolicScalar, 8> plus, minus;
    SymbolicScalar c9_minus;
    bool degenerate = false;  // numerically all-zero arc data
};

inline CCoefficients c_coefficients(const geo::GeometryParams& params, double tol = 1e-9) {
    params.validate_torrelation(tol);
    CCoefficients out;
    for (int side_i = 0; side_i < 2; ++side_i) {
        Side side = side_i == 0 ? Side::plus : Side::minus;
        Rational sgn(side == Side::plus ? 1 : -1);
        auto& dst = side == Side::plus ? out.plus : out.minus;
        for (int nu = 1; nu <= 7; ++nu) {
            SymbolicScalar c = SymbolicScalar::symbol(point_symbol(side, nu), sgn);
            c += SymbolicScalar::symbol(point_symbol(side, nu + 1), -sgn);
            dst[nu - 1] = c;
        }
        SymbolicScalar c678 = SymbolicScalar::symbol(point_symbol(side, 0), sgn * Rational(-3));
        for (int j = 6; j <= 8; ++j) c678 += SymbolicScalar::symbol(point_symbol(side, j), sgn);
        dst[7] = c678;
    }
    out.c9_minus = SymbolicScalar::symbol(point_symbol(Side::plus, 9)) +
                   SymbolicScalar::symbol(Symbol::xi) -
                   SymbolicScalar::symbol(point_symbol(Side::minus, 9));
    // numeric degeneracy flag: every arc difference vanishes
    auto vals = symbol_values(params);
    vals[static_cast<int>(Symbol::xi)] = params.xi ? *params.xi : cx(0, 0);
    out.degenerate = true;
    for (const auto& arr : {out.plus, out.minus})
        for (const auto& c : arr)
            if (std::abs(c.eval(vals)) > tol) out.degenerate = false;
    return out;
}

/// 22 period entries of sigma in the marked basis.
using PeriodVector = std::array<SymbolicScalar, 22>;

/// sigma = (2 mu + c9-) A_ab + mu B_g + x A_bg + tau B_a + y A_ga + B_b
///         + sum c_•^+ C_•^+ + sum c_•^- C_•^-.
inline PeriodVector sigma_vector(const geo::GeometryParams& params, double tol = 1e-9) {
    CCoefficients c = c_coefficients(params, tol);
    PeriodVector v;
    v[lat::kAab] = SymbolicScalar::symbol(Symbol::mu, Rational(2)) + c.c9_minus;
    v[lat::kBg] = SymbolicScalar::symbol(Symbol::mu);
    v[lat::kAbg] = SymbolicScalar::symbol(Symbol::x);
    v[lat::kBa] = SymbolicScalar::symbol(Symbol::tau);
    v[lat::kAga] = SymbolicScalar::symbol(Symbol::y);
    v[lat::kBb] = SymbolicScalar::constant(Rational(1));
    for (int i = 0; i < 8; ++i) {
        v[lat::kCplus + i] = c.plus[i];
        v[lat::kCminus + i] = c.minus[i];
    }
    return v;
}

inline std::array<cx, 22> eval(const PeriodVector& v,
                               const std::array<std::optional<cx>, kSymbolCount>& values) {
    std::array<cx, 22> out;
    for (int i = 0; i < 22; ++i) out[i] = v[i].eval(values);
    return out;
}

/// xi as a symbolic combination of the blow-up points, eqn-level:
/// xi = (1/b)((p^- . L^-) - (p^+ . L^+)).
inline SymbolicScalar xi_symbolic(const SurfaceClass& Lplus, const SurfaceClass& Lminus) {
    long long bp = lat::degree_on_C(Lplus), bm = lat::degree_on_C(Lminus);
    if (bp != bm) throw DegreeMismatch();
    if (bp == 0) throw ZeroDegree();
    auto pairing = [](const SurfaceClass& L, Side side) {
        SymbolicScalar acc = SymbolicScalar::symbol(point_symbol(side, 0), Rational(3 * L.q[0]));
        for (int j = 1; j <= 9; ++j)
            acc += SymbolicScalar::symbol(point_symbol(side, j), Rational(-L.q[j]));
        return acc;
    };
    SymbolicScalar diff = pairing(Lminus, Side::minus) - pairing(Lplus, Side::plus);
    return diff * make_rational(1, bp);
}

/// Eliminates p9^± through 9 p0^± - sum_j p_j^± = ±mu.
inline SymbolicScalar substitute_torrelation(const SymbolicScalar& s) {
    auto repl = [](Side side) {
        SymbolicScalar r = SymbolicScalar::symbol(point_symbol(side, 0), Rational(9));
        for (int j = 1; j <= 8; ++j) r += SymbolicScalar::symbol(point_symbol(side, j), Rational(-1));
        r += SymbolicScalar::symbol(Symbol::mu, Rational(side == Side::plus ? -1 : 1));
        return r;
    };
    return s.substituted(point_symbol(Side::plus, 9), repl(Side::plus))
        .substituted(point_symbol(Side::minus, 9), repl(Side::minus));
}

inline PeriodVector substitute_xifix_and_torrelation(PeriodVector v, const SurfaceClass& Lplus,
                                                     const SurfaceClass& Lminus) {
    SymbolicScalar xi = xi_symbolic(Lplus, Lminus);
    for (auto& e : v) e = substitute_torrelation(e.substituted(Symbol::xi, xi));
    return v;
}

/// c1(L^+ v L^-) in the marked basis:
/// (2b + n9^+ + n9^-) A_ab + b B_g + (C-block projections of L^±).
inline MarkedClass chern_class(const SurfaceClass& Lplus, const SurfaceClass& Lminus) {
    if (Lplus.side != Side::plus || Lminus.side != Side::minus)
        throw SideMismatch();
    long long b = lat::degree_on_C(Lplus);
    if (b != lat::degree_on_C(Lminus)) throw DegreeMismatch();
    long long n9p = intersect_surface(Lplus, SurfaceClass::E(9, Side::plus));
    long long n9m = intersect_surface(Lminus, SurfaceClass::E(9, Side::minus));
    MarkedClass c;
    c.v[lat::kAab] = 2 * b + n9p + n9m;
    c.v[lat::kBg] = b;
    for (int side_i = 0; side_i < 2; ++side_i) {
        const SurfaceClass& L = side_i == 0 ? Lplus : Lminus;
        auto d = lat::decompose_surface_class(L);
        for (int i = 0; i < 8; ++i) {
            if (denominator(d.rest[i]) != 1) throw NonIntegralProjection();
            c.v[(side_i == 0 ? lat::kCplus : lat::kCminus) + i] =
                static_cast<long long>(numerator(d.rest[i]));
        }
    }
    return c;
}

/// Pairing weight of the i-th period entry against an integral class v.
/// On the (A,B) blocks the period entries are basis coordinates and pair
/// through the Gram matrix. On the C blocks the entries are the arc periods
/// of sigma, i.e. dual coordinates of sigma's C-projection, so they pair
/// with the integral C-coordinates by a plain dot product; the frozen
/// -+-signed C^- basis flips that block's sign. Both blocks together realize
/// the C-block pairing identity
/// (sigma|_C^± . L^±) = ±(p^± . L^±) -+ b p9^± - b mu - n9^± mu.
inline long long period_pairing_weight(int i, const MarkedClass& v) {
    if (i >= lat::kCminus) return -v.v[i];
    if (i >= lat::kCplus) return v.v[i];
    const auto& g = lat::gram_matrix_k3().gram;
    long long row = 0;
    for (int j = 0; j < 6; ++j) row += g[i][j] * v.v[j];
    return row;
}

/// (sigma . v) for a symbolic period vector and an integral class.
inline SymbolicScalar period_pair(const PeriodVector& sigma, const MarkedClass& v) {
    SymbolicScalar acc;
    for (int i = 0; i < 22; ++i) {
        long long w = period_pairing_weight(i, v);
        if (w != 0) acc += sigma[i] * Rational(w);
    }
    return acc;
}

/// (sigma . c1(L)) with symbolic entries: identically zero once xi is pinned
/// by the xi relation and p9 is eliminated by the torrelation.
inline SymbolicScalar verify_sigma_orthogonality_symbolic(const geo::GeometryParams& params,
                                                          const SurfaceClass& Lplus,
                                                          const SurfaceClass& Lminus,
                                                          double tol = 1e-9) {
    PeriodVector sigma = substitute_xifix_and_torrelation(sigma_vector(params, tol), Lplus, Lminus);
    return period_pair(sigma, chern_class(Lplus, Lminus));
}

/// Numeric residual |(sigma . c1(L))| for a parameter draw; xi comes from
/// params or, when absent, from the xi relation.
inline cx verify_sigma_orthogonality(const geo::GeometryParams& params, const SurfaceClass& Lplus,
                                     const SurfaceClass& Lminus, double tol = 1e-9) {
    PeriodVector sigma = sigma_vector(params, tol);
    MarkedClass c1 = chern_class(Lplus, Lminus);
    auto vals = symbol_values(params);
    if (!vals[static_cast<int>(Symbol::xi)])
        vals[static_cast<int>(Symbol::xi)] = geo::compute_xi(Lplus, Lminus, params);
    auto num = eval(sigma, vals);
    cx acc{0, 0};
    for (int i = 0; i < 22; ++i) acc += num[i] * double(period_pairing_weight(i, c1));
    return acc;
}

struct PicardLattice {
    std::vector<MarkedClass> basis;
    int rank = 0;
    xla::IMat constraints;  // integer-scaled rows, one per declared symbol
};

/// Integer kernel of the period-orthogonality constraints: rows are the
/// coefficients of each declared Q-independent symbol in (sigma . e_i). The
/// kernel is the sublattice the symbolic period annihilates; its rank bounds
/// the Picard number from above under the declared independence.
inline PicardLattice generic_picard_lattice(const PeriodVector& sigma,
                                            const std::optional<std::vector<Symbol>>& declared) {
    if (!declared) throw NoIndependenceDeclared();
    if (declared->empty()) {
        // degenerate guard: every symbol treated as rational leaves a single
        // vacuous constraint set, so the whole lattice survives
        PicardLattice out;
        out.rank = 22;
        for (int i = 0; i < 22; ++i) {
            MarkedClass e;
            e.v[i] = 1;
            out.basis.push_back(e);
        }
        return out;
    }
    // pairing forms: (sigma . e_i) for the 22 basis classes
    std::array<SymbolicScalar, 22> pairing;
    for (int i = 0; i < 22; ++i) {
        MarkedClass e;
        e.v[i] = 1;
        pairing[i] = period_pair(sigma, e);
    }
    PicardLattice out;
    for (Symbol sym : *declared) {
        std::vector<Rational> row(22, Rational(0));
        bool nonzero = false;
        for (int i = 0; i < 22; ++i) {
            auto it = pairing[i].terms.find(sym);
            if (it != pairing[i].terms.end()) {
                row[i] = it->second;
                nonzero = true;
            }
        }
        if (!nonzero) continue;
        BigInt scale = 1;
        for (const auto& r : row) scale = lcm(scale, denominator(r));
        std::vector<BigInt> irow(22);
        for (int i = 0; i < 22; ++i)
            irow[i] = numerator(row[i] * Rational(scale));
        out.constraints.push_back(std::move(irow));
    }
    if (out.constraints.empty()) out.constraints.emplace_back(22, BigInt(0));
    auto kernel = xla::integer_kernel(out.constraints);
    for (const auto& v : kernel) {
        MarkedClass m;
        for (int i = 0; i < 22; ++i) {
            if (abs(v[i]) > BigInt(std::numeric_limits<long long>::max()))
                throw Error("kernel basis entry exceeds 64-bit range");
            m.v[i] = static_cast<long long>(v[i]);
        }
        out.basis.push_back(m);
    }
    out.rank = static_cast<int>(out.basis.size());
    return out;
}

inline bool lattice_contains(const PicardLattice& lat, const MarkedClass& v) {
    for (const auto& row : lat.constraints) {
        BigInt acc = 0;
        for (int i = 0; i < 22; ++i) acc += row[i] * v.v[i];
        if (acc != 0) return false;
    }
    return true;
}

/// Standard declaration used by the fixtures: 1, tau, mu, x, y and the free
/// blow-up points p0, p1..p8 on both sides (p9 is eliminated).
inline std::vector<Symbol> default_independent_symbols() {
    std::vector<Symbol> s{Symbol::one, Symbol::tau, Symbol::mu, Symbol::x, Symbol::y};
    for (int j = 0; j <= 8; ++j) {
        s.push_back(point_symbol(Side::plus, j));
        s.push_back(point_symbol(Side::minus, j));
    }
    return s;
}

/// Degree on C of a bundle class; delegated here for the CLI surface.
inline long long degree_on_C(const SurfaceClass& L) { return lat::degree_on_C(L); }

} // namespace k3kit::chern
