#pragma once

#include <algorithm>
#include <array>
#include <numeric>

#include "k3kit/errors.hpp"
#include "k3kit/exactlinalg.hpp"

namespace k3kit::lat {

enum class Side { plus, minus };

/// Class q0*H - sum_j qj*Ej in H_2 of a nine-point blow-up of P^2, with the
/// intersection form diag(1,-1,...,-1) on (H, E_1, ..., E_9).
struct SurfaceClass {
    std::array<long long, 10> q{};
    Side side = Side::plus;

    static SurfaceClass H(Side s = Side::plus) {
        SurfaceClass c;
        c.q[0] = 1;
        c.side = s;
        return c;
    }
    /// The exceptional class E_j (j = 1..9), i.e. q_j = -1.
    static SurfaceClass E(int j, Side s = Side::plus) {
        SurfaceClass c;
        c.q[static_cast<std::size_t>(j)] = -1;
        c.side = s;
        return c;
    }
    /// The anticanonical elliptic curve C = 3H - sum E_j.
    static SurfaceClass C(Side s = Side::plus) {
        SurfaceClass c;
        c.q[0] = 3;
        for (int j = 1; j <= 9; ++j) c.q[static_cast<std::size_t>(j)] = 1;
        c.side = s;
        return c;
    }
};

inline long long intersect_surface(const SurfaceClass& u, const SurfaceClass& v) {
    if (u.side != v.side) throw SideMismatch();
    long long s = u.q[0] * v.q[0];
    for (int j = 1; j <= 9; ++j) s -= u.q[static_cast<std::size_t>(j)] * v.q[static_cast<std::size_t>(j)];
    return s;
}

/// Degree on the anticanonical curve: (L.C) = 3 q0 - sum_{j=1..9} q_j.
inline long long degree_on_C(const SurfaceClass& L) {
    long long s = 3 * L.q[0];
    for (int j = 1; j <= 9; ++j) s -= L.q[static_cast<std::size_t>(j)];
    return s;
}

/// The eight vanishing-cycle classes C_12, C_23, ..., C_78, C_678 of one
/// side; the global sign of the side is part of the basis definition.
inline SurfaceClass c_basis_class(Side side, int i) {
    const long long sgn = side == Side::plus ? 1 : -1;
    SurfaceClass c;
    c.side = side;
    if (i >= 0 && i < 7) {
        // +-(E_{i+1} - E_{i+2}): q_j carries -coefficient of E_j
        c.q[static_cast<std::size_t>(i + 1)] = -sgn;
        c.q[static_cast<std::size_t>(i + 2)] = sgn;
    } else if (i == 7) {
        // +-(-H + E_6 + E_7 + E_8)
        c.q[0] = -sgn;
        c.q[6] = -sgn;
        c.q[7] = -sgn;
        c.q[8] = -sgn;
    } else {
        throw Error("c_basis_class index out of range");
    }
    return c;
}

using Gram8 = std::array<std::array<long long, 8>, 8>;

/// Gram matrix of (C_12, ..., C_78, C_678); independent of the side since the
/// global sign squares away.
inline Gram8 c_basis_gram(Side side = Side::plus) {
    Gram8 g{};
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                intersect_surface(c_basis_class(side, i), c_basis_class(side, j));
    return g;
}

namespace detail {

/// Integer inverse of the C-block Gram (it is unimodular).
inline const std::array<std::array<long long, 8>, 8>& c_gram_inverse() {
    static const auto inv = [] {
        Gram8 g = c_basis_gram();
        std::array<std::array<long long, 8>, 8> out{};
        for (std::size_t col = 0; col < 8; ++col) {
            std::vector<std::vector<Rational>> gq(8, std::vector<Rational>(8));
            std::vector<Rational> rhs(8, Rational(0));
            for (std::size_t i = 0; i < 8; ++i)
                for (std::size_t j = 0; j < 8; ++j) gq[i][j] = Rational(g[i][j]);
            rhs[col] = 1;
            auto x = xla::solve_gauss(gq, rhs);
            for (std::size_t i = 0; i < 8; ++i) {
                if (denominator(x[i]) != 1) throw Error("C-block Gram is not unimodular");
                out[i][col] = static_cast<long long>(numerator(x[i]));
            }
        }
        return out;
    }();
    return inv;
}

} // namespace detail

/// 22-vector in the fixed marked basis
/// (A_ab, B_g, A_bg, B_a, A_ga, B_b, C+_12..C+_678, C-_12..C-_678).
struct MarkedClass {
    std::array<long long, 22> v{};
};

// Basis indices, fixed once.
inline constexpr int kAab = 0, kBg = 1, kAbg = 2, kBa = 3, kAga = 4, kBb = 5;
inline constexpr int kCplus = 6, kCminus = 14;

using Gram22 = std::array<std::array<long long, 22>, 22>;

struct K3GramReport {
    Gram22 gram{};
    xla::Signature signature;
    BigInt det;
    bool even = false;
};

/// Block-diagonal K3 Gram: three hyperbolic-like blocks [[0,1],[1,-2]] on the
/// (A,B) pairs, then two copies of the C-block Gram. Signature (3,19),
/// |det| = 1, all diagonal entries even.
inline const K3GramReport& gram_matrix_k3() {
    static const K3GramReport rep = [] {
        K3GramReport r;
        auto& g = r.gram;
        for (auto& row : g) row.fill(0);
        for (int b = 0; b < 3; ++b) {
            int i = 2 * b;
            g[i][i] = 0;
            g[i][i + 1] = g[i + 1][i] = 1;
            g[i + 1][i + 1] = -2;
        }
        Gram8 c = c_basis_gram();
        for (int blk : {kCplus, kCminus})
            for (int i = 0; i < 8; ++i)
                for (int j = 0; j < 8; ++j) g[blk + i][blk + j] = c[i][j];
        xla::IMat m(22, std::vector<BigInt>(22));
        for (int i = 0; i < 22; ++i)
            for (int j = 0; j < 22; ++j) m[i][j] = g[i][j];
        r.signature = xla::signature_symmetric(m);
        r.det = xla::det_bareiss(m);
        r.even = true;
        for (int i = 0; i < 22; ++i)
            if (g[i][i] % 2 != 0) r.even = false;
        return r;
    }();
    return rep;
}

inline long long intersect_marked(const MarkedClass& u, const MarkedClass& v) {
    const auto& g = gram_matrix_k3().gram;
    long long s = 0;
    for (int i = 0; i < 22; ++i) {
        if (u.v[i] == 0) continue;
        for (int j = 0; j < 22; ++j) s += u.v[i] * g[i][j] * v.v[j];
    }
    return s;
}

/// Decomposition q = cC*C + cE9*E9 + sum rest_i C_i against the orthogonal
/// splitting <C, E9> + span(C_12..C_678). Works over any commutative field
/// scalar; coefficients are those of q = q0 H - sum qj Ej.
template <class Scalar>
struct Decomposition {
    Scalar cC{}, cE9{};
    std::array<Scalar, 8> rest{};
};

template <class Scalar>
Decomposition<Scalar> decompose_coefficients(const std::array<Scalar, 10>& q, Side side) {
    Decomposition<Scalar> d;
    Scalar s8{}, s9{};
    for (int j = 1; j <= 8; ++j) s8 += q[static_cast<std::size_t>(j)];
    s9 = s8 + q[9];
    d.cC = Scalar(3) * q[0] - s8;
    d.cE9 = Scalar(3) * q[0] - s9;
    // residual class q~ = q - cC*C - cE9*E9 and its pairings with the C_i
    std::array<Scalar, 10> qt = q;
    const SurfaceClass C = SurfaceClass::C(side);
    qt[0] -= d.cC * Scalar(C.q[0]);
    for (int j = 1; j <= 9; ++j) qt[static_cast<std::size_t>(j)] -= d.cC * Scalar(C.q[static_cast<std::size_t>(j)]);
    qt[9] -= d.cE9 * Scalar(-1);  // E9 stored with q9 = -1
    std::array<Scalar, 8> m{};
    for (int i = 0; i < 8; ++i) {
        SurfaceClass ci = c_basis_class(side, i);
        Scalar acc = qt[0] * Scalar(ci.q[0]);
        for (int j = 1; j <= 9; ++j)
            acc -= qt[static_cast<std::size_t>(j)] * Scalar(ci.q[static_cast<std::size_t>(j)]);
        m[static_cast<std::size_t>(i)] = acc;
    }
    const auto& inv = detail::c_gram_inverse();
    for (int i = 0; i < 8; ++i) {
        Scalar acc{};
        for (int j = 0; j < 8; ++j)
            acc += Scalar(inv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) * m[static_cast<std::size_t>(j)];
        d.rest[static_cast<std::size_t>(i)] = acc;
    }
    return d;
}

/// Exact decomposition of an integral class; reconstruction is verified.
inline Decomposition<Rational> decompose_surface_class(const SurfaceClass& q) {
    std::array<Rational, 10> qq;
    for (int j = 0; j <= 9; ++j) qq[static_cast<std::size_t>(j)] = Rational(q.q[static_cast<std::size_t>(j)]);
    auto d = decompose_coefficients<Rational>(qq, q.side);
    // verify q == cC*C + cE9*E9 + sum rest_i C_i exactly
    std::array<Rational, 10> rec{};
    const SurfaceClass C = SurfaceClass::C(q.side);
    for (int j = 0; j <= 9; ++j) rec[static_cast<std::size_t>(j)] = d.cC * Rational(C.q[static_cast<std::size_t>(j)]);
    rec[9] += d.cE9 * Rational(-1);
    for (int i = 0; i < 8; ++i) {
        SurfaceClass ci = c_basis_class(q.side, i);
        for (int j = 0; j <= 9; ++j)
            rec[static_cast<std::size_t>(j)] += d.rest[static_cast<std::size_t>(i)] * Rational(ci.q[static_cast<std::size_t>(j)]);
    }
    for (int j = 0; j <= 9; ++j)
        if (rec[static_cast<std::size_t>(j)] != Rational(q.q[static_cast<std::size_t>(j)]))
            throw Error("decompose_surface_class: reconstruction failed");
    return d;
}

/// True iff the C-block Gram is the negated E8 Cartan matrix up to a
/// simultaneous permutation (graph isomorphism on the off-diagonal 1s).
inline bool matches_negated_e8_cartan(const Gram8& g) {
    for (int i = 0; i < 8; ++i) {
        if (g[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] != -2) return false;
        for (int j = 0; j < 8; ++j)
            if (i != j && g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 0 &&
                g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 1)
                return false;
    }
    // reference E8 diagram: path 0-1-2-3-4-5-6 with node 7 attached to node 4
    std::array<std::array<int, 8>, 8> ref{};
    auto link = [&](int a, int b) { ref[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = ref[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = 1; };
    for (int i = 0; i + 1 < 7; ++i) link(i, i + 1);
    link(7, 4);
    std::array<int, 8> perm{};
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (int i = 0; i < 8 && ok; ++i)
            for (int j = 0; j < 8 && ok; ++j)
                if ((g[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])][static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])] == 1) !=
                    (ref[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == 1))
                    ok = false;
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

} // namespace k3kit::lat
