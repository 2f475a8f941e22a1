#pragma once

#include <utility>
#include <vector>

#include "k3kit/errors.hpp"
#include "k3kit/rational.hpp"

namespace k3kit::xla {

using IMat = std::vector<std::vector<BigInt>>;
using QMat = std::vector<std::vector<Rational>>;

inline IMat identity(std::size_t n) {
    IMat m(n, std::vector<BigInt>(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

/// Fraction-free Bareiss determinant of a square integer matrix.
inline BigInt det_bareiss(IMat m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t piv = k + 1;
            while (piv < n && m[piv][k] == 0) ++piv;
            if (piv == n) return 0;
            std::swap(m[k], m[piv]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

struct Signature {
    int positive = 0, negative = 0, zero = 0;
};

/// Signature of a symmetric integer matrix by exact congruence
/// diagonalization over Q (Lagrange reduction with the standard
/// zero-diagonal repair step).
inline Signature signature_symmetric(const IMat& a) {
    const std::size_t n = a.size();
    QMat m(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = Rational(a[i][j]);
    Signature sig;
    std::vector<bool> done(n, false);
    for (std::size_t step = 0; step < n; ++step) {
        // pick a remaining index with nonzero diagonal
        std::size_t p = n;
        for (std::size_t i = 0; i < n; ++i)
            if (!done[i] && m[i][i] != 0) { p = i; break; }
        if (p == n) {
            // all remaining diagonal entries vanish; if some off-diagonal
            // entry survives, mix its row in to create a usable pivot
            std::size_t r = n, c = n;
            for (std::size_t i = 0; i < n && r == n; ++i)
                if (!done[i])
                    for (std::size_t j = i + 1; j < n; ++j)
                        if (!done[j] && m[i][j] != 0) { r = i; c = j; break; }
            if (r == n) break;  // remaining block is zero
            for (std::size_t k = 0; k < n; ++k) m[r][k] += m[c][k];
            for (std::size_t k = 0; k < n; ++k) m[k][r] += m[k][c];
            p = r;
        }
        Rational piv = m[p][p];
        if (piv > 0) ++sig.positive; else ++sig.negative;
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i] || i == p || m[i][p] == 0) continue;
            Rational f = m[i][p] / piv;
            for (std::size_t k = 0; k < n; ++k) m[i][k] -= f * m[p][k];
            for (std::size_t k = 0; k < n; ++k) m[k][i] -= f * m[k][p];
        }
        done[p] = true;
    }
    sig.zero = static_cast<int>(n) - sig.positive - sig.negative;
    return sig;
}

/// Integer kernel of an integer matrix A (rows x cols): a basis of
/// {v in Z^cols : A v = 0}, computed by unimodular column elimination
/// (column-style Hermite reduction). The returned vectors are columns of a
/// unimodular transform, hence a lattice basis of the kernel.
inline std::vector<std::vector<BigInt>> integer_kernel(const IMat& a_in) {
    IMat a = a_in;
    const std::size_t rows = a.size();
    const std::size_t cols = rows == 0 ? 0 : a[0].size();
    IMat u = identity(cols);
    auto col_swap = [&](std::size_t i, std::size_t j) {
        for (std::size_t r = 0; r < rows; ++r) std::swap(a[r][i], a[r][j]);
        for (std::size_t r = 0; r < cols; ++r) std::swap(u[r][i], u[r][j]);
    };
    auto col_addmul = [&](std::size_t dst, std::size_t src, const BigInt& f) {
        for (std::size_t r = 0; r < rows; ++r) a[r][dst] += f * a[r][src];
        for (std::size_t r = 0; r < cols; ++r) u[r][dst] += f * u[r][src];
    };
    std::size_t lead = 0;
    for (std::size_t r = 0; r < rows && lead < cols; ++r) {
        // gcd-reduce row r across columns lead..cols-1
        while (true) {
            std::size_t nz = cols;
            for (std::size_t j = lead; j < cols; ++j)
                if (a[r][j] != 0) { nz = j; break; }
            if (nz == cols) break;  // row r is zero on the active columns
            // move the smallest nonzero entry to the lead column
            std::size_t best = nz;
            for (std::size_t j = nz + 1; j < cols; ++j)
                if (a[r][j] != 0 && abs(a[r][j]) < abs(a[r][best])) best = j;
            if (best != lead) col_swap(best, lead);
            bool clean = true;
            for (std::size_t j = lead + 1; j < cols; ++j) {
                if (a[r][j] == 0) continue;
                BigInt f = a[r][j] / a[r][lead];
                if (f != 0) col_addmul(j, lead, -f);
                if (a[r][j] != 0) clean = false;
            }
            if (clean) { ++lead; break; }
        }
    }
    std::vector<std::vector<BigInt>> kernel;
    for (std::size_t j = lead; j < cols; ++j) {
        std::vector<BigInt> v(cols);
        for (std::size_t r = 0; r < cols; ++r) v[r] = u[r][j];
        kernel.push_back(std::move(v));
    }
    return kernel;
}

/// Solves G x = rhs exactly over Q for a nonsingular rational matrix G.
template <class Scalar>
std::vector<Scalar> solve_gauss(std::vector<std::vector<Scalar>> g, std::vector<Scalar> rhs) {
    const std::size_t n = g.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && g[piv][k] == Scalar(0)) ++piv;
        if (piv == n) throw Error("solve_gauss: singular matrix");
        std::swap(g[k], g[piv]);
        std::swap(rhs[k], rhs[piv]);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (g[i][k] == Scalar(0)) continue;
            Scalar f = g[i][k] / g[k][k];
            for (std::size_t j = k; j < n; ++j) g[i][j] -= f * g[k][j];
            rhs[i] -= f * rhs[k];
        }
    }
    std::vector<Scalar> x(n, Scalar(0));
    for (std::size_t i = n; i-- > 0;) {
        Scalar s = rhs[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= g[i][j] * x[j];
        x[i] = s / g[i][i];
    }
    return x;
}

} // namespace k3kit::xla
