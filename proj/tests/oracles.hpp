#pragma once

// Independent reference computations used by the tests. Nothing here calls
// the recursions or SVD-based routines under test.

#include <Eigen/QR>
#include <bit>
#include <cmath>
#include <functional>
#include <vector>

#include "unitons/meromorphic.hpp"
#include "unitons/projection.hpp"
#include "unitons/random.hpp"

namespace oracle {

using unitons::cplx;
using unitons::CMatrix;
using unitons::CVector;

inline double max_entry(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline CMatrix random_matrix(int rows, int cols, unitons::Rng& rng) {
    CMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.complex_uniform(1.0);
    return m;
}

// Orthogonal projection onto a random k-dimensional subspace, via Householder QR.
inline CMatrix random_projection(int n, int k, unitons::Rng& rng) {
    if (k == 0) return CMatrix::Zero(n, n);
    Eigen::HouseholderQR<CMatrix> qr(random_matrix(n, k, rng));
    const CMatrix q = qr.householderQ() * CMatrix::Identity(n, k);
    return q * q.adjoint();
}

inline unitons::ProjChain random_chain(int n, int length, unitons::Rng& rng) {
    unitons::ProjChain chain;
    for (int l = 0; l < length; ++l) {
        const CMatrix pi = random_projection(n, rng.integer(0, n), rng);
        chain.push_back({pi, CMatrix::Identity(n, n) - pi});
    }
    return chain;
}

// Sum over words pi_{l_1}^perp ... pi_{l_s}^perp with l_1 > ... > l_s.
inline CMatrix c_by_words(const unitons::ProjChain& chain, int s, int n) {
    const int i = static_cast<int>(chain.size());
    CMatrix total = CMatrix::Zero(n, n);
    for (unsigned mask = 0; mask < (1u << i); ++mask) {
        if (std::popcount(mask) != s) continue;
        CMatrix word = CMatrix::Identity(n, n);
        for (int l = i; l >= 1; --l)
            if (mask & (1u << (l - 1))) word = word * chain[static_cast<std::size_t>(l - 1)].perp;
        total += word;
    }
    return total;
}

// Sum over all i-fold products pi_i^{?} ... pi_1^{?} with exactly s perps.
inline CMatrix s_by_words(const unitons::ProjChain& chain, int s, int n) {
    const int i = static_cast<int>(chain.size());
    CMatrix total = CMatrix::Zero(n, n);
    for (unsigned mask = 0; mask < (1u << i); ++mask) {
        if (std::popcount(mask) != s) continue;
        CMatrix word = CMatrix::Identity(n, n);
        for (int l = i; l >= 1; --l) {
            const auto& p = chain[static_cast<std::size_t>(l - 1)];
            word = word * ((mask & (1u << (l - 1))) ? p.perp : p.pi);
        }
        total += word;
    }
    return total;
}

// Coefficients in mu of prod_{l=i..1} (pi_l + mu pi_l^perp).
inline std::vector<CMatrix> product_expansion(const unitons::ProjChain& chain, int n) {
    std::vector<CMatrix> poly{CMatrix::Identity(n, n)};
    for (int l = static_cast<int>(chain.size()); l >= 1; --l) {
        const auto& p = chain[static_cast<std::size_t>(l - 1)];
        std::vector<CMatrix> next(poly.size() + 1, CMatrix::Zero(n, n));
        for (std::size_t d = 0; d < poly.size(); ++d) {
            next[d] += poly[d] * p.pi;
            next[d + 1] += poly[d] * p.perp;
        }
        poly = std::move(next);
    }
    return poly;
}

inline long long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long out = 1;
    for (int t = 1; t <= k; ++t) out = out * (n - k + t) / t;
    return out;
}

// Central difference of a scalar function of z along the real axis; for a
// holomorphic function this is the complex derivative.
inline cplx central_difference(const std::function<cplx(cplx)>& f, cplx z, double h = 1e-5) {
    return (f(z + h) - f(z - h)) / (2.0 * h);
}

// Distance from v to the column span of `basis` (QR least squares), relative to |v|.
inline double relative_residual(const CVector& v, const CMatrix& vectors) {
    if (v.norm() == 0.0) return 0.0;
    if (vectors.cols() == 0) return 1.0;
    const CVector x = vectors.colPivHouseholderQr().solve(v);
    return (vectors * x - v).norm() / v.norm();
}

}  // namespace oracle
