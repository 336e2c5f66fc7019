#include "unitons/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "unitons/errors.hpp"

namespace unitons {

SpanSpectrum orthonormal_basis_with_spectrum(const CMatrix& vectors, double rank_tol) {
    const auto n = vectors.rows();
    if (vectors.cols() == 0 || n == 0) return {Span::zero(static_cast<int>(n)), Eigen::VectorXd()};
    Eigen::JacobiSVD<CMatrix> svd(vectors, Eigen::ComputeThinU);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
    Eigen::Index rank = 0;
    if (sigma_max > 0.0)
        while (rank < sigma.size() && sigma(rank) > rank_tol * sigma_max) ++rank;
    return {Span(svd.matrixU().leftCols(rank)), sigma};
}

Span orthonormal_basis(const CMatrix& vectors, double rank_tol) {
    return orthonormal_basis_with_spectrum(vectors, rank_tol).span;
}

Span orthonormal_basis(const std::vector<CVector>& vectors, int n, double rank_tol) {
    CMatrix m(n, static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t j = 0; j < vectors.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = vectors[j];
    return orthonormal_basis(m, rank_tol);
}

bool rank_is_ambiguous(const Eigen::VectorXd& singular_values, double rank_tol) {
    if (singular_values.size() == 0 || singular_values(0) <= 0.0) return false;
    const double sigma_max = singular_values(0);
    for (Eigen::Index k = 1; k < singular_values.size(); ++k) {
        const double ratio = singular_values(k) / sigma_max;
        if (ratio > rank_tol / 10.0 && ratio < rank_tol * 10.0) return true;
    }
    return false;
}

ProjPair projection_pair(const Span& s) {
    const auto n = s.ambient_dim();
    CMatrix pi = s.projection();
    CMatrix perp = CMatrix::Identity(n, n) - pi;
    return {std::move(pi), std::move(perp)};
}

ProjChain chain_from_spans(const std::vector<Span>& spans) {
    ProjChain chain;
    chain.reserve(spans.size());
    for (const auto& s : spans) chain.push_back(projection_pair(s));
    return chain;
}

std::vector<CMatrix> c_operators(const ProjChain& chain, int n) {
    std::vector<CMatrix> c{CMatrix::Identity(n, n)};
    for (const auto& [pi, perp] : chain) {
        std::vector<CMatrix> next(c.size() + 1);
        next[0] = c[0];
        for (std::size_t s = 1; s < c.size(); ++s) next[s] = perp * c[s - 1] + c[s];
        next[c.size()] = perp * c.back();
        c = std::move(next);
    }
    return c;
}

namespace {

int ambient(const ProjChain& chain, int n) {
    if (!chain.empty()) return static_cast<int>(chain.front().pi.rows());
    if (n < 1) throw BadShape("an empty chain needs an explicit ambient dimension");
    return n;
}

}  // namespace

CMatrix c_operator(const ProjChain& chain, int s, int n_hint) {
    const int n = ambient(chain, n_hint);
    const int i = static_cast<int>(chain.size());
    if (s < 0 || s > i) return CMatrix::Zero(n, n);
    return c_operators(chain, n)[static_cast<std::size_t>(s)];
}

std::vector<CMatrix> s_operators(const ProjChain& chain, int n) {
    std::vector<CMatrix> out{CMatrix::Identity(n, n)};
    for (const auto& [pi, perp] : chain) {
        std::vector<CMatrix> next(out.size() + 1);
        next[0] = pi * out[0];
        for (std::size_t s = 1; s < out.size(); ++s) next[s] = perp * out[s - 1] + pi * out[s];
        next[out.size()] = perp * out.back();
        out = std::move(next);
    }
    return out;
}

CMatrix s_operator(const ProjChain& chain, int s, int n_hint) {
    const int i = static_cast<int>(chain.size());
    if (s < 0 || s > i) throw IndexError("s_operator requires 0 <= s <= i");
    const int n = ambient(chain, n_hint);
    return s_operators(chain, n)[static_cast<std::size_t>(s)];
}

std::vector<double> principal_angles(const Span& a, const Span& b) {
    if (a.ambient_dim() != b.ambient_dim()) throw BadShape("principal_angles: ambient dimensions differ");
    const Span& small = a.rank() <= b.rank() ? a : b;
    const Span& large = a.rank() <= b.rank() ? b : a;
    const auto k = small.rank();
    if (k == 0) return {};

    Eigen::JacobiSVD<CMatrix> cos_svd(large.basis.adjoint() * small.basis);
    Eigen::VectorXd cosines = cos_svd.singularValues();  // descending, size k
    const CMatrix residual = small.basis - large.basis * (large.basis.adjoint() * small.basis);
    Eigen::JacobiSVD<CMatrix> sin_svd(residual);
    Eigen::VectorXd sines = sin_svd.singularValues();  // descending, size k
    std::vector<double> sin_ascending(sines.data(), sines.data() + sines.size());
    std::sort(sin_ascending.begin(), sin_ascending.end());

    std::vector<double> angles(static_cast<std::size_t>(k));
    for (int idx = 0; idx < k; ++idx) {
        const double c = std::clamp(cosines(idx), 0.0, 1.0);
        const double s = std::clamp(sin_ascending[static_cast<std::size_t>(idx)], 0.0, 1.0);
        angles[static_cast<std::size_t>(idx)] = (c * c >= 0.5) ? std::asin(s) : std::acos(c);
    }
    std::sort(angles.begin(), angles.end());
    return angles;
}

double max_principal_angle(const Span& a, const Span& b) {
    const auto angles = principal_angles(a, b);
    return angles.empty() ? 0.0 : angles.back();
}

bool same_span(const Span& a, const Span& b, double tol) {
    return a.rank() == b.rank() && max_principal_angle(a, b) < tol;
}

double containment_defect(const Span& inner, const Span& outer) {
    if (inner.rank() == 0) return 0.0;
    if (outer.rank() < inner.rank()) return std::numbers::pi / 2;
    return max_principal_angle(inner, outer);
}

double relative_distance(const CVector& v, const Span& s) {
    const double norm = v.norm();
    if (norm == 0.0) return 0.0;
    const CVector residual = v - s.basis * (s.basis.adjoint() * v);
    return residual.norm() / norm;
}

}  // namespace unitons
