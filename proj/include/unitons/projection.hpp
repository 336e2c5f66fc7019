#pragma once

#include <vector>

#include <Eigen/Dense>

#include "unitons/meromorphic.hpp"

namespace unitons {

inline constexpr double kRankTolerance = 1e-9;
inline constexpr double kSpanAngleTolerance = 1e-8;

/// A subspace of C^n held by an orthonormal basis (n x k, k may be 0).
struct Span {
    CMatrix basis;

    Span() = default;
    explicit Span(CMatrix orthonormal_basis) : basis(std::move(orthonormal_basis)) {}

    static Span zero(int n) { return Span(CMatrix(n, 0)); }
    static Span full(int n) { return Span(CMatrix::Identity(n, n)); }

    int ambient_dim() const { return static_cast<int>(basis.rows()); }
    int rank() const { return static_cast<int>(basis.cols()); }
    bool is_proper() const { return rank() > 0 && rank() < ambient_dim(); }
    CMatrix projection() const { return basis * basis.adjoint(); }
};

/// Orthogonal projection onto a subspace and onto its complement.
struct ProjPair {
    CMatrix pi;
    CMatrix perp;
};

/// (pi_1, pi_1^perp), ..., (pi_i, pi_i^perp)
using ProjChain = std::vector<ProjPair>;

struct SpanSpectrum {
    Span span;
    Eigen::VectorXd singular_values;  // descending
};

/// SVD-based orthonormalization. Numerical rank counts singular values above
/// rank_tol * sigma_max.
SpanSpectrum orthonormal_basis_with_spectrum(const CMatrix& vectors, double rank_tol = kRankTolerance);
Span orthonormal_basis(const CMatrix& vectors, double rank_tol = kRankTolerance);
Span orthonormal_basis(const std::vector<CVector>& vectors, int n, double rank_tol = kRankTolerance);

/// True when some singular value ratio lies within a factor 10 of rank_tol.
bool rank_is_ambiguous(const Eigen::VectorXd& singular_values, double rank_tol = kRankTolerance);

ProjPair projection_pair(const Span& s);
ProjChain chain_from_spans(const std::vector<Span>& spans);

/// C^i_s: s'th elementary function of pi_i^perp, ..., pi_1^perp, built by the
/// Pascal recursion C^i_s = pi_i^perp C^{i-1}_{s-1} + C^{i-1}_s.
/// Identity for s == 0, zero for s < 0 or s > i.
/// `n` is only needed when the chain is empty.
CMatrix c_operator(const ProjChain& chain, int s, int n = -1);
/// All of C^i_0 .. C^i_i at once.
std::vector<CMatrix> c_operators(const ProjChain& chain, int n);

/// S^i_s: sum of the i-fold products pi or pi^perp with exactly s complements.
/// Throws IndexError when s < 0 or s > i.
CMatrix s_operator(const ProjChain& chain, int s, int n = -1);
std::vector<CMatrix> s_operators(const ProjChain& chain, int n);

/// Principal angles between two subspaces, ascending. Small angles come from
/// sines of the projected basis so that equal spans give angles near 1e-16
/// rather than the sqrt(eps) floor of arccos.
std::vector<double> principal_angles(const Span& a, const Span& b);

double max_principal_angle(const Span& a, const Span& b);

/// Rank equality plus max principal angle below tol.
bool same_span(const Span& a, const Span& b, double tol = kSpanAngleTolerance);

/// Largest angle between a vector of `inner` and the subspace `outer`.
double containment_defect(const Span& inner, const Span& outer);

/// Distance from v to the subspace, relative to |v|.
double relative_distance(const CVector& v, const Span& s);

}  // namespace unitons
