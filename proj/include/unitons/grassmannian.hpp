#pragma once

#include <functional>
#include <vector>

#include "unitons/meromorphic.hpp"
#include "unitons/projection.hpp"
#include "unitons/uniton_builder.hpp"

namespace unitons {

/// Matrix polynomial T_0 + lambda T_1 + ... + lambda^d T_d at one fiber.
struct LoopPoly {
    std::vector<CMatrix> coeffs;

    static LoopPoly identity(int n, int padded_degree = 0);
    /// (pi_1 + lambda pi_1^perp) ... (pi_i + lambda pi_i^perp)
    static LoopPoly from_chain(const ProjChain& chain, int n);

    int n() const { return static_cast<int>(coeffs.front().rows()); }
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    CMatrix operator()(cplx lambda) const;

    /// Drops top coefficients whose norm is below tol.
    LoopPoly trimmed(double tol) const;
    /// Max unitarity defect over the q'th roots of unity.
    double unitarity_defect(int q = 8) const;

    friend LoopPoly operator*(const LoopPoly& a, const LoopPoly& b);
};

using LoopSampler = std::function<LoopPoly(cplx)>;

/// A subspace of H_+ / lambda^r H_+, identified with C^{rn} blockwise:
/// block k holds the lambda^k coefficient.
struct WSubspace {
    int n = 0;
    int r = 0;
    Span span;

    int dim() const { return span.rank(); }
};

/// (L_0, ..., L_{r-1}) -> (0, L_0, ..., L_{r-2})
CMatrix shift(const CMatrix& blocks, int n, int r);
/// L(lambda) -> Q L(-lambda)
CMatrix nu_q(const CMatrix& blocks, const CMatrix& q, int r);
/// Largest angle by which lambda W leaves W.
double lambda_invariance_defect(const WSubspace& w);

/// Forward: L_i = sum_l binom(i,l) H_l. Inverse: H_i = sum_l (-1)^{i-l} binom(i,l) L_l.
std::vector<MeroVector> binomial_transform(const std::vector<MeroVector>& column, bool inverse = false);

/// W = X + lambda X_(1) + ... + lambda^{r-1} X_(r-1) at z. Each section in
/// `x_columns` is a list of r MeroVectors (L_0, ..., L_{r-1}).
WSubspace w_from_x(const std::vector<std::vector<MeroVector>>& x_columns, int n, int r, cplx z,
                   double rank_tol = kRankTolerance);

/// W = Phi(H_+) mod lambda^r with r = degree of Phi. Throws SingularLoop when
/// Phi is not unitary on the unit circle.
WSubspace w_from_loop(const LoopPoly& phi);
/// Same, with the quotient window r chosen explicitly (r >= degree of Phi).
WSubspace w_from_loop(const LoopPoly& phi, int r);

struct Factorization {
    std::vector<Span> alphas;
    ProjChain chain;
    std::vector<bool> proper;
    bool all_proper() const;
    /// Reassembled (pi_1 + lambda pi_1^perp) ... (pi_r + lambda pi_r^perp)
    LoopPoly loop(int n) const;
};

/// alpha_i = (sum_s S^{i-1}_s P_s) W, i = 1..r, built left to right.
/// Throws NotLambdaInvariant when lambda W is not inside W.
Factorization iwasawa_factorize(const WSubspace& w, double rank_tol = kRankTolerance,
                                double invariance_tol = 1e-8);

/// alpha_i = ker T_i of Phi_i, Phi_{i-1} = Phi_i (pi_i + lambda^{-1} pi_i^perp),
/// for i = r .. 1. Throws DegreeNoDrop or NonProperUniton.
Factorization kernel_factorize(const LoopPoly& phi, double rank_tol = kRankTolerance, double drop_tol = 1e-9);

/// kernel_factorize at every sample point.
std::vector<Factorization> kernel_factorize(const LoopSampler& phi, const std::vector<cplx>& points,
                                            double rank_tol = kRankTolerance, double drop_tol = 1e-9);

struct TypeOneResult {
    /// Constant subspaces A_1, A_2, ... in the order they were applied; the
    /// accumulated constant loop is (pi_{A_m} + lambda^{-1} pi_{A_m}^perp) ... (pi_{A_1} + ...).
    std::vector<Span> prefactors;
    LoopSampler normalized;
    int degree = 0;

    /// The accumulated constant loop evaluated at lambda.
    CMatrix prefactor_at(cplx lambda, int n) const;
};

/// Left-multiplies by (pi_A + lambda^{-1} pi_A^perp), A = span of im T_0 over the
/// sample points, until im T_0 is full. Throws NoTermination after r+1 rounds.
TypeOneResult normalize_type_one(const LoopSampler& phi, const std::vector<cplx>& points,
                                 double rank_tol = kRankTolerance, double trim_tol = 1e-9);

struct QAdaptedResult {
    double defect = 0.0;
    // Populated only when defect <= tolerance.
    CMatrix adapted_basis;       // columns in C^{rn}
    std::vector<int> parity;     // +1 for type (+), -1 for type (-)
};

struct QInvolution {
    Span a_span;
    CMatrix q() const { return cartan_embed(a_span); }
    static QInvolution identity(int n) { return {Span::full(n)}; }
};

QAdaptedResult q_adapted_check(const WSubspace& w, const QInvolution& q, double tol = 1e-7);

}  // namespace unitons
