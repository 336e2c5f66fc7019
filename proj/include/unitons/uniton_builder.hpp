#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "unitons/meromorphic.hpp"
#include "unitons/projection.hpp"

namespace unitons {

/// Everything the construction produces at one sample point.
struct UnitonFiber {
    cplx z;
    ProjChain chain;                 // (pi_l, pi_l^perp), l = 1..r
    std::vector<Span> alphas;        // alpha_1 .. alpha_r
    // k_vectors[i][k][j] = K^{(k)}_{i,j}, 0 <= k <= i <= r-1
    std::vector<std::vector<std::vector<CVector>>> k_vectors;
    std::vector<int> generating_ranks;  // rank of alpha_{i+1}^{(0)}
    std::vector<bool> proper;           // alpha_i neither 0 nor C^n

    int n() const { return static_cast<int>(chain.empty() ? 0 : chain.front().pi.rows()); }
    int r() const { return static_cast<int>(alphas.size()); }
    bool all_proper() const;

    /// Span of K^{(k)}_{i,j} over j, i.e. alpha_{i+1}^{(k)}.
    Span layer(int i, int k) const;
};

struct BuildOptions {
    double rank_tol = kRankTolerance;
    bool reject_ambiguous = true;
};

/// A DataArray together with phi_0 and the symbolic derivatives the
/// construction needs. Evaluation is pointwise and stateless.
class HarmonicMapSampler {
public:
    explicit HarmonicMapSampler(DataArray data, std::optional<CMatrix> phi0 = std::nullopt, BuildOptions options = {});

    const DataArray& data() const { return data_; }
    const CMatrix& phi0() const { return phi0_; }
    int n() const { return data_.n; }
    int r() const { return data_.r; }
    const std::vector<cplx>& poles() const { return poles_; }

    /// Throws DegeneratePoint near poles or on ambiguous ranks.
    UnitonFiber fiber(cplx z) const;

    /// phi_0 (pi_1 - pi_1^perp) ... (pi_r - pi_r^perp)
    CMatrix map(cplx z) const;

    /// (pi_1 + lambda pi_1^perp) ... (pi_r + lambda pi_r^perp)
    CMatrix extended(cplx z, cplx lambda) const;

    /// The sampler for the first `rows` unitons.
    HarmonicMapSampler truncated(int rows) const;

    /// H^{(k)}_{i,j}(z)
    CVector derivative_value(int row, int column, int order, cplx z) const;

private:
    DataArray data_;
    CMatrix phi0_;
    BuildOptions options_;
    std::vector<cplx> poles_;
    // derivs_[j][i][k] = H^{(k)}_{i,j}, i + k <= r - 1
    std::vector<std::vector<std::vector<MeroVector>>> derivs_;
};

UnitonFiber build_fiber(const DataArray& data, cplx z, const BuildOptions& options = {});
CMatrix evaluate_map(const HarmonicMapSampler& sampler, cplx z);
CMatrix evaluate_extended(const HarmonicMapSampler& sampler, cplx z, cplx lambda);

/// phi_0 times the product of (pi_l - pi_l^perp) over the first `count` pairs.
CMatrix map_from_chain(const ProjChain& chain, int count, const CMatrix& phi0);
/// Product of (pi_l + lambda pi_l^perp) over the first `count` pairs.
CMatrix extended_from_chain(const ProjChain& chain, int count, cplx lambda, int n);

/// h_(i) and the Gauss bundle G^(i)(h) at z for the bundle spanned by `h_column`.
std::pair<Span, Span> associated_and_gauss(const std::vector<MeroVector>& h_column, int i, cplx z,
                                           double rank_tol = kRankTolerance);

/// Diagonal-form data: row i has d_{i+1} - d_i fresh random polynomial
/// columns and zeros elsewhere.
DataArray s1_invariant_data(int n, const std::vector<int>& rank_steps, int max_degree, std::uint64_t seed);

/// pi_s - pi_s^perp
CMatrix cartan_embed(const Span& s);

/// Sample-point policy: uniform in |z| <= radius, at least `pole_margin` from
/// every pole, with a fiber that builds without ambiguity and passes
/// `accept` (if given). Each point gets up to 100 draws before
/// DegeneratePoint is thrown.
struct SamplingPolicy {
    double radius = 2.0;
    double pole_margin = 1e-2;
    int max_retries = 100;
};

std::vector<cplx> generic_points(const HarmonicMapSampler& sampler, int count, std::uint64_t seed,
                                 const std::function<bool(cplx)>& accept = {}, const SamplingPolicy& policy = {});

/// alpha_1 is full when the union of its fibers over 2n generic points spans C^n.
bool alpha1_is_full(const HarmonicMapSampler& sampler, std::uint64_t seed);

}  // namespace unitons
