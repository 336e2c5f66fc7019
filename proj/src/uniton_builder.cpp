#include "unitons/uniton_builder.hpp"

#include <algorithm>
#include <cmath>

#include "unitons/errors.hpp"
#include "unitons/random.hpp"

namespace unitons {

bool UnitonFiber::all_proper() const {
    return std::all_of(proper.begin(), proper.end(), [](bool p) { return p; });
}

Span UnitonFiber::layer(int i, int k) const {
    const auto& vectors = k_vectors.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(k));
    return orthonormal_basis(vectors, n());
}

HarmonicMapSampler::HarmonicMapSampler(DataArray data, std::optional<CMatrix> phi0, BuildOptions options)
    : data_(std::move(data)), options_(options) {
    data_.validate();
    const int n = data_.n;
    phi0_ = phi0 ? *phi0 : CMatrix::Identity(n, n);
    if (phi0_.rows() != n || phi0_.cols() != n) throw BadShape("phi0 must be n x n");
    if ((phi0_ * phi0_.adjoint() - CMatrix::Identity(n, n)).norm() > 1e-12)
        throw std::invalid_argument("phi0 must be unitary");
    poles_ = data_.poles();

    const int r = data_.r;
    for (const auto& column : data_.columns) {
        std::vector<std::vector<MeroVector>> per_row;
        for (int i = 0; i < r; ++i) {
            std::vector<MeroVector> orders{column[static_cast<std::size_t>(i)]};
            for (int k = 1; i + k <= r - 1; ++k) orders.push_back(differentiate(orders.back()));
            per_row.push_back(std::move(orders));
        }
        derivs_.push_back(std::move(per_row));
    }
}

CVector HarmonicMapSampler::derivative_value(int row, int column, int order, cplx z) const {
    return eval(derivs_.at(static_cast<std::size_t>(column)).at(static_cast<std::size_t>(row)).at(static_cast<std::size_t>(order)), z);
}

UnitonFiber HarmonicMapSampler::fiber(cplx z) const {
    const int n = data_.n;
    const int r = data_.r;
    const int columns = data_.column_count();

    // values[j][m][k] = H^{(k)}_{m,j}(z)
    std::vector<std::vector<std::vector<CVector>>> values(static_cast<std::size_t>(columns));
    try {
        for (int j = 0; j < columns; ++j) {
            auto& per_row = values[static_cast<std::size_t>(j)];
            per_row.resize(static_cast<std::size_t>(r));
            for (int m = 0; m < r; ++m)
                for (const auto& d : derivs_[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)])
                    per_row[static_cast<std::size_t>(m)].push_back(eval(d, z));
        }
    } catch (const PoleError&) {
        throw DegeneratePoint("sample point lies on a pole of the data");
    }

    UnitonFiber fiber;
    fiber.z = z;
    std::vector<CMatrix> c = c_operators({}, n);
    for (int i = 0; i < r; ++i) {
        std::vector<std::vector<CVector>> by_order(static_cast<std::size_t>(i) + 1);
        CMatrix all(n, static_cast<Eigen::Index>((i + 1) * columns));
        CMatrix generating(n, columns);
        Eigen::Index col = 0;
        for (int k = 0; k <= i; ++k) {
            for (int j = 0; j < columns; ++j) {
                CVector kv = CVector::Zero(n);
                for (int s = k; s <= i; ++s)
                    kv += c[static_cast<std::size_t>(s)] *
                          values[static_cast<std::size_t>(j)][static_cast<std::size_t>(s - k)][static_cast<std::size_t>(k)];
                if (k == 0) generating.col(j) = kv;
                all.col(col++) = kv;
                by_order[static_cast<std::size_t>(k)].push_back(std::move(kv));
            }
        }
        auto [alpha, sigma] = orthonormal_basis_with_spectrum(all, options_.rank_tol);
        if (options_.reject_ambiguous && rank_is_ambiguous(sigma, options_.rank_tol))
            throw DegeneratePoint("ambiguous rank for alpha_" + std::to_string(i + 1));
        fiber.generating_ranks.push_back(orthonormal_basis(generating, options_.rank_tol).rank());
        fiber.proper.push_back(alpha.is_proper());
        fiber.chain.push_back(projection_pair(alpha));
        fiber.alphas.push_back(std::move(alpha));
        fiber.k_vectors.push_back(std::move(by_order));

        const CMatrix& perp = fiber.chain.back().perp;
        std::vector<CMatrix> next(c.size() + 1);
        next[0] = c[0];
        for (std::size_t s = 1; s < c.size(); ++s) next[s] = perp * c[s - 1] + c[s];
        next[c.size()] = perp * c.back();
        c = std::move(next);
    }
    return fiber;
}

CMatrix map_from_chain(const ProjChain& chain, int count, const CMatrix& phi0) {
    CMatrix out = phi0;
    for (int l = 0; l < count; ++l) {
        const auto& [pi, perp] = chain[static_cast<std::size_t>(l)];
        out = out * (pi - perp);
    }
    return out;
}

CMatrix extended_from_chain(const ProjChain& chain, int count, cplx lambda, int n) {
    CMatrix out = CMatrix::Identity(n, n);
    for (int l = 0; l < count; ++l) {
        const auto& [pi, perp] = chain[static_cast<std::size_t>(l)];
        out = out * (pi + lambda * perp);
    }
    return out;
}

CMatrix HarmonicMapSampler::map(cplx z) const {
    const auto f = fiber(z);
    return map_from_chain(f.chain, r(), phi0_);
}

CMatrix HarmonicMapSampler::extended(cplx z, cplx lambda) const {
    const auto f = fiber(z);
    return extended_from_chain(f.chain, r(), lambda, n());
}

HarmonicMapSampler HarmonicMapSampler::truncated(int rows) const {
    return HarmonicMapSampler(data_.truncated(rows), phi0_, options_);
}

UnitonFiber build_fiber(const DataArray& data, cplx z, const BuildOptions& options) {
    return HarmonicMapSampler(data, std::nullopt, options).fiber(z);
}

CMatrix evaluate_map(const HarmonicMapSampler& sampler, cplx z) { return sampler.map(z); }

CMatrix evaluate_extended(const HarmonicMapSampler& sampler, cplx z, cplx lambda) {
    return sampler.extended(z, lambda);
}

std::pair<Span, Span> associated_and_gauss(const std::vector<MeroVector>& h_column, int i, cplx z, double rank_tol) {
    if (i < 0) throw IndexError("associated curve index must be non-negative");
    if (h_column.empty()) throw BadShape("associated_and_gauss needs at least one spanning section");
    const int n = static_cast<int>(h_column.front().size());
    std::vector<CVector> lower;  // sections and derivatives up to order i-1
    std::vector<CVector> top;    // order i
    try {
        for (const auto& section : h_column) {
            MeroVector d = section;
            for (int k = 0; k <= i; ++k) {
                (k < i ? lower : top).push_back(eval(d, z));
                if (k < i) d = differentiate(d);
            }
        }
    } catch (const PoleError&) {
        throw DegeneratePoint("associated curve evaluated at a pole");
    }
    std::vector<CVector> all = lower;
    all.insert(all.end(), top.begin(), top.end());
    Span h_i = orthonormal_basis(all, n, rank_tol);
    if (i == 0) return {h_i, h_i};
    const Span h_prev = orthonormal_basis(lower, n, rank_tol);
    const CMatrix perp = CMatrix::Identity(n, n) - h_prev.projection();
    Span gauss = orthonormal_basis(CMatrix(perp * h_i.basis), rank_tol);
    return {std::move(h_i), std::move(gauss)};
}

DataArray s1_invariant_data(int n, const std::vector<int>& rank_steps, int max_degree, std::uint64_t seed) {
    const int r = static_cast<int>(rank_steps.size());
    if (n < 1 || r > n - 1) throw BadShape("s1_invariant_data requires r <= n-1");
    if (!rank_steps.empty() &&
        (!std::is_sorted(rank_steps.begin(), rank_steps.end()) || rank_steps.front() < 0 || rank_steps.back() > n))
        throw BadShape("rank steps must satisfy 0 <= d_1 <= ... <= d_r <= n");
    Rng rng(seed);
    DataArray data{n, r, {}};
    int start = 0;
    for (int i = 0; i < r; ++i) {
        const int stop = rank_steps[static_cast<std::size_t>(i)];
        for (int j = start; j < stop; ++j) {
            std::vector<MeroVector> column(static_cast<std::size_t>(r), zero_vector(n));
            column[static_cast<std::size_t>(i)] = random_polynomial_vector(n, max_degree, rng);
            data.columns.push_back(std::move(column));
        }
        start = stop;
    }
    return data;
}

CMatrix cartan_embed(const Span& s) {
    const auto [pi, perp] = projection_pair(s);
    return pi - perp;
}

std::vector<cplx> generic_points(const HarmonicMapSampler& sampler, int count, std::uint64_t seed,
                                 const std::function<bool(cplx)>& accept, const SamplingPolicy& policy) {
    Rng rng(seed);
    std::vector<cplx> points;
    for (int p = 0; p < count; ++p) {
        bool found = false;
        for (int attempt = 0; attempt < policy.max_retries && !found; ++attempt) {
            const cplx z = rng.disc(policy.radius);
            const bool near_pole = std::any_of(sampler.poles().begin(), sampler.poles().end(),
                                               [&](cplx q) { return std::abs(z - q) < policy.pole_margin; });
            if (near_pole) continue;
            try {
                (void)sampler.fiber(z);
                if (accept && !accept(z)) continue;
            } catch (const DegeneratePoint&) {
                continue;
            } catch (const PoleError&) {
                continue;
            }
            points.push_back(z);
            found = true;
        }
        if (!found) throw DegeneratePoint("no generic sample point found after retries");
    }
    return points;
}

bool alpha1_is_full(const HarmonicMapSampler& sampler, std::uint64_t seed) {
    if (sampler.r() == 0) return false;
    const int n = sampler.n();
    const auto points = generic_points(sampler, 2 * n, seed);
    std::vector<CVector> vectors;
    for (const auto z : points) {
        const auto f = sampler.fiber(z);
        const auto& basis = f.alphas.front().basis;
        for (Eigen::Index c = 0; c < basis.cols(); ++c) vectors.emplace_back(basis.col(c));
    }
    return orthonormal_basis(vectors, n).rank() == n;
}

}  // namespace unitons
