#include "unitons/grassmannian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "unitons/errors.hpp"

namespace unitons {

namespace {

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

long long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long out = 1;
    for (int t = 1; t <= k; ++t) out = out * (n - k + t) / t;
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// LoopPoly

LoopPoly LoopPoly::identity(int n, int padded_degree) {
    LoopPoly out;
    out.coeffs.assign(static_cast<std::size_t>(padded_degree) + 1, CMatrix::Zero(n, n));
    out.coeffs.front() = CMatrix::Identity(n, n);
    return out;
}

LoopPoly LoopPoly::from_chain(const ProjChain& chain, int n) {
    LoopPoly out = identity(n);
    for (const auto& [pi, perp] : chain) out = out * LoopPoly{{pi, perp}};
    return out;
}

CMatrix LoopPoly::operator()(cplx lambda) const {
    CMatrix acc = CMatrix::Zero(n(), n());
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * lambda + *it;
    return acc;
}

LoopPoly LoopPoly::trimmed(double tol) const {
    LoopPoly out = *this;
    while (out.coeffs.size() > 1 && max_abs(out.coeffs.back()) <= tol) out.coeffs.pop_back();
    return out;
}

double LoopPoly::unitarity_defect(int q) const {
    double worst = 0.0;
    const auto id = CMatrix::Identity(n(), n());
    for (int k = 0; k < q; ++k) {
        const CMatrix m = (*this)(std::polar(1.0, 2.0 * std::numbers::pi * k / q));
        worst = std::max(worst, max_abs(m * m.adjoint() - id));
    }
    return worst;
}

LoopPoly operator*(const LoopPoly& a, const LoopPoly& b) {
    const int n = a.n();
    LoopPoly out;
    out.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, CMatrix::Zero(n, n));
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs.size(); ++j) out.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
    return out;
}

// ---------------------------------------------------------------------------
// Block operations on C^{rn}

CMatrix shift(const CMatrix& blocks, int n, int r) {
    CMatrix out = CMatrix::Zero(blocks.rows(), blocks.cols());
    for (int b = 0; b + 1 < r; ++b) out.middleRows((b + 1) * n, n) = blocks.middleRows(b * n, n);
    return out;
}

CMatrix nu_q(const CMatrix& blocks, const CMatrix& q, int r) {
    const auto n = q.rows();
    CMatrix out(blocks.rows(), blocks.cols());
    for (int b = 0; b < r; ++b) {
        const double sign = (b % 2 == 0) ? 1.0 : -1.0;
        out.middleRows(b * n, n) = sign * (q * blocks.middleRows(b * n, n));
    }
    return out;
}

double lambda_invariance_defect(const WSubspace& w) {
    if (w.dim() == 0) return 0.0;
    const CMatrix& basis = w.span.basis;
    const CMatrix shifted = shift(basis, w.n, w.r);
    const CMatrix residual = shifted - basis * (basis.adjoint() * shifted);
    Eigen::JacobiSVD<CMatrix> svd(residual);
    return std::asin(std::clamp(svd.singularValues()(0), 0.0, 1.0));
}

// ---------------------------------------------------------------------------
// Binomial transform and W constructions

std::vector<MeroVector> binomial_transform(const std::vector<MeroVector>& column, bool inverse) {
    std::vector<MeroVector> out;
    out.reserve(column.size());
    for (std::size_t i = 0; i < column.size(); ++i) {
        MeroVector acc = zero_vector(static_cast<int>(column[i].size()));
        for (std::size_t l = 0; l <= i; ++l) {
            const long long c = binom(static_cast<int>(i), static_cast<int>(l));
            const double sign = (inverse && (i - l) % 2 == 1) ? -1.0 : 1.0;
            acc = acc + cplx(sign * static_cast<double>(c)) * column[l];
        }
        out.push_back(std::move(acc));
    }
    return out;
}

WSubspace w_from_x(const std::vector<std::vector<MeroVector>>& x_columns, int n, int r, cplx z, double rank_tol) {
    std::vector<CVector> spanning;
    try {
        for (const auto& section : x_columns) {
            if (static_cast<int>(section.size()) != r) throw BadShape("each X section needs r blocks");
            std::vector<MeroVector> current = section;
            for (int m = 0; m < r; ++m) {
                CVector value(static_cast<Eigen::Index>(r) * n);
                for (int b = 0; b < r; ++b) value.segment(b * n, n) = eval(current[static_cast<std::size_t>(b)], z);
                // lambda^k L^{(m)} for k >= m
                CVector shifted = value;
                for (int k = 0; k < r; ++k) {
                    if (k >= m) spanning.push_back(shifted);
                    shifted = shift(shifted, n, r);
                }
                if (m + 1 < r)
                    for (auto& block : current) block = differentiate(block);
            }
        }
    } catch (const PoleError&) {
        throw DegeneratePoint("w_from_x evaluated at a pole");
    }
    WSubspace w{n, r, orthonormal_basis(spanning, r * n, rank_tol)};
    return w;
}

WSubspace w_from_loop(const LoopPoly& phi) { return w_from_loop(phi, phi.degree()); }

WSubspace w_from_loop(const LoopPoly& phi, int r) {
    const int n = phi.n();
    if (r < phi.degree()) throw BadShape("window smaller than the loop degree");
    if (phi.unitarity_defect() > 1e-8) throw SingularLoop("loop is not unitary on the unit circle");
    CMatrix columns = CMatrix::Zero(static_cast<Eigen::Index>(r) * n, static_cast<Eigen::Index>(r) * n);
    for (int k = 0; k < r; ++k)
        for (int b = k; b < r; ++b) {
            const int idx = b - k;
            if (idx <= phi.degree())
                columns.block(b * n, k * n, n, n) = phi.coeffs[static_cast<std::size_t>(idx)];
        }
    WSubspace w{n, r, orthonormal_basis(columns)};
    if (lambda_invariance_defect(w) > 1e-8) throw SingularLoop("Phi(H_+) is not lambda-invariant");
    return w;
}

// ---------------------------------------------------------------------------
// Factorizations

bool Factorization::all_proper() const {
    return std::all_of(proper.begin(), proper.end(), [](bool p) { return p; });
}

LoopPoly Factorization::loop(int n) const { return LoopPoly::from_chain(chain, n); }

Factorization iwasawa_factorize(const WSubspace& w, double rank_tol, double invariance_tol) {
    if (lambda_invariance_defect(w) > invariance_tol) throw NotLambdaInvariant("lambda W is not contained in W");
    const int n = w.n;
    Factorization out;
    for (int i = 1; i <= w.r; ++i) {
        const auto s_ops = s_operators(out.chain, n);  // S^{i-1}_s, s = 0..i-1
        CMatrix images = CMatrix::Zero(n, w.span.basis.cols());
        for (int s = 0; s < i; ++s)
            images += s_ops[static_cast<std::size_t>(s)] * w.span.basis.middleRows(s * n, n);
        Span alpha = orthonormal_basis(images, rank_tol);
        out.proper.push_back(alpha.is_proper());
        out.chain.push_back(projection_pair(alpha));
        out.alphas.push_back(std::move(alpha));
    }
    return out;
}

Factorization kernel_factorize(const LoopPoly& phi, double rank_tol, double drop_tol) {
    const int n = phi.n();
    const int r = phi.degree();
    if (max_abs(phi.coeffs.front() * phi.coeffs.back().adjoint()) > 1e-10 && r > 0)
        throw DegreeNoDrop("reality condition T_0 T_r^* = 0 fails");

    Factorization out;
    out.alphas.resize(static_cast<std::size_t>(r));
    out.chain.resize(static_cast<std::size_t>(r));
    out.proper.assign(static_cast<std::size_t>(r), true);

    std::vector<CMatrix> current = phi.coeffs;
    for (int i = r; i >= 1; --i) {
        const CMatrix& top = current[static_cast<std::size_t>(i)];
        Eigen::JacobiSVD<CMatrix> svd(top, Eigen::ComputeFullV);
        const auto& sigma = svd.singularValues();
        const double sigma_max = sigma(0);
        Eigen::Index rank = 0;
        if (sigma_max > 0.0)
            while (rank < sigma.size() && sigma(rank) > rank_tol * sigma_max) ++rank;
        if (rank == 0 || rank == n)
            throw NonProperUniton("kernel of T_" + std::to_string(i) + " is zero or everything");
        Span alpha(svd.matrixV().rightCols(n - rank));
        const ProjPair pair = projection_pair(alpha);

        // Phi_{i-1} = Phi_i (pi + lambda^{-1} pi^perp)
        if (max_abs(current.front() * pair.perp) > drop_tol)
            throw DegreeNoDrop("lambda^{-1} coefficient does not vanish at step " + std::to_string(i));
        if (max_abs(top * pair.pi) > drop_tol)
            throw DegreeNoDrop("lambda^" + std::to_string(i) + " coefficient does not vanish");
        std::vector<CMatrix> next(static_cast<std::size_t>(i));
        for (int l = 0; l < i; ++l)
            next[static_cast<std::size_t>(l)] =
                current[static_cast<std::size_t>(l)] * pair.pi + current[static_cast<std::size_t>(l + 1)] * pair.perp;
        current = std::move(next);

        out.chain[static_cast<std::size_t>(i - 1)] = pair;
        out.alphas[static_cast<std::size_t>(i - 1)] = std::move(alpha);
    }
    if (max_abs(current.front() - CMatrix::Identity(n, n)) > drop_tol)
        throw DegreeNoDrop("factorization does not terminate at the identity");
    return out;
}

std::vector<Factorization> kernel_factorize(const LoopSampler& phi, const std::vector<cplx>& points, double rank_tol,
                                            double drop_tol) {
    std::vector<Factorization> out;
    out.reserve(points.size());
    for (const auto z : points) out.push_back(kernel_factorize(phi(z), rank_tol, drop_tol));
    return out;
}

// ---------------------------------------------------------------------------
// Type-one normalization

CMatrix TypeOneResult::prefactor_at(cplx lambda, int n) const {
    CMatrix out = CMatrix::Identity(n, n);
    for (const auto& a : prefactors) {
        const auto [pi, perp] = projection_pair(a);
        out = (pi + perp / lambda) * out;
    }
    return out;
}

TypeOneResult normalize_type_one(const LoopSampler& phi, const std::vector<cplx>& points, double rank_tol,
                                 double trim_tol) {
    if (points.empty()) throw std::invalid_argument("normalize_type_one needs sample points");
    const LoopPoly first = phi(points.front());
    const int n = first.n();
    const int r = first.degree();

    TypeOneResult out;
    LoopSampler current = phi;
    for (int round = 0;; ++round) {
        CMatrix images(n, 0);
        for (const auto z : points) {
            const CMatrix t0 = current(z).coeffs.front();
            CMatrix grown(n, images.cols() + t0.cols());
            grown << images, t0;
            images = std::move(grown);
        }
        Span a = orthonormal_basis(images, rank_tol);
        if (a.rank() == n) break;
        if (a.rank() == 0) throw std::invalid_argument("constant coefficient vanishes; divide by lambda first");
        if (round == r) throw NoTermination("im T_0 still not full after r rounds");

        const ProjPair pair = projection_pair(a);
        current = [prev = std::move(current), pair, trim_tol](cplx z) {
            const LoopPoly p = prev(z);
            LoopPoly q;
            const std::size_t d = p.coeffs.size();
            for (std::size_t l = 0; l < d; ++l) {
                CMatrix c = pair.pi * p.coeffs[l];
                if (l + 1 < d) c += pair.perp * p.coeffs[l + 1];
                q.coeffs.push_back(std::move(c));
            }
            return q.trimmed(trim_tol);
        };
        out.prefactors.push_back(std::move(a));
    }
    out.normalized = current;
    out.degree = current(points.front()).degree();
    return out;
}

// ---------------------------------------------------------------------------
// Q-adapted detection

QAdaptedResult q_adapted_check(const WSubspace& w, const QInvolution& involution, double tol) {
    const CMatrix q = involution.q();
    if ((q * q - CMatrix::Identity(q.rows(), q.cols())).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("Q must be an involution");
    QAdaptedResult out;
    const CMatrix& basis = w.span.basis;
    const CMatrix image = nu_q(basis, q, w.r);
    out.defect = max_principal_angle(w.span, Span(image));
    if (out.defect > tol) return out;

    const Span plus = orthonormal_basis(CMatrix(basis + image));
    const Span minus = orthonormal_basis(CMatrix(basis - image));
    out.adapted_basis.resize(basis.rows(), plus.rank() + minus.rank());
    out.adapted_basis << plus.basis, minus.basis;
    out.parity.assign(static_cast<std::size_t>(plus.rank()), 1);
    out.parity.insert(out.parity.end(), static_cast<std::size_t>(minus.rank()), -1);
    return out;
}

}  // namespace unitons
