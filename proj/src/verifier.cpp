#include "unitons/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "unitons/errors.hpp"
#include "unitons/grassmannian.hpp"
#include "unitons/random.hpp"

namespace unitons {

namespace {

constexpr cplx kI{0.0, 1.0};

CMatrix directional(const MatrixField& f, cplx z, cplx step, const FDScheme& scheme) {
    const double h = scheme.h;
    if (scheme.order == 2) return (f(z + step * h) - f(z - step * h)) / (2.0 * h);
    if (scheme.order != 4) throw std::invalid_argument("FD order must be 2 or 4");
    return (-f(z + step * (2.0 * h)) + 8.0 * f(z + step * h) - 8.0 * f(z - step * h) + f(z - step * (2.0 * h))) /
           (12.0 * h);
}

double entrywise(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double angle_or_mismatch(const Span& a, const Span& b) {
    if (a.rank() != b.rank()) return std::numbers::pi / 2;
    return max_principal_angle(a, b);
}

// Packs several n-row blocks side by side so one fiber build feeds every
// quantity that needs differentiating.
struct Packer {
    CMatrix data;
    Eigen::Index add(const CMatrix& block) {
        const Eigen::Index at = data.cols();
        CMatrix grown(block.rows(), at + block.cols());
        if (at > 0) grown.leftCols(at) = data;
        grown.rightCols(block.cols()) = block;
        data = std::move(grown);
        return at;
    }
};

}  // namespace

std::pair<CMatrix, CMatrix> wirtinger(const MatrixField& f, cplx z, const FDScheme& scheme) {
    if (!(scheme.h > 0.0)) throw std::invalid_argument("FD step must be positive");
    const CMatrix dx = directional(f, z, 1.0, scheme);
    const CMatrix dy = directional(f, z, kI, scheme);
    return {0.5 * (dx - kI * dy), 0.5 * (dx + kI * dy)};
}

ConnectionFiber connection_form(const CMatrix& phi, const CMatrix& d_z, const CMatrix& d_zbar) {
    const CMatrix inv = phi.inverse();
    return {0.5 * inv * d_z, 0.5 * inv * d_zbar};
}

ConnectionFiber connection_form(const MatrixField& phi, cplx z, const FDScheme& scheme) {
    const auto [dz, dzbar] = wirtinger(phi, z, scheme);
    return connection_form(phi(z), dz, dzbar);
}

double harmonicity_residual(const MatrixField& phi, cplx z, const FDScheme& scheme) {
    const MatrixField a_z = [&](cplx w) { return connection_form(phi, w, scheme).a_z; };
    const auto [unused, dzbar_az] = wirtinger(a_z, z, scheme);
    (void)unused;
    const auto a = connection_form(phi, z, scheme);
    return (dzbar_az + a.a_zbar * a.a_z - a.a_z * a.a_zbar).norm();
}

std::vector<cplx> roots_of_unity(int q) {
    std::vector<cplx> out;
    for (int k = 0; k < q; ++k) out.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / q));
    return out;
}

ExtendedReport extended_checks(const HarmonicMapSampler& sampler, cplx z, const std::vector<cplx>& lambdas,
                               const FDScheme& scheme) {
    const int n = sampler.n();
    const int r = sampler.r();
    const auto m = static_cast<Eigen::Index>(lambdas.size());
    const MatrixField packed = [&](cplx w) {
        const auto f = sampler.fiber(w);
        CMatrix out(n, n * (m + 1));
        out.leftCols(n) = map_from_chain(f.chain, r, sampler.phi0());
        for (Eigen::Index l = 0; l < m; ++l)
            out.middleCols(n * (l + 1), n) = extended_from_chain(f.chain, r, lambdas[static_cast<std::size_t>(l)], n);
        return out;
    };
    const CMatrix value = packed(z);
    const auto [dz, dzbar] = wirtinger(packed, z, scheme);
    const auto a = connection_form(value.leftCols(n), dz.leftCols(n), dzbar.leftCols(n));

    ExtendedReport report;
    const auto id = CMatrix::Identity(n, n);
    for (Eigen::Index l = 0; l < m; ++l) {
        const cplx lambda = lambdas[static_cast<std::size_t>(l)];
        const CMatrix big_phi = value.middleCols(n * (l + 1), n);
        const double res = (dz.middleCols(n * (l + 1), n) - (1.0 - 1.0 / lambda) * big_phi * a.a_z).norm() +
                           (dzbar.middleCols(n * (l + 1), n) - (1.0 - lambda) * big_phi * a.a_zbar).norm();
        report.es_residual = std::max(report.es_residual, res);
        report.unitarity_defect = std::max(report.unitarity_defect, (big_phi * big_phi.adjoint() - id).norm());
    }
    const auto f = sampler.fiber(z);
    report.phi1_defect = (extended_from_chain(f.chain, r, 1.0, n) - id).norm();
    return report;
}

SectionReport section_identities(const HarmonicMapSampler& sampler, cplx z, const MeroVector& h,
                                 const FDScheme& scheme) {
    const int n = sampler.n();
    const int r = sampler.r();
    const int columns = sampler.data().column_count();

    // Layout: phi_0..phi_r, then K_i^{(k)} columns, then the lemma pairs
    // (pi_l^perp C^{l-1}_s H, C^{l-1}_{s+1} H) for l = 1..r, s = 0..l-1.
    const MatrixField packed = [&](cplx w) {
        const auto f = sampler.fiber(w);
        Packer p;
        for (int i = 0; i <= r; ++i) p.add(map_from_chain(f.chain, i, sampler.phi0()));
        for (int i = 0; i < r; ++i)
            for (int k = 0; k <= i; ++k)
                for (int j = 0; j < columns; ++j) p.add(f.k_vectors[i][k][j]);
        CVector hv;
        try {
            hv = eval(h, w);
        } catch (const PoleError&) {
            throw DegeneratePoint("test section has a pole on the stencil");
        }
        for (int l = 1; l <= r; ++l) {
            const ProjChain prefix(f.chain.begin(), f.chain.begin() + (l - 1));
            const auto c = c_operators(prefix, n);
            const CMatrix& perp = f.chain[static_cast<std::size_t>(l - 1)].perp;
            for (int s = 0; s < l; ++s) {
                p.add(perp * c[static_cast<std::size_t>(s)] * hv);
                p.add(s + 1 <= l - 1 ? CMatrix(c[static_cast<std::size_t>(s + 1)] * hv) : CMatrix(CVector::Zero(n)));
            }
        }
        return p.data;
    };

    const CMatrix value = packed(z);
    const auto [dz, dzbar] = wirtinger(packed, z, scheme);
    const auto fiber = sampler.fiber(z);

    std::vector<ConnectionFiber> conn;
    for (int i = 0; i <= r; ++i)
        conn.push_back(connection_form(value.middleCols(i * n, n), dz.middleCols(i * n, n), dzbar.middleCols(i * n, n)));

    SectionReport report;
    Eigen::Index col = static_cast<Eigen::Index>(r + 1) * n;
    // k_col(i, k, j) mirrors the packing order above.
    std::vector<std::vector<Eigen::Index>> start(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i)
        for (int k = 0; k <= i; ++k) {
            start[static_cast<std::size_t>(i)].push_back(col);
            col += columns;
        }
    for (int i = 0; i < r; ++i) {
        const auto& a = conn[static_cast<std::size_t>(i)];
        for (int k = 0; k <= i; ++k)
            for (int j = 0; j < columns; ++j) {
                const Eigen::Index at = start[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] + j;
                const CVector kv = value.col(at);
                report.dbar_k = std::max(report.dbar_k, (dzbar.col(at) + a.a_zbar * kv).norm());
                CVector next = CVector::Zero(n);
                if (k + 1 <= i) next = value.col(start[static_cast<std::size_t>(i)][static_cast<std::size_t>(k + 1)] + j);
                report.az_k = std::max(report.az_k, (a.a_z * kv + next).norm());
            }
    }
    for (int l = 1; l <= r; ++l) {
        const auto& a = conn[static_cast<std::size_t>(l)];
        const CMatrix& perp = fiber.chain[static_cast<std::size_t>(l - 1)].perp;
        for (int s = 0; s < l; ++s) {
            const Eigen::Index u = col++;
            const Eigen::Index w = col++;
            const CVector lhs = dzbar.col(u) + a.a_zbar * value.col(u);
            report.dzbar_lemma = std::max(report.dzbar_lemma, (lhs + perp * dzbar.col(w)).norm());
        }
        report.antibasic =
            std::max(report.antibasic, (perp * conn[static_cast<std::size_t>(l - 1)].a_z).norm());
    }
    return report;
}

namespace {

// Image of a product of projections. Such products have norm at most one, so a
// norm below the rank tolerance means the image is zero.
Span operator_image(const CMatrix& m) {
    if (m.size() == 0 || m.norm() <= kRankTolerance) return Span::zero(static_cast<int>(m.rows()));
    return orthonormal_basis(m);
}

}  // namespace

FiberReport fiber_checks(const UnitonFiber& fiber) {
    FiberReport report;
    const int r = fiber.r();
    if (r == 0) return report;
    const int n = fiber.n();
    const auto id = CMatrix::Identity(n, n);

    CMatrix perp_product = id;     // pi_l^perp ... pi_1^perp
    CMatrix forward_product = id;  // pi_1 ... pi_l
    for (int l = 1; l <= r; ++l) {
        const auto& [pi, perp] = fiber.chain[static_cast<std::size_t>(l - 1)];
        const Span& alpha = fiber.alphas[static_cast<std::size_t>(l - 1)];
        if (l >= 2) {
            const auto& prev_pi = fiber.chain[static_cast<std::size_t>(l - 2)].pi;
            const Span image = operator_image(CMatrix(prev_pi * alpha.basis));
            report.covering =
                std::max(report.covering, angle_or_mismatch(image, fiber.alphas[static_cast<std::size_t>(l - 2)]));
        }
        perp_product = perp * perp_product;
        forward_product = forward_product * pi;
        const Span alpha_perp = operator_image(perp);
        report.perp_image = std::max(report.perp_image, angle_or_mismatch(operator_image(perp_product), alpha_perp));
        report.forward_image =
            std::max(report.forward_image, angle_or_mismatch(operator_image(forward_product), fiber.alphas.front()));
    }

    const LoopPoly loop = LoopPoly::from_chain(fiber.chain, n);
    const CMatrix top_adj = loop.coeffs.back().adjoint();
    const CMatrix& t0 = loop.coeffs.front();
    report.top_coefficient = entrywise(top_adj - perp_product);
    report.top_image = angle_or_mismatch(operator_image(top_adj), operator_image(fiber.chain.back().perp));
    report.reality = std::max(entrywise(t0 * top_adj), entrywise(top_adj * t0));
    return report;
}

MatrixField corrupted_map(const HarmonicMapSampler& sampler, int index, std::uint64_t seed) {
    if (index < 0 || index >= sampler.r()) throw IndexError("corrupted_map index out of range");
    Rng rng(seed);
    const int n = sampler.n();
    CVector a(n), b(n), c(n);
    for (int k = 0; k < n; ++k) {
        a(k) = rng.complex_uniform(1.0);
        b(k) = rng.complex_uniform(1.0);
        c(k) = rng.complex_uniform(1.0);
    }
    return [&sampler, index, a, b, c](cplx z) {
        auto f = sampler.fiber(z);
        const CVector v = a + z * b + std::conj(z) * c;
        f.chain[static_cast<std::size_t>(index)] = projection_pair(Span(CMatrix(v.normalized())));
        return map_from_chain(f.chain, sampler.r(), sampler.phi0());
    };
}

bool VerificationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

VerificationReport verify_all(const HarmonicMapSampler& sampler, const std::vector<cplx>& points, std::uint64_t seed,
                              const Tolerances& tol, const FDScheme& scheme) {
    struct Slot {
        const char* name;
        double tolerance;
        double worst = 0.0;
    };
    std::vector<Slot> slots{
        {"connection_skew_adjoint", tol.skew},
        {"harmonicity", tol.residual},
        {"extended_solution", tol.residual},
        {"unitarity", tol.unitarity},
        {"phi1_identity", tol.phi1},
        {"dbar_K", tol.residual},
        {"Az_K", tol.residual},
        {"dzbar_lemma", tol.residual},
        {"antibasic", tol.residual},
        {"covering", tol.angle},
        {"perp_product_image", tol.angle},
        {"forward_product_image", tol.angle},
        {"top_coefficient", tol.entrywise},
        {"top_coefficient_image", tol.angle},
        {"reality", tol.entrywise},
    };
    Rng rng(seed);
    const MeroVector h = random_polynomial_vector(sampler.n(), 2, rng);
    const auto lambdas = roots_of_unity(8);
    const MatrixField phi = [&](cplx w) { return sampler.map(w); };

    for (const auto z : points) {
        const auto a = connection_form(phi, z, scheme);
        const auto ext = extended_checks(sampler, z, lambdas, scheme);
        const auto sec = section_identities(sampler, z, h, scheme);
        const auto fib = fiber_checks(sampler.fiber(z));
        const double values[] = {(a.a_zbar + a.a_z.adjoint()).norm(),
                                 harmonicity_residual(phi, z, scheme),
                                 ext.es_residual,
                                 ext.unitarity_defect,
                                 ext.phi1_defect,
                                 sec.dbar_k,
                                 sec.az_k,
                                 sec.dzbar_lemma,
                                 sec.antibasic,
                                 fib.covering,
                                 fib.perp_image,
                                 fib.forward_image,
                                 fib.top_coefficient,
                                 fib.top_image,
                                 fib.reality};
        for (std::size_t k = 0; k < slots.size(); ++k) slots[k].worst = std::max(slots[k].worst, values[k]);
    }

    VerificationReport report;
    report.points = static_cast<int>(points.size());
    for (const auto& s : slots) report.checks.push_back({s.name, s.worst, s.tolerance, s.worst <= s.tolerance});
    return report;
}

}  // namespace unitons
