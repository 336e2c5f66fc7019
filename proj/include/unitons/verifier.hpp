#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "unitons/meromorphic.hpp"
#include "unitons/uniton_builder.hpp"

namespace unitons {

struct FDScheme {
    double h = 1e-3;
    int order = 4;  // 2 or 4
};

using MatrixField = std::function<CMatrix(cplx)>;

/// (d/dz f, d/dzbar f) at z from central differences in x and y.
std::pair<CMatrix, CMatrix> wirtinger(const MatrixField& f, cplx z, const FDScheme& scheme = {});

struct ConnectionFiber {
    CMatrix a_z;
    CMatrix a_zbar;
};

/// A = 1/2 phi^{-1} d phi, split into types.
ConnectionFiber connection_form(const MatrixField& phi, cplx z, const FDScheme& scheme = {});
/// Same, reusing precomputed phi(z) and its Wirtinger derivatives.
ConnectionFiber connection_form(const CMatrix& phi, const CMatrix& d_z, const CMatrix& d_zbar);

/// || dzbar A_z + [A_zbar, A_z] ||_F with A_z itself sampled on a stencil.
double harmonicity_residual(const MatrixField& phi, cplx z, const FDScheme& scheme = {});

std::vector<cplx> roots_of_unity(int q);

struct ExtendedReport {
    double es_residual = 0.0;
    double unitarity_defect = 0.0;
    double phi1_defect = 0.0;
};

ExtendedReport extended_checks(const HarmonicMapSampler& sampler, cplx z, const std::vector<cplx>& lambdas,
                               const FDScheme& scheme = {});

struct SectionReport {
    double dbar_k = 0.0;
    double az_k = 0.0;
    double dzbar_lemma = 0.0;
    double antibasic = 0.0;
};

/// Holomorphicity and A_z-ladder of the K vectors, the dzbar lemma for the
/// polynomial `h` and the antibasic property, all maxima over i, k, j.
SectionReport section_identities(const HarmonicMapSampler& sampler, cplx z, const MeroVector& h,
                                 const FDScheme& scheme = {});

struct FiberReport {
    double covering = 0.0;         // pi_{l-1} alpha_l vs alpha_{l-1}
    double perp_image = 0.0;       // im(pi_l^perp ... pi_1^perp) vs alpha_l^perp
    double forward_image = 0.0;    // im(pi_1 ... pi_l) vs alpha_1
    double top_coefficient = 0.0;  // T_r^* vs pi_r^perp ... pi_1^perp, entrywise
    double top_image = 0.0;        // im T_r^* vs alpha_r^perp
    double reality = 0.0;          // T_0 T_r^* and T_r^* T_0, entrywise
};

/// Algebraic identities at one fiber; angles are principal angles in radians.
FiberReport fiber_checks(const UnitonFiber& fiber);

/// phi with alpha_index replaced by the span of a + b z + c zbar, which is not
/// holomorphic. Used as a negative control for harmonicity.
MatrixField corrupted_map(const HarmonicMapSampler& sampler, int index, std::uint64_t seed);

struct Check {
    std::string name;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = true;
};

struct Tolerances {
    double residual = 1e-5;
    double unitarity = 1e-10;
    double phi1 = 1e-12;
    double angle = 1e-7;
    double entrywise = 1e-10;
    double skew = 1e-7;  // A_zbar + A_z^*, a first-derivative quantity
};

struct VerificationReport {
    std::vector<Check> checks;
    int points = 0;
    bool all_pass() const;
};

/// Every check above, maximized over the given points.
VerificationReport verify_all(const HarmonicMapSampler& sampler, const std::vector<cplx>& points,
                              std::uint64_t seed = 0, const Tolerances& tol = {}, const FDScheme& scheme = {});

}  // namespace unitons
