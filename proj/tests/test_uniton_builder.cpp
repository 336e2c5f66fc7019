#include <doctest.h>

#include "oracles.hpp"
#include "unitons/errors.hpp"
#include "unitons/uniton_builder.hpp"
#include "unitons/verifier.hpp"

using namespace unitons;
using oracle::max_entry;

namespace {

// Polynomial vector from per-entry ascending coefficient lists.
MeroVector poly_vector(std::initializer_list<std::initializer_list<cplx>> entries) {
    MeroVector v;
    for (const auto& e : entries) v.push_back(RationalFn(Polynomial(std::vector<cplx>(e))));
    return v;
}

Span span_of(std::vector<CVector> vectors, int n) { return orthonormal_basis(vectors, n); }

CMatrix diag(std::initializer_list<cplx> d) {
    CVector v(static_cast<Eigen::Index>(d.size()));
    Eigen::Index k = 0;
    for (const auto x : d) v(k++) = x;
    return v.asDiagonal();
}

}  // namespace

TEST_SUITE("uniton_builder") {

TEST_CASE("first uniton is the span of the first row") {
    const auto d = unitons::random_data(4, 1, 3, std::nullopt, 3, 2);
    const HarmonicMapSampler sampler(d);
    for (const auto z : generic_points(sampler, 5, 1)) {
        const auto f = sampler.fiber(z);
        const Span expected = span_of({eval(d.entry(0, 0), z), eval(d.entry(0, 1), z)}, 4);
        CHECK(same_span(f.alphas[0], expected));
    }
}

TEST_CASE("second uniton from its generating and derived layers") {
    const auto d = unitons::random_data(5, 2, 3, std::nullopt, 8, 2);
    const HarmonicMapSampler sampler(d);
    for (const auto z : generic_points(sampler, 5, 2)) {
        const auto f = sampler.fiber(z);
        const CMatrix& perp1 = f.chain[0].perp;
        std::vector<CVector> layer0, layer1;
        for (int j = 0; j < 2; ++j) {
            layer0.push_back(eval(d.entry(0, j), z) + perp1 * eval(d.entry(1, j), z));
            layer1.push_back(perp1 * eval(differentiate(d.entry(0, j)), z));
        }
        CHECK(same_span(f.layer(1, 0), span_of(layer0, 5)));
        CHECK(same_span(f.layer(1, 1), span_of(layer1, 5)));
        std::vector<CVector> both = layer0;
        both.insert(both.end(), layer1.begin(), layer1.end());
        CHECK(same_span(f.alphas[1], span_of(both, 5)));
    }
}

TEST_CASE("substitution example") {
    DataArray d{2, 1, {{poly_vector({{1.0}, {0.0, 1.0}})}}};
    const auto f = build_fiber(d, 0.0);
    CHECK(same_span(f.alphas[0], Span(CMatrix(CVector::Unit(2, 0)))));
}

TEST_CASE("K vectors lie in their unitons and span them") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto d = unitons::random_data(5, 3, 3, std::nullopt, seed);
        const HarmonicMapSampler sampler(d);
        for (const auto z : generic_points(sampler, 4, seed)) {
            const auto f = sampler.fiber(z);
            for (int i = 0; i < 3; ++i) {
                std::vector<CVector> all;
                for (int k = 0; k <= i; ++k)
                    for (const auto& kv : f.k_vectors[i][k]) {
                        CHECK(relative_distance(kv, f.alphas[i]) <= 1e-9);
                        all.push_back(kv);
                    }
                CHECK(same_span(span_of(all, 5), f.alphas[i]));
            }
        }
    }
}

TEST_CASE("evaluate_map examples") {
    const CMatrix phi0 = diag({1.0, cplx(0, 1), -1.0});
    const HarmonicMapSampler constant(DataArray{3, 0, {}}, phi0);
    CHECK(max_entry(evaluate_map(constant, cplx(0.3, 0.7)) - phi0) == 0.0);

    DataArray line{2, 1, {{poly_vector({{1.0}, {0.0}})}}};
    CHECK(max_entry(evaluate_map(HarmonicMapSampler(line), 0.5) - diag({1.0, -1.0})) <= 1e-15);

    const HarmonicMapSampler sampler(unitons::random_data(3, 2, 3, std::nullopt, 12));
    for (const auto z : generic_points(sampler, 30, 4)) {
        const CMatrix phi = evaluate_map(sampler, z);
        CHECK((phi * phi.adjoint() - CMatrix::Identity(3, 3)).norm() <= 1e-10);
    }
}

TEST_CASE("non-unitary phi0 is rejected") {
    CHECK_THROWS_AS(HarmonicMapSampler(DataArray{2, 0, {}}, CMatrix(2.0 * CMatrix::Identity(2, 2))),
                    std::invalid_argument);
}

TEST_CASE("evaluate_extended examples") {
    DataArray line{2, 1, {{poly_vector({{1.0}, {0.0}})}}};
    const HarmonicMapSampler simple(line);
    CHECK(max_entry(evaluate_extended(simple, 0.2, cplx(0, 1)) - diag({1.0, cplx(0, 1)})) <= 1e-15);

    const HarmonicMapSampler sampler(unitons::random_data(4, 3, 3, std::nullopt, 6));
    for (const auto z : generic_points(sampler, 10, 5)) {
        CHECK(max_entry(evaluate_extended(sampler, z, 1.0) - CMatrix::Identity(4, 4)) <= 1e-12);
        CHECK(max_entry(evaluate_extended(sampler, z, -1.0) - evaluate_map(sampler, z)) <= 1e-12);
    }
}

TEST_CASE("extended solutions multiply uniton by uniton") {
    const HarmonicMapSampler sampler(unitons::random_data(5, 3, 3, std::nullopt, 14));
    const auto lambdas = roots_of_unity(5);
    for (const auto z : generic_points(sampler, 5, 6)) {
        const auto f = sampler.fiber(z);
        for (int i = 0; i < 3; ++i) {
            const auto shorter = sampler.truncated(i);
            for (const auto lambda : lambdas) {
                const auto& [pi, perp] = f.chain[static_cast<std::size_t>(i)];
                const CMatrix lhs = evaluate_extended(shorter, z, lambda) * (pi + lambda * perp);
                CHECK(max_entry(lhs - evaluate_extended(sampler.truncated(i + 1), z, lambda)) <= 1e-11);
            }
        }
    }
}

TEST_CASE("associated curves") {
    const std::vector<MeroVector> h{poly_vector({{1.0}, {0.0, 1.0}, {0.0, 0.0, 1.0}})};
    const cplx z(0.4, -0.3);
    const auto [h1, g1] = associated_and_gauss(h, 1, z);
    CVector a(3), b(3);
    a << 1.0, z, z * z;
    b << 0.0, 1.0, 2.0 * z;
    CHECK(same_span(h1, span_of({a, b}, 3)));
    CHECK(g1.rank() == 1);
    CHECK(std::abs((a.adjoint() * g1.basis)(0, 0)) <= 1e-14);

    const auto [h0, g0] = associated_and_gauss(h, 0, z);
    CHECK(same_span(h0, g0));
    CHECK(same_span(h0, span_of({a}, 3)));
}

TEST_CASE("single-row data gives the associated curves") {
    // One row repeated r times: H_{0,j} = h_j, all other rows zero.
    Rng rng(41);
    const int n = 5, r = 4;
    const MeroVector h = random_polynomial_vector(n, 4, rng);
    DataArray d{n, r, {{h, zero_vector(n), zero_vector(n), zero_vector(n)}}};
    const HarmonicMapSampler sampler(d);
    for (const auto z : generic_points(sampler, 10, 7)) {
        const auto f = sampler.fiber(z);
        for (int i = 0; i < r; ++i) CHECK(same_span(f.alphas[i], associated_and_gauss({h}, i, z).first));
    }
}

TEST_CASE("adjoining the shifted column changes nothing") {
    const auto d = unitons::random_data(5, 3, 2, std::nullopt, 16);
    DataArray augmented = d;
    augmented.columns.push_back({zero_vector(5), d.entry(0, 0), d.entry(1, 0)});
    const HarmonicMapSampler a(d), b(augmented);
    for (const auto z : generic_points(a, 10, 8)) {
        const auto fa = a.fiber(z);
        const auto fb = b.fiber(z);
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k <= i; ++k) CHECK(max_principal_angle(fa.layer(i, k), fb.layer(i, k)) <= 1e-8);
    }
}

TEST_CASE("s1_invariant_data shapes") {
    const auto one = s1_invariant_data(2, {1}, 3, 1);
    CHECK(one.r == 1);
    CHECK(one.column_count() == 1);

    const auto two = s1_invariant_data(3, {1, 2}, 2, 2);
    REQUIRE(two.column_count() == 2);
    CHECK(is_zero(two.entry(1, 0)));
    CHECK(is_zero(two.entry(0, 1)));
    const HarmonicMapSampler sampler(two);
    for (const auto z : generic_points(sampler, 10, 9)) {
        const auto f = sampler.fiber(z);
        CHECK(containment_defect(f.alphas[0], f.alphas[1]) <= 1e-8);
    }
    CHECK_THROWS_AS(s1_invariant_data(3, {2, 1}, 2, 1), BadShape);
    CHECK_THROWS_AS(s1_invariant_data(3, {1, 2, 3}, 2, 1), BadShape);
}

TEST_CASE("cartan_embed examples") {
    CHECK(max_entry(cartan_embed(Span::full(3)) - CMatrix::Identity(3, 3)) == 0.0);
    CHECK(max_entry(cartan_embed(Span::zero(3)) + CMatrix::Identity(3, 3)) == 0.0);
    CHECK(max_entry(cartan_embed(Span(CMatrix(CVector::Unit(3, 0)))) - diag({1.0, -1.0, -1.0})) == 0.0);
    Rng rng(43);
    const CMatrix q = cartan_embed(orthonormal_basis(oracle::random_matrix(5, 2, rng)));
    CHECK(max_entry(q * q - CMatrix::Identity(5, 5)) <= 1e-11);
}

TEST_CASE("fullness flag") {
    DataArray curve{4, 1, {{poly_vector({{1.0}, {0.0, 1.0}, {0.0, 0.0, 1.0}, {0.0, 0.0, 0.0, 1.0}})}}};
    CHECK(alpha1_is_full(HarmonicMapSampler(curve), 1));
    DataArray flat{3, 1, {{poly_vector({{1.0}, {0.0, 1.0}, {0.0}})}}};
    CHECK_FALSE(alpha1_is_full(HarmonicMapSampler(flat), 1));
    CHECK_FALSE(alpha1_is_full(HarmonicMapSampler(DataArray{3, 0, {}}), 1));
}

TEST_CASE("non-proper unitons are kept and flagged") {
    // A dense n-column first row makes alpha_1 everything.
    const auto d = unitons::random_data(3, 1, 2, std::nullopt, 5, 3);
    const auto f = build_fiber(d, cplx(0.1, 0.2));
    CHECK(f.alphas[0].rank() == 3);
    CHECK_FALSE(f.all_proper());
    CHECK(max_entry(evaluate_map(HarmonicMapSampler(d), cplx(0.1, 0.2)) - CMatrix::Identity(3, 3)) <= 1e-12);
}

TEST_CASE("poles are degenerate points") {
    DataArray d{2, 1, {{MeroVector{RationalFn(Polynomial{1.0}, Polynomial{-1.0, 1.0}), RationalFn::constant(1.0)}}}};
    const HarmonicMapSampler sampler(d);
    CHECK_THROWS_AS(sampler.fiber(1.0), DegeneratePoint);
    for (const auto z : generic_points(sampler, 20, 3)) CHECK(std::abs(z - 1.0) >= 1e-2);
}

}  // TEST_SUITE
