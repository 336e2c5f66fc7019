#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "unitons/errors.hpp"
#include "unitons/meromorphic.hpp"

using namespace unitons;

namespace {

const cplx kI{0.0, 1.0};

RationalFn sample_fn() {  // (z^2 + 1) / (z - 2)
    return RationalFn(Polynomial{1.0, 0.0, 1.0}, Polynomial{-2.0, 1.0});
}

RationalFn random_fn(Rng& rng) {
    std::vector<cplx> num, den;
    for (int k = 0; k < 4; ++k) num.push_back(rng.gaussian_integer(3));
    for (int k = 0; k < 3; ++k) den.push_back(rng.gaussian_integer(3));
    den.back() = 1.0;
    return RationalFn(Polynomial(num), Polynomial(den));
}

bool contains(const std::vector<cplx>& roots, cplx target) {
    return std::any_of(roots.begin(), roots.end(), [&](cplx r) { return std::abs(r - target) < 1e-10; });
}

}  // namespace

TEST_SUITE("meromorphic") {

TEST_CASE("eval_rational examples") {
    CHECK(std::abs(eval_rational(sample_fn(), 0.0) - cplx(-0.5)) < 1e-15);
    CHECK(eval_rational(RationalFn::constant(1.0), cplx(17, 3)) == cplx(1.0));
    const RationalFn inv(Polynomial{1.0}, Polynomial{-1.0, 1.0});
    CHECK_THROWS_AS(eval_rational(inv, 1.0), PoleError);
}

TEST_CASE("zero denominators are rejected") {
    CHECK_THROWS_AS(RationalFn(Polynomial{1.0}, Polynomial{}), std::invalid_argument);
    CHECK_THROWS_AS(RationalFn(Polynomial{1.0}, Polynomial{0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("trailing zeros are trimmed") {
    const Polynomial p{1.0, 2.0, 0.0, 0.0};
    CHECK(p.degree() == 1);
    CHECK(Polynomial{0.0}.is_zero());
}

TEST_CASE("differentiate examples") {
    const auto sq = differentiate(RationalFn(Polynomial::monomial(2)));
    CHECK(equivalent(sq, RationalFn(Polynomial{0.0, 2.0})));

    const auto inv = differentiate(RationalFn(Polynomial{1.0}, Polynomial{0.0, 1.0}));
    CHECK(equivalent(inv, RationalFn(Polynomial{-1.0}, Polynomial{0.0, 0.0, 1.0})));

    const auto d = differentiate(sample_fn());
    const RationalFn expected(Polynomial{-1.0, -4.0, 1.0}, Polynomial{4.0, -4.0, 1.0});
    CHECK(equivalent(d, expected));
    CHECK(d.num().degree() <= sample_fn().num().degree() + sample_fn().den().degree() - 1);
    CHECK(d.den().degree() == 2 * sample_fn().den().degree());

    Rng rng(5);
    for (int k = 0; k < 5; ++k) {
        const cplx z = rng.disc(1.5);
        const cplx fd = oracle::central_difference([&](cplx w) { return sample_fn()(w); }, z, 1e-5);
        const cplx exact = d(z);
        CHECK(std::abs(fd - exact) / std::abs(exact) < 1e-8);
    }
}

TEST_CASE("derivative matches central differences on random functions") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const RationalFn f = random_fn(rng);
        const RationalFn df = differentiate(f);
        for (int k = 0; k < 10; ++k) {
            cplx z = rng.disc(2.0);
            const auto poles = poles_of(f);
            if (std::any_of(poles.begin(), poles.end(), [&](cplx p) { return std::abs(p - z) < 0.2; })) continue;
            const cplx fd = oracle::central_difference([&](cplx w) { return f(w); }, z, 1e-5);
            const cplx exact = df(z);
            CHECK(std::abs(exact - fd) <= 1e-7 * (1.0 + std::abs(exact)));
        }
    }
}

TEST_CASE("differentiate is linear") {
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const RationalFn f = random_fn(rng);
        const RationalFn g = random_fn(rng);
        const cplx a = rng.gaussian_integer(2);
        const cplx b = rng.gaussian_integer(2);
        const auto lhs = differentiate(a * f + b * g);
        const auto rhs = a * differentiate(f) + b * differentiate(g);
        CHECK(equivalent(lhs, rhs, 1e-12));
    }
}

TEST_CASE("poles_of examples") {
    const auto p1 = poles_of(RationalFn(Polynomial{1.0}, Polynomial{-2.0, 1.0}));
    REQUIRE(p1.size() == 1);
    CHECK(std::abs(p1[0] - cplx(2.0)) < 1e-12);
    CHECK(poles_of(RationalFn::constant(3.0)).empty());
    const auto p2 = poles_of(RationalFn(Polynomial{1.0}, Polynomial{1.0, 0.0, 1.0}));
    REQUIRE(p2.size() == 2);
    CHECK(contains(p2, kI));
    CHECK(contains(p2, -kI));
}

TEST_CASE("multiple roots are collapsed") {
    // (z - 1)^3
    const auto p = poles_of(RationalFn(Polynomial{1.0}, Polynomial{-1.0, 3.0, -3.0, 1.0}));
    CHECK(p.size() == 1);
}

TEST_CASE("evaluating at a computed pole raises") {
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const RationalFn f = random_fn(rng);
        for (const auto pole : poles_of(f)) {
            CHECK(f.is_pole(pole));
            CHECK_THROWS_AS(f(pole), PoleError);
        }
    }
}

TEST_CASE("cancel_common_roots removes a shared factor") {
    // (z - 1)(z + 2) / ((z - 1)(z - 3))
    const RationalFn f(Polynomial{-2.0, 1.0, 1.0}, Polynomial{3.0, -4.0, 1.0});
    const auto g = cancel_common_roots(f);
    CHECK(g.num().degree() == 1);
    CHECK(g.den().degree() == 1);
    CHECK(std::abs(g(0.5) - f(0.5)) < 1e-12);
}

TEST_CASE("random_data contracts") {
    const auto empty = unitons::random_data(3, 0, 3, std::nullopt, 1);
    CHECK(empty.r == 0);
    CHECK(empty.columns.empty());

    CHECK(unitons::random_data(3, 2, 3, std::nullopt, 1) == unitons::random_data(3, 2, 3, std::nullopt, 1));
    CHECK_FALSE(unitons::random_data(3, 2, 3, std::nullopt, 1) == unitons::random_data(3, 2, 3, std::nullopt, 2));

    const auto d = unitons::random_data(5, 4, 3, std::nullopt, 9);
    for (const auto& column : d.columns)
        for (const auto& entry : column)
            for (const auto& f : entry) {
                CHECK(f.is_polynomial());
                CHECK(f.num().degree() <= 3);
            }

    CHECK_THROWS_AS(unitons::random_data(3, 3, 2, std::nullopt, 1), BadShape);
}

TEST_CASE("echelon pattern zeros") {
    const std::vector<int> ranks{1, 2, 2};
    const auto d = unitons::random_data(4, 3, 2, ranks, 21);
    REQUIRE(d.column_count() == 2);
    // Column 1 starts at row 1 (d_1 = 1 <= 1 < d_2 = 2).
    CHECK(is_zero(d.entry(0, 1)));
    CHECK_FALSE(is_zero(d.entry(1, 1)));
    CHECK_FALSE(is_zero(d.entry(0, 0)));
}

TEST_CASE("DataArray validation") {
    DataArray bad{2, 1, {{zero_vector(3)}}};
    CHECK_THROWS_AS(bad.validate(), BadShape);
    DataArray ragged{3, 2, {{zero_vector(3)}}};
    CHECK_THROWS_AS(ragged.validate(), BadShape);
}

}  // TEST_SUITE
