#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "unitons/random.hpp"

namespace unitons {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Polynomial in one complex variable, coefficients in ascending degree.
/// Trailing zero coefficients are trimmed, so the zero polynomial has no
/// coefficients and degree -1.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<cplx> coeffs);
    Polynomial(std::initializer_list<cplx> coeffs) : Polynomial(std::vector<cplx>(coeffs)) {}

    static Polynomial constant(cplx c) { return Polynomial({c}); }
    static Polynomial monomial(int degree, cplx c = 1.0);

    const std::vector<cplx>& coeffs() const { return coeffs_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    double norm() const;

    cplx operator()(cplx z) const;

    Polynomial derivative() const;
    /// All complex roots with multiplicity, from the companion matrix.
    std::vector<cplx> roots() const;
    /// Synthetic division by (z - root); the remainder is discarded.
    Polynomial deflate(cplx root) const;

    Polynomial operator-() const;
    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(cplx c, const Polynomial& p);
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

private:
    void trim();
    std::vector<cplx> coeffs_;
};

/// Quotient of two polynomials. No automatic cancellation is performed.
class RationalFn {
public:
    RationalFn() : num_(), den_(Polynomial::constant(1.0)) {}
    RationalFn(Polynomial num, Polynomial den);
    explicit RationalFn(Polynomial num) : RationalFn(std::move(num), Polynomial::constant(1.0)) {}

    static RationalFn constant(cplx c) { return RationalFn(Polynomial::constant(c)); }

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.degree() == 0; }

    /// Throws PoleError when |den(z)| < 1e-10 * max(1, ||den||).
    cplx operator()(cplx z) const;
    bool is_pole(cplx z) const;

    friend RationalFn operator+(const RationalFn& a, const RationalFn& b);
    friend RationalFn operator-(const RationalFn& a, const RationalFn& b);
    friend RationalFn operator*(const RationalFn& a, const RationalFn& b);
    friend RationalFn operator*(cplx c, const RationalFn& f);
    friend bool operator==(const RationalFn& a, const RationalFn& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

private:
    Polynomial num_;
    Polynomial den_;
};

inline constexpr double kPoleTolerance = 1e-10;

cplx eval_rational(const RationalFn& f, cplx z);

/// Quotient rule on coefficient lists: (n'd - nd') / d^2.
RationalFn differentiate(const RationalFn& f);

/// Distinct roots of the denominator; roots within 1e-4 (relative) are merged into their mean.
std::vector<cplx> poles_of(const RationalFn& f);

/// Optional cleanup: cancels numerator/denominator roots that agree within tol.
RationalFn cancel_common_roots(const RationalFn& f, double tol = 1e-9);

/// True when a*d == b*c coefficient-wise up to a relative tolerance.
bool equivalent(const RationalFn& a, const RationalFn& b, double rel_tol = 1e-12);

using MeroVector = std::vector<RationalFn>;

CVector eval(const MeroVector& v, cplx z);
MeroVector differentiate(const MeroVector& v);
MeroVector differentiate(const MeroVector& v, int order);
MeroVector zero_vector(int n);
MeroVector operator+(const MeroVector& a, const MeroVector& b);
MeroVector operator*(cplx c, const MeroVector& v);
bool is_zero(const MeroVector& v);

/// The r x (columns) data array. columns[j][i] holds H_{i,j}.
struct DataArray {
    int n = 0;
    int r = 0;
    std::vector<std::vector<MeroVector>> columns;

    const MeroVector& entry(int row, int column) const { return columns[column][row]; }
    int column_count() const { return static_cast<int>(columns.size()); }

    /// Throws BadShape when 0 <= r <= n-1 fails or an entry has the wrong length.
    void validate() const;

    /// Distinct poles of every entry.
    std::vector<cplx> poles() const;

    /// The array restricted to its first `rows` rows.
    DataArray truncated(int rows) const;

    friend bool operator==(const DataArray&, const DataArray&) = default;
};

/// Random polynomial data with Gaussian-integer coefficients in [-3, 3]^2.
/// Without a pattern the array is dense with `columns` columns; with echelon
/// ranks d_1 <= ... <= d_r there are d_r columns and row i vanishes beyond
/// column d_{i+1}.
DataArray random_data(int n, int r, int max_degree, const std::optional<std::vector<int>>& echelon_ranks,
                      std::uint64_t seed, int columns = 1);

MeroVector random_polynomial_vector(int n, int max_degree, Rng& rng);

}  // namespace unitons
