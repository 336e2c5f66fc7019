#include "unitons/meromorphic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "unitons/errors.hpp"

namespace unitons {

std::complex<double> Rng::disc(double radius) {
    const double rho = radius * std::sqrt(uniform());
    const double theta = 2.0 * std::numbers::pi * uniform();
    return std::polar(rho, theta);
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::monomial(int degree, cplx c) {
    std::vector<cplx> coeffs(static_cast<std::size_t>(degree) + 1, 0.0);
    coeffs.back() = c;
    return Polynomial(std::move(coeffs));
}

void Polynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back() == cplx(0.0)) coeffs_.pop_back();
}

double Polynomial::norm() const {
    double sum = 0.0;
    for (const auto& c : coeffs_) sum += std::norm(c);
    return std::sqrt(sum);
}

cplx Polynomial::operator()(cplx z) const {
    cplx acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<cplx> out(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) out[k - 1] = static_cast<double>(k) * coeffs_[k];
    return Polynomial(std::move(out));
}

std::vector<cplx> Polynomial::roots() const {
    const int d = degree();
    if (d < 1) return {};
    CMatrix companion = CMatrix::Zero(d, d);
    const cplx lead = coeffs_.back();
    for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) companion(i, d - 1) = -coeffs_[static_cast<std::size_t>(i)] / lead;
    Eigen::ComplexEigenSolver<CMatrix> solver(companion, false);
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

Polynomial Polynomial::deflate(cplx root) const {
    if (coeffs_.size() <= 1) return {};
    std::vector<cplx> out(coeffs_.size() - 1);
    cplx carry = 0.0;
    for (std::size_t k = coeffs_.size() - 1; k >= 1; --k) {
        carry = carry * root + coeffs_[k];
        out[k - 1] = carry;
    }
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-() const { return cplx(-1.0) * *this; }

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<cplx> out(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
    for (std::size_t k = 0; k < a.coeffs_.size(); ++k) out[k] += a.coeffs_[k];
    for (std::size_t k = 0; k < b.coeffs_.size(); ++k) out[k] += b.coeffs_[k];
    return Polynomial(std::move(out));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<cplx> out(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Polynomial(std::move(out));
}

Polynomial operator*(cplx c, const Polynomial& p) {
    std::vector<cplx> out(p.coeffs_);
    for (auto& x : out) x *= c;
    return Polynomial(std::move(out));
}

// ---------------------------------------------------------------------------
// RationalFn

RationalFn::RationalFn(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::invalid_argument("RationalFn: denominator is identically zero");
}

bool RationalFn::is_pole(cplx z) const {
    return std::abs(den_(z)) < kPoleTolerance * std::max(1.0, den_.norm());
}

cplx RationalFn::operator()(cplx z) const {
    const cplx d = den_(z);
    if (std::abs(d) < kPoleTolerance * std::max(1.0, den_.norm())) throw PoleError("evaluation at a pole");
    return num_(z) / d;
}

RationalFn operator+(const RationalFn& a, const RationalFn& b) {
    if (a.den_ == b.den_) return RationalFn(a.num_ + b.num_, a.den_);
    return RationalFn(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFn operator-(const RationalFn& a, const RationalFn& b) { return a + cplx(-1.0) * b; }

RationalFn operator*(const RationalFn& a, const RationalFn& b) {
    return RationalFn(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFn operator*(cplx c, const RationalFn& f) { return RationalFn(c * f.num_, f.den_); }

cplx eval_rational(const RationalFn& f, cplx z) { return f(z); }

RationalFn differentiate(const RationalFn& f) {
    const auto& n = f.num();
    const auto& d = f.den();
    return RationalFn(n.derivative() * d - n * d.derivative(), d * d);
}

std::vector<cplx> poles_of(const RationalFn& f) {
    // A root of multiplicity m splits by about eps^(1/m); the cluster mean is
    // accurate again, so report that.
    std::vector<std::vector<cplx>> clusters;
    for (const auto& root : f.den().roots()) {
        auto it = std::find_if(clusters.begin(), clusters.end(), [&](const std::vector<cplx>& c) {
            return std::abs(c.front() - root) <= 1e-4 * std::max(1.0, std::abs(root));
        });
        if (it == clusters.end())
            clusters.push_back({root});
        else
            it->push_back(root);
    }
    std::vector<cplx> distinct;
    for (const auto& c : clusters) {
        cplx sum = 0.0;
        for (const auto p : c) sum += p;
        distinct.push_back(sum / static_cast<double>(c.size()));
    }
    return distinct;
}

RationalFn cancel_common_roots(const RationalFn& f, double tol) {
    Polynomial num = f.num();
    Polynomial den = f.den();
    if (num.is_zero()) return RationalFn(Polynomial{}, Polynomial::constant(1.0));
    auto num_roots = num.roots();
    for (const auto& root : den.roots()) {
        auto match = std::find_if(num_roots.begin(), num_roots.end(),
                                  [&](cplx q) { return std::abs(q - root) < tol; });
        if (match == num_roots.end()) continue;
        num = num.deflate(*match);
        den = den.deflate(root);
        num_roots.erase(match);
    }
    return RationalFn(std::move(num), std::move(den));
}

bool equivalent(const RationalFn& a, const RationalFn& b, double rel_tol) {
    const Polynomial lhs = a.num() * b.den();
    const Polynomial rhs = b.num() * a.den();
    const Polynomial diff = lhs - rhs;
    const double scale = std::max({1.0, lhs.norm(), rhs.norm()});
    return diff.norm() <= rel_tol * scale;
}

// ---------------------------------------------------------------------------
// MeroVector

CVector eval(const MeroVector& v, cplx z) {
    CVector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t k = 0; k < v.size(); ++k) out(static_cast<Eigen::Index>(k)) = v[k](z);
    return out;
}

MeroVector differentiate(const MeroVector& v) {
    MeroVector out;
    out.reserve(v.size());
    for (const auto& f : v) out.push_back(differentiate(f));
    return out;
}

MeroVector differentiate(const MeroVector& v, int order) {
    MeroVector out = v;
    for (int k = 0; k < order; ++k) out = differentiate(out);
    return out;
}

MeroVector zero_vector(int n) { return MeroVector(static_cast<std::size_t>(n)); }

MeroVector operator+(const MeroVector& a, const MeroVector& b) {
    if (a.size() != b.size()) throw BadShape("MeroVector length mismatch");
    MeroVector out;
    out.reserve(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out.push_back(a[k] + b[k]);
    return out;
}

MeroVector operator*(cplx c, const MeroVector& v) {
    MeroVector out;
    out.reserve(v.size());
    for (const auto& f : v) out.push_back(c * f);
    return out;
}

bool is_zero(const MeroVector& v) {
    return std::all_of(v.begin(), v.end(), [](const RationalFn& f) { return f.is_zero(); });
}

// ---------------------------------------------------------------------------
// DataArray

void DataArray::validate() const {
    if (n < 1) throw BadShape("n must be at least 1");
    if (r < 0 || r > n - 1) throw BadShape("r must satisfy 0 <= r <= n-1");
    for (const auto& column : columns) {
        if (static_cast<int>(column.size()) != r) throw BadShape("every column must hold r meromorphic vectors");
        for (const auto& entry : column)
            if (static_cast<int>(entry.size()) != n) throw BadShape("every meromorphic vector must have length n");
    }
}

std::vector<cplx> DataArray::poles() const {
    std::vector<cplx> out;
    for (const auto& column : columns)
        for (const auto& entry : column)
            for (const auto& f : entry)
                for (const auto& p : poles_of(f)) {
                    const bool seen = std::any_of(out.begin(), out.end(), [&](cplx q) { return std::abs(q - p) < 1e-9; });
                    if (!seen) out.push_back(p);
                }
    return out;
}

DataArray DataArray::truncated(int rows) const {
    if (rows < 0 || rows > r) throw BadShape("truncation beyond the array");
    DataArray out{n, rows, {}};
    for (const auto& column : columns) out.columns.emplace_back(column.begin(), column.begin() + rows);
    return out;
}

MeroVector random_polynomial_vector(int n, int max_degree, Rng& rng) {
    MeroVector out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        std::vector<cplx> coeffs(static_cast<std::size_t>(max_degree) + 1);
        for (auto& c : coeffs) c = rng.gaussian_integer(3);
        out.emplace_back(Polynomial(std::move(coeffs)));
    }
    return out;
}

DataArray random_data(int n, int r, int max_degree, const std::optional<std::vector<int>>& echelon_ranks,
                      std::uint64_t seed, int columns) {
    if (n < 1 || r < 0 || r >= n) throw BadShape("random_data requires 0 <= r <= n-1");
    if (max_degree < 0) throw BadShape("max_degree must be non-negative");
    Rng rng(seed);
    DataArray data{n, r, {}};
    if (r == 0) return data;

    std::vector<int> nonzero_rows_end;  // per column: rows < value are nonzero
    if (echelon_ranks) {
        const auto& d = *echelon_ranks;
        if (static_cast<int>(d.size()) != r) throw BadShape("echelon ranks need one entry per row");
        if (!std::is_sorted(d.begin(), d.end()) || d.front() < 0 || d.back() > n)
            throw BadShape("echelon ranks must satisfy 0 <= d_1 <= ... <= d_r <= n");
        for (int j = 0; j < d.back(); ++j) {
            // first row whose block includes column j
            const int first = static_cast<int>(std::upper_bound(d.begin(), d.end(), j) - d.begin());
            nonzero_rows_end.push_back(first);
        }
    } else {
        if (columns < 0) throw BadShape("column count must be non-negative");
        nonzero_rows_end.assign(static_cast<std::size_t>(columns), 0);
    }

    for (const int first_nonzero : nonzero_rows_end) {
        std::vector<MeroVector> column;
        for (int i = 0; i < r; ++i) {
            if (i < first_nonzero)
                column.push_back(zero_vector(n));
            else
                column.push_back(random_polynomial_vector(n, max_degree, rng));
        }
        data.columns.push_back(std::move(column));
    }
    return data;
}

}  // namespace unitons
