#include "unitons/serialization.hpp"

#include <fstream>
#include <sstream>

#include "unitons/errors.hpp"

namespace unitons::io {

namespace {

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    return j.at(key);
}

int int_field(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_number_integer()) throw ParseError(std::string("field '") + key + "' must be an integer");
    return v.get<int>();
}

const json& array(const json& j, const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
    return j;
}

}  // namespace

json to_json(cplx c) { return json::array({c.real(), c.imag()}); }

json to_json(const Polynomial& p) {
    json out = json::array();
    for (const auto& c : p.coeffs()) out.push_back(to_json(c));
    return out;
}

json to_json(const RationalFn& f) { return {{"num", to_json(f.num())}, {"den", to_json(f.den())}}; }

json to_json(const MeroVector& v) {
    json out = json::array();
    for (const auto& f : v) out.push_back(to_json(f));
    return out;
}

json to_json(const DataArray& d) {
    json columns = json::array();
    for (const auto& column : d.columns) {
        json rows = json::array();
        for (const auto& entry : column) rows.push_back(to_json(entry));
        columns.push_back(std::move(rows));
    }
    return {{"n", d.n}, {"r", d.r}, {"columns", std::move(columns)}};
}

json to_json(const CMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

json to_json(const WSubspace& w) {
    return {{"n", w.n}, {"r", w.r}, {"rank", w.dim()}, {"basis", to_json(w.span.basis)}};
}

json to_json(const ProjChain& chain, const std::vector<Span>& alphas) {
    json ranks = json::array();
    json bases = json::array();
    for (const auto& a : alphas) {
        ranks.push_back(a.rank());
        bases.push_back(to_json(a.basis));
    }
    json projections = json::array();
    for (const auto& p : chain) projections.push_back(to_json(p.pi));
    const int n = chain.empty() ? 0 : static_cast<int>(chain.front().pi.rows());
    return {{"n", n},
            {"r", static_cast<int>(chain.size())},
            {"ranks", std::move(ranks)},
            {"bases", std::move(bases)},
            {"projections", std::move(projections)}};
}

json to_json(const LoopPoly& loop) {
    json coeffs = json::array();
    for (const auto& t : loop.coeffs) coeffs.push_back(to_json(t));
    return {{"n", loop.n()}, {"degree", loop.degree()}, {"coeffs", std::move(coeffs)}};
}

json to_json(const VerificationReport& report) {
    json checks = json::array();
    for (const auto& c : report.checks)
        checks.push_back({{"name", c.name}, {"max_residual", c.max_residual}, {"tolerance", c.tolerance}, {"pass", c.pass}});
    return {{"points", report.points}, {"pass", report.all_pass()}, {"checks", std::move(checks)}};
}

json to_json(const std::vector<LoopFiber>& fibers) {
    json list = json::array();
    for (const auto& f : fibers) {
        json entry = to_json(f.loop);
        entry["z"] = to_json(f.z);
        list.push_back(std::move(entry));
    }
    const int n = fibers.empty() ? 0 : fibers.front().loop.n();
    return {{"n", n}, {"fibers", std::move(list)}};
}

cplx complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError("complex numbers are [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

Polynomial polynomial_from_json(const json& j) {
    std::vector<cplx> coeffs;
    for (const auto& c : array(j, "polynomial")) coeffs.push_back(complex_from_json(c));
    return Polynomial(std::move(coeffs));
}

RationalFn rational_from_json(const json& j) {
    Polynomial num = polynomial_from_json(field(j, "num"));
    Polynomial den = polynomial_from_json(field(j, "den"));
    if (den.is_zero()) throw ParseError("zero denominator");
    return RationalFn(std::move(num), std::move(den));
}

MeroVector mero_vector_from_json(const json& j) {
    MeroVector out;
    for (const auto& f : array(j, "MeroVector")) out.push_back(rational_from_json(f));
    return out;
}

DataArray data_array_from_json(const json& j) {
    DataArray d;
    d.n = int_field(j, "n");
    d.r = int_field(j, "r");
    for (const auto& column : array(field(j, "columns"), "columns")) {
        std::vector<MeroVector> rows;
        for (const auto& entry : array(column, "column")) rows.push_back(mero_vector_from_json(entry));
        d.columns.push_back(std::move(rows));
    }
    try {
        d.validate();
    } catch (const BadShape& e) {
        throw ParseError(std::string("invalid DataArray: ") + e.what());
    }
    return d;
}

CMatrix matrix_from_json(const json& j) {
    const auto rows = static_cast<Eigen::Index>(array(j, "matrix").size());
    if (rows == 0) return CMatrix(0, 0);
    const auto cols = static_cast<Eigen::Index>(array(j[0], "matrix row").size());
    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = array(j[static_cast<std::size_t>(i)], "matrix row");
        if (static_cast<Eigen::Index>(row.size()) != cols) throw ParseError("ragged matrix");
        for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
    }
    return m;
}

LoopPoly loop_from_json(const json& j) {
    LoopPoly loop;
    for (const auto& t : array(field(j, "coeffs"), "coeffs")) loop.coeffs.push_back(matrix_from_json(t));
    if (loop.coeffs.empty()) throw ParseError("a loop needs at least one coefficient");
    const auto n = loop.coeffs.front().rows();
    for (const auto& t : loop.coeffs)
        if (t.rows() != n || t.cols() != n || n == 0) throw ParseError("loop coefficients must be square n x n");
    return loop;
}

std::vector<LoopFiber> loop_fibers_from_json(const json& j) {
    const int n = int_field(j, "n");
    std::vector<LoopFiber> out;
    for (const auto& entry : array(field(j, "fibers"), "fibers")) {
        LoopFiber f{complex_from_json(field(entry, "z")), loop_from_json(entry)};
        if (f.loop.n() != n) throw ParseError("fiber dimension differs from n");
        out.push_back(std::move(f));
    }
    return out;
}

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(e.what());
    }
}

json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace unitons::io
