#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "unitons/grassmannian.hpp"
#include "unitons/meromorphic.hpp"
#include "unitons/projection.hpp"
#include "unitons/verifier.hpp"

// JSON forms. Complex numbers are [re, im]; matrices are lists of rows.
// Readers throw ParseError on malformed input.
namespace unitons::io {

using nlohmann::json;

json to_json(cplx c);
json to_json(const Polynomial& p);
json to_json(const RationalFn& f);
json to_json(const MeroVector& v);
json to_json(const DataArray& d);
json to_json(const CMatrix& m);
json to_json(const WSubspace& w);
json to_json(const ProjChain& chain, const std::vector<Span>& alphas);
json to_json(const LoopPoly& loop);
json to_json(const VerificationReport& report);

cplx complex_from_json(const json& j);
Polynomial polynomial_from_json(const json& j);
RationalFn rational_from_json(const json& j);
MeroVector mero_vector_from_json(const json& j);
DataArray data_array_from_json(const json& j);
CMatrix matrix_from_json(const json& j);
LoopPoly loop_from_json(const json& j);

/// A list of loop fibers: {"n": int, "fibers": [{"z": [re, im], "coeffs": [T_0, ...]}, ...]}.
struct LoopFiber {
    cplx z;
    LoopPoly loop;
};
json to_json(const std::vector<LoopFiber>& fibers);
std::vector<LoopFiber> loop_fibers_from_json(const json& j);

/// Parses text, mapping every JSON error to ParseError.
json parse(const std::string& text);
json read_file(const std::string& path);
/// Two-space indented dump with a trailing newline.
std::string dump(const json& j);

}  // namespace unitons::io
