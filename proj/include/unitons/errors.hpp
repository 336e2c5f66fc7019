#pragma once

#include <stdexcept>
#include <string>

namespace unitons {

// Evaluation hit a zero of the denominator.
struct PoleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Array dimensions violate 0 <= r <= n-1 or similar shape constraints.
struct BadShape : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A rank decision at this sample point is numerically ambiguous, or the point
// is too close to a pole. Callers resample.
struct DegeneratePoint : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IndexError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct NotLambdaInvariant : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularLoop : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegreeNoDrop : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonProperUniton : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoTermination : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace unitons
