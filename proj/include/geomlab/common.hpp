#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace geomlab {

// Error taxonomy. Callers catch by role; std::invalid_argument is used for
// plain precondition violations on arguments.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Mesh fails structural validation (open boundary, non-manifold edge,
// inconsistent orientation, degenerate face, inverted volume).
class validation_error : public error {
public:
    using error::error;
};

// File could not be parsed; carries the 1-based line number.
class parse_error : public error {
public:
    parse_error(const std::string& msg, int line)
        : error(msg + " (line " + std::to_string(line) + ")"), line_number(line) {}
    int line_number;
};

// Local least-squares fit is rank deficient or otherwise unusable.
class estimation_error : public error {
public:
    using error::error;
};

// Iterative eigensolver failed to reach its residual target.
class solver_error : public error {
public:
    using error::error;
};

// Spectrum has no usable first nonzero eigenvalue (kernel dimension != 1).
class degenerate_spectrum : public solver_error {
public:
    using solver_error::solver_error;
};

// A hypothesis required by a check does not hold on the input surface.
class hypothesis_error : public error {
public:
    using error::error;
};

// Exact binomial coefficient; requires 0 <= r <= n, n small.
long long binomial(int n, int r);

// Number of worker threads: GEOMLAB_THREADS if set and positive, else
// hardware concurrency, at least 1.
int worker_count();

// Runs fn(i) for i in [0, n). Iterations must be independent; results must
// not depend on execution order. Falls back to a plain loop for small n.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace geomlab
