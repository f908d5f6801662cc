#pragma once

#include <stdexcept>
#include <string>

namespace h2 {

/// Base for every failure raised by the library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact integer arithmetic left the 64-bit range.
struct overflow_error : error {
  using error::error;
};

/// A matrix that was required to be symplectic is not.
struct not_symplectic_error : error {
  using error::error;
};

/// Malformed input: wrong shape, out-of-range index, invalid point.
struct invalid_input_error : error {
  using error::error;
};

/// The theta series tail could not be bounded below the requested tolerance.
struct tail_certification_error : error {
  using error::error;
};

/// Quadrature did not converge, or a segment passes too close to a branch point.
struct quadrature_error : error {
  using error::error;
};

/// Branch-point recovery requested at an index where the theta quotient is 0/0.
struct degenerate_index_error : error {
  using error::error;
};

/// A consistency check failed (period symmetry, coset partition, ...).
struct verification_error : error {
  using error::error;
};

} // namespace h2
