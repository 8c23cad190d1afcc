#pragma once

#include "featacq/matrix.hpp"

#include <cstddef>

namespace featacq {

struct BoundParams {
  double c0 = 1.0;
  double beta = 0.0;
  std::size_t r = 1;
  std::size_t n = 1;
  std::size_t d = 1;
  std::size_t omega_size = 1;
  double mu = 1.0;
};

/// Upper bound on (1/nd) ||X* - X||_F^2 for the trace-norm constrained
/// supervised completion problem:
///
///   2 c0 mu^2 beta sqrt(r (n + d) / |Omega|) sqrt(1 + (n + d) ln(n + d) / |Omega|)
///
/// Throws ArgumentError if omega_size is 0 or exceeds n d, or r > min(n, d).
double theorem1_bound(const BoundParams& p);

/// beta such that ||x||_tr^2 = beta sqrt(r n d).
double beta_for(const Matrix& x, std::size_t r);

struct HadamardCheck {
  double lhs = 0.0;  ///< ||A o B||_tr
  double rhs = 0.0;  ///< mu(A)^2 ||A||_tr ||B||_tr
  bool holds = true;
};

/// Evaluates the trace-norm inequality for the entrywise product. A zero a
/// or b gives lhs = rhs = 0. Throws DimensionError if the shapes differ.
HadamardCheck lemma3_check(const Matrix& a, const Matrix& b);

}  // namespace featacq
