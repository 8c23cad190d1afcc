#include "featacq/theory.hpp"

#include "featacq/error.hpp"

#include <algorithm>
#include <cmath>

namespace featacq {

double theorem1_bound(const BoundParams& p) {
  if (p.omega_size == 0) throw ArgumentError("theorem1_bound: |Omega| must be >= 1");
  if (p.n == 0 || p.d == 0) throw ArgumentError("theorem1_bound: empty shape");
  if (p.omega_size > p.n * p.d) throw ArgumentError("theorem1_bound: |Omega| exceeds n d");
  if (p.r > std::min(p.n, p.d)) throw ArgumentError("theorem1_bound: r exceeds min(n, d)");
  if (!(p.beta >= 0.0) || !(p.c0 > 0.0)) throw ArgumentError("theorem1_bound: invalid constant");

  const double omega = static_cast<double>(p.omega_size);
  const double n_plus_d = static_cast<double>(p.n + p.d);
  const double sampling = std::sqrt(static_cast<double>(p.r) * n_plus_d / omega);
  const double log_term = std::sqrt(1.0 + n_plus_d * std::log(n_plus_d) / omega);
  return 2.0 * p.c0 * p.mu * p.mu * p.beta * sampling * log_term;
}

double beta_for(const Matrix& x, std::size_t r) {
  const double tr = trace_norm(x);
  const double scale =
      std::sqrt(static_cast<double>(r) * static_cast<double>(x.rows()) * static_cast<double>(x.cols()));
  return tr * tr / scale;
}

HadamardCheck lemma3_check(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("lemma3_check: shape mismatch");
  }
  HadamardCheck out;
  if (a.isZero(0.0) || b.isZero(0.0)) return out;
  out.lhs = trace_norm(a.cwiseProduct(b));
  const double mu = coherence(a);
  out.rhs = mu * mu * trace_norm(a) * trace_norm(b);
  out.holds = out.lhs <= out.rhs + 1e-9;
  return out;
}

}  // namespace featacq
