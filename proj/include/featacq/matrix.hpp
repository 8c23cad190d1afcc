#pragma once

#include <Eigen/Dense>

#include <compare>
#include <cstddef>
#include <vector>

namespace featacq {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
/// Observation mask; true marks an observed cell.
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;
using Index = Eigen::Index;

/// A (row, col) cell of the feature matrix. Ordered lexicographically.
struct Entry {
  Index row = 0;
  Index col = 0;

  friend auto operator<=>(const Entry&, const Entry&) = default;
};

/// Dense values plus observation mask. Values at unobserved cells are held
/// at zero; only `reveal` may flip a mask cell, and only from false to true.
class PartialMatrix {
 public:
  PartialMatrix() = default;
  /// Throws DimensionError if the shapes differ.
  PartialMatrix(const Matrix& values, const Mask& mask);

  Index rows() const noexcept { return values_.rows(); }
  Index cols() const noexcept { return values_.cols(); }
  const Matrix& values() const noexcept { return values_; }
  const Mask& mask() const noexcept { return mask_; }

  bool is_observed(Entry e) const { return mask_(e.row, e.col); }
  std::size_t observed_count() const noexcept { return observed_; }

  /// Unobserved cells in ascending (row, col) order.
  std::vector<Entry> missing_entries() const;

  /// Records the true value of a previously unobserved cell. Throws
  /// ArgumentError if the cell is already observed or out of range.
  void reveal(Entry e, double value);

 private:
  Matrix values_;
  Mask mask_;
  std::size_t observed_ = 0;
};

/// Economy SVD, m = u * diag(sigma) * v^T with r = min(rows, cols).
struct SvdFactors {
  Matrix u;
  Vector sigma;
  Matrix v;
};

/// Entries of m on the mask, zero elsewhere.
Matrix project_omega(const Matrix& m, const Mask& mask);

/// Singular values nonincreasing; each column of u is sign-fixed so its
/// largest-magnitude entry is positive (v follows). Throws NumericError on
/// non-finite input.
SvdFactors svd(const Matrix& m);

double trace_norm(const Matrix& m);
double frobenius_norm(const Matrix& m);

/// Largest row norm over the left and right singular factors truncated to
/// the numerical rank (singular values above 1e-10 * sigma_max).
/// Throws UndefinedCoherenceError for the zero matrix.
double coherence(const Matrix& m);

/// Throws NumericError if any entry is NaN or infinite.
void require_finite(const Matrix& m, const char* what);

}  // namespace featacq
