#pragma once

#include "featacq/matrix.hpp"

namespace featacq {

/// Linear scorer f(x) = w^T x + b.
struct LinearModel {
  Vector weights;
  double bias = 0.0;

  static LinearModel zero(Index dim) { return {Vector::Zero(dim), 0.0}; }
};

/// Exact minimizer of ||X w + b 1 - y||^2 + ridge ||w||^2 with the bias left
/// unpenalized, via the normal equations of the bias-augmented system.
/// Throws RankDeficiencyError when ridge == 0 and the system is singular.
LinearModel train_ridge(const Matrix& x, const Vector& labels, double ridge);

/// X w + b 1.
Vector decision_values(const LinearModel& model, const Matrix& x);

/// sign(decision_values) with exact zero mapped to +1.
Vector predict(const LinearModel& model, const Matrix& x);

/// Fraction of indices where sign(score) (0 -> +1) equals the label.
double accuracy(const Vector& scores, const Vector& labels);

/// Mann-Whitney AUC, ties counted one half. Throws DegenerateLabelsError if
/// the labels hold a single class.
double auc(const Vector& scores, const Vector& labels);

/// Throws ArgumentError unless every entry is exactly -1 or +1.
void require_binary_labels(const Vector& labels);

}  // namespace featacq
