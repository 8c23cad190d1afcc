#include "featacq/classifier.hpp"

#include "featacq/error.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace featacq {

void require_binary_labels(const Vector& labels) {
  for (Index i = 0; i < labels.size(); ++i) {
    if (labels(i) != 1.0 && labels(i) != -1.0) {
      throw ArgumentError("labels must be -1 or +1");
    }
  }
}

LinearModel train_ridge(const Matrix& x, const Vector& labels, double ridge) {
  if (x.rows() < 1) throw ArgumentError("train_ridge: no rows");
  if (labels.size() != x.rows()) {
    throw DimensionError("train_ridge: label count differs from row count");
  }
  if (!(ridge >= 0.0)) throw ArgumentError("train_ridge: ridge must be >= 0");
  require_finite(x, "train_ridge");

  const Index n = x.rows();
  const Index d = x.cols();
  // Gram matrix of [X 1] without materializing the augmented design.
  Matrix gram(d + 1, d + 1);
  gram.topLeftCorner(d, d).noalias() = x.transpose() * x;
  const Vector col_sums = x.colwise().sum().transpose();
  gram.topRightCorner(d, 1) = col_sums;
  gram.bottomLeftCorner(1, d) = col_sums.transpose();
  gram(d, d) = static_cast<double>(n);
  gram.topLeftCorner(d, d).diagonal().array() += ridge;

  Vector rhs(d + 1);
  rhs.head(d).noalias() = x.transpose() * labels;
  rhs(d) = labels.sum();

  if (ridge == 0.0) {
    Eigen::ColPivHouseholderQR<Matrix> qr(gram);
    if (qr.rank() < d + 1) {
      throw RankDeficiencyError("train_ridge: singular system with ridge = 0");
    }
    const Vector theta = qr.solve(rhs);
    return {theta.head(d), theta(d)};
  }
  Eigen::LDLT<Matrix> ldlt(gram);
  if (ldlt.info() != Eigen::Success) {
    throw NumericError("train_ridge: factorization failed");
  }
  const Vector theta = ldlt.solve(rhs);
  return {theta.head(d), theta(d)};
}

Vector decision_values(const LinearModel& model, const Matrix& x) {
  if (x.cols() != model.weights.size()) {
    throw DimensionError("decision_values: feature count differs from model");
  }
  return (x * model.weights).array() + model.bias;
}

Vector predict(const LinearModel& model, const Matrix& x) {
  const Vector s = decision_values(model, x);
  return s.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
}

double accuracy(const Vector& scores, const Vector& labels) {
  if (scores.size() != labels.size()) {
    throw DimensionError("accuracy: length mismatch");
  }
  if (scores.size() == 0) throw ArgumentError("accuracy: empty input");
  Index hits = 0;
  for (Index i = 0; i < scores.size(); ++i) {
    const double predicted = scores(i) >= 0.0 ? 1.0 : -1.0;
    if (predicted == labels(i)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(scores.size());
}

double auc(const Vector& scores, const Vector& labels) {
  if (scores.size() != labels.size()) throw DimensionError("auc: length mismatch");
  require_binary_labels(labels);
  const Index n = scores.size();
  const auto positives = static_cast<double>((labels.array() > 0.0).count());
  const double negatives = static_cast<double>(n) - positives;
  if (positives == 0.0 || negatives == 0.0) {
    throw DegenerateLabelsError("auc: labels contain a single class");
  }

  // Rank-sum form: average ranks over tie groups.
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(),
            [&](Index a, Index b) { return scores(a) < scores(b); });
  double positive_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores(order[j + 1]) == scores(order[i])) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (labels(order[k]) > 0.0) positive_rank_sum += mid_rank;
    }
    i = j + 1;
  }
  const double u = positive_rank_sum - positives * (positives + 1.0) / 2.0;
  return u / (positives * negatives);
}

}  // namespace featacq
