#include "featacq/dataset.hpp"

#include "featacq/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace featacq {

Dataset make_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  if (spec.rows < 1 || spec.cols < 1 || spec.rank < 1 || spec.rank > std::min(spec.rows, spec.cols)) {
    throw ArgumentError("synthetic: invalid shape or rank");
  }
  if (!(spec.noise >= 0.0)) throw ArgumentError("synthetic: noise must be >= 0");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto gaussian = [&](Index r, Index c) {
    Matrix m(r, c);
    for (Index j = 0; j < c; ++j) {
      for (Index i = 0; i < r; ++i) m(i, j) = normal(rng);
    }
    return m;
  };

  const Matrix u = gaussian(spec.rows, spec.rank);
  const Matrix v = gaussian(spec.cols, spec.rank);
  const Vector w = gaussian(spec.cols, 1).col(0);
  Dataset out;
  out.features = u * v.transpose() / std::sqrt(static_cast<double>(spec.rank));
  out.labels = (out.features * w).unaryExpr([](double s) { return s >= 0.0 ? 1.0 : -1.0; });
  if (spec.noise > 0.0) out.features += spec.noise * gaussian(spec.rows, spec.cols);

  const Index positives = (out.labels.array() > 0.0).count();
  if (positives == 0 || positives == spec.rows) {
    throw DegenerateLabelsError("synthetic: labels came out single-class");
  }
  return out;
}

}  // namespace featacq
