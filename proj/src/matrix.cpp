#include "featacq/matrix.hpp"

#include "featacq/error.hpp"

#include <algorithm>
#include <string>

namespace featacq {

PartialMatrix::PartialMatrix(const Matrix& values, const Mask& mask) {
  if (values.rows() != mask.rows() || values.cols() != mask.cols()) {
    throw DimensionError("PartialMatrix: values and mask shapes differ");
  }
  values_ = project_omega(values, mask);
  mask_ = mask;
  observed_ = static_cast<std::size_t>(mask.count());
}

std::vector<Entry> PartialMatrix::missing_entries() const {
  std::vector<Entry> out;
  out.reserve(static_cast<std::size_t>(mask_.size()) - observed_);
  for (Index i = 0; i < rows(); ++i) {
    for (Index j = 0; j < cols(); ++j) {
      if (!mask_(i, j)) out.push_back({i, j});
    }
  }
  return out;
}

void PartialMatrix::reveal(Entry e, double value) {
  if (e.row < 0 || e.row >= rows() || e.col < 0 || e.col >= cols()) {
    throw ArgumentError("reveal: entry out of range");
  }
  if (mask_(e.row, e.col)) {
    throw ArgumentError("reveal: entry (" + std::to_string(e.row) + ", " +
                        std::to_string(e.col) + ") already observed");
  }
  mask_(e.row, e.col) = true;
  values_(e.row, e.col) = value;
  ++observed_;
}

Matrix project_omega(const Matrix& m, const Mask& mask) {
  if (m.rows() != mask.rows() || m.cols() != mask.cols()) {
    throw DimensionError("project_omega: shape mismatch");
  }
  return mask.select(m, Matrix::Zero(m.rows(), m.cols()));
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw NumericError(std::string(what) + ": non-finite entry");
  }
}

SvdFactors svd(const Matrix& m) {
  require_finite(m, "svd");
  SvdFactors f;
  if (m.size() == 0) {
    f.u = Matrix(m.rows(), 0);
    f.v = Matrix(m.cols(), 0);
    return f;
  }
  Eigen::BDCSVD<Matrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  f.u = dec.matrixU();
  f.sigma = dec.singularValues();
  f.v = dec.matrixV();
  for (Index k = 0; k < f.u.cols(); ++k) {
    Index at = 0;
    f.u.col(k).cwiseAbs().maxCoeff(&at);
    if (f.u(at, k) < 0.0) {
      f.u.col(k) *= -1.0;
      f.v.col(k) *= -1.0;
    }
  }
  return f;
}

double trace_norm(const Matrix& m) {
  require_finite(m, "trace_norm");
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> dec(m);
  return dec.singularValues().sum();
}

double frobenius_norm(const Matrix& m) {
  require_finite(m, "frobenius_norm");
  return m.norm();
}

double coherence(const Matrix& m) {
  const SvdFactors f = svd(m);
  if (f.sigma.size() == 0 || f.sigma(0) <= 0.0) {
    throw UndefinedCoherenceError("coherence: zero matrix");
  }
  const double cutoff = 1e-10 * f.sigma(0);
  Index rank = 0;
  while (rank < f.sigma.size() && f.sigma(rank) > cutoff) ++rank;
  const double u_max = f.u.leftCols(rank).rowwise().norm().maxCoeff();
  const double v_max = f.v.leftCols(rank).rowwise().norm().maxCoeff();
  return std::max(u_max, v_max);
}

}  // namespace featacq
