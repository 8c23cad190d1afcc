#include "featacq/acquisition.hpp"

#include "featacq/error.hpp"

#include <algorithm>

namespace featacq {

CostModel CostModel::uniform(Index cols, double cost, double budget) {
  return {Vector::Constant(cols, cost), budget};
}

void CostModel::validate() const {
  if (column_costs.size() == 0) throw ArgumentError("cost model: no columns");
  if (!(column_costs.array() > 0.0).all() || !column_costs.allFinite()) {
    throw ArgumentError("cost model: costs must be positive");
  }
  if (!(budget_per_round > 0.0)) throw ArgumentError("cost model: budget must be positive");
}

void InformativenessTracker::record_snapshot(const Matrix& x_hat) {
  require_finite(x_hat, "record_snapshot");
  if (seen_ > 0 && (mean_.rows() != x_hat.rows() || mean_.cols() != x_hat.cols())) {
    throw DimensionError("record_snapshot: shape changed between snapshots");
  }
  ++seen_;
  if (window_ > 0) {
    if (ring_.size() == window_) {
      // Welford downdate of the evicted snapshot.
      const Matrix old = std::move(ring_.front());
      ring_.pop_front();
      if (count_ == 1) {
        count_ = 0;
      } else {
        const auto remaining = static_cast<double>(count_ - 1);
        const Matrix delta = old - mean_;
        mean_ -= delta / remaining;
        m2_ -= delta.cwiseProduct(old - mean_);
        --count_;
      }
    }
    ring_.push_back(x_hat);
  }
  ++count_;
  if (count_ == 1) {
    mean_ = x_hat;
    m2_ = Matrix::Zero(x_hat.rows(), x_hat.cols());
    return;
  }
  const Matrix delta = x_hat - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta.cwiseProduct(x_hat - mean_);
}

Matrix InformativenessTracker::scores() const {
  if (seen_ == 0) throw ArgumentError("informativeness: no snapshots recorded");
  if (count_ < 2) return Matrix::Zero(mean_.rows(), mean_.cols());
  return m2_.cwiseMax(0.0);
}

std::vector<ScoredEntry> InformativenessTracker::informativeness(const Mask& mask) const {
  const Matrix s = scores();
  if (mask.rows() != s.rows() || mask.cols() != s.cols()) {
    throw DimensionError("informativeness: mask shape differs from snapshots");
  }
  std::vector<ScoredEntry> out;
  for (Index i = 0; i < s.rows(); ++i) {
    for (Index j = 0; j < s.cols(); ++j) {
      if (!mask(i, j)) out.push_back({{i, j}, s(i, j)});
    }
  }
  return out;
}

namespace {

std::optional<std::vector<Entry>> top_k_by(std::vector<ScoredEntry> ranked, std::size_t k) {
  if (k < 1) throw ArgumentError("selection: k must be >= 1");
  if (ranked.empty()) return std::nullopt;
  const std::size_t take = std::min(k, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take), ranked.end(),
                    [](const ScoredEntry& a, const ScoredEntry& b) {
                      if (a.score != b.score) return a.score > b.score;
                      return a.entry < b.entry;
                    });
  std::vector<Entry> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(ranked[i].entry);
  return out;
}

}  // namespace

std::optional<std::vector<Entry>> select_top_k(const std::vector<ScoredEntry>& scores, std::size_t k) {
  return top_k_by(scores, k);
}

std::optional<std::vector<Entry>> select_cost_ratio(const std::vector<ScoredEntry>& scores,
                                                    const CostModel& costs, std::size_t k) {
  costs.validate();
  std::vector<ScoredEntry> ratios;
  ratios.reserve(scores.size());
  for (const ScoredEntry& s : scores) {
    if (s.entry.col < 0 || s.entry.col >= costs.column_costs.size()) {
      throw DimensionError("select_cost_ratio: entry column outside cost model");
    }
    ratios.push_back({s.entry, s.score / costs.column_costs(s.entry.col)});
  }
  return top_k_by(std::move(ratios), k);
}

}  // namespace featacq
