#pragma once

#include "featacq/matrix.hpp"

#include <cstddef>
#include <deque>
#include <optional>
#include <vector>

namespace featacq {

struct ScoredEntry {
  Entry entry;
  double score = 0.0;
};

/// Per-column acquisition prices and the per-round spending cap.
struct CostModel {
  Vector column_costs;
  double budget_per_round = 1.0;

  static CostModel uniform(Index cols, double cost = 1.0, double budget = 1.0);
  /// Throws ArgumentError unless every cost and the budget are positive.
  void validate() const;
};

/// Streaming sum of squared deviations of each cell across completion
/// snapshots, kept as Welford running mean and M2. With window == 0 every
/// snapshot counts; otherwise the oldest snapshot is downdated out once more
/// than `window` are held.
class InformativenessTracker {
 public:
  explicit InformativenessTracker(std::size_t window = 0) : window_(window) {}

  /// Throws DimensionError if the shape differs from earlier snapshots.
  void record_snapshot(const Matrix& x_hat);

  std::size_t window() const noexcept { return window_; }
  std::size_t snapshots_seen() const noexcept { return seen_; }
  /// Snapshots contributing to the current scores.
  std::size_t retained() const noexcept { return count_; }

  /// Sum of squared deviations from the retained mean, for every cell.
  /// Cells with fewer than two retained snapshots score 0.
  Matrix scores() const;

  /// Scores of the unobserved cells only, in (row, col) order.
  std::vector<ScoredEntry> informativeness(const Mask& mask) const;

 private:
  std::size_t window_;
  std::size_t seen_ = 0;
  std::size_t count_ = 0;
  Matrix mean_;
  Matrix m2_;
  std::deque<Matrix> ring_;  // windowed mode only
};

/// The k highest scores, ties broken by ascending (row, col). Returns
/// std::nullopt when there is nothing left to select.
std::optional<std::vector<Entry>> select_top_k(const std::vector<ScoredEntry>& scores, std::size_t k);

/// The k highest score / column_cost ratios, same tie rule as select_top_k.
std::optional<std::vector<Entry>> select_cost_ratio(const std::vector<ScoredEntry>& scores,
                                                    const CostModel& costs, std::size_t k);

}  // namespace featacq
