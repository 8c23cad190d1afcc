#pragma once

#include "featacq/acquisition.hpp"
#include "featacq/completion.hpp"
#include "featacq/dataset.hpp"
#include "featacq/matrix.hpp"
#include "featacq/poss.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace featacq {

/// Independent generator for one (seed, replicate, purpose) triple.
Rng stream_rng(std::uint64_t seed, std::uint64_t replicate, std::uint64_t stream);

enum class SplitRole { train, test };

struct LabeledSplit {
  Matrix features;
  Vector labels;
  SplitRole role = SplitRole::train;
  std::vector<Index> rows;  ///< source row of each split row
};

/// Seeded shuffle of the rows; the first floor(train_fraction * n) go to
/// training. Reshuffles until every nonempty side holds both classes and
/// throws StratificationError after 100 attempts.
std::pair<LabeledSplit, LabeledSplit> make_split(const Dataset& data, double train_fraction,
                                                 std::uint64_t seed);

/// Exactly floor(observed_rate * rows * cols) observed cells, drawn without
/// replacement.
Mask init_mask(Index rows, Index cols, double observed_rate, std::uint64_t seed);

/// Z-scores every column of `train` and `test` in place with the mean and
/// population deviation of the observed training cells (deviation 0 -> 1).
void standardize_columns(Matrix& train, Matrix& test, const Mask& train_mask);

/// Ground-truth holder that answers entry queries at per-column cost.
class Oracle {
 public:
  Oracle(Matrix ground_truth, CostModel costs);

  double query(Entry e) const;
  double cost(Entry e) const { return costs_.column_costs(e.col); }
  /// Reveals every entry in `obs` and returns the total cost.
  double answer(PartialMatrix& obs, const std::vector<Entry>& entries) const;

  const Matrix& ground_truth() const noexcept { return truth_; }
  const CostModel& costs() const noexcept { return costs_; }

 private:
  Matrix truth_;
  CostModel costs_;
};

enum class Strategy { variance, cost_ratio, poss, random };

std::string to_string(Strategy s);
/// Throws ArgumentError for an unknown name.
Strategy parse_strategy(std::string_view name);

struct ExperimentPlan {
  DatasetSpec dataset;
  SyntheticSpec synthetic;  ///< used when dataset.path is empty
  double train_fraction = 0.7;
  double initial_observed_rate = 0.6;
  Strategy strategy = Strategy::variance;
  std::size_t batch_size = 10;    ///< entries per round (variance, cost_ratio, random)
  double budget_per_round = 0.0;  ///< cost cap per round (poss)
  std::size_t rounds = 10;
  std::size_t window = 0;  ///< 0 keeps every snapshot
  CompletionConfig completion;
  std::uint64_t seed = 0;
  std::size_t replicates = 10;
  bool random_costs = false;  ///< per-column integer costs uniform on 1..10
  std::vector<double> costs;  ///< explicit per-column costs; overrides random_costs
  std::size_t poss_pool = 200;
  std::uint64_t poss_iterations = 0;  ///< 0 selects default_iterations

  /// Throws ArgumentError on an inconsistent plan.
  void validate() const;

  friend bool operator==(const ExperimentPlan&, const ExperimentPlan&) = default;
};

struct RoundRecord {
  std::size_t round = 0;
  double cumulative_cost = 0.0;
  double queried_entries = 0.0;  ///< integral per replicate; averaged in the mean series
  double recon_rel = 0.0;
  double recon_msq = 0.0;
  double train_objective = 0.0;
  double test_accuracy = 0.0;
  double test_auc = 0.0;
};

struct ReplicateRun {
  std::vector<RoundRecord> records;
  std::vector<Entry> queries;  ///< every queried entry, in query order
  Vector column_costs;
};

struct ExperimentResult {
  std::vector<ReplicateRun> replicates;
  std::vector<RoundRecord> mean;
};

struct ReconstructionError {
  double relative = 0.0;  ///< ||Xh - X||_F / ||X||_F
  double mean_sq = 0.0;   ///< ||Xh - X||_F^2 / (n d)
};

ReconstructionError reconstruction_errors(const Matrix& x_hat, const Matrix& x_true);

/// Round-wise mean over replicates, truncated to the shortest replicate.
std::vector<RoundRecord> mean_records(const std::vector<ReplicateRun>& runs);

/// The closed acquire -> complete -> train -> evaluate loop. Each round
/// completes the training matrix (warm-started from the previous round),
/// records a snapshot, evaluates on the fully observed test rows, then
/// buys the next batch from the oracle. Metrics of a round reflect the
/// entries bought before it.
ExperimentResult run_experiment(const Dataset& data, const ExperimentPlan& plan);

}  // namespace featacq
