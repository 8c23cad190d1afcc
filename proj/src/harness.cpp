#include "featacq/harness.hpp"

#include "featacq/classifier.hpp"
#include "featacq/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>

namespace featacq {
namespace {

// Purposes of the per-replicate random streams.
enum Stream : std::uint64_t { kSplit = 1, kMask = 2, kCosts = 3, kSelect = 4, kPoss = 5 };

bool has_both_classes(const Vector& labels) {
  const Index positives = (labels.array() > 0.0).count();
  return positives > 0 && positives < labels.size();
}

LabeledSplit gather(const Dataset& data, std::vector<Index> rows, SplitRole role) {
  LabeledSplit s;
  s.role = role;
  s.features.resize(static_cast<Index>(rows.size()), data.features.cols());
  s.labels.resize(static_cast<Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto i = static_cast<Index>(k);
    s.features.row(i) = data.features.row(rows[k]);
    s.labels(i) = data.labels(rows[k]);
  }
  s.rows = std::move(rows);
  return s;
}

}  // namespace

void standardize_columns(Matrix& train, Matrix& test, const Mask& mask) {
  if (mask.rows() != train.rows() || mask.cols() != train.cols() ||
      (test.size() > 0 && test.cols() != train.cols())) {
    throw DimensionError("standardize_columns: shape mismatch");
  }
  for (Index j = 0; j < train.cols(); ++j) {
    double sum = 0.0;
    double sq = 0.0;
    Index count = 0;
    for (Index i = 0; i < train.rows(); ++i) {
      if (!mask(i, j)) continue;
      sum += train(i, j);
      ++count;
    }
    const double mean = count > 0 ? sum / static_cast<double>(count) : 0.0;
    for (Index i = 0; i < train.rows(); ++i) {
      if (mask(i, j)) sq += (train(i, j) - mean) * (train(i, j) - mean);
    }
    double sd = count > 1 ? std::sqrt(sq / static_cast<double>(count)) : 1.0;
    if (!(sd > 0.0)) sd = 1.0;
    train.col(j) = (train.col(j).array() - mean) / sd;
    if (test.size() > 0) test.col(j) = (test.col(j).array() - mean) / sd;
  }
}

namespace {

Vector column_costs(const ExperimentPlan& plan, Index cols, std::uint64_t replicate) {
  if (!plan.costs.empty()) {
    return Eigen::Map<const Vector>(plan.costs.data(), static_cast<Index>(plan.costs.size()));
  }
  if (!plan.random_costs) return Vector::Ones(cols);
  Rng rng = stream_rng(plan.seed, replicate, kCosts);
  std::uniform_int_distribution<int> price(1, 10);
  Vector c(cols);
  for (Index j = 0; j < cols; ++j) c(j) = price(rng);
  return c;
}

std::vector<Entry> random_batch(std::vector<Entry> missing, std::size_t k, Rng& rng) {
  const std::size_t take = std::min(k, missing.size());
  for (std::size_t i = 0; i < take; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, missing.size() - 1);
    std::swap(missing[i], missing[pick(rng)]);
  }
  missing.resize(take);
  return missing;
}

std::vector<Entry> random_within_budget(std::vector<Entry> missing, const Oracle& oracle, double budget,
                                        Rng& rng) {
  std::shuffle(missing.begin(), missing.end(), rng);
  std::vector<Entry> out;
  double spent = 0.0;
  for (const Entry& e : missing) {
    if (spent + oracle.cost(e) <= budget) {
      out.push_back(e);
      spent += oracle.cost(e);
    }
  }
  return out;
}

std::vector<Entry> poss_batch(const std::vector<ScoredEntry>& scores, const Oracle& oracle,
                              const ExperimentPlan& plan, Rng& rng) {
  std::vector<ScoredEntry> pool = scores;
  const std::size_t keep = std::min(plan.poss_pool, pool.size());
  std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(keep), pool.end(),
                    [](const ScoredEntry& a, const ScoredEntry& b) {
                      if (a.score != b.score) return a.score > b.score;
                      return a.entry < b.entry;
                    });
  pool.resize(keep);
  BiObjectiveProblem problem;
  problem.budget = plan.budget_per_round;
  for (const ScoredEntry& s : pool) problem.candidates.push_back({s.entry, s.score, oracle.cost(s.entry)});
  const std::uint64_t iterations =
      plan.poss_iterations > 0 ? plan.poss_iterations : default_iterations(problem);
  return poss_optimize(problem, iterations, rng);
}

bool finite(const RoundRecord& r) {
  return std::isfinite(r.cumulative_cost) && std::isfinite(r.recon_rel) && std::isfinite(r.recon_msq) &&
         std::isfinite(r.train_objective) && std::isfinite(r.test_accuracy) && std::isfinite(r.test_auc);
}

ReplicateRun run_replicate(const Dataset& data, const ExperimentPlan& plan, std::uint64_t replicate) {
  auto split_rng = stream_rng(plan.seed, replicate, kSplit);
  auto [train, test] = make_split(data, plan.train_fraction, split_rng());
  if (test.labels.size() == 0) throw ArgumentError("experiment: test split is empty");

  auto mask_rng = stream_rng(plan.seed, replicate, kMask);
  const Mask mask =
      init_mask(train.features.rows(), train.features.cols(), plan.initial_observed_rate, mask_rng());
  if (plan.dataset.standardize) standardize_columns(train.features, test.features, mask);

  ReplicateRun run;
  run.column_costs = column_costs(plan, train.features.cols(), replicate);
  const Oracle oracle(train.features,
                      {run.column_costs, plan.budget_per_round > 0.0 ? plan.budget_per_round : 1.0});
  PartialMatrix obs(train.features, mask);
  InformativenessTracker tracker(plan.window);
  Rng select_rng = stream_rng(plan.seed, replicate, kSelect);
  Rng poss_rng = stream_rng(plan.seed, replicate, kPoss);

  std::optional<Matrix> warm;
  double cumulative_cost = 0.0;
  for (std::size_t t = 1; t <= plan.rounds; ++t) {
    CompletionResult fitted;
    try {
      fitted = fit(obs, train.labels, plan.completion, warm);
    } catch (const DivergenceError& e) {
      throw DivergenceError("replicate " + std::to_string(replicate) + ", round " + std::to_string(t) +
                                ": " + e.what(),
                            e.iteration());
    }
    tracker.record_snapshot(fitted.x_hat);

    RoundRecord rec;
    rec.round = t;
    rec.cumulative_cost = cumulative_cost;
    rec.queried_entries = static_cast<double>(run.queries.size());
    const ReconstructionError err = reconstruction_errors(fitted.x_hat, oracle.ground_truth());
    rec.recon_rel = err.relative;
    rec.recon_msq = err.mean_sq;
    rec.train_objective = fitted.objective_trace.back();
    const Vector scores = decision_values(fitted.model, test.features);
    rec.test_accuracy = accuracy(scores, test.labels);
    rec.test_auc = auc(scores, test.labels);
    if (!finite(rec)) {
      throw NumericError("replicate " + std::to_string(replicate) + ", round " + std::to_string(t) +
                         ": non-finite metrics");
    }
    run.records.push_back(rec);
    warm = std::move(fitted.x_hat);
    if (t == plan.rounds) break;

    std::vector<Entry> missing = obs.missing_entries();
    if (missing.empty()) break;
    const bool have_variance = tracker.retained() >= 2;
    std::vector<Entry> batch;
    switch (plan.strategy) {
      case Strategy::random:
        batch = random_batch(std::move(missing), plan.batch_size, select_rng);
        break;
      case Strategy::variance:
        batch = have_variance ? *select_top_k(tracker.informativeness(obs.mask()), plan.batch_size)
                              : random_batch(std::move(missing), plan.batch_size, select_rng);
        break;
      case Strategy::cost_ratio:
        batch = have_variance
                    ? *select_cost_ratio(tracker.informativeness(obs.mask()), oracle.costs(), plan.batch_size)
                    : random_batch(std::move(missing), plan.batch_size, select_rng);
        break;
      case Strategy::poss:
        batch = have_variance ? poss_batch(tracker.informativeness(obs.mask()), oracle, plan, poss_rng)
                              : random_within_budget(std::move(missing), oracle, plan.budget_per_round,
                                                     select_rng);
        break;
    }
    if (batch.empty()) break;
    cumulative_cost += oracle.answer(obs, batch);
    run.queries.insert(run.queries.end(), batch.begin(), batch.end());
  }
  return run;
}

}  // namespace

Rng stream_rng(std::uint64_t seed, std::uint64_t replicate, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replicate), static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

std::pair<LabeledSplit, LabeledSplit> make_split(const Dataset& data, double train_fraction,
                                                 std::uint64_t seed) {
  const Index n = data.features.rows();
  if (n == 0) throw ArgumentError("make_split: empty dataset");
  if (data.labels.size() != n) throw DimensionError("make_split: label count differs from row count");
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
    throw ArgumentError("make_split: train_fraction must be in (0, 1]");
  }
  if (!has_both_classes(data.labels)) throw StratificationError("make_split: dataset has a single class");

  const auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n)));
  std::vector<Index> order(static_cast<std::size_t>(n));
  Rng rng(seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::iota(order.begin(), order.end(), Index{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Index> train_rows(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<Index> test_rows(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    LabeledSplit train = gather(data, std::move(train_rows), SplitRole::train);
    LabeledSplit test = gather(data, std::move(test_rows), SplitRole::test);
    const bool train_ok = train.labels.size() == 0 || has_both_classes(train.labels);
    const bool test_ok = test.labels.size() == 0 || has_both_classes(test.labels);
    if (train_ok && test_ok) return {std::move(train), std::move(test)};
  }
  throw StratificationError("make_split: no two-class split after 100 attempts");
}

Mask init_mask(Index rows, Index cols, double observed_rate, std::uint64_t seed) {
  if (!(observed_rate > 0.0 && observed_rate <= 1.0)) {
    throw ArgumentError("init_mask: observed_rate must be in (0, 1]");
  }
  const Index cells = rows * cols;
  const auto keep = static_cast<Index>(std::floor(observed_rate * static_cast<double>(cells)));
  std::vector<Index> order(static_cast<std::size_t>(cells));
  std::iota(order.begin(), order.end(), Index{0});
  Rng rng(seed);
  for (Index i = 0; i < keep; ++i) {
    std::uniform_int_distribution<Index> pick(i, cells - 1);
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(pick(rng))]);
  }
  Mask mask = Mask::Constant(rows, cols, false);
  for (Index i = 0; i < keep; ++i) {
    const Index cell = order[static_cast<std::size_t>(i)];
    mask(cell / cols, cell % cols) = true;
  }
  return mask;
}

Oracle::Oracle(Matrix ground_truth, CostModel costs) : truth_(std::move(ground_truth)), costs_(std::move(costs)) {
  costs_.validate();
  if (costs_.column_costs.size() != truth_.cols()) {
    throw DimensionError("oracle: cost count differs from column count");
  }
}

double Oracle::query(Entry e) const {
  if (e.row < 0 || e.row >= truth_.rows() || e.col < 0 || e.col >= truth_.cols()) {
    throw ArgumentError("oracle: entry out of range");
  }
  return truth_(e.row, e.col);
}

double Oracle::answer(PartialMatrix& obs, const std::vector<Entry>& entries) const {
  double total = 0.0;
  for (const Entry& e : entries) {
    obs.reveal(e, query(e));
    total += cost(e);
  }
  return total;
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::variance:
      return "variance";
    case Strategy::cost_ratio:
      return "cost_ratio";
    case Strategy::poss:
      return "poss";
    case Strategy::random:
      return "random";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "variance") return Strategy::variance;
  if (name == "cost_ratio") return Strategy::cost_ratio;
  if (name == "poss") return Strategy::poss;
  if (name == "random") return Strategy::random;
  throw ArgumentError("unknown strategy '" + std::string(name) + "'");
}

void ExperimentPlan::validate() const {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) throw ArgumentError("train_fraction must be in (0, 1]");
  if (!(initial_observed_rate > 0.0 && initial_observed_rate <= 1.0)) {
    throw ArgumentError("initial_observed_rate must be in (0, 1]");
  }
  if (rounds < 1) throw ArgumentError("rounds must be >= 1");
  if (replicates < 1) throw ArgumentError("replicates must be >= 1");
  if (strategy == Strategy::poss) {
    if (!(budget_per_round > 0.0)) throw ArgumentError("poss strategy needs budget_per_round > 0");
    if (poss_pool < 1) throw ArgumentError("poss_pool must be >= 1");
  } else if (batch_size < 1) {
    throw ArgumentError("batch_size must be >= 1");
  }
  if (budget_per_round < 0.0) throw ArgumentError("budget_per_round must be >= 0");
  for (double c : costs) {
    if (!(c > 0.0) || !std::isfinite(c)) throw ArgumentError("costs must be positive");
  }
  completion.validate();
}

ReconstructionError reconstruction_errors(const Matrix& x_hat, const Matrix& x_true) {
  if (x_hat.rows() != x_true.rows() || x_hat.cols() != x_true.cols()) {
    throw DimensionError("reconstruction_errors: shape mismatch");
  }
  const double diff_sq = (x_hat - x_true).squaredNorm();
  const double truth = x_true.norm();
  ReconstructionError e;
  e.relative = truth > 0.0 ? std::sqrt(diff_sq) / truth : (diff_sq == 0.0 ? 0.0 : INFINITY);
  e.mean_sq = x_true.size() > 0 ? diff_sq / static_cast<double>(x_true.size()) : 0.0;
  return e;
}

std::vector<RoundRecord> mean_records(const std::vector<ReplicateRun>& runs) {
  if (runs.empty()) return {};
  std::size_t len = runs.front().records.size();
  for (const ReplicateRun& r : runs) len = std::min(len, r.records.size());
  std::vector<RoundRecord> mean(len);
  const auto count = static_cast<double>(runs.size());
  for (std::size_t t = 0; t < len; ++t) {
    RoundRecord& m = mean[t];
    m.round = t + 1;
    for (const ReplicateRun& r : runs) {
      const RoundRecord& x = r.records[t];
      m.cumulative_cost += x.cumulative_cost;
      m.queried_entries += x.queried_entries;
      m.recon_rel += x.recon_rel;
      m.recon_msq += x.recon_msq;
      m.train_objective += x.train_objective;
      m.test_accuracy += x.test_accuracy;
      m.test_auc += x.test_auc;
    }
    m.cumulative_cost /= count;
    m.queried_entries /= count;
    m.recon_rel /= count;
    m.recon_msq /= count;
    m.train_objective /= count;
    m.test_accuracy /= count;
    m.test_auc /= count;
  }
  return mean;
}

ExperimentResult run_experiment(const Dataset& data, const ExperimentPlan& plan) {
  plan.validate();
  if (data.labels.size() != data.features.rows()) {
    throw DimensionError("experiment: label count differs from row count");
  }
  if (!plan.costs.empty() && static_cast<Index>(plan.costs.size()) != data.features.cols()) {
    throw ArgumentError("experiment: cost count differs from column count");
  }
  require_binary_labels(data.labels);
  ExperimentResult result;
  for (std::size_t r = 0; r < plan.replicates; ++r) result.replicates.push_back(run_replicate(data, plan, r));
  result.mean = mean_records(result.replicates);
  return result;
}

}  // namespace featacq
