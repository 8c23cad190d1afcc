#include "featacq/error.hpp"
#include "featacq/harness.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace featacq;

namespace {

Dataset small_data(std::uint64_t seed = 4) { return make_synthetic({40, 8, 2, 0.0}, seed); }

ExperimentPlan small_plan() {
  ExperimentPlan plan;
  plan.synthetic = {40, 8, 2, 0.0};
  plan.rounds = 4;
  plan.replicates = 2;
  plan.batch_size = 5;
  plan.seed = 3;
  plan.completion.max_inner = 100;
  return plan;
}

double sum_costs(const ReplicateRun& run) {
  double c = 0.0;
  for (const Entry& e : run.queries) c += run.column_costs(e.col);
  return c;
}

}  // namespace

TEST(MakeSplit, SizesAndPartition) {
  const Dataset data = make_synthetic({100, 5, 2, 0.0}, 1);
  const auto [train, test] = make_split(data, 0.7, 9);
  EXPECT_EQ(train.labels.size(), 70);
  EXPECT_EQ(test.labels.size(), 30);
  EXPECT_EQ(train.role, SplitRole::train);
  EXPECT_EQ(test.role, SplitRole::test);
  std::set<Index> rows(train.rows.begin(), train.rows.end());
  rows.insert(test.rows.begin(), test.rows.end());
  EXPECT_EQ(rows.size(), 100u);
  for (std::size_t i = 0; i < train.rows.size(); ++i) {
    EXPECT_EQ(train.features.row(static_cast<Index>(i)), data.features.row(train.rows[i]));
    EXPECT_EQ(train.labels(static_cast<Index>(i)), data.labels(train.rows[i]));
  }
}

TEST(MakeSplit, DeterministicAndTwoClass) {
  const Dataset data = small_data();
  const auto a = make_split(data, 0.7, 5);
  const auto b = make_split(data, 0.7, 5);
  EXPECT_EQ(a.first.rows, b.first.rows);
  EXPECT_EQ(a.second.rows, b.second.rows);
  for (const LabeledSplit* s : {&a.first, &a.second}) {
    EXPECT_TRUE((s->labels.array() == 1.0).any());
    EXPECT_TRUE((s->labels.array() == -1.0).any());
  }
}

TEST(MakeSplit, FullFractionLeavesNoTestRows) {
  const auto [train, test] = make_split(small_data(), 1.0, 5);
  EXPECT_EQ(train.labels.size(), 40);
  EXPECT_EQ(test.labels.size(), 0);
}

TEST(MakeSplit, Errors) {
  Dataset one_class{Matrix::Ones(6, 2), Vector::Ones(6)};
  EXPECT_THROW(make_split(one_class, 0.5, 1), StratificationError);
  // One negative row can never sit on both sides.
  Dataset lonely{Matrix::Ones(6, 2), Vector::Ones(6)};
  lonely.labels(3) = -1.0;
  EXPECT_THROW(make_split(lonely, 0.5, 1), StratificationError);
  EXPECT_THROW(make_split(small_data(), 0.0, 1), ArgumentError);
}

TEST(InitMask, CountsAndDeterminism) {
  EXPECT_TRUE(init_mask(4, 3, 1.0, 1).all());
  EXPECT_EQ(init_mask(10, 10, 0.6, 2).count(), 60);
  EXPECT_EQ(init_mask(7, 3, 0.5, 2).count(), 10);
  EXPECT_TRUE((init_mask(10, 10, 0.6, 8) == init_mask(10, 10, 0.6, 8)).all());
  EXPECT_FALSE((init_mask(10, 10, 0.6, 8) == init_mask(10, 10, 0.6, 9)).all());
  EXPECT_THROW(init_mask(3, 3, 0.0, 1), ArgumentError);
}

TEST(Standardize, UsesObservedTrainStatistics) {
  Matrix train(3, 1);
  train << 1, 3, 100;
  Matrix test(1, 1);
  test << 5;
  Mask mask(3, 1);
  mask << true, true, false;
  standardize_columns(train, test, mask);
  // Observed mean 2, population deviation 1.
  EXPECT_DOUBLE_EQ(train(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(train(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(train(2, 0), 98.0);
  EXPECT_DOUBLE_EQ(test(0, 0), 3.0);
}

TEST(Oracle, FidelityAndCost) {
  Rng rng(1);
  const Matrix truth = featacq::testing::gaussian(4, 3, rng);
  CostModel costs{Vector(3), 1.0};
  costs.column_costs << 2, 5, 1;
  const Oracle oracle(truth, costs);
  PartialMatrix obs(truth, Mask::Constant(4, 3, false));
  const double spent = oracle.answer(obs, {{0, 1}, {3, 2}});
  EXPECT_EQ(spent, 6.0);
  EXPECT_EQ(obs.values()(0, 1), truth(0, 1));
  EXPECT_EQ(obs.values()(3, 2), truth(3, 2));
  EXPECT_EQ(obs.observed_count(), 2u);
  EXPECT_THROW(oracle.answer(obs, {{0, 1}}), ArgumentError);
  EXPECT_THROW(oracle.query({4, 0}), ArgumentError);
  EXPECT_THROW(Oracle(truth, CostModel::uniform(2)), DimensionError);
}

TEST(ReconstructionErrors, Examples) {
  Rng rng(2);
  const Matrix x = featacq::testing::gaussian(3, 3, rng);
  const ReconstructionError same = reconstruction_errors(x, x);
  EXPECT_EQ(same.relative, 0.0);
  EXPECT_EQ(same.mean_sq, 0.0);
  EXPECT_DOUBLE_EQ(reconstruction_errors(Matrix::Zero(3, 3), x).relative, 1.0);
  EXPECT_DOUBLE_EQ(reconstruction_errors(Matrix::Identity(2, 2), Matrix::Zero(2, 2)).mean_sq, 0.5);
  EXPECT_EQ(reconstruction_errors(Matrix::Zero(2, 2), Matrix::Zero(2, 2)).relative, 0.0);
  EXPECT_THROW(reconstruction_errors(Matrix::Zero(2, 2), Matrix::Zero(2, 3)), DimensionError);
}

TEST(Strategy, NamesRoundTrip) {
  for (Strategy s : {Strategy::variance, Strategy::cost_ratio, Strategy::poss, Strategy::random}) {
    EXPECT_EQ(parse_strategy(to_string(s)), s);
  }
  EXPECT_THROW(parse_strategy("greedy"), ArgumentError);
}

TEST(Plan, Validation) {
  EXPECT_NO_THROW(ExperimentPlan{}.validate());
  ExperimentPlan p;
  p.rounds = 0;
  EXPECT_THROW(p.validate(), ArgumentError);
  p = {};
  p.initial_observed_rate = 1.5;
  EXPECT_THROW(p.validate(), ArgumentError);
  p = {};
  p.strategy = Strategy::poss;
  EXPECT_THROW(p.validate(), ArgumentError);
  p.budget_per_round = 5.0;
  EXPECT_NO_THROW(p.validate());
  p = {};
  p.costs = {1.0, -2.0};
  EXPECT_THROW(p.validate(), ArgumentError);
}

TEST(RunExperiment, SingleRandomRound) {
  ExperimentPlan plan = small_plan();
  plan.rounds = 1;
  plan.strategy = Strategy::random;
  const ExperimentResult res = run_experiment(small_data(), plan);
  ASSERT_EQ(res.replicates.size(), 2u);
  for (const ReplicateRun& r : res.replicates) {
    ASSERT_EQ(r.records.size(), 1u);
    EXPECT_TRUE(r.queries.empty());
    EXPECT_EQ(r.records[0].cumulative_cost, 0.0);
  }
  ASSERT_EQ(res.mean.size(), 1u);
}

TEST(RunExperiment, MaskGrowsByBatchWithoutRepeats) {
  for (Strategy s : {Strategy::variance, Strategy::cost_ratio, Strategy::random}) {
    ExperimentPlan plan = small_plan();
    plan.strategy = s;
    plan.random_costs = true;
    const ExperimentResult res = run_experiment(small_data(), plan);
    for (const ReplicateRun& r : res.replicates) {
      ASSERT_EQ(r.records.size(), plan.rounds);
      const std::set<Entry> unique(r.queries.begin(), r.queries.end());
      EXPECT_EQ(unique.size(), r.queries.size());
      for (std::size_t k = 0; k < r.records.size(); ++k) {
        EXPECT_EQ(r.records[k].round, k + 1);
        EXPECT_EQ(r.records[k].queried_entries, static_cast<double>(k * plan.batch_size));
        if (k > 0) EXPECT_GE(r.records[k].cumulative_cost, r.records[k - 1].cumulative_cost);
      }
      EXPECT_EQ(r.queries.size(), (plan.rounds - 1) * plan.batch_size);
      EXPECT_DOUBLE_EQ(r.records.back().cumulative_cost, sum_costs(r));
    }
  }
}

TEST(RunExperiment, PossSpendsWithinBudget) {
  ExperimentPlan plan = small_plan();
  plan.strategy = Strategy::poss;
  plan.random_costs = true;
  plan.budget_per_round = 12.0;
  plan.poss_iterations = 3000;
  const ExperimentResult res = run_experiment(small_data(), plan);
  for (const ReplicateRun& r : res.replicates) {
    const std::set<Entry> unique(r.queries.begin(), r.queries.end());
    EXPECT_EQ(unique.size(), r.queries.size());
    for (std::size_t k = 1; k < r.records.size(); ++k) {
      EXPECT_LE(r.records[k].cumulative_cost - r.records[k - 1].cumulative_cost, plan.budget_per_round);
    }
    EXPECT_DOUBLE_EQ(r.records.back().cumulative_cost, sum_costs(r));
  }
}

TEST(RunExperiment, UniformCostRatioEqualsVariance) {
  ExperimentPlan plan = small_plan();
  plan.strategy = Strategy::variance;
  const ExperimentResult var = run_experiment(small_data(), plan);
  plan.strategy = Strategy::cost_ratio;
  const ExperimentResult ratio = run_experiment(small_data(), plan);
  for (std::size_t r = 0; r < var.replicates.size(); ++r) {
    EXPECT_EQ(var.replicates[r].queries, ratio.replicates[r].queries);
  }
}

TEST(RunExperiment, DeterministicAndFinite) {
  ExperimentPlan plan = small_plan();
  const ExperimentResult a = run_experiment(small_data(), plan);
  const ExperimentResult b = run_experiment(small_data(), plan);
  for (std::size_t r = 0; r < a.replicates.size(); ++r) {
    EXPECT_EQ(a.replicates[r].queries, b.replicates[r].queries);
    ASSERT_EQ(a.replicates[r].records.size(), b.replicates[r].records.size());
    for (std::size_t k = 0; k < a.replicates[r].records.size(); ++k) {
      const RoundRecord& x = a.replicates[r].records[k];
      const RoundRecord& y = b.replicates[r].records[k];
      EXPECT_EQ(x.test_accuracy, y.test_accuracy);
      EXPECT_EQ(x.recon_rel, y.recon_rel);
      EXPECT_EQ(x.train_objective, y.train_objective);
      EXPECT_TRUE(std::isfinite(x.recon_msq) && std::isfinite(x.test_auc));
    }
  }
}

TEST(RunExperiment, StopsWhenPoolExhausted) {
  ExperimentPlan plan = small_plan();
  plan.synthetic = {20, 4, 2, 0.0};
  plan.rounds = 50;
  plan.batch_size = 3;
  plan.strategy = Strategy::random;
  const ExperimentResult res = run_experiment(make_synthetic(plan.synthetic, 1), plan);
  for (const ReplicateRun& r : res.replicates) {
    EXPECT_LT(r.records.size(), plan.rounds);
    const std::size_t cells = 14 * 4;  // floor(0.7 * 20) training rows
    EXPECT_EQ(r.queries.size(), cells - static_cast<std::size_t>(std::floor(0.6 * cells)));
  }
}

TEST(MeanRecords, AveragesAndTruncates) {
  ReplicateRun a, b;
  a.records = {{1, 0, 0, 0.2, 0.1, 5, 0.5, 0.6}, {2, 4, 2, 0.1, 0.05, 4, 0.7, 0.8}};
  b.records = {{1, 0, 0, 0.4, 0.3, 7, 0.9, 1.0}};
  const std::vector<RoundRecord> m = mean_records({a, b});
  ASSERT_EQ(m.size(), 1u);
  EXPECT_DOUBLE_EQ(m[0].recon_rel, 0.3);
  EXPECT_DOUBLE_EQ(m[0].train_objective, 6.0);
  EXPECT_DOUBLE_EQ(m[0].test_accuracy, 0.7);
}

TEST(Synthetic, ShapeRankAndLabels) {
  const Dataset d = make_synthetic({30, 6, 2, 0.0}, 5);
  EXPECT_EQ(d.features.rows(), 30);
  EXPECT_EQ(d.features.cols(), 6);
  const Vector s = svd(d.features).sigma;
  EXPECT_LT(s(2), 1e-10 * s(0));
  EXPECT_TRUE((d.labels.array().abs() == 1.0).all());
  EXPECT_THROW(make_synthetic({5, 3, 4, 0.0}, 1), ArgumentError);
}
