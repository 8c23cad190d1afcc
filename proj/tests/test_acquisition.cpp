#include "featacq/acquisition.hpp"
#include "featacq/error.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <deque>

using namespace featacq;

namespace {

Matrix fill(Index n, Index d, double v) { return Matrix::Constant(n, d, v); }

// Two-pass sum of squared deviations over the last `window` values (all if 0).
double two_pass(const std::vector<double>& values, std::size_t window) {
  const std::size_t start = window == 0 || values.size() <= window ? 0 : values.size() - window;
  const std::size_t count = values.size() - start;
  if (count < 2) return 0.0;
  double mean = 0.0;
  for (std::size_t i = start; i < values.size(); ++i) mean += values[i];
  mean /= static_cast<double>(count);
  double ss = 0.0;
  for (std::size_t i = start; i < values.size(); ++i) ss += (values[i] - mean) * (values[i] - mean);
  return ss;
}

std::vector<ScoredEntry> scored(std::initializer_list<std::tuple<Index, Index, double>> items) {
  std::vector<ScoredEntry> out;
  for (const auto& [r, c, s] : items) out.push_back({{r, c}, s});
  return out;
}

}  // namespace

TEST(Tracker, IdenticalSnapshotsScoreZero) {
  InformativenessTracker t;
  t.record_snapshot(fill(2, 2, 3.0));
  t.record_snapshot(fill(2, 2, 3.0));
  EXPECT_TRUE(t.scores().isZero(0.0));
}

TEST(Tracker, UnboundedThreeValues) {
  InformativenessTracker t;
  for (double v : {1.0, 2.0, 3.0}) t.record_snapshot(fill(1, 1, v));
  EXPECT_NEAR(t.scores()(0, 0), 2.0, 1e-14);
  EXPECT_EQ(t.snapshots_seen(), 3u);
}

TEST(Tracker, WindowOfTwo) {
  InformativenessTracker t(2);
  for (double v : {1.0, 2.0, 3.0}) t.record_snapshot(fill(1, 1, v));
  EXPECT_NEAR(t.scores()(0, 0), 0.5, 1e-14);
  EXPECT_EQ(t.retained(), 2u);
  EXPECT_EQ(t.snapshots_seen(), 3u);
}

TEST(Tracker, SingleMissingEntry) {
  InformativenessTracker t;
  for (double v : {0.0, 0.0, 4.0}) t.record_snapshot(fill(1, 1, v));
  const std::vector<ScoredEntry> s = t.informativeness(Mask::Constant(1, 1, false));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_NEAR(s[0].score, 32.0 / 3.0, 1e-13);
}

TEST(Tracker, ObservedEntriesExcluded) {
  InformativenessTracker t;
  t.record_snapshot(fill(2, 3, 1.0));
  EXPECT_TRUE(t.informativeness(Mask::Constant(2, 3, true)).empty());
  Mask m = Mask::Constant(2, 3, true);
  m(1, 2) = false;
  m(0, 1) = false;
  const std::vector<ScoredEntry> s = t.informativeness(m);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].entry, (Entry{0, 1}));
  EXPECT_EQ(s[1].entry, (Entry{1, 2}));
}

TEST(Tracker, FewerThanTwoSnapshotsScoreZero) {
  InformativenessTracker t;
  t.record_snapshot(fill(2, 2, 5.0));
  EXPECT_TRUE(t.scores().isZero(0.0));
  InformativenessTracker w1(1);
  for (double v : {1.0, 7.0, -3.0}) w1.record_snapshot(fill(1, 1, v));
  EXPECT_EQ(w1.scores()(0, 0), 0.0);
}

TEST(Tracker, ScalingIsQuadratic) {
  Rng rng(1);
  InformativenessTracker a, b;
  for (int k = 0; k < 5; ++k) {
    const Matrix s = featacq::testing::gaussian(3, 4, rng);
    a.record_snapshot(s);
    b.record_snapshot(2.5 * s);
  }
  EXPECT_LT((b.scores() - 6.25 * a.scores()).norm(), 1e-12 * b.scores().norm());
}

TEST(Tracker, ErrorsOnShapeChangeAndEmpty) {
  InformativenessTracker t;
  EXPECT_THROW(t.informativeness(Mask::Constant(1, 1, false)), ArgumentError);
  t.record_snapshot(fill(2, 2, 0.0));
  EXPECT_THROW(t.record_snapshot(fill(2, 3, 0.0)), DimensionError);
  EXPECT_THROW(t.informativeness(Mask::Constant(3, 3, false)), DimensionError);
}

TEST(Tracker, StreamingMatchesTwoPass) {
  Rng rng(2);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t window : {0u, 1u, 2u, 3u, 4u, 7u}) {
    for (int t = 0; t < 20; ++t) {
      InformativenessTracker tracker(window);
      std::vector<double> history;
      const int steps = static_cast<int>(featacq::testing::uniform_index(1, 30, rng));
      const double offset = 100.0 * normal(rng);
      for (int s = 0; s < steps; ++s) {
        history.push_back(offset + normal(rng));
        tracker.record_snapshot(fill(1, 1, history.back()));
        ASSERT_NEAR(tracker.scores()(0, 0), two_pass(history, window), 1e-9);
        ASSERT_GE(tracker.scores()(0, 0), 0.0);
      }
    }
  }
}

TEST(Tracker, LargeWindowEqualsUnbounded) {
  Rng rng(3);
  InformativenessTracker unbounded, windowed(50);
  for (int s = 0; s < 20; ++s) {
    const Matrix x = featacq::testing::gaussian(4, 3, rng);
    unbounded.record_snapshot(x);
    windowed.record_snapshot(x);
    ASSERT_EQ(unbounded.scores(), windowed.scores());
  }
}

TEST(SelectTopK, Examples) {
  EXPECT_EQ(*select_top_k(scored({{0, 0, 1}, {0, 1, 5}, {1, 0, 2}}), 1), (std::vector<Entry>{{0, 1}}));
  EXPECT_EQ(*select_top_k(scored({{2, 0, 1}, {0, 1, 1}, {0, 0, 1}}), 2),
            (std::vector<Entry>{{0, 0}, {0, 1}}));
  EXPECT_EQ(*select_top_k(scored({{0, 0, 5}, {1, 1, 9}, {2, 0, 7}}), 2),
            (std::vector<Entry>{{1, 1}, {2, 0}}));
}

TEST(SelectTopK, ShortPoolAndExhaustion) {
  EXPECT_EQ(select_top_k(scored({{0, 0, 1}}), 5)->size(), 1u);
  EXPECT_FALSE(select_top_k({}, 3).has_value());
  EXPECT_THROW(select_top_k(scored({{0, 0, 1}}), 0), ArgumentError);
}

TEST(SelectTopK, MatchesFullSort) {
  Rng rng(4);
  std::uniform_int_distribution<int> coarse(0, 3);
  for (int t = 0; t < 100; ++t) {
    std::vector<ScoredEntry> s;
    for (Index i = 0; i < 6; ++i)
      for (Index j = 0; j < 4; ++j)
        if (coarse(rng) > 0) s.push_back({{i, j}, static_cast<double>(coarse(rng))});
    std::shuffle(s.begin(), s.end(), rng);
    const std::size_t k = static_cast<std::size_t>(featacq::testing::uniform_index(1, 10, rng));
    std::vector<ScoredEntry> sorted = s;
    std::stable_sort(sorted.begin(), sorted.end(), [](const ScoredEntry& a, const ScoredEntry& b) {
      return a.score != b.score ? a.score > b.score : a.entry < b.entry;
    });
    const auto got = select_top_k(s, k);
    if (s.empty()) {
      EXPECT_FALSE(got.has_value());
      continue;
    }
    ASSERT_EQ(got->size(), std::min(k, s.size()));
    for (std::size_t i = 0; i < got->size(); ++i) EXPECT_EQ((*got)[i], sorted[i].entry);
  }
}

TEST(SelectCostRatio, UniformCostsMatchTopK) {
  Rng rng(5);
  std::vector<ScoredEntry> s;
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 3; ++j) s.push_back({{i, j}, std::uniform_real_distribution<double>(0, 1)(rng)});
  EXPECT_EQ(*select_cost_ratio(s, CostModel::uniform(3, 4.0), 4), *select_top_k(s, 4));
}

TEST(SelectCostRatio, RatioDecides) {
  CostModel costs{Vector(2), 1.0};
  costs.column_costs << 4.0, 1.0;
  EXPECT_EQ(*select_cost_ratio(scored({{0, 0, 4}, {0, 1, 3}}), costs, 1), (std::vector<Entry>{{0, 1}}));
}

TEST(SelectCostRatio, ScaleInvariant) {
  Rng rng(6);
  CostModel costs{Vector(4), 1.0};
  costs.column_costs << 1, 3, 7, 2;
  CostModel doubled = costs;
  doubled.column_costs *= 2.0;
  std::vector<ScoredEntry> s;
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 4; ++j) s.push_back({{i, j}, std::uniform_real_distribution<double>(0, 1)(rng)});
  EXPECT_EQ(*select_cost_ratio(s, costs, 5), *select_cost_ratio(s, doubled, 5));
  EXPECT_THROW(select_cost_ratio(scored({{0, 9, 1}}), costs, 1), DimensionError);
}

TEST(CostModel, Validation) {
  EXPECT_NO_THROW(CostModel::uniform(3).validate());
  CostModel c = CostModel::uniform(3);
  c.column_costs(1) = 0.0;
  EXPECT_THROW(c.validate(), ArgumentError);
  c = CostModel::uniform(3);
  c.budget_per_round = 0.0;
  EXPECT_THROW(c.validate(), ArgumentError);
}
