#include "featacq/poss.hpp"

#include "featacq/error.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <set>

namespace featacq {

void BiObjectiveProblem::validate() const {
  if (!(budget > 0.0)) throw ArgumentError("poss: budget must be positive");
  std::set<Entry> seen;
  for (const Candidate& c : candidates) {
    if (!(c.cost > 0.0) || !std::isfinite(c.cost)) throw ArgumentError("poss: costs must be positive");
    if (!(c.informativeness >= 0.0) || !std::isfinite(c.informativeness)) {
      throw ArgumentError("poss: informativeness must be finite and >= 0");
    }
    if (!seen.insert(c.entry).second) throw ArgumentError("poss: duplicate candidate");
  }
}

Solution evaluate(const BiObjectiveProblem& problem, const std::vector<bool>& bits) {
  if (bits.size() != problem.candidates.size()) {
    throw DimensionError("poss evaluate: bit count differs from candidate count");
  }
  Solution s;
  s.bits = bits;
  double gain = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (!bits[i]) continue;
    any = true;
    s.j2 += problem.candidates[i].cost;
    gain += problem.candidates[i].informativeness;
  }
  s.j1 = (!any || s.j2 >= 2.0 * problem.budget) ? kExcluded : -gain;
  return s;
}

bool dominates(const Solution& a, const Solution& b) {
  return a.j1 <= b.j1 && a.j2 <= b.j2 && (a.j1 < b.j1 || a.j2 < b.j2);
}

std::vector<bool> mutate(const std::vector<bool>& bits, double flip_prob, Rng& rng) {
  std::bernoulli_distribution flip(flip_prob);
  std::vector<bool> out = bits;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (flip(rng)) out[i] = !out[i];
  }
  return out;
}

bool SolutionArchive::insert(Solution s) {
  const bool rejected = std::any_of(solutions_.begin(), solutions_.end(), [&](const Solution& a) {
    return dominates(a, s) || (a.j1 == s.j1 && a.j2 == s.j2);
  });
  if (rejected) return false;
  std::erase_if(solutions_, [&](const Solution& a) { return s.j1 <= a.j1 && s.j2 <= a.j2; });
  solutions_.push_back(std::move(s));
  assert(mutually_nondominated());
  return true;
}

bool SolutionArchive::mutually_nondominated() const {
  for (std::size_t i = 0; i < solutions_.size(); ++i) {
    for (std::size_t j = 0; j < solutions_.size(); ++j) {
      if (i != j && dominates(solutions_[i], solutions_[j])) return false;
    }
  }
  return true;
}

std::uint64_t default_iterations(const BiObjectiveProblem& problem) {
  if (problem.candidates.empty()) return 1;
  double min_cost = problem.candidates.front().cost;
  for (const Candidate& c : problem.candidates) min_cost = std::min(min_cost, c.cost);
  const double size_bound = std::ceil(2.0 * problem.budget / min_cost);
  const double n = static_cast<double>(problem.candidates.size());
  return static_cast<std::uint64_t>(std::ceil(2.0 * std::numbers::e * size_bound * size_bound * n));
}

std::vector<Entry> poss_optimize(const BiObjectiveProblem& problem, std::uint64_t iterations, Rng& rng,
                                 std::optional<double> flip_prob) {
  if (iterations < 1) throw ArgumentError("poss: iterations must be >= 1");
  problem.validate();
  const std::size_t n = problem.candidates.size();
  if (n == 0) return {};
  const double p = flip_prob.value_or(1.0 / static_cast<double>(n));
  if (!(p > 0.0 && p <= 1.0)) throw ArgumentError("poss: flip_prob must be in (0, 1]");

  SolutionArchive archive;
  archive.insert(evaluate(problem, std::vector<bool>(n, false)));
  for (std::uint64_t t = 0; t < iterations; ++t) {
    std::uniform_int_distribution<std::size_t> pick(0, archive.size() - 1);
    const Solution& parent = archive.solutions()[pick(rng)];
    archive.insert(evaluate(problem, mutate(parent.bits, p, rng)));
  }

  const Solution* best = nullptr;
  for (const Solution& s : archive.solutions()) {
    if (s.j1 == kExcluded || s.j2 > problem.budget) continue;
    if (best == nullptr || s.j1 < best->j1 || (s.j1 == best->j1 && s.j2 < best->j2)) best = &s;
  }
  std::vector<Entry> out;
  if (best == nullptr) return out;
  for (std::size_t i = 0; i < n; ++i) {
    if (best->bits[i]) out.push_back(problem.candidates[i].entry);
  }
  return out;
}

double exhaustive_optimum(const BiObjectiveProblem& problem) {
  problem.validate();
  const std::size_t n = problem.candidates.size();
  if (n > 24) throw ArgumentError("exhaustive_optimum: at most 24 candidates");
  double best = 0.0;
  for (std::uint64_t subset = 1; subset < (std::uint64_t{1} << n); ++subset) {
    double gain = 0.0;
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if ((subset >> i) & 1U) {
        gain += problem.candidates[i].informativeness;
        cost += problem.candidates[i].cost;
      }
    }
    if (cost <= problem.budget) best = std::max(best, gain);
  }
  return best;
}

double total_informativeness(const BiObjectiveProblem& problem, const std::vector<Entry>& selected) {
  const std::set<Entry> chosen(selected.begin(), selected.end());
  double gain = 0.0;
  for (const Candidate& c : problem.candidates) {
    if (chosen.contains(c.entry)) gain += c.informativeness;
  }
  return gain;
}

}  // namespace featacq
