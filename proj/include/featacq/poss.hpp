#pragma once

#include "featacq/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

namespace featacq {

using Rng = std::mt19937_64;

struct Candidate {
  Entry entry;
  double informativeness = 0.0;
  double cost = 1.0;
};

/// Choose a subset of candidates maximizing total informativeness while
/// keeping total cost within `budget`.
struct BiObjectiveProblem {
  std::vector<Candidate> candidates;
  double budget = 1.0;

  /// Throws ArgumentError on duplicate entries, non-positive costs, negative
  /// informativeness or a non-positive budget.
  void validate() const;
};

/// A candidate subset with its two objectives: j1 = -sum informativeness
/// (or +infinity for the empty subset and for subsets costing >= 2 budget),
/// j2 = sum cost.
struct Solution {
  std::vector<bool> bits;
  double j1 = std::numeric_limits<double>::infinity();
  double j2 = 0.0;
};

inline constexpr double kExcluded = std::numeric_limits<double>::infinity();

/// Throws DimensionError if bits.size() differs from the candidate count.
Solution evaluate(const BiObjectiveProblem& problem, const std::vector<bool>& bits);

/// a is no worse in both objectives and strictly better in one.
bool dominates(const Solution& a, const Solution& b);

/// Flips each bit independently with probability flip_prob.
std::vector<bool> mutate(const std::vector<bool>& bits, double flip_prob, Rng& rng);

/// Mutually nondominated set of solutions.
class SolutionArchive {
 public:
  /// Rejects s if an archived solution dominates it or matches it in both
  /// objectives. Otherwise inserts it and drops every archived solution it
  /// weakly dominates. Returns whether s was inserted.
  bool insert(Solution s);

  const std::vector<Solution>& solutions() const noexcept { return solutions_; }
  std::size_t size() const noexcept { return solutions_.size(); }

  /// Full pairwise scan.
  bool mutually_nondominated() const;

 private:
  std::vector<Solution> solutions_;
};

/// ceil(2 e b'^2 N) with b' = ceil(2 budget / min cost) and N candidates.
std::uint64_t default_iterations(const BiObjectiveProblem& problem);

/// Pareto optimization for subset selection. Starts from the empty subset,
/// then repeatedly mutates a uniformly chosen archived solution and offers
/// the offspring to the archive. Returns the entries of the archived
/// solution with the lowest j1 among those costing at most the budget (ties
/// to lower cost); empty if none is nonempty. flip_prob defaults to 1/N.
std::vector<Entry> poss_optimize(const BiObjectiveProblem& problem, std::uint64_t iterations, Rng& rng,
                                 std::optional<double> flip_prob = std::nullopt);

/// Largest total informativeness of any subset costing at most the budget,
/// by enumerating all 2^N subsets. Throws ArgumentError for N > 24.
double exhaustive_optimum(const BiObjectiveProblem& problem);

/// Total informativeness of the given entries.
double total_informativeness(const BiObjectiveProblem& problem, const std::vector<Entry>& selected);

}  // namespace featacq
