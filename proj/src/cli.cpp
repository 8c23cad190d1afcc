#include "featacq/cli.hpp"

#include "featacq/classifier.hpp"
#include "featacq/completion.hpp"
#include "featacq/error.hpp"
#include "featacq/harness.hpp"
#include "featacq/io.hpp"
#include "featacq/poss.hpp"
#include "featacq/theory.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>

#include "CLI11.hpp"
#include "json.hpp"

namespace featacq {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CompleteArgs {
  DatasetSpec data;
  std::string delimiter = ",";
  bool no_standardize = false;
  double observed = 0.6;
  CompletionConfig cfg;
  std::uint64_t seed = 0;
  std::string out = "complete_out";
};

int run_complete(CompleteArgs& a) {
  if (a.delimiter.size() != 1) throw ArgumentError("--delimiter must be one character");
  a.data.delimiter = a.delimiter[0];
  a.data.standardize = !a.no_standardize;
  Dataset data = load_dataset(a.data);
  Rng mask_rng = stream_rng(a.seed, 0, 2);
  const Mask mask = init_mask(data.features.rows(), data.features.cols(), a.observed, mask_rng());
  if (a.data.standardize) {
    Matrix none;
    standardize_columns(data.features, none, mask);
  }
  const PartialMatrix obs(data.features, mask);
  const CompletionResult res = fit(obs, data.labels, a.cfg);

  const ReconstructionError err = reconstruction_errors(res.x_hat, data.features);
  const Vector scores = decision_values(res.model, res.x_hat);
  const json metrics = {
      {"rows", data.features.rows()},
      {"cols", data.features.cols()},
      {"observed_count", obs.observed_count()},
      {"recon_rel", err.relative},
      {"recon_msq", err.mean_sq},
      {"objective", res.objective_trace.back()},
      {"objective_trace", res.objective_trace},
      {"outer_rounds", res.objective_trace.size()},
      {"inner_iterations", res.inner_iterations},
      {"converged", res.converged},
      {"train_accuracy", accuracy(scores, data.labels)},
      {"train_auc", auc(scores, data.labels)},
  };
  fs::create_directories(a.out);
  write_matrix(fs::path(a.out) / "recovered.csv", res.x_hat);
  std::ofstream(fs::path(a.out) / "metrics.json") << metrics.dump(2) << '\n';
  std::cout << metrics.dump(2) << '\n';
  return 0;
}

struct SimulateArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> data;
  std::optional<std::string> label_col;
  std::optional<std::string> positive_label;
  std::optional<double> observed;
  std::optional<double> lambda1;
  std::optional<double> lambda2;
  std::optional<std::string> strategy;
  std::optional<std::size_t> batch;
  std::optional<double> budget;
  std::optional<std::size_t> rounds;
  std::optional<std::size_t> window;
  std::optional<std::size_t> replicates;
};

int run_simulate(const SimulateArgs& a) {
  ExperimentPlan plan = load_plan(a.config);
  if (a.seed) plan.seed = *a.seed;
  if (a.data) plan.dataset.path = *a.data;
  if (a.label_col) plan.dataset.label_column = *a.label_col;
  if (a.positive_label) plan.dataset.positive_label = *a.positive_label;
  if (a.observed) plan.initial_observed_rate = *a.observed;
  if (a.lambda1) plan.completion.lambda1 = *a.lambda1;
  if (a.lambda2) plan.completion.lambda2 = *a.lambda2;
  if (a.strategy) plan.strategy = parse_strategy(*a.strategy);
  if (a.batch) plan.batch_size = *a.batch;
  if (a.budget) plan.budget_per_round = *a.budget;
  if (a.rounds) plan.rounds = *a.rounds;
  if (a.window) plan.window = *a.window;
  if (a.replicates) plan.replicates = *a.replicates;
  plan.validate();

  const Dataset data = resolve_dataset(plan);
  const ExperimentResult result = run_experiment(data, plan);
  write_experiment(a.out, result);
  std::ofstream(fs::path(a.out) / "plan.json") << plan_to_json(plan).dump(2) << '\n';
  const RoundRecord& last = result.mean.back();
  std::cout << "replicates: " << result.replicates.size() << ", rounds: " << result.mean.size()
            << ", final mean accuracy: " << last.test_accuracy << ", final mean auc: " << last.test_auc
            << ", records in " << a.out << '\n';
  return 0;
}

struct BenchPossArgs {
  std::size_t pool = 10;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::uint64_t iterations = 0;
  std::string out;
};

int run_bench_poss(const BenchPossArgs& a) {
  if (a.pool < 1 || a.pool > 24) throw ArgumentError("--pool must be in [1, 24]");
  if (a.trials < 1) throw ArgumentError("--trials must be >= 1");
  std::string table = "trial,budget,poss_value,optimum,match\n";
  std::size_t matches = 0;
  for (std::size_t t = 0; t < a.trials; ++t) {
    Rng rng = stream_rng(a.seed, t, 6);
    std::uniform_real_distribution<double> info(0.0, 1.0);
    std::uniform_int_distribution<int> price(1, 10);
    BiObjectiveProblem problem;
    double total = 0.0;
    for (std::size_t i = 0; i < a.pool; ++i) {
      const double c = price(rng);
      problem.candidates.push_back({{static_cast<Index>(i), 0}, info(rng), c});
      total += c;
    }
    problem.budget = 0.5 * total;
    const std::uint64_t iterations = a.iterations > 0 ? a.iterations : default_iterations(problem);
    const double value = total_informativeness(problem, poss_optimize(problem, iterations, rng));
    const double optimum = exhaustive_optimum(problem);
    const bool match = std::abs(value - optimum) <= 1e-9 * std::max(1.0, optimum);
    matches += match ? 1 : 0;
    char line[160];
    std::snprintf(line, sizeof line, "%zu,%.12g,%.12g,%.12g,%d\n", t, problem.budget, value, optimum,
                  match ? 1 : 0);
    table += line;
  }
  if (!a.out.empty()) {
    const fs::path path(a.out);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream(path) << table;
  }
  const double rate = static_cast<double>(matches) / static_cast<double>(a.trials);
  std::cout << "agreement: " << matches << "/" << a.trials << " (rate " << rate << ")\n";
  return 0;
}

struct BoundArgs {
  SyntheticSpec synthetic;
  double observed = 0.6;
  double c0 = 1.0;
  CompletionConfig cfg;
  std::uint64_t seed = 0;
};

int run_bound(const BoundArgs& a) {
  const Dataset data = make_synthetic(a.synthetic, stream_rng(a.seed, 0, 0)());
  Rng mask_rng = stream_rng(a.seed, 0, 2);
  const Mask mask = init_mask(data.features.rows(), data.features.cols(), a.observed, mask_rng());
  const PartialMatrix obs(data.features, mask);
  const CompletionResult res = fit(obs, data.labels, a.cfg);
  const ReconstructionError err = reconstruction_errors(res.x_hat, data.features);

  BoundParams p;
  p.c0 = a.c0;
  p.r = static_cast<std::size_t>(a.synthetic.rank);
  p.n = static_cast<std::size_t>(data.features.rows());
  p.d = static_cast<std::size_t>(data.features.cols());
  p.omega_size = obs.observed_count();
  p.mu = coherence(data.features);
  p.beta = beta_for(data.features, p.r);
  const double bound = theorem1_bound(p);
  const json out = {
      {"n", p.n},        {"d", p.d},      {"r", p.r},
      {"omega", p.omega_size},           {"mu", p.mu},
      {"beta", p.beta},  {"c0", p.c0},    {"bound", bound},
      {"measured_msq", err.mean_sq},     {"within_bound", err.mean_sq <= bound},
  };
  std::cout << out.dump(2) << '\n';
  return 0;
}

struct Lemma3Args {
  std::size_t pairs = 1000;
  Index max_size = 20;
  std::uint64_t seed = 0;
};

int run_lemma3(const Lemma3Args& a) {
  if (a.max_size < 1) throw ArgumentError("--max-size must be >= 1");
  Rng rng = stream_rng(a.seed, 0, 7);
  std::uniform_int_distribution<Index> size(1, a.max_size);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::size_t holds = 0;
  double worst_ratio = 0.0;
  for (std::size_t k = 0; k < a.pairs; ++k) {
    const Index n = size(rng);
    const Index d = size(rng);
    Matrix lhs_a(n, d);
    Matrix lhs_b(n, d);
    for (Index i = 0; i < lhs_a.size(); ++i) lhs_a.data()[i] = normal(rng);
    for (Index i = 0; i < lhs_b.size(); ++i) lhs_b.data()[i] = normal(rng);
    const HadamardCheck c = lemma3_check(lhs_a, lhs_b);
    holds += c.holds ? 1 : 0;
    if (c.rhs > 0.0) worst_ratio = std::max(worst_ratio, c.lhs / c.rhs);
  }
  const json out = {{"pairs", a.pairs}, {"holds", holds}, {"max_lhs_over_rhs", worst_ratio}};
  std::cout << out.dump(2) << '\n';
  return holds == a.pairs ? 0 : 2;
}

void add_completion_flags(CLI::App* cmd, CompletionConfig& cfg) {
  cmd->add_option("--lambda1", cfg.lambda1, "trace-norm weight")->capture_default_str();
  cmd->add_option("--lambda2", cfg.lambda2, "supervised-loss weight")->capture_default_str();
  cmd->add_option("--ridge", cfg.ridge, "classifier ridge penalty")->capture_default_str();
  cmd->add_option("--max-outer", cfg.max_outer, "alternation rounds")->capture_default_str();
  cmd->add_option("--max-inner", cfg.max_inner, "APG iterations per round")->capture_default_str();
  cmd->add_option("--tol", cfg.tol, "relative objective change to stop")->capture_default_str();
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Supervised matrix completion with active feature acquisition"};
  app.require_subcommand(1);

  CompleteArgs complete;
  auto* c = app.add_subcommand("complete", "complete a partially observed dataset once");
  c->add_option("--data", complete.data.path, "delimited numeric dataset")->required();
  c->add_option("--label-col", complete.data.label_column, "label column: index, 'last' or header name")
      ->capture_default_str();
  c->add_option("--positive-label", complete.data.positive_label, "raw label mapped to +1")
      ->capture_default_str();
  c->add_option("--delimiter", complete.delimiter, "field delimiter")->capture_default_str();
  c->add_flag("--header", complete.data.has_header, "first line is a header");
  c->add_flag("--no-standardize", complete.no_standardize, "keep raw feature scales");
  c->add_option("--observed", complete.observed, "fraction of entries observed")->capture_default_str();
  c->add_option("--seed", complete.seed, "random seed")->capture_default_str();
  c->add_option("--out", complete.out, "output directory")->capture_default_str();
  add_completion_flags(c, complete.cfg);

  SimulateArgs simulate;
  auto* s = app.add_subcommand("simulate", "run the closed-loop acquisition experiment");
  s->add_option("--config", simulate.config, "JSON experiment plan")->required();
  s->add_option("--out", simulate.out, "output directory for record files")->required();
  s->add_option("--seed", simulate.seed, "override plan seed");
  s->add_option("--data", simulate.data, "override dataset path");
  s->add_option("--label-col", simulate.label_col, "override label column");
  s->add_option("--positive-label", simulate.positive_label, "override positive label");
  s->add_option("--observed", simulate.observed, "override initial observed rate");
  s->add_option("--lambda1", simulate.lambda1, "override lambda1");
  s->add_option("--lambda2", simulate.lambda2, "override lambda2");
  s->add_option("--strategy", simulate.strategy, "variance | cost_ratio | poss | random");
  s->add_option("--batch", simulate.batch, "entries per round");
  s->add_option("--budget", simulate.budget, "cost budget per round (poss)");
  s->add_option("--rounds", simulate.rounds, "acquisition rounds");
  s->add_option("--window", simulate.window, "variance window, 0 = all snapshots");
  s->add_option("--replicates", simulate.replicates, "random partitions");

  BenchPossArgs bench;
  auto* b = app.add_subcommand("bench-poss", "POSS against exhaustive search on random pools");
  b->add_option("--pool", bench.pool, "candidates per pool")->capture_default_str();
  b->add_option("--trials", bench.trials, "number of pools")->capture_default_str();
  b->add_option("--seed", bench.seed, "random seed")->capture_default_str();
  b->add_option("--iterations", bench.iterations, "POSS iterations, 0 = default budget")
      ->capture_default_str();
  b->add_option("--out", bench.out, "agreement table CSV");

  BoundArgs bound;
  auto* bd = app.add_subcommand("bound", "error bound against measured error on a synthetic instance");
  bd->add_option("--rows", bound.synthetic.rows)->capture_default_str();
  bd->add_option("--cols", bound.synthetic.cols)->capture_default_str();
  bd->add_option("--rank", bound.synthetic.rank)->capture_default_str();
  bd->add_option("--observed", bound.observed)->capture_default_str();
  bd->add_option("--c0", bound.c0, "absolute constant of the bound")->capture_default_str();
  bd->add_option("--seed", bound.seed)->capture_default_str();
  add_completion_flags(bd, bound.cfg);

  Lemma3Args lemma;
  auto* l = app.add_subcommand("lemma3", "Monte-Carlo sweep of the Hadamard trace-norm inequality");
  l->add_option("--pairs", lemma.pairs)->capture_default_str();
  l->add_option("--max-size", lemma.max_size)->capture_default_str();
  l->add_option("--seed", lemma.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*c) return run_complete(complete);
    if (*s) return run_simulate(simulate);
    if (*b) return run_bench_poss(bench);
    if (*bd) return run_bound(bound);
    if (*l) return run_lemma3(lemma);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

int cli_main(const std::vector<std::string>& args) {
  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("featacq");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : storage) argv.push_back(a.data());
  argv.push_back(nullptr);
  return cli_main(static_cast<int>(storage.size()), argv.data());
}

}  // namespace featacq
