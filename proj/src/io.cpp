#include "featacq/io.hpp"

#include "featacq/error.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace featacq {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> parse_number(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string format_real(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::size_t resolve_label_column(const DatasetSpec& spec, const std::vector<std::string>& header,
                                 std::size_t width) {
  const std::string& key = spec.label_column;
  if (key == "last") return width - 1;
  std::size_t index = 0;
  const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), index);
  if (ec == std::errc() && ptr == key.data() + key.size()) {
    if (index >= width) throw ArgumentError("label column " + key + " out of range");
    return index;
  }
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == key) return c;
  }
  throw ArgumentError("label column '" + key + "' not found");
}

bool label_matches(std::string_view raw, std::string_view positive) {
  if (raw == positive) return true;
  const auto a = parse_number(raw);
  const auto b = parse_number(positive);
  return a && b && *a == *b;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write " + path.string());
  out << text;
  if (!out) throw ArgumentError("failed writing " + path.string());
}

template <typename T>
void read_key(const nlohmann::json& j, const char* key, T& field) {
  if (!j.contains(key)) return;
  try {
    field = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

Dataset load_dataset(const DatasetSpec& spec) {
  std::ifstream in(spec.path);
  if (!in) throw ArgumentError("cannot open dataset " + spec.path);

  std::vector<std::string> header;
  std::vector<std::vector<double>> features;
  std::vector<double> labels;
  std::size_t width = 0;
  std::size_t label_col = 0;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = spec.has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line, spec.delimiter);
    if (header_pending) {
      for (auto c : cells) header.emplace_back(c);
      header_pending = false;
      continue;
    }
    if (width == 0) {
      width = cells.size();
      if (width < 3) throw ParseError("line " + std::to_string(line_no) + ": need at least 2 feature columns");
      label_col = resolve_label_column(spec, header, width);
    }
    if (cells.size() != width) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                       " columns, found " + std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(width - 1);
    for (std::size_t c = 0; c < width; ++c) {
      if (c == label_col) continue;
      const auto v = parse_number(cells[c]);
      if (!v) {
        throw ParseError("line " + std::to_string(line_no) + ", column " + std::to_string(c + 1) + ": '" +
                         std::string(cells[c]) + "' is not numeric");
      }
      row.push_back(*v);
    }
    features.push_back(std::move(row));
    labels.push_back(label_matches(cells[label_col], trim(spec.positive_label)) ? 1.0 : -1.0);
  }
  if (features.empty()) throw ParseError("dataset " + spec.path + " has no rows");

  Dataset out;
  out.features.resize(static_cast<Index>(features.size()), static_cast<Index>(width - 1));
  out.labels.resize(static_cast<Index>(labels.size()));
  for (std::size_t i = 0; i < features.size(); ++i) {
    for (std::size_t c = 0; c + 1 < width; ++c) {
      out.features(static_cast<Index>(i), static_cast<Index>(c)) = features[i][c];
    }
    out.labels(static_cast<Index>(i)) = labels[i];
  }
  const Index positives = (out.labels.array() > 0.0).count();
  if (positives == 0 || positives == out.labels.size()) {
    throw DegenerateLabelsError("dataset " + spec.path + ": labels contain a single class");
  }
  return out;
}

void write_dataset(const std::filesystem::path& path, const Dataset& data, char delimiter) {
  std::string text;
  for (Index i = 0; i < data.features.rows(); ++i) {
    for (Index j = 0; j < data.features.cols(); ++j) {
      text += format_real(data.features(i, j), 17);
      text += delimiter;
    }
    text += data.labels(i) > 0.0 ? "1" : "-1";
    text += '\n';
  }
  write_text(path, text);
}

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
  std::string text;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) text += ',';
      text += format_real(m(i, j), 17);
    }
    text += '\n';
  }
  write_text(path, text);
}

std::string format_records(const std::vector<RoundRecord>& records) {
  std::string text;
  for (std::size_t c = 0; c < kRecordColumns.size(); ++c) {
    if (c > 0) text += ',';
    text += kRecordColumns[c];
  }
  text += '\n';
  for (const RoundRecord& r : records) {
    text += std::to_string(r.round);
    for (double v : {r.cumulative_cost, r.queried_entries, r.recon_rel, r.recon_msq, r.train_objective,
                     r.test_accuracy, r.test_auc}) {
      text += ',';
      text += format_real(v, 12);
    }
    text += '\n';
  }
  return text;
}

void write_records(const std::filesystem::path& path, const std::vector<RoundRecord>& records) {
  write_text(path, format_records(records));
}

void write_experiment(const std::filesystem::path& dir, const ExperimentResult& result) {
  std::filesystem::create_directories(dir);
  for (std::size_t r = 0; r < result.replicates.size(); ++r) {
    char name[32];
    std::snprintf(name, sizeof name, "replicate_%03zu.csv", r);
    write_records(dir / name, result.replicates[r].records);
  }
  write_records(dir / "mean.csv", result.mean);
}

nlohmann::json plan_to_json(const ExperimentPlan& p) {
  const CompletionConfig& c = p.completion;
  return {
      {"data", p.dataset.path},
      {"label_col", p.dataset.label_column},
      {"positive_label", p.dataset.positive_label},
      {"delimiter", std::string(1, p.dataset.delimiter)},
      {"has_header", p.dataset.has_header},
      {"standardize", p.dataset.standardize},
      {"synthetic_rows", p.synthetic.rows},
      {"synthetic_cols", p.synthetic.cols},
      {"synthetic_rank", p.synthetic.rank},
      {"synthetic_noise", p.synthetic.noise},
      {"train_fraction", p.train_fraction},
      {"observed", p.initial_observed_rate},
      {"strategy", to_string(p.strategy)},
      {"batch", p.batch_size},
      {"budget", p.budget_per_round},
      {"rounds", p.rounds},
      {"window", p.window},
      {"seed", p.seed},
      {"replicates", p.replicates},
      {"random_costs", p.random_costs},
      {"costs", p.costs},
      {"poss_pool", p.poss_pool},
      {"poss_iterations", p.poss_iterations},
      {"lambda1", c.lambda1},
      {"lambda2", c.lambda2},
      {"l_init", c.l_init},
      {"gamma", c.gamma},
      {"theta0", c.theta0},
      {"max_outer", c.max_outer},
      {"max_inner", c.max_inner},
      {"tol", c.tol},
      {"ridge", c.ridge},
  };
}

ExperimentPlan plan_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ArgumentError("config must be a JSON object");
  const nlohmann::json known = plan_to_json(ExperimentPlan{});
  for (const auto& item : j.items()) {
    if (!known.contains(item.key())) throw ArgumentError("unknown config key '" + item.key() + "'");
  }
  ExperimentPlan p;
  CompletionConfig& c = p.completion;
  read_key(j, "data", p.dataset.path);
  read_key(j, "label_col", p.dataset.label_column);
  read_key(j, "positive_label", p.dataset.positive_label);
  std::string delim(1, p.dataset.delimiter);
  read_key(j, "delimiter", delim);
  if (delim.size() != 1) throw ArgumentError("config key 'delimiter' must be one character");
  p.dataset.delimiter = delim[0];
  read_key(j, "has_header", p.dataset.has_header);
  read_key(j, "standardize", p.dataset.standardize);
  read_key(j, "synthetic_rows", p.synthetic.rows);
  read_key(j, "synthetic_cols", p.synthetic.cols);
  read_key(j, "synthetic_rank", p.synthetic.rank);
  read_key(j, "synthetic_noise", p.synthetic.noise);
  read_key(j, "train_fraction", p.train_fraction);
  read_key(j, "observed", p.initial_observed_rate);
  std::string strategy = to_string(p.strategy);
  read_key(j, "strategy", strategy);
  p.strategy = parse_strategy(strategy);
  read_key(j, "batch", p.batch_size);
  read_key(j, "budget", p.budget_per_round);
  read_key(j, "rounds", p.rounds);
  read_key(j, "window", p.window);
  read_key(j, "seed", p.seed);
  read_key(j, "replicates", p.replicates);
  read_key(j, "random_costs", p.random_costs);
  read_key(j, "costs", p.costs);
  read_key(j, "poss_pool", p.poss_pool);
  read_key(j, "poss_iterations", p.poss_iterations);
  read_key(j, "lambda1", c.lambda1);
  read_key(j, "lambda2", c.lambda2);
  read_key(j, "l_init", c.l_init);
  read_key(j, "gamma", c.gamma);
  read_key(j, "theta0", c.theta0);
  read_key(j, "max_outer", c.max_outer);
  read_key(j, "max_inner", c.max_inner);
  read_key(j, "tol", c.tol);
  read_key(j, "ridge", c.ridge);
  p.validate();
  return p;
}

ExperimentPlan load_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ArgumentError("config " + path.string() + ": " + e.what());
  }
  return plan_from_json(j);
}

Dataset resolve_dataset(const ExperimentPlan& plan) {
  if (!plan.dataset.path.empty()) return load_dataset(plan.dataset);
  return make_synthetic(plan.synthetic, stream_rng(plan.seed, 0, 0)());
}

}  // namespace featacq
