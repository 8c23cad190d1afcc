#pragma once

#include "featacq/dataset.hpp"
#include "featacq/harness.hpp"

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace featacq {

/// Reads a delimited numeric file. Throws ParseError (with row and column)
/// on a malformed row or non-numeric feature cell, ArgumentError on a
/// missing file or bad label column, DegenerateLabelsError if the mapped
/// labels hold one class.
Dataset load_dataset(const DatasetSpec& spec);

/// Writes features with the label (+1 / -1) as the last column, no header.
void write_dataset(const std::filesystem::path& path, const Dataset& data, char delimiter = ',');

/// Comma-delimited grid, full round-trip precision.
void write_matrix(const std::filesystem::path& path, const Matrix& m);

inline const std::vector<std::string> kRecordColumns = {
    "round",    "cumulative_cost", "queried_entries", "recon_rel",
    "recon_msq", "train_objective", "test_accuracy",  "test_auc"};

/// One header line with kRecordColumns, then one row per round.
std::string format_records(const std::vector<RoundRecord>& records);
void write_records(const std::filesystem::path& path, const std::vector<RoundRecord>& records);

/// Writes replicate_NNN.csv per replicate and mean.csv into dir.
void write_experiment(const std::filesystem::path& dir, const ExperimentResult& result);

nlohmann::json plan_to_json(const ExperimentPlan& plan);
/// Missing keys keep their defaults. Throws ArgumentError on unknown keys or
/// wrongly typed values.
ExperimentPlan plan_from_json(const nlohmann::json& j);
ExperimentPlan load_plan(const std::filesystem::path& path);

/// Dataset named by the plan: the file, or the synthetic generator seeded
/// from plan.seed.
Dataset resolve_dataset(const ExperimentPlan& plan);

}  // namespace featacq
