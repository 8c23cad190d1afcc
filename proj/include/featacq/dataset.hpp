#pragma once

#include "featacq/matrix.hpp"

#include <cstdint>
#include <string>

namespace featacq {

/// Feature rows with +-1 labels.
struct Dataset {
  Matrix features;
  Vector labels;
};

/// Where and how to read a delimited numeric dataset.
struct DatasetSpec {
  std::string path;                   ///< empty selects the synthetic generator
  std::string label_column = "last";  ///< 0-based index, "last", or header name
  std::string positive_label = "1";   ///< raw label mapped to +1, others to -1
  char delimiter = ',';
  bool has_header = false;
  bool standardize = true;  ///< z-score columns with observed training statistics

  friend bool operator==(const DatasetSpec&, const DatasetSpec&) = default;
};

/// Low-rank Gaussian features X = U V^T / sqrt(rank) (+ optional Gaussian
/// noise) with labels sign(X w*) for a Gaussian w*.
struct SyntheticSpec {
  Index rows = 100;
  Index cols = 20;
  Index rank = 3;
  double noise = 0.0;

  friend bool operator==(const SyntheticSpec&, const SyntheticSpec&) = default;
};

/// Throws ArgumentError on a non-positive shape or rank > min(rows, cols),
/// DegenerateLabelsError if every label comes out equal.
Dataset make_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace featacq
