#pragma once

#include "featacq/matrix.hpp"
#include "featacq/poss.hpp"

#include <random>

namespace featacq::testing {

inline Matrix gaussian(Index n, Index d, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(n, d);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return m;
}

inline Matrix low_rank(Index n, Index d, Index r, Rng& rng) {
  return gaussian(n, r, rng) * gaussian(d, r, rng).transpose();
}

inline Mask bernoulli_mask(Index n, Index d, double rate, Rng& rng) {
  std::bernoulli_distribution keep(rate);
  Mask m(n, d);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = keep(rng);
  return m;
}

// Random +-1 labels holding both classes whenever n >= 2.
inline Vector two_class_labels(Index n, Rng& rng) {
  std::bernoulli_distribution coin(0.5);
  Vector y(n);
  for (Index i = 0; i < n; ++i) y(i) = coin(rng) ? 1.0 : -1.0;
  if (n >= 2) {
    y(0) = 1.0;
    y(1) = -1.0;
  }
  return y;
}

inline Index uniform_index(Index lo, Index hi, Rng& rng) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

}  // namespace featacq::testing
