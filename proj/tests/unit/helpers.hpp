// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <random>

#include "lnmusic/types.hpp"

namespace lnmusic::test {

inline CVector random_cvector(Eigen::Index n, std::mt19937_64 &rng, double scale = 1.0)
{
  std::normal_distribution<double> g(0.0, scale);
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) { v(i) = {g(rng), g(rng)}; }
  return v;
}

inline CMatrix random_unit_modulus(Eigen::Index rows, Eigen::Index cols, std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  CMatrix g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) { g(i, j) = std::polar(1.0, u(rng)); }
  }
  return g;
}

inline double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

} // namespace lnmusic::test
