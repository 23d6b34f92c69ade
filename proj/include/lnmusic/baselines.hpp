// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "lnmusic/types.hpp"

namespace lnmusic {

/// Compressed-sensing dictionary over an angle grid: column p = G a(angle_p) / scale_p.
struct GridDictionary {
  std::vector<double> angles;
  CMatrix D;
  RVector scale;

  static GridDictionary build(const CMatrix &G, const std::vector<double> &angles, double varphi_deg, double d);
};

struct OmpResult {
  std::vector<double> angles; // ascending
  std::vector<Eigen::Index> support; // selection order
  std::vector<double> residual_norms; // after each selection, starting with ||y||
  bool degenerate = false; // y was (numerically) zero
};

OmpResult omp(const CVector &y, const GridDictionary &dict, int N);

/// min sum_k (|r_k|^2 + delta^2)^(p/2) + rho ||z||_1 with r = y - G z, by proximal gradient
/// with backtracking.
struct LpAdmConfig {
  double p = 0.7;
  double rho = 1e-3;
  double delta = 1e-6;
  int max_iter = 200;
  double step0 = 1.0;
  double backtrack = 0.5;
  double step_growth = 2.0;

  void validate() const;
};

struct LpAdmResult {
  CVector z;
  std::vector<double> objective; // value at z^0, z^1, ...
};

double lp_adm_objective(const CVector &y, const CMatrix &G, const CVector &z, const LpAdmConfig &cfg);

LpAdmResult lp_adm(const CVector &y, const CMatrix &G, const LpAdmConfig &cfg);

} // namespace lnmusic
