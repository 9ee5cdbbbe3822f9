#pragma once

#include <vector>

#include "heatbeam/lyapunov_constants.hpp"
#include "heatbeam/material.hpp"

namespace heatbeam {

struct GainBox {
  double xi1_lo = 0.01;
  double xi1_hi = 10;
  double xi2_lo = 0.01;
  double xi2_hi = 10;
  int points = 41;  // grid points per coordinate
};

struct GainSample {
  double xi1;
  double xi2;
  double delta;      // min(1/(2M), 0.99 admissible)
  double sigma;
  double admissible; // gain-limited part of the delta bound
};

struct TuneResult {
  double xi1 = 0;
  double xi2 = 0;
  double sigma = 0;
  double delta = 0;
  double admissible = 0;
  double sigma_max = 0;      // 2 kappa / (l1^2 Mtilde)
  double delta_star = 0;     // 1/(2M)
  bool attainable = false;   // delta_star admissible at the optimum
  std::vector<GainSample> grid;  // row-major, xi1 outer
};

/// Rate and delta for one gain pair.
GainSample evaluate_gains(const LyapunovConstantsd& c,
                          const MaterialParamsd& p, double xi1, double xi2);

/// Maximizes sigma over the box. Since sigma grows with the gain-limited
/// delta bound min(mechanical, electrical), the search maximizes that bound:
/// a coordinate grid, evaluated by `threads` workers, followed by golden
/// section on each branch inside the winning cell. Grid ties go to smaller
/// xi1, then smaller xi2.
TuneResult tune_gains(const MaterialParamsd& p, const LyapunovConstantsd& c,
                      const GainBox& box, unsigned threads = 0);

}  // namespace heatbeam
