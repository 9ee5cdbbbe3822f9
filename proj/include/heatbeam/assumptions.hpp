#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "heatbeam/controller.hpp"

namespace heatbeam {

/// Log-spaced frequencies; the default covers [1e-4, 1e4] with 400 points.
Eigen::VectorXd log_frequency_grid(double lo = 1e-4, double hi = 1e4,
                                   int points = 400);

/// d + Re c^T (i s I - A)^{-1} b - Gamma at one real frequency s.
double positive_real_margin_at(const HybridFeedback& h, double s);

/// Outcome of the three hybrid assumptions: stability of A, Kalman
/// controllability/observability, and the positive-real margin.
struct AssumptionReport {
  bool hurwitz = false;
  double spectral_abscissa = 0;

  bool controllable = false;
  int controllability_rank = 0;
  bool observable = false;
  int observability_rank = 0;

  double margin_at_zero = 0;    // s = 0
  double margin_on_grid = 0;    // min over the supplied grid
  double margin_asymptotic = 0; // s -> infinity, equals d - Gamma
  double positive_real_margin = 0;  // min of the three above
  bool strict_at_finite_frequencies = false;
  bool nonstrict_at_infinity = false;
  bool gamma_zero = false;
  Eigen::VectorXd frequency_grid;

  /// Hurwitz, controllable, observable, and a positive margin at every
  /// finite sampled frequency. A zero asymptotic margin is accepted.
  bool accepted() const;
  std::vector<std::string> warnings() const;
  std::vector<std::string> failures() const;
};

AssumptionReport check_hybrid_assumptions(
    const HybridFeedback& h,
    const Eigen::Ref<const Eigen::VectorXd>& freq_grid = log_frequency_grid());

/// Kalman rank of [b, Ab, ..., A^{n-1} b].
int controllability_rank(const Eigen::Ref<const Eigen::MatrixXd>& A,
                         const Eigen::Ref<const Eigen::VectorXd>& b);

}  // namespace heatbeam
