#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "heatbeam/controller.hpp"
#include "heatbeam/grid.hpp"
#include "heatbeam/lyapunov_constants.hpp"
#include "heatbeam/material.hpp"
#include "heatbeam/mky.hpp"
#include "heatbeam/semidiscrete.hpp"
#include "heatbeam/timestepper.hpp"

namespace heatbeam {

struct LyapunovValue {
  double L = 0;
  double F1 = 0;
  double F2 = 0;
  double F3 = 0;
  double E = 0;
};

/// L = E + delta (F1 + F2 + F3) with the midpoint sums of field_energy:
///   F1 = a1 sum h2 x_{j+1/2} (rho u1 w1 + mu u2 w2)_{j+1/2}
///   F2 = b1 sum h2 (l2 - x_{j+1/2}) [alpha u1^2 + beta u2^2 - gamma beta u1 u2
///                                    + rho w1^2 + mu w2^2]_{j+1/2}
///   F3 = c1 sum_{j=1}^{N+1} h1 z_j^2.
/// E includes q^T P q / 2 when P is given. delta must lie in [0, 1/M).
LyapunovValue lyapunov_functional(const DiscreteState& s,
                                  const MaterialParamsd& p, const Grid& g,
                                  const LyapunovConstantsd& consts,
                                  double delta,
                                  const Eigen::Ref<const Eigen::MatrixXd>& P =
                                      Eigen::MatrixXd());

struct SandwichResult {
  bool ok = false;
  double lower_margin = 0;  // L - (1 - M delta) E
  double upper_margin = 0;  // (1 + M delta) E - L
};

/// (1 - M delta) E <= L <= (1 + M delta) E, up to 1e-12 relative rounding.
SandwichResult sandwich_check(const DiscreteState& s, const MaterialParamsd& p,
                              const Grid& g, const LyapunovConstantsd& consts,
                              double delta);

struct DecayFit {
  double sigma = 0;      // minus the slope of log E
  double intercept = 0;  // log E at t = 0 on the fitted line
  double residual = 0;   // rms of the log-linear fit
  double t_start = 0;
  double t_end = 0;
  std::size_t samples = 0;
};

inline constexpr std::size_t kMinFitSamples = 10;

/// Least-squares slope of log E against t over samples with
/// t_start <= t <= t_end.
DecayFit fit_decay_rate(const std::vector<double>& times,
                        const std::vector<double>& energies, double t_start,
                        double t_end);
/// Default window [0.2 T, T].
DecayFit fit_decay_rate(const std::vector<double>& times,
                        const std::vector<double>& energies);

struct DecayReport {
  bool applicable = false;
  std::string note;
  double sigma_theory = 0;
  double prefactor = 0;
  double delta = 0;
  std::optional<DecayFit> fit;
  bool envelope_ok = false;
  /// min over samples of log(envelope) - log(E).
  double envelope_margin = 0;
  std::size_t violations = 0;
  /// sigma_measured >= sigma_theory - 2 %.
  bool rate_ok = false;
};

inline constexpr double kEnvelopeSlack = 1e-8;
inline constexpr double kRateShortfall = 0.02;

/// Exponential envelope E(t) <= prefactor E(0) exp(-sigma t) for a static
/// run. Throws DeltaOutOfRange if delta is not admissible for the gains.
/// Other controllers give a report with applicable = false.
DecayReport verify_envelope(const Trajectory& traj,
                            const LyapunovConstantsd& consts, double delta,
                            const MaterialParamsd& p, double fit_start = 0.2);

struct HybridDeltaBound {
  /// 1/M, the mechanical gain branch, the electrical (Gamma) branch, and the
  /// storage branch, each already divided by a1 l2.
  std::array<double, 4> branches{};
  double bound = 0;  // min of the branches
  double lambda_min_Q = 0;
  double lambda_max_P = 0;
  std::vector<std::string> warnings;

  bool certified() const { return bound > 0; }
};

HybridDeltaBound admissible_delta_hybrid(const LyapunovConstantsd& consts,
                                         const MaterialParamsd& p,
                                         const HybridFeedback& h,
                                         const std::optional<MkyCertificate>& cert);

/// Envelope on the hybrid energy; applicable only when the bound certifies a
/// positive delta and delta lies below it.
DecayReport verify_envelope(const Trajectory& traj,
                            const LyapunovConstantsd& consts, double delta,
                            const MaterialParamsd& p,
                            const HybridDeltaBound& bound,
                            double fit_start = 0.2);

/// discrete_energy with the certificate's storage matrix.
double hybrid_energy(const DiscreteState& s, const MaterialParamsd& p,
                     const Grid& g, const std::optional<MkyCertificate>& cert);

}  // namespace heatbeam
