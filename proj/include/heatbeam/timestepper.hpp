#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "heatbeam/controller.hpp"
#include "heatbeam/lyapunov_constants.hpp"
#include "heatbeam/mky.hpp"
#include "heatbeam/semidiscrete.hpp"

namespace heatbeam {

/// Implicit midpoint rule for E x' = S x:
///   (E - dt/2 S) x+ = (E + dt/2 S) x   on differential rows,
///   S x+ = 0                           on algebraic rows.
/// The factorization is done once and shared between copies.
class MidpointStepper {
 public:
  MidpointStepper(const LinearDae& dae, double dt, double tolerance = 1e-13);

  Eigen::VectorXd advance(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  double dt() const { return dt_; }

 private:
  using Factorization = Eigen::SparseLU<Eigen::SparseMatrix<double>>;

  double dt_;
  double tolerance_;
  Eigen::SparseMatrix<double> lhs_;
  Eigen::SparseMatrix<double> rhs_;
  std::shared_ptr<const Factorization> lu_;
};

/// One midpoint step from a consistent state.
DiscreteState step(const SemiDiscreteSystem& sys, const DiscreteState& s,
                   double dt);

/// Defaults to min(h1^2/(4 kappa), h2/(4 c_max)).
double default_time_step(const MaterialParamsd& p, const Grid& g);

struct LyapunovSetup {
  LyapunovConstantsd consts;
  double delta;
};

struct SimulationConfig {
  double dt = 1e-3;
  double T = 1;
  int record_every = 1;
  double solver_tolerance = 1e-13;
  std::shared_ptr<const SemiDiscreteSystem> system;
  DiscreteState initial;
  std::optional<MkyCertificate> certificate;
  std::optional<LyapunovSetup> lyapunov;
  bool keep_snapshots = false;
};

/// Sampled diagnostics of a run. hybrid_energy and lyapunov hold NaN when
/// not available.
struct Trajectory {
  ControllerSpec controller;
  double dt = 0;
  std::size_t steps = 0;

  std::vector<double> t;
  std::vector<double> energy;         // field energy E_h
  std::vector<double> hybrid_energy;  // E_h + q^T P q / 2
  std::vector<double> lyapunov;       // L_h
  std::vector<double> w1_end;
  std::vector<double> w2_end;
  std::vector<double> q_norm;
  std::vector<double> residual;  // largest |r_n| since the previous sample
  std::vector<DiscreteState> snapshots;

  bool has_hybrid_energy = false;
  bool has_lyapunov = false;

  // Per-step statistics over the whole run, relative to max(E, 1) where E is
  // the stored energy (hybrid when a certificate is present).
  double max_relative_residual = 0;
  double max_relative_increase = 0;
  bool monotone = true;

  std::size_t size() const { return t.size(); }
  /// Stored energy: hybrid when available, field energy otherwise.
  const std::vector<double>& stored_energy() const {
    return has_hybrid_energy ? hybrid_energy : energy;
  }
};

/// Relative tolerance for the per-step energy balance and monotonicity.
inline constexpr double kBalanceTolerance = 1e-10;

Trajectory simulate(const SimulationConfig& cfg);

/// r = E(x+) - E(x) - dt D((x + x+)/2), with the storage term when P is
/// supplied.
double dissipation_residual(const Eigen::Ref<const Eigen::VectorXd>& x,
                            const Eigen::Ref<const Eigen::VectorXd>& x_next,
                            const SemiDiscreteSystem& sys, double dt,
                            const Eigen::Ref<const Eigen::MatrixXd>& P =
                                Eigen::MatrixXd());

}  // namespace heatbeam
