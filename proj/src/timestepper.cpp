#include "heatbeam/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "heatbeam/analysis.hpp"
#include "heatbeam/errors.hpp"

namespace heatbeam {

namespace {

Eigen::SparseMatrix<double> select_rows(const LinearDae& dae, double e_scale,
                                        double s_scale, bool with_algebraic) {
  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> t;
  const auto add = [&](const Eigen::SparseMatrix<double>& m, double scale,
                       bool algebraic_rows) {
    if (scale == 0.0) return;
    for (int k = 0; k < m.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it)
        if (dae.algebraic[it.row()] == algebraic_rows)
          t.emplace_back(it.row(), it.col(), scale * it.value());
  };
  add(dae.E, e_scale, false);
  add(dae.S, s_scale, false);
  if (with_algebraic) add(dae.S, 1.0, true);
  Eigen::SparseMatrix<double> m(dae.dim(), dae.dim());
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

double quadratic(const Eigen::SparseMatrix<double>& H,
                 const Eigen::Ref<const Eigen::VectorXd>& x) {
  return 0.5 * x.dot(H * x);
}

}  // namespace

MidpointStepper::MidpointStepper(const LinearDae& dae, double dt,
                                 double tolerance)
    : dt_(dt), tolerance_(tolerance) {
  if (!(dt > 0)) throw InvalidRun("time step must be positive");
  lhs_ = select_rows(dae, 1.0, -0.5 * dt, true);
  rhs_ = select_rows(dae, 1.0, 0.5 * dt, false);
  auto lu = std::make_shared<Factorization>();
  lu->analyzePattern(lhs_);
  lu->factorize(lhs_);
  if (lu->info() != Eigen::Success) {
    throw SingularSolve("midpoint operator: " + lu->lastErrorMessage());
  }
  lu_ = std::move(lu);
}

Eigen::VectorXd MidpointStepper::advance(
    const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const Eigen::VectorXd b = rhs_ * x;
  Eigen::VectorXd next = lu_->solve(b);
  const Eigen::VectorXd r = b - lhs_ * next;
  if (r.lpNorm<Eigen::Infinity>() >
      tolerance_ * std::max(1.0, b.lpNorm<Eigen::Infinity>())) {
    next += lu_->solve(r);
  }
  return next;
}

DiscreteState step(const SemiDiscreteSystem& sys, const DiscreteState& s,
                   double dt) {
  const MidpointStepper stepper(sys.dae, dt);
  const Eigen::VectorXd x = pack(sys.layout, s);
  return unpack(sys.layout, stepper.advance(x), s.t + dt);
}

double default_time_step(const MaterialParamsd& p, const Grid& g) {
  return std::min(g.h1 * g.h1 / (4.0 * p.kappa),
                  g.h2 / (4.0 * max_wave_speed(p)));
}

double dissipation_residual(const Eigen::Ref<const Eigen::VectorXd>& x,
                            const Eigen::Ref<const Eigen::VectorXd>& x_next,
                            const SemiDiscreteSystem& sys, double dt,
                            const Eigen::Ref<const Eigen::MatrixXd>& P) {
  Eigen::MatrixXd storage = P;
  if (sys.layout.n > 0 && storage.size() == 0)
    storage = Eigen::MatrixXd::Zero(sys.layout.n, sys.layout.n);
  const auto H = energy_form(sys, storage);
  const Eigen::VectorXd mid = 0.5 * (x + x_next);
  return quadratic(H, x_next) - quadratic(H, x) -
         dt * dissipation(sys, mid, storage);
}

Trajectory simulate(const SimulationConfig& cfg) {
  if (!cfg.system) throw InvalidRun("no system to simulate");
  if (!(cfg.dt > 0)) throw InvalidRun("dt must be positive");
  if (!(cfg.T >= 0) || (cfg.T > 0 && cfg.T < cfg.dt)) {
    throw InvalidRun("T must be 0 or at least dt");
  }
  if (cfg.record_every < 1) throw InvalidRun("record_every must be >= 1");

  const SemiDiscreteSystem& sys = *cfg.system;
  const Layout& L = sys.layout;
  const MaterialParamsd& p = sys.params;
  const Grid& g = sys.grid;

  std::size_t steps = 0;
  double dt = cfg.dt;
  if (cfg.T > 0) {
    const double ratio = cfg.T / cfg.dt;
    steps = static_cast<std::size_t>(std::llround(ratio));
    if (std::abs(ratio - static_cast<double>(steps)) > 1e-9 * ratio) {
      steps = static_cast<std::size_t>(std::ceil(ratio));
    }
    dt = cfg.T / static_cast<double>(steps);
  }

  const Eigen::MatrixXd zero_storage = Eigen::MatrixXd::Zero(L.n, L.n);
  const Eigen::MatrixXd P = cfg.certificate ? cfg.certificate->P : zero_storage;
  if (P.rows() != L.n || P.cols() != L.n) {
    throw DimensionMismatch("certificate order does not match controller");
  }
  const auto H_field = energy_form(sys, zero_storage);
  const auto H_stored = cfg.certificate ? energy_form(sys, P) : H_field;

  Eigen::VectorXd x = pack(L, cfg.initial);
  const double scale = std::max(1.0, x.lpNorm<Eigen::Infinity>());
  if (constraint_residual(sys, x) > 1e-8 * scale) {
    throw ConstraintProjectionFailed(
        "initial state violates the boundary rows; use "
        "apply_initial_conditions");
  }

  Trajectory traj;
  traj.controller = sys.controller;
  traj.dt = dt;
  traj.steps = steps;
  traj.has_hybrid_energy = cfg.certificate.has_value();
  traj.has_lyapunov = cfg.lyapunov.has_value();
  const double nan = std::numeric_limits<double>::quiet_NaN();

  double t = cfg.initial.t;
  double pending_residual = 0;
  const auto record = [&](const Eigen::VectorXd& v) {
    const DiscreteState s = unpack(L, v, t);
    traj.t.push_back(t);
    traj.energy.push_back(quadratic(H_field, v));
    traj.hybrid_energy.push_back(cfg.certificate ? quadratic(H_stored, v) : nan);
    if (cfg.lyapunov) {
      const Eigen::MatrixXd storage =
          cfg.certificate ? cfg.certificate->P : Eigen::MatrixXd();
      traj.lyapunov.push_back(lyapunov_functional(s, p, g, cfg.lyapunov->consts,
                                                  cfg.lyapunov->delta, storage)
                                  .L);
    } else {
      traj.lyapunov.push_back(nan);
    }
    traj.w1_end.push_back(s.w1[g.N + 1]);
    traj.w2_end.push_back(s.w2[g.N + 1]);
    traj.q_norm.push_back(s.q.norm());
    traj.residual.push_back(pending_residual);
    if (cfg.keep_snapshots) traj.snapshots.push_back(s);
    pending_residual = 0;
  };

  record(x);
  if (steps == 0) return traj;

  const MidpointStepper stepper(sys.dae, dt, cfg.solver_tolerance);
  double stored = quadratic(H_stored, x);
  for (std::size_t n = 1; n <= steps; ++n) {
    const Eigen::VectorXd next = stepper.advance(x);
    const double stored_next = quadratic(H_stored, next);
    const Eigen::VectorXd mid = 0.5 * (x + next);
    const double r = stored_next - stored - dt * dissipation(sys, mid, P);
    const double ref = std::max(stored, 1.0);
    traj.max_relative_residual =
        std::max(traj.max_relative_residual, std::abs(r) / ref);
    const double increase = (stored_next - stored) / ref;
    traj.max_relative_increase = std::max(traj.max_relative_increase, increase);
    if (increase > kBalanceTolerance) traj.monotone = false;
    if (std::abs(r) > std::abs(pending_residual)) pending_residual = r;

    x = next;
    stored = stored_next;
    t = cfg.initial.t + dt * static_cast<double>(n);
    if (n % static_cast<std::size_t>(cfg.record_every) == 0 || n == steps) {
      record(x);
    }
  }
  return traj;
}

}  // namespace heatbeam
