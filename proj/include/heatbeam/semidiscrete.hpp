#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "heatbeam/controller.hpp"
#include "heatbeam/grid.hpp"
#include "heatbeam/material.hpp"

namespace heatbeam {

/// Node values of the coupled system.
///
/// The rod is indexed by distance from the joint: z[0] sits at the joint and
/// z[N+1] at the clamped far end. Beam fields u1 = v_x, u2 = p_x, w1 = v_t,
/// w2 = p_t are indexed left to right, node 0 at the joint.
struct DiscreteState {
  Eigen::VectorXd z;
  Eigen::VectorXd u1;
  Eigen::VectorXd u2;
  Eigen::VectorXd w1;
  Eigen::VectorXd w2;
  Eigen::VectorXd q;
  double t = 0;
};

DiscreteState zero_state(const Grid& g, int controller_order = 0);

/// Position of every unknown in the packed system vector.
///
/// The interface value z_0 (= w1_0) and the clamped value z_{N+1} (= 0) are
/// eliminated. Unknowns are interleaved node by node so that every equation
/// only touches neighbouring blocks:
///   node 0:      u1 u2 w1 w2
///   node 1..N:   z u1 u2 w1 w2
///   node N+1:    u1 u2 w1 w2
///   controller:  q_0 .. q_{n-1}
struct Layout {
  int N = 0;
  int n = 0;

  int dim() const { return 5 * N + 8 + n; }
  Eigen::Index z(int j) const { return offset(j); }  // 1 <= j <= N
  Eigen::Index u1(int j) const { return field_base(j); }
  Eigen::Index u2(int j) const { return field_base(j) + 1; }
  Eigen::Index w1(int j) const { return field_base(j) + 2; }
  Eigen::Index w2(int j) const { return field_base(j) + 3; }
  Eigen::Index q(int k) const { return 5 * N + 8 + k; }

 private:
  Eigen::Index offset(int j) const { return j == 0 ? 0 : 4 + 5 * (j - 1); }
  Eigen::Index field_base(int j) const {
    return offset(j) + ((j >= 1 && j <= N) ? 1 : 0);
  }
};

/// E x' = S x. Rows flagged algebraic have an empty E row.
struct LinearDae {
  Eigen::SparseMatrix<double> E;
  Eigen::SparseMatrix<double> S;
  std::vector<bool> algebraic;

  Eigen::Index dim() const { return E.rows(); }
};

/// Order-reduced finite-difference semi-discretization of the closed loop.
///
/// Differential rows: rod interior z_j' = kappa (z_{j-1} - 2 z_j + z_{j+1})
/// / h1^2; beam equations collocated at midpoints, (u1, u2)' averaged =
/// differences of (w1, w2) and M (w1, w2)' averaged = differences of
/// A (u1, u2); controller q' = A q + b w2_{N+1}. Algebraic rows: w2_0 = 0,
/// kappa (z_0 - z_1)/h1 = alpha u1_0 - gamma beta u2_0, and the two traction
/// rows at node N+1 set by the controller.
struct SemiDiscreteSystem {
  MaterialParamsd params;
  Grid grid;
  ControllerSpec controller;
  std::optional<HybridFeedback> hybrid;  // realization of Scalar/Hybrid
  Layout layout;
  LinearDae dae;
};

SemiDiscreteSystem assemble_semidiscrete(const MaterialParamsd& p,
                                         const Grid& g,
                                         const ControllerSpec& ctrl);

/// Rod alone with z = 0 at both ends: the N x N tridiagonal heat operator.
LinearDae assemble_rod_dirichlet(const MaterialParamsd& p, const Grid& g);

Eigen::VectorXd pack(const Layout& layout, const DiscreteState& s);
DiscreteState unpack(const Layout& layout, const Eigen::Ref<const Eigen::VectorXd>& x,
                     double t = 0);

/// Largest |row| over the algebraic rows, S_alg x.
double constraint_residual(const SemiDiscreteSystem& sys,
                           const Eigen::Ref<const Eigen::VectorXd>& x);

/// Closed-form initial data. The rod profile is a function of the distance
/// from the joint, on [0, l1]; beam profiles live on [0, l2].
struct InitialProfiles {
  std::function<double(double)> z = [](double) { return 0.0; };
  std::function<double(double)> u1 = [](double) { return 0.0; };
  std::function<double(double)> u2 = [](double) { return 0.0; };
  std::function<double(double)> w1 = [](double) { return 0.0; };
  std::function<double(double)> w2 = [](double) { return 0.0; };
};

/// Samples the profiles at the nodes and then overwrites boundary values so
/// that every algebraic row holds: z_{N+1} = 0, w2_0 = 0, z_0 = w1_0, u1_0
/// from the flux row, and (u1, u2)_{N+1} from the traction rows. The
/// controller state starts at zeta (or eta).
DiscreteState apply_initial_conditions(const InitialProfiles& profiles,
                                       const SemiDiscreteSystem& sys);

/// Field part of the discrete energy,
///   (h1/2) sum_{j=1}^{N+1} z_j^2
///   + (h2/2) sum_{j=0}^{N} [A u_{j+1/2} . u_{j+1/2} + M w_{j+1/2} . w_{j+1/2}].
double field_energy(const DiscreteState& s, const MaterialParamsd& p,
                    const Grid& g);

/// Field energy plus 1/2 q^T P q. P must be supplied exactly when the state
/// carries a controller state.
double discrete_energy(const DiscreteState& s, const MaterialParamsd& p,
                       const Grid& g,
                       const Eigen::Ref<const Eigen::MatrixXd>& P =
                           Eigen::MatrixXd());

/// Symmetric H with discrete_energy = x^T H x / 2 on packed vectors.
Eigen::SparseMatrix<double> energy_form(
    const SemiDiscreteSystem& sys,
    const Eigen::Ref<const Eigen::MatrixXd>& P = Eigen::MatrixXd());

/// Rate of change of discrete_energy along the dynamics at x:
///   -(kappa/h1) sum_{j=0}^{N} (z_{j+1} - z_j)^2 + g1 w1_{N+1} + g2 w2_{N+1}
///   + q^T P (A q + b w2_{N+1}),
/// the last term only when P is supplied.
double dissipation(const SemiDiscreteSystem& sys,
                   const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::MatrixXd>& P =
                       Eigen::MatrixXd());

/// x' at a consistent state: differential rows E x' = S x together with the
/// differentiated constraints S_alg x' = 0.
Eigen::VectorXd time_derivative(const SemiDiscreteSystem& sys,
                                const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace heatbeam
