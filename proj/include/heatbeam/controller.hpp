#pragma once

#include <optional>
#include <string>
#include <variant>

#include <Eigen/Core>

namespace heatbeam {

/// Traction-free end: g1 = g2 = 0.
struct OpenLoop {};

/// g1 = -xi1 w1(l2), g2 = -xi2 w2(l2).
struct StaticFeedback {
  double xi1;
  double xi2;
};

/// Mechanical damping plus a scalar charge state:
///   g2 = -q,  q' = -q + xi2 w2(l2),  q(0) = eta.
struct ScalarDynamic {
  double xi1;
  double xi2;
  double eta;
};

/// Mechanical damping plus an n-dimensional electrical controller:
///   g2 = -c^T q - d w2(l2),  q' = A q + b w2(l2),  q(0) = zeta.
/// Gamma is the dissipation level claimed by the positive-real condition.
struct HybridFeedback {
  double xi1;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  double d;
  double Gamma;
  Eigen::VectorXd zeta;
};

using ControllerSpec =
    std::variant<OpenLoop, StaticFeedback, ScalarDynamic, HybridFeedback>;

enum class ControllerKind { OpenLoop, Static, Scalar, Hybrid };

ControllerKind kind_of(const ControllerSpec& ctrl);
std::string to_string(ControllerKind kind);

/// Dimension of the controller state (0 for OpenLoop and Static).
int controller_order(const ControllerSpec& ctrl);

/// Initial controller state (zeta, eta, or empty).
Eigen::VectorXd controller_initial_state(const ControllerSpec& ctrl);

/// Throws InvalidController when gains, signs, or dimensions are off.
void validate_controller(const ControllerSpec& ctrl);

struct BoundaryForce {
  double g1;
  double g2;
};

BoundaryForce boundary_force(const ControllerSpec& ctrl, double w1_end,
                             double w2_end,
                             const Eigen::Ref<const Eigen::VectorXd>& q);

/// q' for Scalar/Hybrid controllers; empty vector for the static laws.
Eigen::VectorXd controller_rhs(const ControllerSpec& ctrl,
                               const Eigen::Ref<const Eigen::VectorXd>& q,
                               double w2_end);

HybridFeedback scalar_to_hybrid(const ScalarDynamic& s);

/// Hybrid realization of a dynamic controller (Scalar is converted);
/// empty for OpenLoop and Static.
std::optional<HybridFeedback> as_hybrid(const ControllerSpec& ctrl);

/// Damping on the mechanical end, xi1 (0 for OpenLoop).
double mechanical_gain(const ControllerSpec& ctrl);

}  // namespace heatbeam
