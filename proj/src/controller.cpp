#include "heatbeam/controller.hpp"

#include <cmath>

#include "heatbeam/errors.hpp"

namespace heatbeam {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_dim(const Eigen::Ref<const Eigen::VectorXd>& q, int n) {
  if (q.size() != n) {
    throw DimensionMismatch("controller state has dimension " +
                            std::to_string(q.size()) + ", expected " +
                            std::to_string(n));
  }
}
}  // namespace

ControllerKind kind_of(const ControllerSpec& ctrl) {
  return std::visit(
      overloaded{[](const OpenLoop&) { return ControllerKind::OpenLoop; },
                 [](const StaticFeedback&) { return ControllerKind::Static; },
                 [](const ScalarDynamic&) { return ControllerKind::Scalar; },
                 [](const HybridFeedback&) { return ControllerKind::Hybrid; }},
      ctrl);
}

std::string to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::OpenLoop:
      return "open-loop";
    case ControllerKind::Static:
      return "static";
    case ControllerKind::Scalar:
      return "scalar";
    case ControllerKind::Hybrid:
      return "hybrid";
  }
  return "?";
}

int controller_order(const ControllerSpec& ctrl) {
  return std::visit(
      overloaded{[](const OpenLoop&) { return 0; },
                 [](const StaticFeedback&) { return 0; },
                 [](const ScalarDynamic&) { return 1; },
                 [](const HybridFeedback& h) {
                   return static_cast<int>(h.A.rows());
                 }},
      ctrl);
}

Eigen::VectorXd controller_initial_state(const ControllerSpec& ctrl) {
  return std::visit(
      overloaded{[](const OpenLoop&) { return Eigen::VectorXd(); },
                 [](const StaticFeedback&) { return Eigen::VectorXd(); },
                 [](const ScalarDynamic& s) {
                   return Eigen::VectorXd::Constant(1, s.eta).eval();
                 },
                 [](const HybridFeedback& h) { return h.zeta; }},
      ctrl);
}

void validate_controller(const ControllerSpec& ctrl) {
  std::visit(
      overloaded{
          [](const OpenLoop&) {},
          [](const StaticFeedback& s) {
            if (!(s.xi1 > 0) || !(s.xi2 > 0))
              throw InvalidController("static gains xi1, xi2 must be > 0");
          },
          [](const ScalarDynamic& s) {
            if (!(s.xi1 > 0) || !(s.xi2 > 0))
              throw InvalidController("scalar controller needs xi1, xi2 > 0");
            if (!std::isfinite(s.eta))
              throw InvalidController("eta must be finite");
          },
          [](const HybridFeedback& h) {
            const auto n = h.A.rows();
            if (n < 1 || h.A.cols() != n)
              throw InvalidController("A must be square with n >= 1");
            if (h.b.size() != n || h.c.size() != n || h.zeta.size() != n)
              throw InvalidController("b, c, zeta must have dimension n");
            if (!(h.xi1 > 0)) throw InvalidController("xi1 must be > 0");
            if (!(h.Gamma >= 0)) throw InvalidController("Gamma must be >= 0");
            if (!(h.d >= h.Gamma)) throw InvalidController("need d >= Gamma");
          }},
      ctrl);
}

BoundaryForce boundary_force(const ControllerSpec& ctrl, double w1_end,
                             double w2_end,
                             const Eigen::Ref<const Eigen::VectorXd>& q) {
  return std::visit(
      overloaded{[&](const OpenLoop&) {
                   require_dim(q, 0);
                   return BoundaryForce{0.0, 0.0};
                 },
                 [&](const StaticFeedback& s) {
                   require_dim(q, 0);
                   return BoundaryForce{-s.xi1 * w1_end, -s.xi2 * w2_end};
                 },
                 [&](const ScalarDynamic& s) {
                   require_dim(q, 1);
                   return BoundaryForce{-s.xi1 * w1_end, -q[0]};
                 },
                 [&](const HybridFeedback& h) {
                   require_dim(q, static_cast<int>(h.A.rows()));
                   return BoundaryForce{-h.xi1 * w1_end,
                                        -h.c.dot(q) - h.d * w2_end};
                 }},
      ctrl);
}

Eigen::VectorXd controller_rhs(const ControllerSpec& ctrl,
                               const Eigen::Ref<const Eigen::VectorXd>& q,
                               double w2_end) {
  return std::visit(
      overloaded{[&](const OpenLoop&) {
                   require_dim(q, 0);
                   return Eigen::VectorXd();
                 },
                 [&](const StaticFeedback&) {
                   require_dim(q, 0);
                   return Eigen::VectorXd();
                 },
                 [&](const ScalarDynamic& s) {
                   require_dim(q, 1);
                   return Eigen::VectorXd::Constant(1, -q[0] + s.xi2 * w2_end)
                       .eval();
                 },
                 [&](const HybridFeedback& h) {
                   require_dim(q, static_cast<int>(h.A.rows()));
                   return (h.A * q + h.b * w2_end).eval();
                 }},
      ctrl);
}

HybridFeedback scalar_to_hybrid(const ScalarDynamic& s) {
  HybridFeedback h;
  h.xi1 = s.xi1;
  h.A = Eigen::MatrixXd::Constant(1, 1, -1.0);
  h.b = Eigen::VectorXd::Constant(1, s.xi2);
  h.c = Eigen::VectorXd::Constant(1, 1.0);
  h.d = 0.0;
  h.Gamma = 0.0;
  h.zeta = Eigen::VectorXd::Constant(1, s.eta);
  return h;
}

std::optional<HybridFeedback> as_hybrid(const ControllerSpec& ctrl) {
  if (const auto* h = std::get_if<HybridFeedback>(&ctrl)) return *h;
  if (const auto* s = std::get_if<ScalarDynamic>(&ctrl))
    return scalar_to_hybrid(*s);
  return std::nullopt;
}

double mechanical_gain(const ControllerSpec& ctrl) {
  return std::visit(
      overloaded{[](const OpenLoop&) { return 0.0; },
                 [](const StaticFeedback& s) { return s.xi1; },
                 [](const ScalarDynamic& s) { return s.xi1; },
                 [](const HybridFeedback& h) { return h.xi1; }},
      ctrl);
}

}  // namespace heatbeam
