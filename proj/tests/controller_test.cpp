#include <random>

#include <gtest/gtest.h>

#include "heatbeam/controller.hpp"
#include "heatbeam/errors.hpp"

using namespace heatbeam;

namespace {

HybridFeedback scalar_hybrid(double c, double d, double q0 = 0) {
  return HybridFeedback{1.0, Eigen::MatrixXd::Constant(1, 1, -1.0),
                        Eigen::VectorXd::Ones(1), Eigen::VectorXd::Constant(1, c),
                        d, 0.0, Eigen::VectorXd::Constant(1, q0)};
}

}  // namespace

TEST(Controller, StaticForce) {
  const auto f = boundary_force(StaticFeedback{2, 3}, 0.5, -1, Eigen::VectorXd());
  EXPECT_DOUBLE_EQ(f.g1, -1);
  EXPECT_DOUBLE_EQ(f.g2, 3);
}

TEST(Controller, OpenLoopForceIsZero) {
  const auto f = boundary_force(OpenLoop{}, 4, -7, Eigen::VectorXd());
  EXPECT_EQ(f.g1, 0);
  EXPECT_EQ(f.g2, 0);
  EXPECT_EQ(mechanical_gain(OpenLoop{}), 0);
  EXPECT_EQ(controller_order(OpenLoop{}), 0);
}

TEST(Controller, HybridForceWithoutFeedthrough) {
  const auto h = scalar_hybrid(1, 0);
  for (double w2 : {-3.0, 0.0, 11.0}) {
    const auto f = boundary_force(h, 0, w2, Eigen::VectorXd::Constant(1, 0.2));
    EXPECT_DOUBLE_EQ(f.g2, -0.2);
  }
}

TEST(Controller, HybridRhs) {
  const auto h = scalar_hybrid(1, 0);
  const auto dq = controller_rhs(h, Eigen::VectorXd::Constant(1, 0.2), 0.5);
  ASSERT_EQ(dq.size(), 1);
  EXPECT_DOUBLE_EQ(dq[0], 0.3);
}

TEST(Controller, ScalarRhs) {
  const ScalarDynamic s{1, 2, 0};
  EXPECT_DOUBLE_EQ(controller_rhs(s, Eigen::VectorXd::Constant(1, 1.0), 0)[0], -1);
  EXPECT_DOUBLE_EQ(controller_rhs(s, Eigen::VectorXd::Zero(1), 0)[0], 0);
  EXPECT_EQ(controller_rhs(StaticFeedback{1, 1}, Eigen::VectorXd(), 3).size(), 0);
}

TEST(Controller, ScalarToHybridMapping) {
  const auto h = scalar_to_hybrid(ScalarDynamic{1, 1, 0});
  EXPECT_EQ(h.A(0, 0), -1);
  EXPECT_EQ(h.b[0], 1);
  EXPECT_EQ(h.c[0], 1);
  EXPECT_EQ(h.d, 0);
  EXPECT_EQ(h.Gamma, 0);
  EXPECT_EQ(h.zeta[0], 0);
  EXPECT_EQ(h.xi1, 1);
}

TEST(Controller, ScalarToHybridAgreesEverywhere) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-5, 5), G(0.1, 5);
  for (int k = 0; k < 1000; ++k) {
    const ScalarDynamic s{G(rng), G(rng), U(rng)};
    const auto h = scalar_to_hybrid(s);
    const Eigen::VectorXd q = Eigen::VectorXd::Constant(1, U(rng));
    const double w1 = U(rng), w2 = U(rng);
    const auto fs = boundary_force(s, w1, w2, q);
    const auto fh = boundary_force(h, w1, w2, q);
    ASSERT_EQ(fs.g1, fh.g1);
    ASSERT_EQ(fs.g2, fh.g2);
    ASSERT_EQ(controller_rhs(s, q, w2)[0], controller_rhs(h, q, w2)[0]);
    ASSERT_EQ(controller_initial_state(s)[0], controller_initial_state(h)[0]);
  }
}

TEST(Controller, KindsAndOrders) {
  EXPECT_EQ(kind_of(StaticFeedback{1, 1}), ControllerKind::Static);
  EXPECT_EQ(kind_of(ScalarDynamic{1, 1, 0}), ControllerKind::Scalar);
  EXPECT_EQ(kind_of(scalar_hybrid(1, 0)), ControllerKind::Hybrid);
  EXPECT_EQ(controller_order(ScalarDynamic{1, 1, 0}), 1);
  EXPECT_FALSE(as_hybrid(StaticFeedback{1, 1}).has_value());
  EXPECT_TRUE(as_hybrid(ScalarDynamic{1, 1, 0}).has_value());
}

TEST(Controller, ValidationRejectsBadGains) {
  EXPECT_THROW(validate_controller(StaticFeedback{0, 1}), InvalidController);
  EXPECT_THROW(validate_controller(StaticFeedback{1, -1}), InvalidController);
  EXPECT_THROW(validate_controller(ScalarDynamic{1, 0, 0}), InvalidController);
  auto h = scalar_hybrid(1, 0);
  h.Gamma = 0.5;  // d < Gamma
  EXPECT_THROW(validate_controller(h), InvalidController);
  auto bad = scalar_hybrid(1, 0);
  bad.b = Eigen::VectorXd::Ones(2);
  EXPECT_THROW(validate_controller(bad), InvalidController);
  EXPECT_NO_THROW(validate_controller(scalar_hybrid(1, 0)));
}

TEST(Controller, DimensionMismatch) {
  const auto h = scalar_hybrid(1, 0);
  EXPECT_THROW(boundary_force(h, 0, 0, Eigen::VectorXd::Zero(2)), DimensionMismatch);
  EXPECT_THROW(controller_rhs(h, Eigen::VectorXd::Zero(3), 0), DimensionMismatch);
  EXPECT_THROW(boundary_force(StaticFeedback{1, 1}, 0, 0, Eigen::VectorXd::Zero(1)),
               DimensionMismatch);
}
