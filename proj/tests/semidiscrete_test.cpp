#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "heatbeam/errors.hpp"
#include "heatbeam/mky.hpp"
#include "heatbeam/semidiscrete.hpp"
#include "test_support.hpp"

using namespace heatbeam;
using heatbeam::fixtures::canonical;
using heatbeam::fixtures::coupled;

namespace {

constexpr double pi = std::numbers::pi;

HybridFeedback two_state_hybrid() {
  return HybridFeedback{0.7, Eigen::Matrix2d{{-1, 0}, {0, -2}}, Eigen::Vector2d(1, 1),
                        Eigen::Vector2d(1, 1), 1, 0, Eigen::Vector2d(0.3, -0.2)};
}

// Independent evaluation of the energy rate from its closed form.
double oracle_dissipation(const SemiDiscreteSystem& sys, const DiscreteState& s,
                          const Eigen::MatrixXd& P) {
  const auto& g = sys.grid;
  const int e = g.N + 1;
  double D = 0;
  for (int j = 0; j <= g.N; ++j) {
    const double dz = s.z[j + 1] - s.z[j];
    D -= sys.params.kappa / g.h1 * dz * dz;
  }
  const auto f = boundary_force(sys.controller, s.w1[e], s.w2[e], s.q);
  D += f.g1 * s.w1[e] + f.g2 * s.w2[e];
  if (sys.hybrid && P.size() > 0)
    D += s.q.dot(P * (sys.hybrid->A * s.q + sys.hybrid->b * s.w2[e]));
  return D;
}

}  // namespace

TEST(SemiDiscrete, StaticLayoutDimension) {
  const auto p = canonical();
  const auto sys = assemble_semidiscrete(p, build_grid(3, 1, 1), StaticFeedback{1, 1});
  EXPECT_EQ(sys.layout.dim(), 23);
  EXPECT_EQ(sys.dae.E.rows(), 23);
  EXPECT_EQ(sys.dae.S.cols(), 23);
  int algebraic = 0;
  for (bool a : sys.dae.algebraic) algebraic += a;
  // w2_0, flux at the joint, two traction rows
  EXPECT_EQ(algebraic, 4);
}

TEST(SemiDiscrete, ScalarControllerAddsOneDifferentialRow) {
  const auto p = canonical();
  const auto g = build_grid(3, 1, 1);
  const auto st = assemble_semidiscrete(p, g, StaticFeedback{1, 1});
  const auto sc = assemble_semidiscrete(p, g, ScalarDynamic{1, 1, 0});
  EXPECT_EQ(sc.layout.dim(), st.layout.dim() + 1);
  const auto last = sc.layout.q(0);
  EXPECT_FALSE(sc.dae.algebraic[last]);
  const Eigen::MatrixXd S(sc.dae.S);
  EXPECT_DOUBLE_EQ(S(last, last), -1);
  EXPECT_DOUBLE_EQ(S(last, sc.layout.w2(g.N + 1)), 1);
}

TEST(SemiDiscrete, RodDirichletIsTridiagonalHeatMatrix) {
  auto p = canonical();
  p.kappa = 0.7;
  const auto g = build_grid(5, 1.2, 1);
  const auto dae = assemble_rod_dirichlet(p, g);
  const Eigen::MatrixXd S(dae.S), E(dae.E);
  const double r = p.kappa / (g.h1 * g.h1);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const double expected = i == j ? -2 * r : (std::abs(i - j) == 1 ? r : 0.0);
      EXPECT_NEAR(S(i, j), expected, 1e-12 * r);
      EXPECT_EQ(E(i, j), i == j ? 1.0 : 0.0);
    }
}

TEST(SemiDiscrete, RodSpectrumForThreeNodes) {
  const auto p = canonical();
  const auto dae = assemble_rod_dirichlet(p, build_grid(3, 1, 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(dae.S)};
  // -32 (1 - cos(pi/4)) is the slowest mode
  EXPECT_NEAR(es.eigenvalues()[2], -32 * (1 - std::cos(pi / 4)), 1e-12);
  EXPECT_NEAR(es.eigenvalues()[2], -9.3726, 1e-4);
}

TEST(SemiDiscrete, PackUnpackRoundTrip) {
  std::mt19937_64 rng(1);
  const auto sys = assemble_semidiscrete(coupled(), build_grid(6, 1.5, 2), two_state_hybrid());
  const auto s = fixtures::random_consistent_state(rng, sys);
  const auto x = pack(sys.layout, s);
  EXPECT_EQ(x.size(), sys.layout.dim());
  const auto back = unpack(sys.layout, x, 0.25);
  EXPECT_EQ(back.t, 0.25);
  EXPECT_TRUE(back.z.isApprox(s.z, 1e-15));
  EXPECT_TRUE(back.u1.isApprox(s.u1));
  EXPECT_TRUE(back.u2.isApprox(s.u2));
  EXPECT_TRUE(back.w1.isApprox(s.w1));
  EXPECT_TRUE(back.w2.isApprox(s.w2));
  EXPECT_TRUE(back.q.isApprox(s.q));
  EXPECT_THROW(unpack(sys.layout, Eigen::VectorXd::Zero(3)), DimensionMismatch);
}

TEST(SemiDiscrete, ZeroProfilesGiveZeroState) {
  const auto sys = assemble_semidiscrete(canonical(), build_grid(8, 1, 1), StaticFeedback{1, 1});
  const auto s = apply_initial_conditions(InitialProfiles{}, sys);
  EXPECT_EQ(pack(sys.layout, s).norm(), 0);
  EXPECT_EQ(constraint_residual(sys, pack(sys.layout, s)), 0);
}

TEST(SemiDiscrete, ProjectionAtTheJointByHand) {
  // z(x) = 1 - x on the rod, beam at rest, N = 3, canonical material:
  // the joint forces z_0 = w1_0 = 0, then kappa (z_0 - z_1)/h1 = alpha u1_0
  // gives u1_0 = (0 - 0.75)/0.25 / 4 = -0.75.
  const auto sys = assemble_semidiscrete(canonical(), build_grid(3, 1, 1), StaticFeedback{1, 1});
  InitialProfiles prof;
  prof.z = [](double x) { return 1 - x; };
  const auto s = apply_initial_conditions(prof, sys);
  EXPECT_EQ(s.z[0], 0);
  EXPECT_DOUBLE_EQ(s.z[1], 0.75);
  EXPECT_DOUBLE_EQ(s.z[3], 0.25);
  EXPECT_EQ(s.z[4], 0);
  EXPECT_DOUBLE_EQ(s.u1[0], -0.75);
  EXPECT_EQ(s.u2[0], 0);
  EXPECT_LE(constraint_residual(sys, pack(sys.layout, s)), 1e-14);
}

TEST(SemiDiscrete, ProjectionOnlyTouchesBoundaryNodes) {
  const auto p = coupled();
  const auto sys = assemble_semidiscrete(p, build_grid(10, p.l1, p.l2), StaticFeedback{2, 0.5});
  InitialProfiles prof;
  prof.z = [](double x) { return std::cos(x); };
  prof.u1 = [](double x) { return 1 + x; };
  prof.u2 = [](double x) { return x * x; };
  prof.w1 = [](double x) { return std::exp(x); };
  prof.w2 = [](double x) { return 2 + std::sin(x); };  // w2(0) != 0
  const auto s = apply_initial_conditions(prof, sys);
  const auto& g = sys.grid;
  for (int j = 1; j <= g.N; ++j) {
    EXPECT_EQ(s.z[j], prof.z(g.rod_nodes[j]));
    EXPECT_EQ(s.u1[j], prof.u1(g.beam_nodes[j]));
    EXPECT_EQ(s.u2[j], prof.u2(g.beam_nodes[j]));
    EXPECT_EQ(s.w1[j], prof.w1(g.beam_nodes[j]));
    EXPECT_EQ(s.w2[j], prof.w2(g.beam_nodes[j]));
  }
  EXPECT_EQ(s.w2[0], 0);
  EXPECT_EQ(s.z[0], s.w1[0]);
  EXPECT_EQ(s.z[g.N + 1], 0);
  EXPECT_LE(constraint_residual(sys, pack(sys.layout, s)), 1e-12);
}

TEST(SemiDiscrete, ControllerStartsAtItsInitialState) {
  const auto p = canonical();
  const auto sys = assemble_semidiscrete(p, build_grid(4, 1, 1), two_state_hybrid());
  const auto s = apply_initial_conditions(InitialProfiles{}, sys);
  EXPECT_EQ(s.q, two_state_hybrid().zeta);
  EXPECT_LE(constraint_residual(sys, pack(sys.layout, s)), 1e-14);
}

TEST(SemiDiscrete, EnergyOfConstantCurrent) {
  const auto p = canonical();
  const auto g = build_grid(9, 1, 1);
  auto s = zero_state(g);
  s.w2.setOnes();
  EXPECT_NEAR(discrete_energy(s, p, g), 0.5, 1e-15);
}

TEST(SemiDiscrete, EnergyOfZeroStateIsZero) {
  const auto p = coupled();
  const auto g = build_grid(5, p.l1, p.l2);
  EXPECT_EQ(discrete_energy(zero_state(g), p, g), 0);
  EXPECT_EQ(discrete_energy(zero_state(g, 2), p, g, Eigen::Matrix2d::Identity()), 0);
}

TEST(SemiDiscrete, RodEnergyConvergesToHalfIntegral) {
  const auto p = canonical();
  for (int N : {4, 16, 64}) {
    const auto g = build_grid(N, 1, 1);
    auto s = zero_state(g);
    s.z = (pi * g.rod_nodes.array()).sin();
    s.z[N + 1] = 0;
    EXPECT_NEAR(discrete_energy(s, p, g), 0.25, g.h1 * g.h1);
  }
}

TEST(SemiDiscrete, ControllerStateNeedsStorageMatrix) {
  const auto p = canonical();
  const auto g = build_grid(3, 1, 1);
  EXPECT_THROW(discrete_energy(zero_state(g, 1), p, g), MissingCertificate);
  EXPECT_THROW(discrete_energy(zero_state(g, 1), p, g, Eigen::Matrix2d::Identity()),
               DimensionMismatch);
}

TEST(SemiDiscrete, StoredControllerEnergy) {
  const auto p = canonical();
  const auto g = build_grid(3, 1, 1);
  auto s = zero_state(g, 2);
  s.q = Eigen::Vector2d(1, 2);
  const Eigen::Matrix2d P{{2, 0.5}, {0.5, 1}};
  EXPECT_DOUBLE_EQ(discrete_energy(s, p, g, P), 0.5 * (2 + 2 * 0.5 * 2 + 4));
}

TEST(SemiDiscrete, EnergyFormMatchesEnergy) {
  std::mt19937_64 rng(3);
  const auto p = coupled();
  const auto ctrl = two_state_hybrid();
  const auto sys = assemble_semidiscrete(p, build_grid(7, p.l1, p.l2), ctrl);
  const auto cert = solve_mky(ctrl, Eigen::Matrix2d::Identity());
  const auto H = energy_form(sys, cert.P);
  for (int k = 0; k < 50; ++k) {
    const auto s = fixtures::random_consistent_state(rng, sys);
    const auto x = pack(sys.layout, s);
    const double E = discrete_energy(s, p, sys.grid, cert.P);
    EXPECT_NEAR(0.5 * x.dot(H * x), E, 1e-12 * E);
  }
  const Eigen::MatrixXd Hd(H);
  EXPECT_LE((Hd - Hd.transpose()).norm(), 1e-14 * Hd.norm());
}

TEST(SemiDiscrete, SummationByPartsOnRandomStates) {
  std::mt19937_64 rng(11);
  const auto p = coupled();
  const auto g = build_grid(9, p.l1, p.l2);
  const auto hyb = two_state_hybrid();
  const auto hyb_cert = solve_mky(hyb, Eigen::Matrix2d::Identity());
  const auto sc = ScalarDynamic{1.3, 0.8, 0.1};
  const auto sc_cert = solve_mky(scalar_to_hybrid(sc), Eigen::MatrixXd::Identity(1, 1));
  struct Case {
    ControllerSpec ctrl;
    Eigen::MatrixXd P;
  };
  const std::vector<Case> cases{{OpenLoop{}, {}},
                                {StaticFeedback{1.5, 0.4}, {}},
                                {sc, sc_cert.P},
                                {hyb, hyb_cert.P}};
  for (const auto& c : cases) {
    const auto sys = assemble_semidiscrete(p, g, c.ctrl);
    const auto H = energy_form(sys, c.P);
    for (int k = 0; k < 50; ++k) {
      const auto s = fixtures::random_consistent_state(rng, sys);
      const auto x = pack(sys.layout, s);
      ASSERT_LE(constraint_residual(sys, x), 1e-10);
      const auto xdot = time_derivative(sys, x);
      const double rate = x.dot(H * xdot);
      const double D = dissipation(sys, x, c.P);
      const double oracle = oracle_dissipation(sys, s, c.P);
      const double scale = std::max({std::abs(oracle), double(x.dot(H * x)), 1.0});
      EXPECT_NEAR(rate, oracle, 1e-10 * scale);
      EXPECT_NEAR(D, oracle, 1e-12 * scale);
    }
  }
}

TEST(SemiDiscrete, DerivativeKeepsConstraints) {
  std::mt19937_64 rng(5);
  const auto p = coupled();
  const auto sys = assemble_semidiscrete(p, build_grid(6, p.l1, p.l2), StaticFeedback{1, 2});
  const Eigen::MatrixXd S(sys.dae.S);
  for (int k = 0; k < 20; ++k) {
    const auto x = pack(sys.layout, fixtures::random_consistent_state(rng, sys));
    const auto xdot = time_derivative(sys, x);
    for (Eigen::Index r = 0; r < sys.layout.dim(); ++r)
      if (sys.dae.algebraic[r]) EXPECT_NEAR(S.row(r).dot(xdot), 0, 1e-9 * xdot.norm());
  }
}

TEST(SemiDiscrete, StateMustMatchGrid) {
  const auto p = canonical();
  const auto g = build_grid(3, 1, 1);
  EXPECT_THROW(discrete_energy(zero_state(build_grid(4, 1, 1)), p, g), DimensionMismatch);
  const auto sys = assemble_semidiscrete(p, g, StaticFeedback{1, 1});
  EXPECT_THROW(pack(sys.layout, zero_state(g, 1)), DimensionMismatch);
}

TEST(SemiDiscrete, SummationByPartsOnRandomMaterials) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> gain(0.05, 5);
  for (int k = 0; k < 200; ++k) {
    const auto p = fixtures::random_params(rng);
    const auto g = build_grid(3 + static_cast<int>(rng() % 10), p.l1, p.l2);
    const auto sys = assemble_semidiscrete(p, g, StaticFeedback{gain(rng), gain(rng)});
    const auto H = energy_form(sys);
    const auto s = fixtures::random_consistent_state(rng, sys);
    const auto x = pack(sys.layout, s);
    const double rate = x.dot(H * time_derivative(sys, x));
    const double oracle = oracle_dissipation(sys, s, {});
    ASSERT_NEAR(rate, oracle, 1e-9 * std::max({std::abs(oracle), double(x.dot(H * x)), 1.0}))
        << "draw " << k;
  }
}
