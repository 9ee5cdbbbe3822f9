#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "heatbeam/analysis.hpp"
#include "heatbeam/errors.hpp"
#include "heatbeam/mky.hpp"
#include "test_support.hpp"

using namespace heatbeam;
using heatbeam::fixtures::canonical;
using heatbeam::fixtures::coupled;

namespace {

HybridFeedback scalar_example() {
  return scalar_to_hybrid(ScalarDynamic{1, 1, 0});
}

// Branches of the hybrid delta bound, written out from their closed forms.
std::array<double, 4> oracle_branches(const MaterialParamsd& p, double b1,
                                      const HybridFeedback& h,
                                      const MkyCertificate& cert) {
  const auto c = compute_lyapunov_constants(p, b1);
  const double alpha = p.alpha1 + p.gamma * p.gamma * p.beta;
  const double g2b = p.gamma * p.gamma * p.beta;
  const double scale = c.a1 * p.l2;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eq(cert.Q), ep(cert.P);
  const double mech = 2 * h.xi1 / (p.rho + 2 * h.xi1 * h.xi1 / p.alpha1);
  const double elec =
      2 * h.Gamma / (p.mu + 2 * h.d * h.d * (alpha + g2b) / (p.alpha1 * p.beta));
  const double storage =
      cert.Delta * eq.eigenvalues().minCoeff() /
      (2 * (alpha + g2b) / (p.alpha1 * p.beta) * h.c.squaredNorm() +
       8 * c.a1 * b1 * p.l2 * p.kappa * ep.eigenvalues().maxCoeff() / (p.l1 * p.l1));
  return {1 / c.M, mech / scale, elec / scale, storage / scale};
}

Trajectory static_run(const MaterialParamsd& p, const ControllerSpec& ctrl, double T,
                      std::optional<MkyCertificate> cert = std::nullopt) {
  SimulationConfig cfg;
  cfg.dt = 1e-2;
  cfg.T = T;
  cfg.system = std::make_shared<SemiDiscreteSystem>(
      assemble_semidiscrete(p, build_grid(20, p.l1, p.l2), ctrl));
  InitialProfiles prof;
  prof.z = [&p](double x) { return std::sin(std::numbers::pi * x / p.l1); };
  prof.w1 = [&p](double x) { return std::sin(std::numbers::pi * x / p.l2); };
  cfg.initial = apply_initial_conditions(prof, *cfg.system);
  cfg.certificate = std::move(cert);
  return simulate(cfg);
}

}  // namespace

TEST(Lyapunov, ZeroStateIsZero) {
  const auto p = coupled();
  const auto g = build_grid(6, p.l1, p.l2);
  const auto c = compute_lyapunov_constants(p);
  const auto v = lyapunov_functional(zero_state(g), p, g, c, 0.5 / c.M);
  EXPECT_EQ(v.L, 0);
  EXPECT_EQ(v.E, 0);
}

TEST(Lyapunov, UniformTemperatureGivesRodLength) {
  const auto p = canonical();
  const auto g = build_grid(9, 1, 1);
  const auto c = compute_lyapunov_constants(p);
  auto s = zero_state(g);
  s.z.setOnes();
  const auto v = lyapunov_functional(s, p, g, c, 0.5 / c.M);
  EXPECT_NEAR(v.F3, 1.0, 1e-14);
  EXPECT_EQ(v.F1, 0);
  EXPECT_EQ(v.F2, 0);
}

TEST(Lyapunov, UniformStrainWeight) {
  const auto p = coupled();
  const auto g = build_grid(11, p.l1, p.l2);
  const double b1 = 1.7;
  const auto c = compute_lyapunov_constants(p, b1);
  auto s = zero_state(g);
  s.u1.setOnes();
  const auto v = lyapunov_functional(s, p, g, c, 0.1 / c.M);
  EXPECT_NEAR(v.F2, b1 * p.alpha() * p.l2 * p.l2 / 2, 1e-12);
}

TEST(Lyapunov, MultiplierTermsFromClosedForm) {
  std::mt19937_64 rng(4);
  const auto p = coupled();
  const auto g = build_grid(5, p.l1, p.l2);
  const auto c = compute_lyapunov_constants(p, 0.6);
  const auto s = fixtures::random_state(rng, g);
  double F1 = 0, F2 = 0, F3 = 0;
  for (int j = 0; j <= g.N; ++j) {
    const double x = g.beam_midpoints[j];
    const double u1 = (s.u1[j] + s.u1[j + 1]) / 2, u2 = (s.u2[j] + s.u2[j + 1]) / 2;
    const double w1 = (s.w1[j] + s.w1[j + 1]) / 2, w2 = (s.w2[j] + s.w2[j + 1]) / 2;
    F1 += c.a1 * g.h2 * x * (p.rho * u1 * w1 + p.mu * u2 * w2);
    F2 += c.b1 * g.h2 * (p.l2 - x) *
          (p.alpha() * u1 * u1 + p.beta * u2 * u2 - p.gamma * p.beta * u1 * u2 +
           p.rho * w1 * w1 + p.mu * w2 * w2);
  }
  for (int j = 1; j <= g.N + 1; ++j) F3 += c.c1 * g.h1 * s.z[j] * s.z[j];
  const double delta = 0.3 / c.M;
  const auto v = lyapunov_functional(s, p, g, c, delta);
  EXPECT_NEAR(v.F1, F1, 1e-12 * std::abs(F1));
  EXPECT_NEAR(v.F2, F2, 1e-12 * std::abs(F2));
  EXPECT_NEAR(v.F3, F3, 1e-12 * std::abs(F3));
  EXPECT_NEAR(v.L, v.E + delta * (F1 + F2 + F3), 1e-12 * v.E);
}

TEST(Lyapunov, ZeroDeltaReducesToEnergy) {
  std::mt19937_64 rng(8);
  const auto p = coupled();
  const auto g = build_grid(5, p.l1, p.l2);
  const auto c = compute_lyapunov_constants(p);
  const auto s = fixtures::random_state(rng, g);
  const auto v = lyapunov_functional(s, p, g, c, 0);
  EXPECT_EQ(v.L, v.E);
  EXPECT_THROW(lyapunov_functional(s, p, g, c, -1e-3), DeltaOutOfRange);
  EXPECT_THROW(lyapunov_functional(s, p, g, c, 1 / c.M), DeltaOutOfRange);
}

TEST(Lyapunov, SandwichOnRandomStatesAndMaterials) {
  std::mt19937_64 rng(2026);
  for (int k = 0; k < 1000; ++k) {
    const auto p = fixtures::random_params(rng);
    const auto g = build_grid(4 + static_cast<int>(rng() % 8), p.l1, p.l2);
    const auto c = compute_lyapunov_constants(p);
    const auto s = fixtures::random_state(rng, g);
    for (double f : {0.1, 0.5, 0.9}) {
      const auto r = sandwich_check(s, p, g, c, f / c.M);
      ASSERT_TRUE(r.ok) << "draw " << k << " lower " << r.lower_margin << " upper "
                        << r.upper_margin;
    }
  }
}

TEST(DecayFit, PureExponential) {
  std::vector<double> t, e;
  for (int k = 0; k <= 100; ++k) {
    t.push_back(0.05 * k);
    e.push_back(3 * std::exp(-2 * t.back()));
  }
  const auto fit = fit_decay_rate(t, e);
  EXPECT_NEAR(fit.sigma, 2, 1e-12);
  EXPECT_NEAR(fit.intercept, std::log(3.0), 1e-10);
  EXPECT_LE(fit.residual, 1e-12);
  EXPECT_DOUBLE_EQ(fit.t_start, 1);
  EXPECT_DOUBLE_EQ(fit.t_end, 5);
}

TEST(DecayFit, LateWindowSeesSlowMode) {
  std::vector<double> t, e;
  for (int k = 0; k <= 400; ++k) {
    t.push_back(0.05 * k);
    e.push_back(std::exp(-10 * t.back()) + std::exp(-t.back()));
  }
  EXPECT_NEAR(fit_decay_rate(t, e, 10, 20).sigma, 1, 1e-9);
  EXPECT_GT(fit_decay_rate(t, e, 0, 1).sigma, 1.4);
}

TEST(DecayFit, ConstantEnergyHasZeroRate) {
  std::vector<double> t, e;
  for (int k = 0; k <= 50; ++k) t.push_back(k), e.push_back(0.7);
  EXPECT_NEAR(fit_decay_rate(t, e).sigma, 0, 1e-15);
}

TEST(DecayFit, Errors) {
  std::vector<double> t, e;
  for (int k = 0; k <= 50; ++k) t.push_back(k), e.push_back(k == 30 ? 0.0 : 1.0);
  EXPECT_THROW(fit_decay_rate(t, e), NonpositiveEnergy);
  e.assign(t.size(), 1.0);
  EXPECT_THROW(fit_decay_rate(t, e, 0, 5), WindowTooShort);
  EXPECT_THROW(fit_decay_rate({}, {}), WindowTooShort);
  EXPECT_THROW(fit_decay_rate(t, std::vector<double>(3, 1.0)), DimensionMismatch);
}

TEST(Envelope, StaticRunStaysUnderTheoreticalEnvelope) {
  const auto p = canonical();
  const auto c = compute_lyapunov_constants(p);
  const auto tr = static_run(p, StaticFeedback{1, 1}, 4);
  const auto rep = verify_envelope(tr, c, 1.0 / 48, p);
  EXPECT_TRUE(rep.applicable);
  EXPECT_TRUE(rep.envelope_ok);
  EXPECT_EQ(rep.violations, 0u);
  EXPECT_NEAR(rep.sigma_theory, 1.0 / 12, 1e-15);
  EXPECT_NEAR(rep.prefactor, 3, 1e-12);
  ASSERT_TRUE(rep.fit.has_value());
  EXPECT_TRUE(rep.rate_ok);
  EXPECT_GE(rep.envelope_margin, 0);
}

TEST(Envelope, DeltaMustBeAdmissibleForTheGains) {
  const auto p = canonical();
  const auto c = compute_lyapunov_constants(p);
  const auto tr = static_run(p, StaticFeedback{0.05, 1}, 0.5);
  const double bound = admissible_delta_static(c, p, 0.05, 1.0);
  EXPECT_NO_THROW(verify_envelope(tr, c, 0.5 * bound, p));
  EXPECT_THROW(verify_envelope(tr, c, 1.01 * bound, p), DeltaOutOfRange);
  EXPECT_THROW(verify_envelope(tr, c, 0, p), DeltaOutOfRange);
}

TEST(Envelope, OpenLoopIsNotApplicable) {
  const auto p = canonical();
  const auto c = compute_lyapunov_constants(p);
  const auto tr = static_run(p, OpenLoop{}, 3);
  const auto rep = verify_envelope(tr, c, 1.0 / 48, p);
  EXPECT_FALSE(rep.applicable);
  EXPECT_FALSE(rep.note.empty());
  EXPECT_TRUE(rep.fit.has_value());
}

TEST(HybridBound, ScalarExampleBranches) {
  const auto p = canonical();
  const auto c = compute_lyapunov_constants(p);
  const auto h = scalar_example();
  const auto cert = solve_mky(h, Eigen::MatrixXd::Identity(1, 1));
  const auto b = admissible_delta_hybrid(c, p, h, cert);
  EXPECT_NEAR(b.branches[0], 1.0 / 24, 1e-15);
  EXPECT_NEAR(b.branches[1], 1.0 / 9, 1e-15);
  EXPECT_EQ(b.branches[2], 0);
  EXPECT_NEAR(b.branches[3], 1.0 / 1176, 1e-15);
  EXPECT_EQ(b.bound, 0);
  EXPECT_FALSE(b.certified());
  EXPECT_FALSE(b.warnings.empty());
  EXPECT_DOUBLE_EQ(b.lambda_min_Q, 1);
  EXPECT_DOUBLE_EQ(b.lambda_max_P, 1);
}

TEST(HybridBound, MatchesClosedFormOnCoupledMaterial) {
  const auto p = coupled();
  const double b1 = 0.8;
  const auto c = compute_lyapunov_constants(p, b1);
  const HybridFeedback h{1.2, Eigen::Matrix2d{{-1, 0}, {0, -2}}, Eigen::Vector2d(1, 1),
                         Eigen::Vector2d(1, 1), 1, 0.4, Eigen::Vector2d::Zero()};
  const auto cert = solve_mky(h, Eigen::Matrix2d::Identity());
  const auto b = admissible_delta_hybrid(c, p, h, cert);
  const auto o = oracle_branches(p, b1, h, cert);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(b.branches[k], o[k], 1e-12 * o[k]) << k;
  EXPECT_DOUBLE_EQ(b.bound, *std::min_element(o.begin(), o.end()));
  EXPECT_TRUE(b.certified());
}

TEST(HybridBound, ZeroOutputGainLeavesOnlyStorageTerm) {
  const auto p = canonical();
  const auto c = compute_lyapunov_constants(p);
  HybridFeedback h{1, Eigen::MatrixXd::Constant(1, 1, -1), Eigen::VectorXd::Ones(1),
                   Eigen::VectorXd::Zero(1), 1, 0.5, Eigen::VectorXd::Zero(1)};
  MkyCertificate cert{Eigen::MatrixXd::Constant(1, 1, 2), Eigen::VectorXd::Constant(1, 2),
                      0.5, Eigen::MatrixXd::Identity(1, 1)};
  const auto b = admissible_delta_hybrid(c, p, h, cert);
  EXPECT_NEAR(b.branches[3], 0.5 / (8.0 * 12 * 2) / 12, 1e-15);
}

TEST(HybridBound, LargeFeedthroughShrinksElectricalBranch) {
  const auto p = canonical();
  const auto c = compute_lyapunov_constants(p);
  double previous = INFINITY;
  for (double d : {1.0, 10.0, 100.0}) {
    HybridFeedback h{1, Eigen::MatrixXd::Constant(1, 1, -1), Eigen::VectorXd::Ones(1),
                     Eigen::VectorXd::Ones(1), d, 0.5, Eigen::VectorXd::Zero(1)};
    const auto cert = solve_mky(h, Eigen::MatrixXd::Identity(1, 1));
    const auto b = admissible_delta_hybrid(c, p, h, cert);
    EXPECT_LT(b.branches[2], previous);
    previous = b.branches[2];
    EXPECT_NEAR(b.branches[2], oracle_branches(p, 1, h, cert)[2], 1e-14);
  }
}

TEST(HybridBound, NeedsCertificate) {
  const auto p = canonical();
  EXPECT_THROW(admissible_delta_hybrid(compute_lyapunov_constants(p), p, scalar_example(),
                                       std::nullopt),
               CertificateRequired);
}

TEST(HybridEnergy, AddsStoredControllerEnergy) {
  const auto p = canonical();
  const auto g = build_grid(3, 1, 1);
  auto s = zero_state(g, 1);
  s.q[0] = 2;
  s.w2.setOnes();
  MkyCertificate cert{Eigen::MatrixXd::Constant(1, 1, 3), Eigen::VectorXd::Ones(1), 1,
                      Eigen::MatrixXd::Identity(1, 1)};
  EXPECT_NEAR(hybrid_energy(s, p, g, cert), 0.5 + 6, 1e-15);
  EXPECT_THROW(hybrid_energy(s, p, g, std::nullopt), MissingCertificate);
}

TEST(HybridEnvelope, NotApplicableWithoutCertifiedBound) {
  const auto p = canonical();
  const auto c = compute_lyapunov_constants(p);
  const auto h = scalar_example();
  const auto cert = solve_mky(h, Eigen::MatrixXd::Identity(1, 1));
  const auto bound = admissible_delta_hybrid(c, p, h, cert);
  const auto tr = static_run(p, h, 2, cert);
  const auto rep = verify_envelope(tr, c, 1e-4, p, bound);
  EXPECT_FALSE(rep.applicable);
}

TEST(HybridEnvelope, CertifiedControllerStaysUnderEnvelope) {
  const auto p = canonical();
  const auto c = compute_lyapunov_constants(p);
  HybridFeedback h{1, Eigen::MatrixXd::Constant(1, 1, -1), Eigen::VectorXd::Ones(1),
                   Eigen::VectorXd::Ones(1), 1, 0.5, Eigen::VectorXd::Constant(1, 0.3)};
  const auto cert = solve_mky(h, Eigen::MatrixXd::Identity(1, 1));
  const auto bound = admissible_delta_hybrid(c, p, h, cert);
  ASSERT_TRUE(bound.certified());
  const auto tr = static_run(p, h, 3, cert);
  const auto rep = verify_envelope(tr, c, 0.5 * bound.bound, p, bound);
  EXPECT_TRUE(rep.applicable);
  EXPECT_TRUE(rep.envelope_ok);
  EXPECT_THROW(verify_envelope(tr, c, 1.5 * bound.bound, p, bound), DeltaOutOfRange);
}
