#include "heatbeam/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "heatbeam/errors.hpp"

namespace heatbeam {

LyapunovValue lyapunov_functional(const DiscreteState& s,
                                  const MaterialParamsd& p, const Grid& g,
                                  const LyapunovConstantsd& consts,
                                  double delta,
                                  const Eigen::Ref<const Eigen::MatrixXd>& P) {
  if (!(delta >= 0) || !(delta < 1.0 / consts.M)) {
    throw DeltaOutOfRange("delta must lie in [0, 1/M)");
  }
  LyapunovValue v;
  v.E = P.size() > 0 ? discrete_energy(s, p, g, P) : field_energy(s, p, g);

  const Eigen::VectorXd u1 = midpoint_averages(s.u1);
  const Eigen::VectorXd u2 = midpoint_averages(s.u2);
  const Eigen::VectorXd w1 = midpoint_averages(s.w1);
  const Eigen::VectorXd w2 = midpoint_averages(s.w2);
  const Eigen::ArrayXd x = g.beam_midpoints.array();

  const Eigen::ArrayXd momentum =
      p.rho * u1.array() * w1.array() + p.mu * u2.array() * w2.array();
  v.F1 = consts.a1 * g.h2 * (x * momentum).sum();

  const double gb = p.gamma * p.beta;
  const Eigen::ArrayXd bracket =
      p.alpha() * u1.array().square() + p.beta * u2.array().square() -
      gb * u1.array() * u2.array() + p.rho * w1.array().square() +
      p.mu * w2.array().square();
  v.F2 = consts.b1 * g.h2 * ((p.l2 - x) * bracket).sum();

  v.F3 = consts.c1 * g.h1 * s.z.tail(g.N + 1).squaredNorm();
  v.L = v.E + delta * (v.F1 + v.F2 + v.F3);
  return v;
}

SandwichResult sandwich_check(const DiscreteState& s, const MaterialParamsd& p,
                              const Grid& g, const LyapunovConstantsd& consts,
                              double delta) {
  const auto v = lyapunov_functional(s, p, g, consts, delta);
  const double md = consts.M * delta;
  SandwichResult r;
  r.lower_margin = v.L - (1.0 - md) * v.E;
  r.upper_margin = (1.0 + md) * v.E - v.L;
  const double slack = 1e-12 * std::max(std::abs(v.E), std::abs(v.L));
  r.ok = r.lower_margin >= -slack && r.upper_margin >= -slack;
  return r;
}

DecayFit fit_decay_rate(const std::vector<double>& times,
                        const std::vector<double>& energies, double t_start,
                        double t_end) {
  if (times.size() != energies.size()) {
    throw DimensionMismatch("times and energies differ in length");
  }
  std::vector<double> ts, ys;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] < t_start || times[k] > t_end) continue;
    if (!(energies[k] > 0)) {
      throw NonpositiveEnergy("energy " + std::to_string(energies[k]) +
                              " at t = " + std::to_string(times[k]));
    }
    ts.push_back(times[k]);
    ys.push_back(std::log(energies[k]));
  }
  if (ts.size() < kMinFitSamples) {
    throw WindowTooShort(std::to_string(ts.size()) + " samples in [" +
                         std::to_string(t_start) + ", " +
                         std::to_string(t_end) + "]");
  }
  const auto n = static_cast<Eigen::Index>(ts.size());
  const Eigen::Map<const Eigen::VectorXd> t(ts.data(), n), y(ys.data(), n);
  const double tm = t.mean(), ym = y.mean();
  const Eigen::VectorXd dt = t.array() - tm;
  const double sxx = dt.squaredNorm();
  if (!(sxx > 0)) throw WindowTooShort("all samples share one time");
  const double slope = dt.dot(y.array().matrix() - Eigen::VectorXd::Constant(n, ym)) / sxx;

  DecayFit fit;
  fit.sigma = -slope;
  fit.intercept = ym - slope * tm;
  const Eigen::VectorXd resid =
      y - (fit.intercept + slope * t.array()).matrix();
  fit.residual = std::sqrt(resid.squaredNorm() / static_cast<double>(n));
  fit.t_start = ts.front();
  fit.t_end = ts.back();
  fit.samples = ts.size();
  return fit;
}

DecayFit fit_decay_rate(const std::vector<double>& times,
                        const std::vector<double>& energies) {
  if (times.empty()) throw WindowTooShort("no samples");
  const double T = times.back();
  return fit_decay_rate(times, energies, 0.2 * T, T);
}

namespace {

void check_envelope(const Trajectory& traj, const std::vector<double>& energy,
                    double fit_start, DecayReport& r) {
  const double e0 = energy.front();
  r.envelope_margin = std::numeric_limits<double>::infinity();
  r.violations = 0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double env = r.prefactor * e0 * std::exp(-r.sigma_theory * traj.t[k]);
    if (energy[k] > env + kEnvelopeSlack) ++r.violations;
    if (energy[k] > 0 && env > 0) {
      r.envelope_margin =
          std::min(r.envelope_margin, std::log(env) - std::log(energy[k]));
    }
  }
  r.envelope_ok = r.violations == 0;
  try {
    r.fit = fit_decay_rate(traj.t, energy, fit_start * traj.t.back(),
                           traj.t.back());
    r.rate_ok = r.fit->sigma >= (1.0 - kRateShortfall) * r.sigma_theory;
  } catch (const Error&) {
    r.fit.reset();
    r.rate_ok = false;
  }
}

void fit_only(const Trajectory& traj, const std::vector<double>& energy,
              double fit_start, DecayReport& r) {
  try {
    r.fit = fit_decay_rate(traj.t, energy, fit_start * traj.t.back(),
                           traj.t.back());
  } catch (const Error&) {
    r.fit.reset();
  }
}

}  // namespace

DecayReport verify_envelope(const Trajectory& traj,
                            const LyapunovConstantsd& consts, double delta,
                            const MaterialParamsd& p, double fit_start) {
  DecayReport r;
  r.delta = delta;
  if (traj.size() == 0) {
    r.note = "empty trajectory";
    return r;
  }
  const auto* gains = std::get_if<StaticFeedback>(&traj.controller);
  if (!gains) {
    r.note = "envelope check not applicable to " +
             to_string(kind_of(traj.controller)) + " control";
    fit_only(traj, traj.stored_energy(), fit_start, r);
    return r;
  }
  const double bound = admissible_delta_static(consts, p, gains->xi1, gains->xi2);
  if (!(delta > 0) || !(delta < bound)) {
    throw DeltaOutOfRange("delta = " + std::to_string(delta) +
                          " is outside (0, " + std::to_string(bound) + ")");
  }
  const auto rate = decay_rate(consts, p, delta);
  r.applicable = true;
  r.sigma_theory = rate.sigma;
  r.prefactor = rate.prefactor;
  check_envelope(traj, traj.energy, fit_start, r);
  return r;
}

HybridDeltaBound admissible_delta_hybrid(
    const LyapunovConstantsd& consts, const MaterialParamsd& p,
    const HybridFeedback& h, const std::optional<MkyCertificate>& cert) {
  if (!cert) throw CertificateRequired("hybrid delta bound needs (P, Q, Delta)");
  const auto n = h.A.rows();
  if (cert->P.rows() != n || cert->Q.rows() != n) {
    throw DimensionMismatch("certificate order does not match controller");
  }
  HybridDeltaBound out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eq(
      0.5 * (cert->Q + cert->Q.transpose()), Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ep(
      0.5 * (cert->P + cert->P.transpose()), Eigen::EigenvaluesOnly);
  out.lambda_min_Q = eq.eigenvalues().minCoeff();
  out.lambda_max_P = ep.eigenvalues().maxCoeff();

  const double scale = consts.a1 * p.l2;
  const double g2b = p.gamma * p.gamma * p.beta;
  const double elec_coeff = (p.alpha() + g2b) / (p.alpha1 * p.beta);
  const double xi1 = h.xi1;

  out.branches[0] = 1.0 / consts.M;
  out.branches[1] = 2.0 * xi1 / (p.rho + xi1 * xi1 * 2.0 / p.alpha1) / scale;
  out.branches[2] =
      2.0 * h.Gamma / (p.mu + 2.0 * h.d * h.d * elec_coeff) / scale;
  const double storage_den =
      2.0 * elec_coeff * h.c.squaredNorm() +
      8.0 * consts.a1 * consts.b1 * p.l2 * p.kappa / (p.l1 * p.l1) *
          out.lambda_max_P;
  out.branches[3] = cert->Delta * out.lambda_min_Q / storage_den / scale;
  out.bound = *std::min_element(out.branches.begin(), out.branches.end());

  if (h.Gamma == 0.0) {
    out.warnings.emplace_back(
        "hybrid rate not certified for Gamma = 0 (electrical branch is 0)");
  }
  if (!(out.bound > 0) && h.Gamma != 0.0) {
    out.warnings.emplace_back("no positive delta satisfies every branch");
  }
  return out;
}

DecayReport verify_envelope(const Trajectory& traj,
                            const LyapunovConstantsd& consts, double delta,
                            const MaterialParamsd& p,
                            const HybridDeltaBound& bound, double fit_start) {
  DecayReport r;
  r.delta = delta;
  if (traj.size() == 0) {
    r.note = "empty trajectory";
    return r;
  }
  if (!traj.has_hybrid_energy) {
    r.note = "no certificate: hybrid energy unavailable";
    fit_only(traj, traj.energy, fit_start, r);
    return r;
  }
  if (!bound.certified()) {
    r.note = "hybrid rate not certified";
    for (const auto& w : bound.warnings) r.note += "; " + w;
    fit_only(traj, traj.hybrid_energy, fit_start, r);
    return r;
  }
  if (!(delta > 0) || !(delta < bound.bound)) {
    throw DeltaOutOfRange("delta = " + std::to_string(delta) +
                          " is outside (0, " + std::to_string(bound.bound) +
                          ")");
  }
  const auto rate = decay_rate(consts, p, delta);
  r.applicable = true;
  r.sigma_theory = rate.sigma;
  r.prefactor = rate.prefactor;
  check_envelope(traj, traj.hybrid_energy, fit_start, r);
  return r;
}

double hybrid_energy(const DiscreteState& s, const MaterialParamsd& p,
                     const Grid& g, const std::optional<MkyCertificate>& cert) {
  if (!cert) throw MissingCertificate("hybrid energy needs the storage matrix P");
  return discrete_energy(s, p, g, cert->P);
}

}  // namespace heatbeam
