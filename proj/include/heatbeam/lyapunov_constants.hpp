#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "heatbeam/errors.hpp"
#include "heatbeam/material.hpp"

namespace heatbeam {

/// Multiplier weights and equivalence constants of the Lyapunov functional
/// L = E + delta (F1 + F2 + F3).
///
/// `delta_max` is the gain-free bound 1/M; the gain-dependent refinement is
/// admissible_delta_static(). `sigma` is the best rate 2 kappa/(l1^2 Mtilde),
/// reached at delta = 1/(2M).
template <typename Scalar>
struct LyapunovConstants {
  Scalar b1;
  Scalar a1;
  Scalar c1;
  Scalar Mtilde;
  Scalar M;
  Scalar delta_max;
  Scalar sigma;
};

using LyapunovConstantsd = LyapunovConstants<double>;

namespace detail {

// max(sqrt(alpha1/rho) + gamma^2 sqrt(beta mu)/rho, 2 sqrt(beta/mu))
template <typename Scalar>
Scalar wave_speed_branch(const MaterialParams<Scalar>& p) {
  using std::sqrt;
  const Scalar mech = sqrt(p.alpha1 / p.rho) +
                      p.gamma * p.gamma * sqrt(p.beta * p.mu) / p.rho;
  const Scalar elec = Scalar(2) * sqrt(p.beta / p.mu);
  return std::max(mech, elec);
}

template <typename Scalar>
Scalar equivalence_branch(const MaterialParams<Scalar>& p) {
  using std::sqrt;
  const Scalar g2 = p.gamma * p.gamma;
  const Scalar cross = sqrt(p.mu * g2 / p.alpha1);
  return std::max({sqrt(p.rho / p.alpha1) + cross, sqrt(p.mu / p.beta) + cross,
                   Scalar(2),
                   p.alpha() / p.alpha1 + g2 * p.beta / (Scalar(2) * p.alpha1)});
}

}  // namespace detail

template <typename Scalar>
LyapunovConstants<Scalar> compute_lyapunov_constants(
    const MaterialParams<Scalar>& p, Scalar b1 = Scalar(1)) {
  if (!(b1 > Scalar(0))) {
    throw InvalidParameters({{ParameterViolation::Kind::NonPositive, "b1"}});
  }
  const Scalar heat = p.l2 * p.kappa / (p.l1 * p.l1);
  const Scalar speed = detail::wave_speed_branch(p);

  LyapunovConstants<Scalar> c;
  c.b1 = b1;
  c.a1 = Scalar(2) * b1 * (Scalar(4) * heat + speed);
  c.c1 = b1 * p.l2;
  c.Mtilde =
      (Scalar(8) * heat + Scalar(2) * speed) * detail::equivalence_branch(p);
  c.M = b1 * p.l2 * c.Mtilde;
  c.delta_max = Scalar(1) / c.M;
  c.sigma = Scalar(2) * p.kappa / (p.l1 * p.l1 * c.Mtilde);
  return c;
}

/// Supremum of admissible delta for static gains; any admissible delta is
/// strictly below it.
template <typename Scalar>
Scalar admissible_delta_static(const LyapunovConstants<Scalar>& c,
                               const MaterialParams<Scalar>& p, Scalar xi1,
                               Scalar xi2) {
  const Scalar g2b = p.gamma * p.gamma * p.beta;
  const Scalar scale = c.a1 * p.l2;
  const Scalar mech =
      Scalar(2) * xi1 / (scale * (p.rho + Scalar(2) * xi1 * xi1 / p.alpha1));
  const Scalar elec =
      Scalar(2) * xi2 /
      (scale * (p.mu + xi2 * xi2 * (p.alpha() + g2b) / (p.alpha1 * p.beta)));
  return std::min({Scalar(1) / c.M, mech, elec});
}

template <typename Scalar>
struct DecayRate {
  Scalar sigma;
  Scalar prefactor;  // (1 + M delta) / (1 - M delta)
};

/// Decay rate and envelope prefactor at a given delta in (0, 1/M).
template <typename Scalar>
DecayRate<Scalar> decay_rate(const LyapunovConstants<Scalar>& c,
                             const MaterialParams<Scalar>& p, Scalar delta) {
  if (!(delta > Scalar(0)) || !(delta < Scalar(1) / c.M)) {
    throw DeltaOutOfRange("delta must lie in (0, 1/M)");
  }
  const Scalar md = c.M * delta;
  const Scalar sigma = delta * (Scalar(1) - md) * Scalar(8) * c.b1 * p.l2 *
                       p.kappa / (p.l1 * p.l1);
  return {sigma, (Scalar(1) + md) / (Scalar(1) - md)};
}

template <typename Scalar>
struct MaxDecayRate {
  Scalar sigma_max;
  Scalar delta_star;
  /// Set when static gains were supplied: whether delta_star lies strictly
  /// inside the gain-dependent admissible range.
  std::optional<bool> attainable;
};

template <typename Scalar>
MaxDecayRate<Scalar> max_decay_rate(const LyapunovConstants<Scalar>& c,
                                    const MaterialParams<Scalar>& p) {
  MaxDecayRate<Scalar> out;
  out.delta_star = Scalar(1) / (Scalar(2) * c.M);
  out.sigma_max =
      Scalar(2) * c.b1 * p.l2 * p.kappa / (p.l1 * p.l1 * c.M);
  return out;
}

template <typename Scalar>
MaxDecayRate<Scalar> max_decay_rate(const LyapunovConstants<Scalar>& c,
                                    const MaterialParams<Scalar>& p,
                                    Scalar xi1, Scalar xi2) {
  auto out = max_decay_rate(c, p);
  out.attainable = out.delta_star < admissible_delta_static(c, p, xi1, xi2);
  return out;
}

/// min(1/(2M), 0.99 delta_max): the optimal delta when admissible, otherwise
/// just inside the admissible range.
template <typename Scalar>
Scalar default_delta(const LyapunovConstants<Scalar>& c,
                     const MaterialParams<Scalar>& p, Scalar xi1, Scalar xi2) {
  return std::min(Scalar(1) / (Scalar(2) * c.M),
                  Scalar(0.99) * admissible_delta_static(c, p, xi1, xi2));
}

}  // namespace heatbeam
