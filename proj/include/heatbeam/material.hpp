#pragma once

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "heatbeam/errors.hpp"

namespace heatbeam {

/// Physical constants of the rod (heat) and the magnetizable piezoelectric
/// beam. Everything is strictly positive except gamma, which may vanish
/// (mechanical and electrical fields then decouple).
template <typename Scalar>
struct MaterialParams {
  Scalar rho{1};     // mass density
  Scalar mu{1};      // magnetic permeability
  Scalar alpha1{1};  // elastic stiffness
  Scalar beta{1};    // impermeability
  Scalar gamma{0};   // piezoelectric constant
  Scalar kappa{1};   // thermal diffusivity
  Scalar l1{1};      // rod length
  Scalar l2{1};      // beam length

  /// Piezoelectrically stiffened coefficient alpha1 + gamma^2 beta.
  Scalar alpha() const { return alpha1 + gamma * gamma * beta; }
};

using MaterialParamsd = MaterialParams<double>;

/// Mass matrix diag(rho, mu) and stiffness [[alpha, -gamma beta],
/// [-gamma beta, beta]].
template <typename Scalar>
struct DerivedMatrices {
  Scalar alpha;
  Eigen::Matrix<Scalar, 2, 2> M2;
  Eigen::Matrix<Scalar, 2, 2> A2;
};

template <typename Scalar>
DerivedMatrices<Scalar> derive_matrices(const MaterialParams<Scalar>& p) {
  DerivedMatrices<Scalar> out;
  out.alpha = p.alpha();
  out.M2 << p.rho, Scalar(0), Scalar(0), p.mu;
  const Scalar coupling = -p.gamma * p.beta;
  out.A2 << out.alpha, coupling, coupling, p.beta;
  return out;
}

inline constexpr std::array<std::string_view, 8> kMaterialKeys = {
    "rho", "mu", "alpha1", "beta", "gamma", "kappa", "l1", "l2"};

/// Builds typed parameters from a raw key/value table. Collects every
/// violation before throwing so that a config with several mistakes is
/// reported in one pass.
template <typename Scalar = double>
MaterialParams<Scalar> validate_params(
    const std::map<std::string, Scalar>& raw) {
  std::vector<ParameterViolation> violations;
  MaterialParams<Scalar> p;
  Scalar* slots[] = {&p.rho,   &p.mu,    &p.alpha1, &p.beta,
                     &p.gamma, &p.kappa, &p.l1,     &p.l2};
  for (std::size_t i = 0; i < kMaterialKeys.size(); ++i) {
    const std::string key(kMaterialKeys[i]);
    const auto it = raw.find(key);
    if (it == raw.end()) {
      violations.push_back({ParameterViolation::Kind::Missing, key});
      continue;
    }
    const Scalar v = it->second;
    if (key == "gamma") {
      if (!(v >= Scalar(0)) || !std::isfinite(static_cast<double>(v)))
        violations.push_back({ParameterViolation::Kind::Negative, key});
    } else if (!(v > Scalar(0)) || !std::isfinite(static_cast<double>(v))) {
      violations.push_back({ParameterViolation::Kind::NonPositive, key});
    }
    *slots[i] = v;
  }
  if (!violations.empty()) throw InvalidParameters(std::move(violations));
  return p;
}

/// Largest characteristic speed of the beam, sqrt(lambda_max(M^{-1} A)).
template <typename Scalar>
Scalar max_wave_speed(const MaterialParams<Scalar>& p) {
  const auto d = derive_matrices(p);
  // M^{-1/2} A M^{-1/2} is symmetric with the same spectrum as M^{-1} A.
  Eigen::Matrix<Scalar, 2, 2> scaled;
  const Scalar sr = std::sqrt(p.rho), sm = std::sqrt(p.mu);
  scaled << d.A2(0, 0) / p.rho, d.A2(0, 1) / (sr * sm), d.A2(1, 0) / (sr * sm),
      d.A2(1, 1) / p.mu;
  const Scalar tr = scaled.trace();
  const Scalar det = scaled.determinant();
  const Scalar disc = std::sqrt(std::max(Scalar(0), tr * tr / 4 - det));
  return std::sqrt(tr / 2 + disc);
}

}  // namespace heatbeam
