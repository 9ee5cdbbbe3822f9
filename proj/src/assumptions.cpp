#include "heatbeam/assumptions.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace heatbeam {

Eigen::VectorXd log_frequency_grid(double lo, double hi, int points) {
  if (points < 2) return Eigen::VectorXd::Constant(1, lo);
  Eigen::VectorXd s(points);
  const double a = std::log10(lo), b = std::log10(hi);
  for (int k = 0; k < points; ++k) {
    s[k] = std::pow(10.0, a + (b - a) * k / (points - 1));
  }
  return s;
}

double positive_real_margin_at(const HybridFeedback& h, double s) {
  const auto n = h.A.rows();
  const Eigen::MatrixXcd pencil =
      std::complex<double>(0, s) * Eigen::MatrixXcd::Identity(n, n) -
      h.A.cast<std::complex<double>>();
  const Eigen::VectorXcd x =
      pencil.partialPivLu().solve(h.b.cast<std::complex<double>>());
  const std::complex<double> g = h.c.cast<std::complex<double>>().dot(x);
  // dot() conjugates its first argument; c is real so this is c^T x.
  return h.d + g.real() - h.Gamma;
}

int controllability_rank(const Eigen::Ref<const Eigen::MatrixXd>& A,
                         const Eigen::Ref<const Eigen::VectorXd>& b) {
  const auto n = A.rows();
  Eigen::MatrixXd K(n, n);
  K.col(0) = b;
  for (Eigen::Index i = 1; i < n; ++i) K.col(i) = A * K.col(i - 1);
  if (K.isZero(0.0)) return 0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(K);
  return static_cast<int>(qr.rank());
}

AssumptionReport check_hybrid_assumptions(
    const HybridFeedback& h, const Eigen::Ref<const Eigen::VectorXd>& grid) {
  AssumptionReport r;
  const auto n = static_cast<int>(h.A.rows());

  Eigen::EigenSolver<Eigen::MatrixXd> es(h.A, false);
  r.spectral_abscissa = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    r.spectral_abscissa =
        std::max(r.spectral_abscissa, es.eigenvalues()[i].real());
  }
  r.hurwitz = es.info() == Eigen::Success && r.spectral_abscissa < 0;

  r.controllability_rank = controllability_rank(h.A, h.b);
  r.controllable = r.controllability_rank == n;
  r.observability_rank = controllability_rank(h.A.transpose(), h.c);
  r.observable = r.observability_rank == n;

  r.frequency_grid = grid;
  r.margin_asymptotic = h.d - h.Gamma;
  if (r.hurwitz) {
    r.margin_at_zero = positive_real_margin_at(h, 0.0);
    r.margin_on_grid = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < grid.size(); ++k) {
      r.margin_on_grid =
          std::min(r.margin_on_grid, positive_real_margin_at(h, grid[k]));
    }
  } else {
    // The frequency response is meaningless without a stable A.
    r.margin_at_zero = r.margin_on_grid =
        -std::numeric_limits<double>::infinity();
  }
  r.positive_real_margin =
      std::min({r.margin_at_zero, r.margin_on_grid, r.margin_asymptotic});
  r.strict_at_finite_frequencies = r.margin_at_zero > 0 && r.margin_on_grid > 0;
  const double scale = std::max(1.0, std::abs(h.d));
  r.nonstrict_at_infinity =
      std::abs(r.margin_asymptotic) <= 1e-14 * scale;
  r.gamma_zero = h.Gamma == 0.0;
  return r;
}

bool AssumptionReport::accepted() const {
  return hurwitz && controllable && observable &&
         strict_at_finite_frequencies && margin_asymptotic >= 0;
}

std::vector<std::string> AssumptionReport::warnings() const {
  std::vector<std::string> w;
  if (nonstrict_at_infinity) {
    w.emplace_back(
        "positive-real margin is non-strict at infinity (d == Gamma)");
  }
  if (gamma_zero) {
    w.emplace_back(
        "Gamma = 0: no guaranteed dissipation on the electrical end; decay is "
        "checked empirically only");
  }
  return w;
}

std::vector<std::string> AssumptionReport::failures() const {
  std::vector<std::string> f;
  if (!hurwitz) f.emplace_back("A is not Hurwitz");
  if (!controllable) f.emplace_back("(A, b) is not controllable");
  if (!observable) f.emplace_back("(A, c) is not observable");
  if (!strict_at_finite_frequencies)
    f.emplace_back("positive-real margin is not positive on the grid");
  if (margin_asymptotic < 0) f.emplace_back("d < Gamma");
  return f;
}

}  // namespace heatbeam
