#include "heatbeam/mky.hpp"

#include <cmath>
#include <complex>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "heatbeam/assumptions.hpp"
#include "heatbeam/errors.hpp"

namespace heatbeam {

namespace {

double min_eigenvalue(const Eigen::MatrixXd& S) {
  if (S.size() == 0) return std::numeric_limits<double>::infinity();
  const Eigen::MatrixXd sym = 0.5 * (S + S.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double coupling_gain(const HybridFeedback& h) {
  return std::sqrt(2.0 * std::max(0.0, h.d - h.Gamma));
}

MkyCertificate solve_scalar(const HybridFeedback& h, double Q) {
  const double a = h.A(0, 0), b = h.b[0], c = h.c[0];
  const double s = coupling_gain(h);
  if (b == 0.0) throw FactorizationFailed("b = 0");
  MkyCertificate cert;
  cert.Q = Eigen::MatrixXd::Constant(1, 1, Q);
  double P = 0.0;
  if (s == 0.0) {
    // P b = c fixes P; -2 a P is shared evenly by q1^2 and Delta Q.
    P = c / b;
    const double dissipation = -2.0 * a * P;
    if (!(P > 0) || !(dissipation > 0)) {
      throw FactorizationFailed("P = c/b = " + std::to_string(P) +
                                " gives no positive dissipation");
    }
    cert.q1 = Eigen::VectorXd::Constant(1, std::sqrt(0.5 * dissipation));
    cert.Delta = 0.5 * dissipation / Q;
  } else {
    // Delta(P) = (-2 a P - (P b - c)^2 / s^2) / Q is concave in P; take its
    // maximizer.
    P = (c - a * s * s / b) / b;
    const double q1 = (P * b - c) / s;
    const double delta = (-2.0 * a * P - q1 * q1) / Q;
    if (!(P > 0) || !(delta > 0)) {
      throw FactorizationFailed("no P > 0 with Delta > 0 (P* = " +
                                std::to_string(P) + ")");
    }
    cert.q1 = Eigen::VectorXd::Constant(1, q1);
    cert.Delta = delta;
  }
  cert.P = Eigen::MatrixXd::Constant(1, 1, P);
  return cert;
}

// Stabilizing solution of A_r^T P + P A_r + P G P + C = 0 with G >= 0,
// from the stable invariant subspace of [[A_r, G], [-C, -A_r^T]].
std::optional<Eigen::MatrixXd> riccati_stable_solution(
    const Eigen::MatrixXd& Ar, const Eigen::MatrixXd& G,
    const Eigen::MatrixXd& C) {
  const auto n = Ar.rows();
  Eigen::MatrixXd H(2 * n, 2 * n);
  H << Ar, G, -C, -Ar.transpose();
  Eigen::ComplexEigenSolver<Eigen::MatrixXd> es(H);
  if (es.info() != Eigen::Success) return std::nullopt;

  const double scale = std::max(1.0, H.norm());
  Eigen::MatrixXcd basis(2 * n, n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    const double re = es.eigenvalues()[i].real();
    if (std::abs(re) <= 1e-9 * scale) return std::nullopt;
    if (re < 0) {
      if (k == n) return std::nullopt;
      basis.col(k++) = es.eigenvectors().col(i);
    }
  }
  if (k != n) return std::nullopt;

  const Eigen::MatrixXcd X1 = basis.topRows(n);
  const Eigen::MatrixXcd X2 = basis.bottomRows(n);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(X1);
  if (!lu.isInvertible() || lu.rcond() < 1e-12) return std::nullopt;
  const Eigen::MatrixXcd Pc = X2 * lu.inverse();
  if (Pc.imag().norm() > 1e-8 * std::max(1.0, Pc.real().norm()))
    return std::nullopt;
  Eigen::MatrixXd P = Pc.real();
  P = 0.5 * (P + P.transpose()).eval();
  const Eigen::MatrixXd residual =
      Ar.transpose() * P + P * Ar + P * G * P + C;
  if (residual.norm() > 1e-9 * std::max(1.0, P.norm())) return std::nullopt;
  return P;
}

std::optional<MkyCertificate> try_riccati(const HybridFeedback& h,
                                          const Eigen::MatrixXd& Q,
                                          double delta) {
  const double s = coupling_gain(h);
  const double s2 = s * s;
  const Eigen::MatrixXd Ar = h.A - h.b * h.c.transpose() / s2;
  const Eigen::MatrixXd G = h.b * h.b.transpose() / s2;
  const Eigen::MatrixXd C = h.c * h.c.transpose() / s2 + delta * Q;
  auto P = riccati_stable_solution(Ar, G, C);
  if (!P || !(min_eigenvalue(*P) > 0)) return std::nullopt;
  MkyCertificate cert;
  cert.P = *P;
  cert.q1 = (*P * h.b - h.c) / s;
  cert.Delta = delta;
  cert.Q = Q;
  if (!verify_mky(h, cert).passed) return std::nullopt;
  return cert;
}

MkyCertificate solve_riccati(const HybridFeedback& h,
                             const Eigen::MatrixXd& Q) {
  if (h.d - h.Gamma <= 0.0) {
    throw FactorizationFailed(
        "d == Gamma with n >= 2 has no Riccati form; supply a certificate");
  }
  // Largest Delta with a valid solution, bracketed geometrically and then
  // bisected; the returned certificate uses half of it to stay away from
  // the boundary.
  const auto ok = [&](double delta) { return try_riccati(h, Q, delta).has_value(); };
  double good = 0.0, bad = std::numeric_limits<double>::infinity();
  if (ok(1.0)) {
    good = 1.0;
    while (good < 1e12 && ok(2.0 * good)) good *= 2.0;
    bad = 2.0 * good;
  } else {
    bad = 1.0;
    for (double trial = 0.25; trial > 1e-14; trial *= 0.25) {
      if (ok(trial)) {
        good = trial;
        break;
      }
      bad = trial;
    }
  }
  for (int i = 0; i < 60 && good > 0.0 && bad - good > 1e-6 * good; ++i) {
    const double mid = 0.5 * (good + bad);
    (ok(mid) ? good : bad) = mid;
  }
  if (good == 0.0) {
    throw FactorizationFailed(
        "positive-real Riccati equation has no admissible solution");
  }
  auto cert = try_riccati(h, Q, 0.5 * good);
  if (!cert) cert = try_riccati(h, Q, good);
  if (!cert) throw FactorizationFailed("certificate failed verification");
  return *cert;
}

}  // namespace

MkyCertificate solve_mky(const HybridFeedback& h,
                         const Eigen::Ref<const Eigen::MatrixXd>& Q) {
  validate_controller(h);
  const auto n = h.A.rows();
  if (Q.rows() != n || Q.cols() != n)
    throw DimensionMismatch("Q must be n x n");
  if ((Q - Q.transpose()).norm() > 1e-12 * std::max(1.0, Q.norm()) ||
      !(min_eigenvalue(Q) > 0)) {
    throw PreconditionViolation("Q must be symmetric positive definite");
  }
  const AssumptionReport report = check_hybrid_assumptions(h);
  if (!report.accepted()) {
    std::string why;
    for (const auto& f : report.failures()) why += (why.empty() ? "" : "; ") + f;
    throw AssumptionsFailed(why);
  }
  if (n == 1) return solve_scalar(h, Q(0, 0));
  return solve_riccati(h, Q);
}

MkyResidualReport verify_mky(const HybridFeedback& h,
                             const MkyCertificate& cert, double rel_tol,
                             double abs_tol) {
  const auto n = h.A.rows();
  if (cert.P.rows() != n || cert.P.cols() != n || cert.Q.rows() != n ||
      cert.Q.cols() != n || cert.q1.size() != n) {
    throw DimensionMismatch("certificate dimensions do not match controller");
  }
  MkyResidualReport r;
  const Eigen::MatrixXd lyap = h.A.transpose() * cert.P + cert.P * h.A +
                               cert.q1 * cert.q1.transpose() +
                               cert.Delta * cert.Q;
  r.lyapunov_residual = lyap.norm();
  r.coupling_residual =
      (cert.P * h.b - h.c - coupling_gain(h) * cert.q1).norm();
  r.lyapunov_tolerance = rel_tol * cert.P.norm();
  r.coupling_tolerance = rel_tol * h.c.norm() + abs_tol;
  r.symmetry_defect = (cert.P - cert.P.transpose()).norm();
  r.P_min_eigenvalue = min_eigenvalue(cert.P);
  r.Q_min_eigenvalue = min_eigenvalue(cert.Q);
  r.delta_positive = cert.Delta > 0;
  r.passed = r.lyapunov_residual <= r.lyapunov_tolerance &&
             r.coupling_residual <= r.coupling_tolerance &&
             r.symmetry_defect <= rel_tol * std::max(1.0, cert.P.norm()) &&
             r.P_min_eigenvalue > 0 && r.Q_min_eigenvalue > 0 &&
             r.delta_positive;
  return r;
}

std::string MkyResidualReport::summary() const {
  std::ostringstream os;
  os << std::setprecision(6) << "lyapunov " << lyapunov_residual << " (tol "
     << lyapunov_tolerance << "), coupling " << coupling_residual << " (tol "
     << coupling_tolerance << "), min eig P " << P_min_eigenvalue
     << ", min eig Q " << Q_min_eigenvalue << (passed ? ": pass" : ": FAIL");
  return os.str();
}

namespace {
void write_block(std::ostream& os, const char* name, const Eigen::MatrixXd& m) {
  os << name << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << m(i, j);
    }
    os << '\n';
  }
}

Eigen::MatrixXd read_block(std::istream& is, const std::string& name,
                           Eigen::Index rows, Eigen::Index cols) {
  std::string label;
  if (!(is >> label) || label != name) {
    throw ParseError("certificate: expected block '" + name + "'");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      if (!(is >> m(i, j)))
        throw ParseError("certificate: short block '" + name + "'");
  return m;
}
}  // namespace

void write_certificate(std::ostream& os, const MkyCertificate& cert,
                       double rel_tol, double abs_tol) {
  const auto old = os.precision(17);
  os << "mky-certificate n " << cert.P.rows() << " rel_tol " << rel_tol
     << " abs_tol " << abs_tol << '\n';
  write_block(os, "P", cert.P);
  write_block(os, "q1", cert.q1.transpose());
  write_block(os, "Delta", Eigen::MatrixXd::Constant(1, 1, cert.Delta));
  write_block(os, "Q", cert.Q);
  os.precision(old);
}

MkyCertificate read_certificate(std::istream& is) {
  std::string tag, key;
  Eigen::Index n = 0;
  double rel = 0, abs = 0;
  std::string k1, k2;
  if (!(is >> tag >> key >> n >> k1 >> rel >> k2 >> abs) ||
      tag != "mky-certificate" || key != "n" || k1 != "rel_tol" ||
      k2 != "abs_tol" || n < 1) {
    throw ParseError("certificate: bad header");
  }
  MkyCertificate cert;
  cert.P = read_block(is, "P", n, n);
  cert.q1 = read_block(is, "q1", 1, n).transpose();
  cert.Delta = read_block(is, "Delta", 1, 1)(0, 0);
  cert.Q = read_block(is, "Q", n, n);
  return cert;
}

}  // namespace heatbeam
