#pragma once

#include <iosfwd>
#include <string>

#include <Eigen/Core>

#include "heatbeam/controller.hpp"

namespace heatbeam {

/// Storage certificate for a hybrid controller:
///   A^T P + P A = -q1 q1^T - Delta Q,
///   P b - c     = sqrt(2 (d - Gamma)) q1,
/// with P and Q symmetric positive definite.
struct MkyCertificate {
  Eigen::MatrixXd P;
  Eigen::VectorXd q1;
  double Delta = 0;
  Eigen::MatrixXd Q;
};

inline constexpr double kCertificateRelTol = 1e-8;
inline constexpr double kCertificateAbsTol = 1e-12;

struct MkyResidualReport {
  double lyapunov_residual = 0;  // ||A^T P + P A + q1 q1^T + Delta Q||_F
  double coupling_residual = 0;  // ||P b - c - sqrt(2(d-Gamma)) q1||
  double lyapunov_tolerance = 0;
  double coupling_tolerance = 0;
  double symmetry_defect = 0;    // ||P - P^T||_F
  double P_min_eigenvalue = 0;
  double Q_min_eigenvalue = 0;
  bool delta_positive = false;
  bool passed = false;

  std::string summary() const;
};

/// Solves the two identities for (P, q1, Delta) given Q.
///
/// n = 1 is closed form. With d > Gamma the free parameter P is chosen to
/// maximize Delta; with d == Gamma, P = c/b and the remaining dissipation
/// -2 A P is split evenly between q1^2 and Delta Q. For n >= 2 (and
/// d > Gamma) the first identity is rewritten as the positive-real Riccati
/// equation and solved through the stable invariant subspace of its
/// Hamiltonian; this path is best effort and should be checked with
/// verify_mky().
MkyCertificate solve_mky(const HybridFeedback& h,
                         const Eigen::Ref<const Eigen::MatrixXd>& Q);

MkyResidualReport verify_mky(const HybridFeedback& h,
                             const MkyCertificate& cert,
                             double rel_tol = kCertificateRelTol,
                             double abs_tol = kCertificateAbsTol);

/// Plain-text certificate: a header line
///   mky-certificate n <n> rel_tol <tol> abs_tol <tol>
/// followed by the blocks "P", "q1", "Delta", "Q", each row-major with one
/// matrix row per line.
void write_certificate(std::ostream& os, const MkyCertificate& cert,
                       double rel_tol = kCertificateRelTol,
                       double abs_tol = kCertificateAbsTol);
MkyCertificate read_certificate(std::istream& is);

}  // namespace heatbeam
