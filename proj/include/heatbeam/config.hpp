#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "heatbeam/controller.hpp"
#include "heatbeam/material.hpp"
#include "heatbeam/tuning.hpp"

namespace heatbeam {

struct InitialSpec {
  std::string profile = "sine";  // zero | sine | gaussian | tabulated
  int k = 1;
  double center = 0.5;
  double width = 0.1;
  double amplitude = 1;
  std::vector<std::string> fields{"w1"};
  std::string path;  // tabulated samples
};

/// Effective run configuration; every field has its default filled in.
///
/// Sections and keys:
///   [material]   rho mu alpha1 beta gamma kappa l1 l2   (all required)
///   [grid]       N = 40
///   [time]       dt = auto, T = 10, record_every = 1, solver_tolerance
///   [controller] kind = open-loop | static | scalar | hybrid, plus
///                xi1 xi2 (static), xi1 xi2 eta (scalar),
///                xi1 A b c d Gamma zeta (hybrid); Q and certificate for
///                scalar and hybrid
///   [lyapunov]   b1 = 1, delta = auto, fit_start = 0.2
///   [output]     directory = out, snapshots = false
///   [initial]    profile, k, center, width, amplitude, fields, path
///   [tune]       xi1_lo xi1_hi xi2_lo xi2_hi points threads
/// Matrices are written row by row, rows separated by ';'.
struct RunConfig {
  MaterialParamsd material;
  int N = 40;

  std::optional<double> dt;  // empty: auto
  double T = 10;
  int record_every = 1;
  double solver_tolerance = 1e-13;

  ControllerSpec controller = OpenLoop{};
  Eigen::MatrixXd Q;        // storage weight, dynamic controllers only
  std::string certificate;  // path, optional

  double b1 = 1;
  std::optional<double> delta;  // empty: auto
  double fit_start = 0.2;

  std::string output_dir = "out";
  bool snapshots = false;

  InitialSpec initial;
  GainBox tune;
  unsigned tune_threads = 0;
};

/// Parses INI text. Unknown sections or keys, keys that do not belong to the
/// chosen controller kind, and malformed numbers are errors. Material and
/// controller are validated before returning.
RunConfig parse_config(const std::string& text);

/// Reads a file; relative certificate and profile paths are resolved against
/// the file's directory.
RunConfig load_config(const std::string& path);

/// Canonical INI text with every key (defaults included), numbers at 17
/// significant digits. parse_config(to_ini(c)) reproduces c.
std::string to_ini(const RunConfig& cfg);

/// "%.17g"
std::string format_number(double v);

}  // namespace heatbeam
