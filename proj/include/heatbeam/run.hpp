#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heatbeam/analysis.hpp"
#include "heatbeam/assumptions.hpp"
#include "heatbeam/config.hpp"
#include "heatbeam/errors.hpp"
#include "heatbeam/mky.hpp"
#include "heatbeam/semidiscrete.hpp"
#include "heatbeam/timestepper.hpp"

namespace heatbeam {

/// Exit codes: 0 ok, 2 config, 3 assumption/certificate, 4 numerical.
int exit_code(ErrorFamily family);

/// Everything derived from a config before time stepping.
struct RunContext {
  RunConfig config;
  std::shared_ptr<const SemiDiscreteSystem> system;
  LyapunovConstantsd consts;
  double delta = 0;
  double dt = 0;
  std::optional<HybridFeedback> hybrid;
  std::optional<AssumptionReport> assumptions;
  std::optional<MkyCertificate> certificate;
  std::optional<HybridDeltaBound> hybrid_bound;
};

/// Builds the system, obtains the certificate (from the configured file, or
/// by solving), and fixes delta and dt. `stored_certificate` takes
/// precedence over both when given.
RunContext prepare(const RunConfig& cfg,
                   const std::optional<MkyCertificate>& stored_certificate =
                       std::nullopt);

using Verdicts = std::vector<std::pair<std::string, std::string>>;

/// Pass/fail lines computed from the sampled trajectory only, so a stored
/// time series reproduces them exactly.
Verdicts derive_verdicts(const RunContext& ctx, const Trajectory& traj,
                         const DecayReport& decay, std::uint64_t seed);

DecayReport decay_report(const RunContext& ctx, const Trajectory& traj);

/// Random-state check of the sandwich inequality at delta in
/// {0.1, 0.5, 0.9} / M.
bool random_sandwich(const RunContext& ctx, std::uint64_t seed,
                     int states = 1000);

struct SimulationResult {
  RunContext context;
  Trajectory trajectory;
  DecayReport decay;
  Verdicts verdicts;
};

SimulationResult run_simulation(const RunConfig& cfg, std::uint64_t seed);

void write_timeseries(std::ostream& os, const Trajectory& traj);
/// Inverse of write_timeseries; the controller comes from the caller.
Trajectory read_timeseries(std::istream& is, const ControllerSpec& controller);

struct RunOptions {
  std::optional<std::string> out_dir;  // overrides [output] directory
  std::uint64_t seed = 0;
  bool quiet = false;
};

/// Runs one subcommand (simulate, constants, check-controller, tune,
/// verify) and writes its artifacts. `verify` reads the effective config
/// back from the report in the output directory, so cfg may be empty
/// there. Errors are reported on err and mapped to exit codes.
int run_command(const std::string& command, const std::optional<RunConfig>& cfg,
                const RunOptions& options, std::ostream& out,
                std::ostream& err);

}  // namespace heatbeam
