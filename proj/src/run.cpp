#include "heatbeam/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "heatbeam/profiles.hpp"
#include "heatbeam/tuning.hpp"

namespace heatbeam {

namespace fs = std::filesystem;

int exit_code(ErrorFamily family) {
  switch (family) {
    case ErrorFamily::Config:
      return 2;
    case ErrorFamily::Assumption:
      return 3;
    case ErrorFamily::Numerical:
      return 4;
  }
  return 4;
}

namespace {

constexpr const char* kConfigBegin = "--- effective config ---";
constexpr const char* kConfigEnd = "--- end config ---";
constexpr const char* kTimeseriesHeader =
    "t,E_h,E_hybrid,L_h,w1_end,w2_end,q_norm,dissipation_residual";

std::string num(double v) { return format_number(v); }

std::string cell(double v) { return std::isnan(v) ? "" : format_number(v); }

const char* verdict(bool ok) { return ok ? "pass" : "fail"; }

MkyCertificate load_certificate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open certificate '" + path + "'");
  return read_certificate(in);
}

double auto_delta(const RunContext& ctx) {
  const auto& c = ctx.consts;
  const auto& p = ctx.config.material;
  if (const auto* s = std::get_if<StaticFeedback>(&ctx.config.controller)) {
    return default_delta(c, p, s->xi1, s->xi2);
  }
  const double half = 1.0 / (2.0 * c.M);
  if (ctx.hybrid_bound && ctx.hybrid_bound->certified()) {
    return std::min(half, 0.99 * ctx.hybrid_bound->bound);
  }
  return half;
}

void check_delta(const RunContext& ctx, double delta) {
  const auto& c = ctx.consts;
  const auto& p = ctx.config.material;
  double bound = 1.0 / c.M;
  if (const auto* s = std::get_if<StaticFeedback>(&ctx.config.controller)) {
    bound = admissible_delta_static(c, p, s->xi1, s->xi2);
  } else if (ctx.hybrid_bound && ctx.hybrid_bound->certified()) {
    bound = ctx.hybrid_bound->bound;
  }
  if (!(delta > 0) || !(delta < bound)) {
    throw DeltaOutOfRange("delta = " + num(delta) + " must lie in (0, " +
                          num(bound) + ")");
  }
}

InitialProfiles build_profiles(const RunConfig& cfg) {
  const auto& in = cfg.initial;
  const double l1 = cfg.material.l1, l2 = cfg.material.l2;
  if (in.profile == "tabulated") {
    std::ifstream f(in.path);
    if (!f) throw ParseError("cannot open tabulated profile '" + in.path + "'");
    return make_profiles(read_tabulated(f), in.amplitude, l1, l2);
  }
  Shape shape = zero_shape();
  if (in.profile == "sine") shape = sine_shape(in.k);
  if (in.profile == "gaussian") shape = gaussian_shape(in.center, in.width);
  return make_profiles(shape, in.amplitude, in.fields, l1, l2);
}

fs::path output_dir(const std::optional<RunConfig>& cfg, const RunOptions& opt) {
  if (opt.out_dir) return *opt.out_dir;
  if (cfg) return cfg->output_dir;
  throw ParseError("no output directory: pass --out or a config");
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot write '" + path.string() + "'");
  f << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot read '" + path.string() + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

void write_constants(std::ostream& os, const RunContext& ctx) {
  const auto& c = ctx.consts;
  const auto& p = ctx.config.material;
  const auto best = max_decay_rate(c, p);
  const auto at_best = decay_rate(c, p, best.delta_star);
  os << "[constants]\n"
     << "b1 = " << num(c.b1) << '\n'
     << "a1 = " << num(c.a1) << '\n'
     << "c1 = " << num(c.c1) << '\n'
     << "Mtilde = " << num(c.Mtilde) << '\n'
     << "M = " << num(c.M) << '\n'
     << "delta_max = " << num(c.delta_max) << '\n'
     << "sigma_max = " << num(best.sigma_max) << '\n'
     << "delta_star = " << num(best.delta_star) << '\n'
     << "prefactor_at_delta_star = " << num(at_best.prefactor) << '\n';
  if (const auto* s = std::get_if<StaticFeedback>(&ctx.config.controller)) {
    const auto with_gains = max_decay_rate(c, p, s->xi1, s->xi2);
    os << "admissible_delta = "
       << num(admissible_delta_static(c, p, s->xi1, s->xi2)) << '\n'
       << "delta_star_attainable = "
       << (with_gains.attainable.value_or(false) ? "true" : "false") << '\n';
  }
}

void write_assumptions(std::ostream& os, const AssumptionReport& a) {
  os << "[assumptions]\n"
     << "hurwitz = " << (a.hurwitz ? "true" : "false") << '\n'
     << "spectral_abscissa = " << num(a.spectral_abscissa) << '\n'
     << "controllability_rank = " << a.controllability_rank << '\n'
     << "observability_rank = " << a.observability_rank << '\n'
     << "margin_at_zero = " << num(a.margin_at_zero) << '\n'
     << "margin_on_grid = " << num(a.margin_on_grid) << '\n'
     << "margin_asymptotic = " << num(a.margin_asymptotic) << '\n'
     << "accepted = " << (a.accepted() ? "true" : "false") << '\n';
  for (const auto& w : a.warnings()) os << "warning = " << w << '\n';
  for (const auto& f : a.failures()) os << "failure = " << f << '\n';
}

void write_certificate_summary(std::ostream& os, const RunContext& ctx) {
  if (!ctx.certificate || !ctx.hybrid) return;
  const auto rep = verify_mky(*ctx.hybrid, *ctx.certificate);
  os << "[certificate]\n"
     << "Delta = " << num(ctx.certificate->Delta) << '\n'
     << "lyapunov_residual = " << num(rep.lyapunov_residual) << '\n'
     << "coupling_residual = " << num(rep.coupling_residual) << '\n'
     << "P_min_eigenvalue = " << num(rep.P_min_eigenvalue) << '\n'
     << "verified = " << (rep.passed ? "true" : "false") << '\n';
  if (ctx.hybrid_bound) {
    const auto& b = *ctx.hybrid_bound;
    os << "\n[hybrid_delta_bound]\n";
    static const char* names[] = {"branch_equivalence", "branch_mechanical",
                                  "branch_electrical", "branch_storage"};
    for (int k = 0; k < 4; ++k) os << names[k] << " = " << num(b.branches[k]) << '\n';
    os << "bound = " << num(b.bound) << '\n'
       << "lambda_min_Q = " << num(b.lambda_min_Q) << '\n'
       << "lambda_max_P = " << num(b.lambda_max_P) << '\n';
    for (const auto& w : b.warnings) os << "warning = " << w << '\n';
  }
}

void write_decay(std::ostream& os, const DecayReport& d) {
  os << "[decay]\n"
     << "applicable = " << (d.applicable ? "true" : "false") << '\n';
  if (!d.note.empty()) os << "note = " << d.note << '\n';
  os << "delta = " << num(d.delta) << '\n';
  if (d.applicable) {
    os << "sigma_theory = " << num(d.sigma_theory) << '\n'
       << "prefactor = " << num(d.prefactor) << '\n'
       << "envelope_ok = " << (d.envelope_ok ? "true" : "false") << '\n'
       << "envelope_margin = " << num(d.envelope_margin) << '\n'
       << "envelope_violations = " << d.violations << '\n'
       << "rate_ok = " << (d.rate_ok ? "true" : "false") << '\n';
  }
  if (d.fit) {
    os << "sigma_measured = " << num(d.fit->sigma) << '\n'
       << "fit_start = " << num(d.fit->t_start) << '\n'
       << "fit_end = " << num(d.fit->t_end) << '\n'
       << "fit_samples = " << d.fit->samples << '\n'
       << "fit_residual = " << num(d.fit->residual) << '\n';
  }
}

void write_verdicts(std::ostream& os, const Verdicts& v) {
  os << "[verdicts]\n";
  for (const auto& [k, val] : v) os << k << " = " << val << '\n';
}

Verdicts parse_verdicts(const std::string& report) {
  Verdicts v;
  std::istringstream is(report);
  std::string line;
  bool inside = false;
  while (std::getline(is, line)) {
    if (line.rfind('[', 0) == 0) {
      inside = line == "[verdicts]";
      continue;
    }
    if (!inside) continue;
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) v.emplace_back(line.substr(0, eq), line.substr(eq + 3));
  }
  return v;
}

std::string embedded_config(const std::string& report) {
  const auto a = report.find(kConfigBegin);
  const auto b = report.find(kConfigEnd);
  if (a == std::string::npos || b == std::string::npos || b < a) {
    throw ParseError("report has no embedded config");
  }
  const auto start = a + std::string(kConfigBegin).size();
  return report.substr(start, b - start);
}

}  // namespace

RunContext prepare(const RunConfig& cfg,
                   const std::optional<MkyCertificate>& stored_certificate) {
  RunContext ctx;
  ctx.config = cfg;
  const auto& m = cfg.material;
  const Grid g = build_grid(cfg.N, m.l1, m.l2);
  auto sys = std::make_shared<SemiDiscreteSystem>(
      assemble_semidiscrete(m, g, cfg.controller));
  ctx.hybrid = sys->hybrid;
  ctx.system = std::move(sys);
  ctx.consts = compute_lyapunov_constants(m, cfg.b1);

  if (ctx.hybrid) {
    ctx.assumptions = check_hybrid_assumptions(*ctx.hybrid);
    if (stored_certificate) {
      ctx.certificate = stored_certificate;
    } else if (!cfg.certificate.empty()) {
      ctx.certificate = load_certificate(cfg.certificate);
    } else {
      try {
        ctx.certificate = solve_mky(*ctx.hybrid, cfg.Q);
      } catch (const FactorizationFailed& e) {
        throw FactorizationFailed(std::string(e.what()) +
                                  "; supply [controller] certificate = PATH");
      }
    }
    const auto rep = verify_mky(*ctx.hybrid, *ctx.certificate);
    if (!rep.passed) {
      throw AssumptionsFailed("certificate does not verify: " + rep.summary());
    }
    ctx.hybrid_bound =
        admissible_delta_hybrid(ctx.consts, m, *ctx.hybrid, ctx.certificate);
  }

  if (cfg.delta) {
    check_delta(ctx, *cfg.delta);
    ctx.delta = *cfg.delta;
  } else {
    ctx.delta = auto_delta(ctx);
  }
  ctx.dt = cfg.dt.value_or(default_time_step(m, g));
  return ctx;
}

DecayReport decay_report(const RunContext& ctx, const Trajectory& traj) {
  const auto& p = ctx.config.material;
  if (ctx.hybrid_bound) {
    return verify_envelope(traj, ctx.consts, ctx.delta, p, *ctx.hybrid_bound,
                           ctx.config.fit_start);
  }
  return verify_envelope(traj, ctx.consts, ctx.delta, p, ctx.config.fit_start);
}

bool random_sandwich(const RunContext& ctx, std::uint64_t seed, int states) {
  const auto& sys = *ctx.system;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const auto draw = [&](Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
  };
  DiscreteState s = zero_state(sys.grid);
  for (const double frac : {0.1, 0.5, 0.9}) {
    const double delta = frac / ctx.consts.M;
    for (int k = 0; k < states; ++k) {
      draw(s.z);
      draw(s.u1);
      draw(s.u2);
      draw(s.w1);
      draw(s.w2);
      if (!sandwich_check(s, sys.params, sys.grid, ctx.consts, delta).ok)
        return false;
    }
  }
  return true;
}

Verdicts derive_verdicts(const RunContext& ctx, const Trajectory& traj,
                         const DecayReport& decay, std::uint64_t seed) {
  const auto& stored = traj.stored_energy();
  bool monotone = true, balanced = true;
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const double ref = std::max(stored[k - 1], 1.0);
    if (stored[k] - stored[k - 1] > kBalanceTolerance * ref) monotone = false;
    if (std::abs(traj.residual[k]) > kBalanceTolerance * ref) balanced = false;
  }
  Verdicts v;
  v.emplace_back(traj.has_hybrid_energy ? "hybrid_energy_nonincreasing"
                                        : "energy_nonincreasing",
                 verdict(monotone));
  v.emplace_back("energy_balance", verdict(balanced));
  v.emplace_back("envelope", decay.applicable ? verdict(decay.envelope_ok) : "n/a");
  v.emplace_back("decay_rate", decay.applicable ? verdict(decay.rate_ok) : "n/a");
  v.emplace_back("sandwich", verdict(random_sandwich(ctx, seed)));
  if (ctx.certificate && ctx.hybrid) {
    v.emplace_back("certificate", verdict(verify_mky(*ctx.hybrid, *ctx.certificate).passed));
  }
  return v;
}

SimulationResult run_simulation(const RunConfig& cfg, std::uint64_t seed) {
  SimulationResult r;
  r.context = prepare(cfg);
  const auto& ctx = r.context;

  SimulationConfig sim;
  sim.dt = ctx.dt;
  sim.T = cfg.T;
  sim.record_every = cfg.record_every;
  sim.solver_tolerance = cfg.solver_tolerance;
  sim.system = ctx.system;
  sim.initial = apply_initial_conditions(build_profiles(cfg), *ctx.system);
  sim.certificate = ctx.certificate;
  sim.lyapunov = LyapunovSetup{ctx.consts, ctx.delta};
  sim.keep_snapshots = cfg.snapshots;

  r.trajectory = simulate(sim);
  r.decay = decay_report(ctx, r.trajectory);
  r.verdicts = derive_verdicts(ctx, r.trajectory, r.decay, seed);
  return r;
}

void write_timeseries(std::ostream& os, const Trajectory& traj) {
  os << kTimeseriesHeader << '\n';
  for (std::size_t k = 0; k < traj.size(); ++k) {
    os << cell(traj.t[k]) << ',' << cell(traj.energy[k]) << ','
       << cell(traj.hybrid_energy[k]) << ',' << cell(traj.lyapunov[k]) << ','
       << cell(traj.w1_end[k]) << ',' << cell(traj.w2_end[k]) << ','
       << cell(traj.q_norm[k]) << ',' << cell(traj.residual[k]) << '\n';
  }
}

Trajectory read_timeseries(std::istream& is, const ControllerSpec& controller) {
  std::string line;
  if (!std::getline(is, line) || line != kTimeseriesHeader) {
    throw ParseError("time series: unexpected header");
  }
  Trajectory traj;
  traj.controller = controller;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  int row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      if (field.empty()) {
        vals.push_back(nan);
        continue;
      }
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(field, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != field.size() || used == 0) {
        throw ParseError("time series row " + std::to_string(row) + ": '" +
                         field + "'");
      }
      vals.push_back(v);
    }
    if (line.back() == ',') vals.push_back(nan);
    if (vals.size() != 8) {
      throw ParseError("time series row " + std::to_string(row) +
                       ": expected 8 columns");
    }
    traj.t.push_back(vals[0]);
    traj.energy.push_back(vals[1]);
    traj.hybrid_energy.push_back(vals[2]);
    traj.lyapunov.push_back(vals[3]);
    traj.w1_end.push_back(vals[4]);
    traj.w2_end.push_back(vals[5]);
    traj.q_norm.push_back(vals[6]);
    traj.residual.push_back(vals[7]);
  }
  if (traj.t.empty()) throw ParseError("time series has no rows");
  traj.has_hybrid_energy = !std::isnan(traj.hybrid_energy.front());
  traj.has_lyapunov = !std::isnan(traj.lyapunov.front());
  return traj;
}

namespace {

int cmd_simulate(const RunConfig& cfg, const RunOptions& opt, const fs::path& dir,
                 std::ostream& out) {
  const auto result = run_simulation(cfg, opt.seed);
  const auto& ctx = result.context;
  const auto& traj = result.trajectory;
  fs::create_directories(dir);

  std::ostringstream csv;
  write_timeseries(csv, traj);
  write_file(dir / "timeseries.csv", csv.str());

  if (ctx.certificate) {
    std::ostringstream cert;
    write_certificate(cert, *ctx.certificate);
    write_file(dir / "certificate.txt", cert.str());
  }
  if (cfg.snapshots) {
    std::ostringstream snap;
    snap << "t,j,z,u1,u2,w1,w2\n";
    for (const auto& s : traj.snapshots)
      for (Eigen::Index j = 0; j < s.z.size(); ++j)
        snap << num(s.t) << ',' << j << ',' << num(s.z[j]) << ',' << num(s.u1[j])
             << ',' << num(s.u2[j]) << ',' << num(s.w1[j]) << ','
             << num(s.w2[j]) << '\n';
    write_file(dir / "snapshots.csv", snap.str());
  }

  std::ostringstream rep;
  rep << "heatbeam report\ncommand = simulate\n"
      << kConfigBegin << '\n' << to_ini(cfg) << kConfigEnd << "\n\n"
      << "[run]\n"
      << "dimension = " << ctx.system->layout.dim() << '\n'
      << "dt = " << num(traj.dt) << '\n'
      << "steps = " << traj.steps << '\n'
      << "samples = " << traj.size() << '\n'
      << "seed = " << opt.seed << "\n\n"
      << "[energy]\n"
      << "initial = " << num(traj.stored_energy().front()) << '\n'
      << "final = " << num(traj.stored_energy().back()) << '\n'
      << "max_relative_residual = " << num(traj.max_relative_residual) << '\n'
      << "max_relative_increase = " << num(traj.max_relative_increase) << '\n'
      << "per_step_monotone = " << (traj.monotone ? "true" : "false") << "\n\n";
  write_constants(rep, ctx);
  rep << '\n';
  if (ctx.assumptions) {
    write_assumptions(rep, *ctx.assumptions);
    rep << '\n';
    write_certificate_summary(rep, ctx);
    rep << '\n';
  }
  write_decay(rep, result.decay);
  rep << '\n';
  write_verdicts(rep, result.verdicts);
  write_file(dir / "report.txt", rep.str());

  if (!opt.quiet) {
    out << "simulate: " << traj.steps << " steps, E " << num(traj.stored_energy().front())
        << " -> " << num(traj.stored_energy().back()) << '\n';
    for (const auto& [k, v] : result.verdicts) out << "  " << k << ": " << v << '\n';
    out << "artifacts in " << dir.string() << '\n';
  }
  return 0;
}

int cmd_constants(const RunConfig& cfg, const RunOptions& opt, const fs::path& dir,
                  std::ostream& out) {
  RunContext ctx;
  ctx.config = cfg;
  ctx.consts = compute_lyapunov_constants(cfg.material, cfg.b1);
  std::ostringstream os;
  write_constants(os, ctx);
  fs::create_directories(dir);
  write_file(dir / "constants.txt", os.str());
  if (!opt.quiet) out << os.str();
  return 0;
}

int cmd_check_controller(const RunConfig& cfg, const RunOptions& opt,
                         const fs::path& dir, std::ostream& out) {
  fs::create_directories(dir);
  std::ostringstream os;
  os << "[controller]\nkind = " << to_string(kind_of(cfg.controller)) << "\n\n";
  int status = 0;
  const auto hybrid = as_hybrid(cfg.controller);
  if (!hybrid) {
    RunContext ctx;
    ctx.config = cfg;
    ctx.consts = compute_lyapunov_constants(cfg.material, cfg.b1);
    write_constants(os, ctx);
  } else {
    const auto assumptions = check_hybrid_assumptions(*hybrid);
    write_assumptions(os, assumptions);
    os << '\n';
    if (!assumptions.accepted() && cfg.certificate.empty()) {
      status = exit_code(ErrorFamily::Assumption);
    } else {
      const RunContext ctx = prepare(cfg);
      write_certificate_summary(os, ctx);
      std::ostringstream cert;
      write_certificate(cert, *ctx.certificate);
      write_file(dir / "certificate.txt", cert.str());
    }
  }
  write_file(dir / "controller.txt", os.str());
  if (!opt.quiet) out << os.str();
  return status;
}

int cmd_tune(const RunConfig& cfg, const RunOptions& opt, const fs::path& dir,
             std::ostream& out) {
  const auto consts = compute_lyapunov_constants(cfg.material, cfg.b1);
  const auto result = tune_gains(cfg.material, consts, cfg.tune, cfg.tune_threads);
  fs::create_directories(dir);
  std::ostringstream csv;
  csv << "xi1,xi2,delta,sigma,admissible\n";
  for (const auto& s : result.grid)
    csv << num(s.xi1) << ',' << num(s.xi2) << ',' << num(s.delta) << ','
        << num(s.sigma) << ',' << num(s.admissible) << '\n';
  write_file(dir / "tune.csv", csv.str());

  std::ostringstream os;
  os << "[tune]\n"
     << "xi1 = " << num(result.xi1) << '\n'
     << "xi2 = " << num(result.xi2) << '\n'
     << "sigma = " << num(result.sigma) << '\n'
     << "delta = " << num(result.delta) << '\n'
     << "admissible = " << num(result.admissible) << '\n'
     << "sigma_max = " << num(result.sigma_max) << '\n'
     << "delta_star = " << num(result.delta_star) << '\n'
     << "delta_star_attainable = " << (result.attainable ? "true" : "false") << '\n';
  if (!(result.sigma > 0)) os << "warning = no admissible gains in the box\n";
  write_file(dir / "tune.txt", os.str());
  if (!opt.quiet) out << os.str();
  return 0;
}

int cmd_verify(const RunOptions& opt, const fs::path& dir, std::ostream& out) {
  const std::string report = read_file(dir / "report.txt");
  const RunConfig cfg = parse_config(embedded_config(report));
  std::optional<MkyCertificate> stored;
  if (controller_order(cfg.controller) > 0 && fs::exists(dir / "certificate.txt")) {
    stored = load_certificate((dir / "certificate.txt").string());
  }
  const RunContext ctx = prepare(cfg, stored);
  std::ifstream csv(dir / "timeseries.csv");
  if (!csv) throw ParseError("cannot read time series in '" + dir.string() + "'");
  const Trajectory traj = read_timeseries(csv, cfg.controller);
  const DecayReport decay = decay_report(ctx, traj);
  const Verdicts now = derive_verdicts(ctx, traj, decay, opt.seed);
  const Verdicts before = parse_verdicts(report);
  const bool match = now == before;

  std::ostringstream os;
  write_verdicts(os, now);
  os << "\n[comparison]\nmatch = " << (match ? "true" : "false") << '\n';
  for (const auto& [k, v] : before) {
    const auto it = std::find_if(now.begin(), now.end(),
                                 [&](const auto& e) { return e.first == k; });
    if (it == now.end() || it->second != v)
      os << "mismatch = " << k << " (report " << v << ")\n";
  }
  write_file(dir / "verify.txt", os.str());
  if (!opt.quiet) out << os.str();
  return match ? 0 : exit_code(ErrorFamily::Numerical);
}

}  // namespace

int run_command(const std::string& command, const std::optional<RunConfig>& cfg,
                const RunOptions& options, std::ostream& out,
                std::ostream& err) {
  try {
    const fs::path dir = output_dir(cfg, options);
    if (command == "verify") return cmd_verify(options, dir, out);
    if (!cfg) throw ParseError(command + " needs --config");
    if (command == "simulate") return cmd_simulate(*cfg, options, dir, out);
    if (command == "constants") return cmd_constants(*cfg, options, dir, out);
    if (command == "check-controller")
      return cmd_check_controller(*cfg, options, dir, out);
    if (command == "tune") return cmd_tune(*cfg, options, dir, out);
    throw ParseError("unknown command '" + command + "'");
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.family());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(ErrorFamily::Config);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(ErrorFamily::Numerical);
  }
}

}  // namespace heatbeam
