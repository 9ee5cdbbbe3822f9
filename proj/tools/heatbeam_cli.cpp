#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "heatbeam/config.hpp"
#include "heatbeam/errors.hpp"
#include "heatbeam/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Heat rod coupled to a magnetizable piezoelectric beam: "
               "simulation, decay certificates and gain tuning."};
  std::string command;
  std::string config_path;
  std::string out_dir;
  heatbeam::RunOptions options;

  app.add_option("command", command, "simulate | constants | check-controller | tune | verify")
      ->required()
      ->check(CLI::IsMember(
          {"simulate", "constants", "check-controller", "tune", "verify"}));
  app.add_option("--config", config_path, "INI run configuration");
  app.add_option("--out", out_dir, "output directory (overrides [output] directory)");
  app.add_option("--seed", options.seed, "seed for random-state checks");
  app.add_flag("--quiet", options.quiet, "only report errors");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : heatbeam::exit_code(heatbeam::ErrorFamily::Config);
  }
  if (!out_dir.empty()) options.out_dir = out_dir;

  std::optional<heatbeam::RunConfig> cfg;
  if (!config_path.empty()) {
    try {
      cfg = heatbeam::load_config(config_path);
    } catch (const heatbeam::Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return heatbeam::exit_code(e.family());
    }
  } else if (command != "verify") {
    std::cerr << "error: " << command << " needs --config\n";
    return heatbeam::exit_code(heatbeam::ErrorFamily::Config);
  }
  return heatbeam::run_command(command, cfg, options, std::cout, std::cerr);
}
