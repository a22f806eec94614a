// holevac: vacuum-shift reports for a Dirac sea driven by a separable pulse.
//
//   holevac [--config cfg.json] [--out dir] [--seed n] [--threads n]
//           [--format csv|json] <spectrum|shift|vacuum|evolve|verify|slater-check>
//
// Exit status: 0 all checks pass, 1 tolerance breach, 2 invalid config,
// 3 runtime or I/O failure.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "holevac/errors.hpp"
#include "holevac/reports.hpp"

namespace rep = holevac::reports;

int main(int argc, char** argv) {
  CLI::App app{"Dirac-sea vacuum energy shift reports"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> format;
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "seed for randomized checks");
  app.add_option("--threads", threads, "worker threads");
  app.add_option("--format", format, "table format: csv or json");

  auto* spectrum = app.add_subcommand("spectrum", "free spectrum table");
  auto* shift = app.add_subcommand("shift", "per-mode second-order shifts, three ways");
  std::vector<std::string> shift_modes;
  shift->add_option("--modes", shift_modes, "modes as lambda:r, e.g. -1:0")->delimiter(',');
  auto* vacuum = app.add_subcommand("vacuum", "total sea shift and its convergence");
  auto* evolve = app.add_subcommand("evolve", "direct evolution scaling study");
  std::string evolve_mode = "-1:0";
  std::vector<double> q_values{0.08, 0.04, 0.02};
  evolve->add_option("--mode", evolve_mode, "initial mode as lambda:r");
  evolve->add_option("--q", q_values, "strictly decreasing charges")->delimiter(',');
  auto* verify = app.add_subcommand("verify", "invariant suites of every module");
  auto* slater = app.add_subcommand("slater-check", "Slater-determinant reduction panel");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? rep::ok : rep::invalid_config;
  }

  try {
    rep::RunConfig config =
        config_path.empty() ? rep::default_config() : rep::load_config(config_path);
    if (out_dir) config.output_dir = *out_dir;
    if (seed) config.seed = *seed;
    if (threads) config.threads = *threads;
    if (format) config.format = *format;
    config.validate();

    rep::CommandResult result;
    if (spectrum->parsed()) {
      result = rep::cmd_spectrum(config);
    } else if (shift->parsed()) {
      std::vector<holevac::ModeIndex> modes;
      try {
        for (const auto& text : shift_modes) modes.push_back(holevac::parse_mode(text));
      } catch (const std::exception& e) {
        throw rep::ConfigError(e.what());
      }
      if (modes.empty()) modes = rep::default_shift_panel();
      result = rep::cmd_shift(config, modes);
    } else if (vacuum->parsed()) {
      result = rep::cmd_vacuum(config);
    } else if (evolve->parsed()) {
      holevac::ModeIndex mode;
      try {
        mode = holevac::parse_mode(evolve_mode);
      } catch (const std::exception& e) {
        throw rep::ConfigError(e.what());
      }
      result = rep::cmd_evolve(config, mode, q_values);
    } else if (verify->parsed()) {
      result = rep::cmd_verify(config);
    } else if (slater->parsed()) {
      result = rep::cmd_slater_check(config);
    }
    std::cout << result.summary << "\n";
    for (const auto& f : result.files) std::cout << "wrote " << f.string() << "\n";
    return result.exit_code;
  } catch (const holevac::ParameterError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return rep::invalid_config;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return rep::invalid_config;
  } catch (const holevac::IntegratorHealthError& e) {
    std::cerr << "integrator failure: " << e.what() << "\n";
    return rep::runtime_failure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return rep::runtime_failure;
  }
}
