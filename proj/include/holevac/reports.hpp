#pragma once

// Command layer behind the holevac CLI: configuration, orchestration of the
// physics modules, and the CSV/JSON report files.
//
// Every report embeds the fully resolved configuration, and reruns with the
// same configuration reproduce the files byte for byte.

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "holevac/analytic_shifts.hpp"
#include "holevac/dirac_spectrum.hpp"
#include "holevac/errors.hpp"
#include "holevac/evolution_oracle.hpp"
#include "holevac/potential.hpp"

namespace holevac::reports {

enum ExitCode : int { ok = 0, tolerance_breach = 1, invalid_config = 2, runtime_failure = 3 };

/// Configuration rejected at load time (maps to exit status 2).
class ConfigError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// A report file could not be written (maps to exit status 3).
class ReportIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  double m = 1.0;
  double L = 20.0 * pi;
  int w = 5;
  double q = 0.1;
  double amplitude = 1.0;
  int R = 300;  // p_R = 30 m at the baseline
  double T = 2000.0;
  /// Charge used by the evolution oracle column of `shift`.
  double oracle_q = 0.02;
  double integrator_step = 0.0;  // 0: automatic
  double quadrature_step = 0.0;  // 0: automatic
  double vacuum_B = 100.0;
  std::map<std::string, double> tolerances;
  std::uint64_t seed = 20060703;
  std::string output_dir = "holevac_out";
  int threads = 1;
  std::string format = "csv";

  ModelParams model() const;
  /// Baseline sinc potential on [-T, T].
  PotentialSpec potential() const;
  double tolerance(const std::string& name) const;
  /// Throws ConfigError.
  void validate() const;
};

/// Names accepted in the "tolerances" object, with their defaults.
const std::map<std::string, double>& default_tolerances();

RunConfig default_config();
/// Missing fields take their defaults; unknown fields are rejected.
RunConfig config_from_json(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& config);

/// Oracle basis for one mode: R = |r| + rungs w with enough rungs that the
/// outermost one stays below 1e-10 population.
ModelParams oracle_params(const RunConfig& config, const ModeIndex& mode, double q);
IntegratorConfig oracle_integrator(const RunConfig& config, double q);

struct CommandResult {
  int exit_code = ok;
  std::vector<std::filesystem::path> files;
  std::string summary;
};

struct ReportRow {
  ModeIndex mode;
  double p = 0.0;
  double E = 0.0;
  double shift_closed = 0.0;
  double shift_engine = 0.0;
  double shift_oracle = 0.0;  // measured shift / oracle_q^2
  double dev_engine = 0.0;
  double dev_oracle = 0.0;
};

/// |a - b| / max(|a|, |b|, 1e-300).
double relative_deviation(double a, double b);

std::vector<ModeIndex> default_shift_panel();
std::vector<ReportRow> shift_rows(const RunConfig& config,
                                  const std::vector<ModeIndex>& modes);

struct SuiteVerdict {
  std::string name;
  bool passed = true;
  long checks = 0;
  std::vector<std::string> counterexamples;  // first 10

  void record(bool ok, const std::string& what);
};

struct VerifyHooks {
  OverlapFn overlap = spinor_overlap_sq;
};

std::vector<SuiteVerdict> run_verify_suites(const RunConfig& config,
                                            const VerifyHooks& hooks = {});

struct SlaterPanelResult {
  std::size_t fixtures = 0;
  double max_deviation = 0.0;
  double max_identity_error = 0.0;
  bool includes_k5_n3 = false;
};

/// 100 seeded fixtures with K in 2..5 and N in {2, 3}.
SlaterPanelResult run_slater_panel(std::uint64_t seed, std::size_t count = 100);

CommandResult cmd_spectrum(const RunConfig& config);
CommandResult cmd_shift(const RunConfig& config, const std::vector<ModeIndex>& modes);
CommandResult cmd_vacuum(const RunConfig& config);
CommandResult cmd_evolve(const RunConfig& config, const ModeIndex& mode,
                         const std::vector<double>& q_values);
CommandResult cmd_verify(const RunConfig& config, const VerifyHooks& hooks = {});
CommandResult cmd_slater_check(const RunConfig& config);

/// "%.17g" formatting used by every CSV cell.
std::string format_double(double x);

}  // namespace holevac::reports
