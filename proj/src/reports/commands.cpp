#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include "holevac/hole_theory.hpp"
#include "holevac/parallel.hpp"
#include "holevac/perturbation_engine.hpp"
#include "holevac/reports.hpp"

namespace holevac::reports {

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double relative_deviation(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

namespace {

// All report files go through here; one writer at a time.
std::mutex writer_mutex;

fs::path write_report(const RunConfig& config, const std::string& name,
                      const std::string& content) {
  std::lock_guard<std::mutex> lock(writer_mutex);
  const fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw ReportIoError("cannot create output directory " + dir.string() + ": " +
                        ec.message());
  }
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ReportIoError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw ReportIoError("write failed for " + path.string());
  return path;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

// First line of every CSV: the resolved config as compact JSON.
std::string csv_preamble(const RunConfig& config) {
  return "# holevac config " + to_json(config).dump() + "\n";
}

std::string join_row(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  return line + "\n";
}

json mode_json(const ModeIndex& mode) {
  return json{{"lambda", mode.lambda()}, {"r", mode.r}};
}

std::string describe(const ReportRow& row, const char* which, double dev, double tol) {
  std::ostringstream s;
  s << to_string(row.mode) << " " << which << " deviation " << dev << " > " << tol;
  return s.str();
}

}  // namespace

// ---------------------------------------------------------------- spectrum

CommandResult cmd_spectrum(const RunConfig& config) {
  config.validate();
  const ModelParams params = config.model();
  CommandResult res;
  const auto modes = basis_modes(params);
  if (config.format == "json") {
    json rows = json::array();
    for (const auto& mode : modes) {
      rows.push_back({{"lambda", mode.lambda()},
                      {"r", mode.r},
                      {"p", momentum(mode.r, params)},
                      {"E", energy_magnitude(mode.r, params)},
                      {"eps", energy(mode, params)}});
    }
    res.files.push_back(write_report(
        config, "spectrum.json", dump({{"config", to_json(config)}, {"modes", rows}})));
  } else {
    std::string text = csv_preamble(config) + "lambda,r,p,E,eps\n";
    for (const auto& mode : modes) {
      text += join_row({std::to_string(mode.lambda()), std::to_string(mode.r),
                        format_double(momentum(mode.r, params)),
                        format_double(energy_magnitude(mode.r, params)),
                        format_double(energy(mode, params))});
    }
    res.files.push_back(write_report(config, "spectrum.csv", text));
  }
  res.summary = std::to_string(modes.size()) + " modes";
  return res;
}

// ------------------------------------------------------------------- shift

std::vector<ModeIndex> default_shift_panel() {
  return {sea_mode(-20), sea_mode(-10), sea_mode(0), sea_mode(10), sea_mode(20),
          positive_mode(10)};
}

std::vector<ReportRow> shift_rows(const RunConfig& config,
                                  const std::vector<ModeIndex>& modes) {
  config.validate();
  const ModelParams params = config.model();
  const PotentialSpec v = config.potential();
  v.validate(params);
  for (const auto& mode : modes) {
    if (std::abs(mode.r) + config.w > config.R) {
      throw ConfigError("mode " + to_string(mode) + " needs R >= |r| + w = " +
                        std::to_string(std::abs(mode.r) + config.w));
    }
  }
  const QuadratureConfig quad{config.quadrature_step};
  return parallel_map(modes.size(), config.threads, [&](std::size_t i) {
    const ModeIndex mode = modes[i];
    ReportRow row;
    row.mode = mode;
    row.p = momentum(mode.r, params);
    row.E = energy_magnitude(mode.r, params);
    row.shift_closed = shift_closed(mode, config.w, params);
    row.shift_engine = second_order_shift_sum(v, mode, params, quad);
    if (config.oracle_q > 0.0 && config.amplitude != 0.0) {
      const double q = config.oracle_q;
      row.shift_oracle = measured_shift(mode, v, q, oracle_params(config, mode, q),
                                        oracle_integrator(config, q)) /
                         (q * q);
    }
    row.dev_engine = relative_deviation(row.shift_engine, row.shift_closed);
    row.dev_oracle = config.oracle_q > 0.0
                         ? relative_deviation(row.shift_oracle, row.shift_closed)
                         : 0.0;
    return row;
  });
}

CommandResult cmd_shift(const RunConfig& config, const std::vector<ModeIndex>& modes) {
  const auto rows = shift_rows(config, modes);
  const double tol_engine = config.tolerance("engine_vs_closed");
  const double tol_oracle = config.tolerance("oracle_vs_closed");
  std::vector<std::string> breaches;
  for (const auto& row : rows) {
    if (row.dev_engine > tol_engine) {
      breaches.push_back(describe(row, "engine", row.dev_engine, tol_engine));
    }
    if (config.oracle_q > 0.0 && row.dev_oracle > tol_oracle) {
      breaches.push_back(describe(row, "oracle", row.dev_oracle, tol_oracle));
    }
  }

  CommandResult res;
  if (config.format == "json") {
    json out = json::array();
    for (const auto& row : rows) {
      out.push_back({{"lambda", row.mode.lambda()},
                     {"r", row.mode.r},
                     {"p", row.p},
                     {"E", row.E},
                     {"shift_closed", row.shift_closed},
                     {"shift_engine", row.shift_engine},
                     {"shift_oracle", row.shift_oracle},
                     {"dev_engine", row.dev_engine},
                     {"dev_oracle", row.dev_oracle}});
    }
    res.files.push_back(write_report(config, "shift.json",
                                     dump({{"config", to_json(config)},
                                           {"rows", out},
                                           {"breaches", breaches}})));
  } else {
    std::string text = csv_preamble(config) +
                       "lambda,r,p,E,shift_closed,shift_engine,shift_oracle,"
                       "dev_engine,dev_oracle\n";
    for (const auto& row : rows) {
      text += join_row({std::to_string(row.mode.lambda()), std::to_string(row.mode.r),
                        format_double(row.p), format_double(row.E),
                        format_double(row.shift_closed), format_double(row.shift_engine),
                        format_double(row.shift_oracle), format_double(row.dev_engine),
                        format_double(row.dev_oracle)});
    }
    res.files.push_back(write_report(config, "shift.csv", text));
  }
  std::ostringstream s;
  s << rows.size() << " modes";
  for (const auto& b : breaches) s << "\nbreach: " << b;
  res.summary = s.str();
  res.exit_code = breaches.empty() ? ok : tolerance_breach;
  return res;
}

// ------------------------------------------------------------------ vacuum

CommandResult cmd_vacuum(const RunConfig& config) {
  config.validate();
  const ModelParams params = config.model();
  std::set<int> R_set{config.w, 10, 20, 50, 100, 200, config.R};
  std::vector<int> R_ladder;
  for (int R : R_set) {
    if (R >= config.w && R <= config.R) R_ladder.push_back(R);
  }
  const double k = momentum(config.w, params);
  std::set<double> B_set{1.0, 3.0, 10.0, 30.0, 100.0, config.vacuum_B};
  std::vector<double> B_ladder;
  for (double B : B_set) {
    if (B > k) B_ladder.push_back(B);
  }
  const VacuumReport rep =
      vacuum_report(config.w, config.q, params, config.vacuum_B, R_ladder, B_ladder);

  // Same total through the N-electron bookkeeping.
  const VacuumOccupancy sea = VacuumOccupancy::filled_sea(params);
  std::vector<ShiftRecord> records;
  records.reserve(sea.occupied().size());
  for (const auto& mode : sea.occupied()) {
    records.push_back({mode, ShiftMethod::closed_form, shift_closed(mode, config.w, params)});
  }
  const double total = vacuum_total_shift(records, config.q, sea);
  const double exact_tail = std::abs(rep.asymptotic_limit - rep.discrete_partial_sum);

  std::vector<std::string> breaches;
  const double quad_dev = relative_deviation(rep.integral_quadrature_B, rep.integral_finite_B);
  if (rep.integral_deviation > config.tolerance("vacuum_finite_B")) {
    breaches.push_back("finite-B integral deviates from the limit by " +
                       format_double(rep.integral_deviation));
  }
  if (quad_dev > config.tolerance("vacuum_quadrature")) {
    breaches.push_back("quadrature deviates from the finite-B closed form by " +
                       format_double(quad_dev));
  }
  if (config.q > 0.0) {
    for (double x : {rep.discrete_partial_sum, rep.integral_finite_B,
                     rep.integral_quadrature_B, rep.asymptotic_limit, total}) {
      if (!(x < 0.0)) breaches.push_back("non-negative vacuum value " + format_double(x));
    }
  }

  const auto ladder_json = [](const std::vector<VacuumLadderPoint>& ladder) {
    json arr = json::array();
    double prev = INFINITY;
    for (const auto& pt : ladder) {
      arr.push_back({{"cutoff", pt.cutoff},
                     {"value", pt.value},
                     {"relative_deviation", pt.relative_deviation},
                     {"monotone", pt.relative_deviation <= prev}});
      prev = pt.relative_deviation;
    }
    return arr;
  };
  const json doc = {
      {"config", to_json(config)},
      {"q", rep.q},
      {"k", rep.k},
      {"R", params.R},
      {"discrete_partial_sum", rep.discrete_partial_sum},
      {"tail_bound", rep.tail_bound},
      {"exact_tail", exact_tail},
      {"density_weighted_sum", rep.density_weighted_sum},
      {"hole_theory_total", total},
      {"B", rep.B},
      {"integral_finite_B", rep.integral_finite_B},
      {"integral_quadrature_B", rep.integral_quadrature_B},
      {"limit", rep.asymptotic_limit},
      {"sum_deviation", rep.sum_deviation},
      {"integral_deviation", rep.integral_deviation},
      {"quadrature_deviation", quad_dev},
      {"sum_ladder", ladder_json(rep.sum_ladder)},
      {"integral_ladder", ladder_json(rep.integral_ladder)},
      {"breaches", breaches}};

  CommandResult res;
  res.files.push_back(write_report(config, "vacuum.json", dump(doc)));

  std::string text = csv_preamble(config) + "kind,cutoff,value,relative_deviation,monotone\n";
  const auto emit = [&](const char* kind, const std::vector<VacuumLadderPoint>& ladder) {
    double prev = INFINITY;
    for (const auto& pt : ladder) {
      text += join_row({kind, format_double(pt.cutoff), format_double(pt.value),
                        format_double(pt.relative_deviation),
                        pt.relative_deviation <= prev ? "1" : "0"});
      prev = pt.relative_deviation;
    }
  };
  emit("sum", rep.sum_ladder);
  emit("integral", rep.integral_ladder);
  res.files.push_back(write_report(config, "vacuum_convergence.csv", text));

  std::ostringstream s;
  s << "limit " << format_double(rep.asymptotic_limit) << ", finite-B "
    << format_double(rep.integral_finite_B) << ", partial sum "
    << format_double(rep.discrete_partial_sum);
  for (const auto& b : breaches) s << "\nbreach: " << b;
  res.summary = s.str();
  res.exit_code = breaches.empty() ? ok : tolerance_breach;
  return res;
}

// ------------------------------------------------------------------ evolve

CommandResult cmd_evolve(const RunConfig& config, const ModeIndex& mode,
                         const std::vector<double>& q_values) {
  config.validate();
  if (q_values.empty()) throw ConfigError("evolve needs at least one q value");
  for (std::size_t i = 0; i < q_values.size(); ++i) {
    if (!(q_values[i] > 0.0) || (i > 0 && !(q_values[i] < q_values[i - 1]))) {
      throw ConfigError("q values must be positive and strictly decreasing");
    }
  }
  const double q_max = q_values.front();
  const ModelParams params = oracle_params(config, mode, q_max);
  const IntegratorConfig ic = oracle_integrator(config, q_max);
  const PotentialSpec v = config.potential();
  const double reference = shift_closed(mode, config.w, params);
  const ScalingStudy study = scaling_study(mode, v, q_values, reference, params, ic);

  std::vector<std::string> breaches;
  for (std::size_t i = 0; i < study.q_values.size(); ++i) {
    if (study.norm_drifts[i] > config.tolerance("norm_drift")) {
      breaches.push_back("norm drift " + format_double(study.norm_drifts[i]) + " at q=" +
                         format_double(study.q_values[i]));
    }
  }
  std::optional<double> extrap_dev;
  if (study.fit_status == "ok") {
    if (*study.fitted_order < config.tolerance("remainder_order")) {
      breaches.push_back("remainder exponent " + format_double(*study.fitted_order) +
                         " below " + format_double(config.tolerance("remainder_order")));
    }
    extrap_dev = relative_deviation(*study.extrapolated, reference);
    if (*extrap_dev > config.tolerance("extrapolation")) {
      breaches.push_back("extrapolated coefficient deviates by " + format_double(*extrap_dev));
    }
  }

  json shifts_over_q2 = json::array();
  for (std::size_t i = 0; i < study.q_values.size(); ++i) {
    shifts_over_q2.push_back(study.shifts[i] / (study.q_values[i] * study.q_values[i]));
  }
  const auto opt = [](const std::optional<double>& x) {
    return x ? json(*x) : json(nullptr);
  };
  const json doc = {{"config", to_json(config)},
                    {"mode", mode_json(mode)},
                    {"basis_R", params.R},
                    {"ladder_rungs", ic.ladder_rungs},
                    {"q_values", study.q_values},
                    {"shifts", study.shifts},
                    {"shifts_over_q2", shifts_over_q2},
                    {"residuals", study.residuals},
                    {"norm_drifts", study.norm_drifts},
                    {"reference", study.reference},
                    {"fit_status", study.fit_status},
                    {"fitted_order", opt(study.fitted_order)},
                    {"extrapolated", opt(study.extrapolated)},
                    {"extrapolation_deviation", opt(extrap_dev)},
                    {"breaches", breaches}};
  CommandResult res;
  res.files.push_back(write_report(config, "evolve.json", dump(doc)));
  std::ostringstream s;
  s << to_string(mode) << ": fit " << study.fit_status;
  if (study.fitted_order) s << ", exponent " << *study.fitted_order;
  if (study.extrapolated) s << ", extrapolated " << format_double(*study.extrapolated);
  for (const auto& b : breaches) s << "\nbreach: " << b;
  res.summary = s.str();
  res.exit_code = breaches.empty() ? ok : tolerance_breach;
  return res;
}

// -------------------------------------------------------- verify / slater

SlaterPanelResult run_slater_panel(std::uint64_t seed, std::size_t count) {
  SlaterPanelResult out;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t K = 2 + i % 4;
    const std::size_t N = std::min<std::size_t>(K, 2 + (i / 4) % 2);
    const SlaterFixture fix = random_slater_fixture(K, N, seed + i);
    const double dev =
        std::abs(slater_expectation_bruteforce(fix) - slater_expectation_reduced(fix));
    out.max_deviation = std::max(out.max_deviation, dev);
    const SlaterFixture id = with_identity_operator(fix);
    out.max_identity_error =
        std::max(out.max_identity_error,
                 std::abs(slater_expectation_bruteforce(id) - static_cast<double>(N)));
    if (K == 5 && N == 3) out.includes_k5_n3 = true;
    ++out.fixtures;
  }
  return out;
}

CommandResult cmd_slater_check(const RunConfig& config) {
  config.validate();
  const SlaterPanelResult panel = run_slater_panel(config.seed);
  const double tol = config.tolerance("slater");
  const bool pass = panel.max_deviation <= tol && panel.max_identity_error <= tol &&
                    panel.includes_k5_n3;
  const json doc = {{"config", to_json(config)},
                    {"seed", config.seed},
                    {"fixtures", panel.fixtures},
                    {"max_deviation", panel.max_deviation},
                    {"max_identity_error", panel.max_identity_error},
                    {"includes_k5_n3", panel.includes_k5_n3},
                    {"passed", pass}};
  CommandResult res;
  res.files.push_back(write_report(config, "slater_check.json", dump(doc)));
  res.summary = "max deviation " + format_double(panel.max_deviation);
  res.exit_code = pass ? ok : tolerance_breach;
  return res;
}

CommandResult cmd_verify(const RunConfig& config, const VerifyHooks& hooks) {
  const auto suites = run_verify_suites(config, hooks);
  bool all = true;
  json arr = json::array();
  std::ostringstream s;
  for (const auto& suite : suites) {
    all = all && suite.passed;
    arr.push_back({{"name", suite.name},
                   {"passed", suite.passed},
                   {"checks", suite.checks},
                   {"counterexamples", suite.counterexamples}});
    s << (suite.passed ? "PASS " : "FAIL ") << suite.name << " (" << suite.checks
      << " checks)\n";
    for (const auto& c : suite.counterexamples) s << "  " << c << "\n";
  }
  CommandResult res;
  res.files.push_back(write_report(
      config, "verify.json",
      dump({{"config", to_json(config)}, {"seed", config.seed}, {"suites", arr},
            {"passed", all}})));
  res.summary = s.str();
  res.exit_code = all ? ok : tolerance_breach;
  return res;
}

}  // namespace holevac::reports
