#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "holevac/hole_theory.hpp"
#include "holevac/perturbation_engine.hpp"
#include "holevac/reports.hpp"

namespace holevac::reports {

void SuiteVerdict::record(bool ok_, const std::string& what) {
  ++checks;
  if (ok_) return;
  passed = false;
  if (counterexamples.size() < 10) counterexamples.push_back(what);
}

namespace {

template <class... Parts>
std::string cat(const Parts&... parts) {
  std::ostringstream s;
  s.precision(17);
  (s << ... << parts);
  return s.str();
}

SuiteVerdict spectrum_suite(const RunConfig& config) {
  SuiteVerdict v;
  v.name = "spectrum";
  const ModelParams params{config.m, config.L, std::max(config.R, 64)};
  const double tol = config.tolerance("spectrum");
  for (int r = -64; r <= 64; ++r) {
    const ModeIndex neg = sea_mode(r), pos = positive_mode(r);
    for (const ModeIndex& mode : {neg, pos}) {
      const Spinor u = spinor(mode, params);
      const double norm_err = std::abs(norm_sq(u) * params.L - 1.0);
      v.record(norm_err <= tol, cat(to_string(mode), " normalization error ", norm_err));
      const double eps = energy(mode, params);
      const Spinor hu = apply_free_hamiltonian(momentum(r, params), params.m, u);
      const double eig_err = std::sqrt(norm_sq({hu.upper - eps * u.upper,
                                                hu.lower - eps * u.lower}) /
                                       norm_sq(u)) /
                             std::abs(eps);
      v.record(eig_err <= tol, cat(to_string(mode), " eigen-relation error ", eig_err));
      v.record(std::abs(eps) >= params.m, cat(to_string(mode), " |eps| below m"));
    }
    const double cross = std::abs(dot(spinor(neg, params), spinor(pos, params))) * params.L;
    v.record(cross <= tol, cat("r=", r, " cross-sign overlap ", cross));
    v.record(energy(neg, params) == -energy(pos, params),
             cat("r=", r, " energies not mirror images"));
  }
  // Full mode functions on the spatial grid, a few representatives.
  const ModelParams grid{config.m, config.L, 64};
  const std::vector<ModeIndex> reps{sea_mode(-64), sea_mode(0), positive_mode(0),
                                    positive_mode(37), sea_mode(37)};
  for (const auto& a : reps) {
    for (const auto& b : reps) {
      const complex ip = basis_inner_product(a, b, grid, 0.3);
      const double want = a == b ? 1.0 : 0.0;
      const double err = std::abs(ip - want);
      v.record(err <= tol, cat("<", to_string(a), "|", to_string(b), "> error ", err));
    }
  }
  return v;
}

SuiteVerdict selection_rule_suite(const RunConfig& config) {
  SuiteVerdict v;
  v.name = "selection_rule";
  const ModelParams params = config.model();
  PotentialSpec pot = config.potential();
  if (pot.amplitude == 0.0) pot.amplitude = 1.0;
  const double t = 0.7;
  const double g = pot.pulse(t, params.m);
  const double scale = std::abs(pot.amplitude * g) / 2.0;
  for (const ModeIndex& from : {sea_mode(0), positive_mode(3), sea_mode(-7)}) {
    for (EnergySign sign : {EnergySign::negative, EnergySign::positive}) {
      for (int s = from.r - 12; s <= from.r + 12; ++s) {
        if (std::abs(s) > params.R) continue;
        const ModeIndex to{sign, s};
        const complex c = spatial_coupling(pot, to, from, params);
        const bool on_ladder = s == from.r + pot.w || s == from.r - pot.w;
        if (!on_ladder) {
          v.record(c == complex{},
                   cat(to_string(from), " -> ", to_string(to), " off-ladder coupling ",
                       std::abs(c)));
        }
        const complex me = matrix_element(pot, to, from, t, params);
        const double err = std::abs(me - c * g) / scale;
        v.record(err <= 1e-12, cat(to_string(from), " -> ", to_string(to),
                                   " matrix element vs separable form ", err));
      }
    }
  }
  return v;
}

SuiteVerdict first_order_suite(const RunConfig& config) {
  SuiteVerdict v;
  v.name = "first_order_and_identity";
  const ModelParams params = config.model();
  const PotentialSpec pot = config.potential();
  const QuadratureConfig quad{config.quadrature_step};
  const double tol = config.tolerance("identity");
  for (const auto& mode : default_shift_panel()) {
    const double eps = std::abs(energy(mode, params));
    const double first = first_order_shift_check(pot, mode, params, quad);
    v.record(first <= tol * eps, cat(to_string(mode), " first-order term ", first));
    const double direct = second_order_shift_sum(pot, mode, params, quad);
    const double via_state =
        second_order_shift_from_state(first_order_state(pot, mode, params, quad), params);
    const double dev = relative_deviation(direct, via_state);
    v.record(dev <= tol, cat(to_string(mode), " sum vs state deviation ", dev));
  }
  return v;
}

SuiteVerdict spinor_sum_suite(const RunConfig& config, const VerifyHooks& hooks) {
  SuiteVerdict v;
  v.name = "spinor_sum";
  const ModelParams params = config.model();
  const double tol = config.tolerance("identity");
  for (int w = 1; w <= 9; ++w) {
    if (!(momentum(w, params) < params.m)) continue;
    for (EnergySign sign : {EnergySign::negative, EnergySign::positive}) {
      for (int r = -50; r <= 50; ++r) {
        const ModeIndex mode{sign, r};
        const double closed = shift_closed(mode, w, params);
        const double summed = shift_via_spinor_sum(mode, w, params, hooks.overlap);
        const double dev = relative_deviation(closed, summed);
        v.record(dev <= tol, cat(to_string(mode), " w=", w, " spinor sum deviates by ", dev));
        for (int dir : {-1, +1}) {
          const double a = overlap_sq(sign, r, dir, w, params);
          const double b = hooks.overlap(sign, r, dir, w, params);
          const double err = std::abs(a - b) * params.L * params.L;
          v.record(err <= config.tolerance("spectrum"),
                   cat(to_string(mode), " w=", w, " dir=", dir, " overlap error ", err));
        }
      }
    }
  }
  return v;
}

SuiteVerdict negativity_suite(const RunConfig& config) {
  SuiteVerdict v;
  v.name = "negativity";
  const ModelParams params = config.model();
  std::mt19937_64 rng(config.seed);
  int w_max = 1;
  while (momentum(w_max + 1, params) < params.m) ++w_max;
  std::uniform_int_distribution<int> pick_w(1, w_max);
  std::uniform_int_distribution<int> pick_r(-2000, 2000);
  for (int i = 0; i < 10000; ++i) {
    const int w = pick_w(rng), r = pick_r(rng);
    const double sea = shift_closed(sea_mode(r), w, params);
    const double pos = shift_closed(positive_mode(r), w, params);
    v.record(sea < 0.0, cat("sea shift at r=", r, " w=", w, " is ", sea));
    v.record(pos > 0.0, cat("positive-energy shift at r=", r, " w=", w, " is ", pos));
  }
  // log-uniform m, k/m and |p|/m, both signs of p, plus a band around p = 0
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto log_uniform = [&](double lo, double hi) {
    return lo * std::pow(hi / lo, unit(rng));
  };
  for (int i = 0; i < 100000; ++i) {
    const double m = log_uniform(0.1, 10.0);
    const double k = m * log_uniform(1e-3, 10.0);
    double p = m * log_uniform(1e-4, 100.0);
    if (i % 7 == 0) p = m * (2.0 * unit(rng) - 1.0);
    if (unit(rng) < 0.5) p = -p;
    v.record(negativity_holds(p, k, m), cat("inequality fails at p=", p, " k=", k, " m=", m));
  }
  return v;
}

SuiteVerdict vacuum_suite(const RunConfig& config) {
  SuiteVerdict v;
  v.name = "vacuum";
  const ModelParams params = config.model();
  const double q = config.q > 0.0 ? config.q : 0.1;
  const double k = momentum(config.w, params);
  const double limit = vacuum_limit(q, k, params.L);
  v.record(limit < 0.0, cat("limit ", limit, " not negative"));
  const double finite = vacuum_integral_finite(config.vacuum_B, k, params.m, q, params.L);
  const double quad = vacuum_integral_quadrature(config.vacuum_B, k, params.m, q, params.L);
  v.record(relative_deviation(finite, limit) <= config.tolerance("vacuum_finite_B"),
           cat("finite-B value ", finite, " vs limit ", limit));
  v.record(relative_deviation(quad, finite) <= config.tolerance("vacuum_quadrature"),
           cat("quadrature ", quad, " vs closed form ", finite));
  // Partial sums approach the limit from above, inside the tail bound.
  for (int R : {25, 50, 100, 200, 300}) {
    if (R < config.w) continue;
    const double partial = vacuum_discrete_sum(R, config.w, q, params);
    const double tail = limit - partial;
    const double bound = vacuum_tail_bound(R, config.w, q, params);
    v.record(partial < 0.0, cat("partial sum at R=", R, " is ", partial));
    v.record(tail <= 0.0 && -tail <= bound,
             cat("R=", R, " tail ", tail, " outside bound ", bound));
  }
  const ModelParams sea_params{params.m, params.L, std::min(params.R, 100)};
  const VacuumOccupancy sea = VacuumOccupancy::filled_sea(sea_params);
  std::vector<ShiftRecord> records;
  for (const auto& mode : sea.occupied()) {
    records.push_back({mode, ShiftMethod::closed_form, shift_closed(mode, config.w, params)});
  }
  const double total = vacuum_total_shift(records, q, sea);
  const double direct = vacuum_discrete_sum(sea_params.R, config.w, q, params);
  v.record(total < 0.0, cat("hole-theory total ", total, " not negative"));
  v.record(relative_deviation(total, direct) <= 1e-14,
           cat("hole-theory total ", total, " vs direct sum ", direct));
  records.pop_back();
  bool caught = false;
  try {
    vacuum_total_shift(records, q, sea);
  } catch (const CoverageError&) {
    caught = true;
  }
  v.record(caught, "missing sea record not reported");
  return v;
}

SuiteVerdict slater_suite(const RunConfig& config) {
  SuiteVerdict v;
  v.name = "slater";
  const SlaterPanelResult panel = run_slater_panel(config.seed);
  const double tol = config.tolerance("slater");
  v.record(panel.max_deviation <= tol,
           cat("bruteforce vs reduced deviation ", panel.max_deviation));
  v.record(panel.max_identity_error <= tol,
           cat("identity operator error ", panel.max_identity_error));
  v.record(panel.includes_k5_n3, "panel lacks K=5, N=3");
  return v;
}

// Gaussian-envelope pulse: finite support, so engine and oracle compare
// without any window extrapolation.
SuiteVerdict oracle_suite(const RunConfig& config) {
  SuiteVerdict v;
  v.name = "oracle_quick";
  const double q = 0.02;
  const double a = config.amplitude != 0.0 ? config.amplitude : 1.0;
  const PotentialSpec pot = gaussian_potential(config.w, a, 10.0);
  IntegratorConfig ic;
  ic.ladder_rungs = ladder_rungs_for(q, a);
  for (const ModeIndex& mode : {sea_mode(0), positive_mode(10)}) {
    const ModelParams params{config.m, config.L,
                             std::abs(mode.r) + ic.ladder_rungs * config.w};
    const double engine = second_order_shift_sum(pot, mode, params);
    const EvolutionState out = evolve(mode, pot, q, params, ic);
    const double oracle = (energy_of(out, params) - energy(mode, params)) / (q * q);
    const double dev = relative_deviation(oracle, engine);
    v.record(dev <= config.tolerance("oracle_vs_engine"),
             cat(to_string(mode), " oracle ", oracle, " vs engine ", engine));
    v.record(out.norm_drift <= config.tolerance("norm_drift"),
             cat(to_string(mode), " norm drift ", out.norm_drift));
    v.record(out.outer_rung_population <= 1e-10,
             cat(to_string(mode), " outer rung population ", out.outer_rung_population));
    IntegratorConfig alt = ic;
    alt.method = Integrator::interaction_rk4;
    const EvolutionState other = evolve(mode, pot, q, params, alt);
    const double cross = relative_deviation(energy_of(other, params) - energy(mode, params),
                                            oracle * q * q);
    v.record(cross <= 1e-6, cat(to_string(mode), " integrators disagree by ", cross));
  }
  return v;
}

}  // namespace

std::vector<SuiteVerdict> run_verify_suites(const RunConfig& config,
                                            const VerifyHooks& hooks) {
  config.validate();
  return {spectrum_suite(config),   selection_rule_suite(config),
          first_order_suite(config), spinor_sum_suite(config, hooks),
          negativity_suite(config), vacuum_suite(config),
          slater_suite(config),     oracle_suite(config)};
}

}  // namespace holevac::reports
