#include "holevac/evolution_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "holevac/errors.hpp"
#include "holevac/summation.hpp"

namespace holevac {

namespace {

constexpr complex minus_i{0.0, -1.0};

void require_ladder(const ModeIndex& mode, int w, const IntegratorConfig& config,
                    const ModelParams& params) {
  const int need = std::abs(mode.r) + config.ladder_rungs * w;
  if (need > params.R) {
    throw CutoffError("cutoff R=" + std::to_string(params.R) + " too small for " +
                      std::to_string(config.ladder_rungs) + " ladder rungs from " +
                      to_string(mode) + " (need R >= " + std::to_string(need) + ")");
  }
}

double reference_energy(const EvolutionState& s, const std::vector<double>& eps) {
  CompensatedSum e;
  CompensatedSum n;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    e += std::norm(s.coefficients[i]) * eps[i];
    n += std::norm(s.coefficients[i]);
  }
  return n.value() > 0.0 ? e.value() / n.value() : 0.0;
}

// y += a * x
void axpy(std::vector<complex>& y, complex a, const std::vector<complex>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

class Rk4 {
 public:
  explicit Rk4(std::size_t n) : k1_(n), k2_(n), k3_(n), k4_(n), tmp_(n) {}

  template <class Rhs>
  void step(std::vector<complex>& y, double t, double h, const Rhs& rhs) {
    rhs(t, y, k1_);
    tmp_ = y;
    axpy(tmp_, 0.5 * h, k1_);
    rhs(t + 0.5 * h, tmp_, k2_);
    tmp_ = y;
    axpy(tmp_, 0.5 * h, k2_);
    rhs(t + 0.5 * h, tmp_, k3_);
    tmp_ = y;
    axpy(tmp_, h, k3_);
    rhs(t + h, tmp_, k4_);
    const double c = h / 6.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] += c * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }
  }

 private:
  std::vector<complex> k1_, k2_, k3_, k4_, tmp_;
};

}  // namespace

CouplingStructure::CouplingStructure(const PotentialSpec& v,
                                     const ModelParams& params)
    : potential_(v), params_(params), modes_(basis_modes(params)) {
  diagonal_.reserve(modes_.size());
  for (const auto& mode : modes_) diagonal_.push_back(energy(mode, params));
  rows_.resize(modes_.size());
  if (v.amplitude == 0.0) {
    row_offsets.assign(modes_.size() + 1, 0);
    return;
  }
  const double scale = 0.5 * v.amplitude * params.L;
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    const ModeIndex& to = modes_[i];
    const Spinor u_to = spinor(to, params);
    for (EnergySign sign : {EnergySign::negative, EnergySign::positive}) {
      for (int shift : {-v.w, +v.w}) {
        const ModeIndex from{sign, to.r + shift};
        if (std::abs(from.r) > params.R) continue;
        const complex c = scale * dot(u_to, spinor(from, params));
        rows_[i].push_back({basis_position(from, params), c});
      }
    }
    std::sort(rows_[i].begin(), rows_[i].end(),
              [](const Link& a, const Link& b) { return a.col < b.col; });
  }
  row_offsets.push_back(0);
  for (const auto& row : rows_) {
    for (const auto& link : row) {
      link_cols.push_back(link.col);
      link_values.push_back(link.value);
    }
    row_offsets.push_back(link_cols.size());
  }
}

double CouplingStructure::max_coupling() const {
  double best = 0.0;
  for (const auto& row : rows_) {
    for (const auto& link : row) best = std::max(best, std::abs(link.value));
  }
  return best;
}

std::vector<std::vector<complex>> CouplingStructure::hamiltonian_at(double t,
                                                                    double q) const {
  const std::size_t n = modes_.size();
  std::vector<std::vector<complex>> h(n, std::vector<complex>(n));
  const double g = q * temporal_factor(t);
  for (std::size_t i = 0; i < n; ++i) {
    h[i][i] = diagonal_[i];
    for (const auto& link : rows_[i]) h[i][link.col] += g * link.value;
  }
  return h;
}

CouplingStructure build_coupling(const PotentialSpec& v, const ModelParams& params) {
  params.validate();
  if (params.R < v.w) {
    throw CutoffError("cutoff R=" + std::to_string(params.R) +
                      " must be at least w=" + std::to_string(v.w));
  }
  return CouplingStructure(v, params);
}

EvolutionState basis_state(const ModeIndex& mode, const ModelParams& params,
                           double t) {
  EvolutionState s;
  s.t = t;
  s.coefficients.assign(static_cast<std::size_t>(2 * (2 * params.R + 1)), {0.0, 0.0});
  s.coefficients[basis_position(mode, params)] = 1.0;
  return s;
}

double norm_of(const EvolutionState& state) {
  CompensatedSum n;
  for (const complex& c : state.coefficients) n += std::norm(c);
  return n.value();
}

complex inner_product(const EvolutionState& a, const EvolutionState& b) {
  complex sum{0.0, 0.0};
  for (std::size_t i = 0; i < a.coefficients.size(); ++i) {
    sum += std::conj(a.coefficients[i]) * b.coefficients[i];
  }
  return sum;
}

EvolutionState propagate(const EvolutionState& start,
                         const CouplingStructure& coupling, double q,
                         double t_end, const IntegratorConfig& config) {
  const auto& eps = coupling.diagonal();
  const auto& rows = coupling.rows();
  const auto& offsets = coupling.row_offsets;
  const auto& cols = coupling.link_cols;
  const auto& values = coupling.link_values;
  const std::size_t n = eps.size();
  if (start.coefficients.size() != n) {
    throw std::invalid_argument("state size does not match the coupling basis");
  }
  const double m = coupling.params().m;
  const double e_ref = reference_energy(start, eps);
  const double g_max = 4.0 * m;

  double h_max = config.step;
  if (!(h_max > 0.0)) {
    if (config.method == Integrator::schrodinger_rk4) {
      double max_eps = 0.0;
      for (double e : eps) max_eps = std::max(max_eps, std::abs(e));
      h_max = 0.01 / (max_eps + std::abs(q) * coupling.max_coupling() * g_max);
    } else {
      double max_gap = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        for (const auto& link : rows[i]) {
          max_gap = std::max(max_gap, std::abs(eps[i] - eps[link.col]));
        }
      }
      h_max = 0.02 / (m + max_gap + std::abs(q) * coupling.max_coupling() * g_max);
    }
  }
  const double span = t_end - start.t;
  const long steps = std::max(1L, static_cast<long>(std::ceil(std::abs(span) / h_max)));
  const double h = span / static_cast<double>(steps);

  std::vector<double> shifted(n);
  for (std::size_t i = 0; i < n; ++i) shifted[i] = eps[i] - e_ref;

  std::vector<complex> y = start.coefficients;
  const double norm0 = norm_of(start);
  std::vector<double> trace;
  const long trace_every = std::max(1L, steps / 10);

  // Rotating frame: y = e^{i e_ref (t - t_start)} c.
  Rk4 rk(n);
  if (config.method == Integrator::schrodinger_rk4) {
    const auto rhs = [&](double t, const std::vector<complex>& c,
                         std::vector<complex>& out) {
      const double g = q * coupling.temporal_factor(t);
      for (std::size_t i = 0; i < n; ++i) {
        complex acc = shifted[i] * c[i];
        if (g != 0.0) {
          complex v{0.0, 0.0};
          for (std::size_t l = offsets[i]; l < offsets[i + 1]; ++l) {
            v += values[l] * c[cols[l]];
          }
          acc += g * v;
        }
        out[i] = minus_i * acc;
      }
    };
    for (long s = 0; s < steps; ++s) {
      rk.step(y, start.t + h * static_cast<double>(s), h, rhs);
      if ((s + 1) % trace_every == 0) trace.push_back(norm_of({0.0, y}));
    }
  } else {
    // b_i = e^{i (eps_i - e_ref) (t - t_start)} y_i
    std::vector<complex> phase(n);
    const auto rhs = [&](double t, const std::vector<complex>& b,
                         std::vector<complex>& out) {
      const double g = q * coupling.temporal_factor(t);
      const double tau = t - start.t;
      for (std::size_t i = 0; i < n; ++i) phase[i] = std::polar(1.0, shifted[i] * tau);
      for (std::size_t i = 0; i < n; ++i) {
        complex v{0.0, 0.0};
        for (std::size_t l = offsets[i]; l < offsets[i + 1]; ++l) {
          v += values[l] * std::conj(phase[cols[l]]) * b[cols[l]];
        }
        out[i] = minus_i * g * phase[i] * v;
      }
    };
    for (long s = 0; s < steps; ++s) {
      rk.step(y, start.t + h * static_cast<double>(s), h, rhs);
      if ((s + 1) % trace_every == 0) trace.push_back(norm_of({0.0, y}));
    }
    for (std::size_t i = 0; i < n; ++i) y[i] *= std::polar(1.0, -shifted[i] * span);
  }

  EvolutionState out;
  out.t = t_end;
  out.steps = steps;
  const complex back = std::polar(1.0, -e_ref * span);
  out.coefficients.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.coefficients[i] = back * y[i];
  out.norm_drift = std::abs(norm_of(out) - norm0);
  if (out.norm_drift > config.abort_drift) {
    std::ostringstream msg;
    msg << "norm drift " << out.norm_drift << " exceeds " << config.abort_drift
        << " after " << steps << " steps of h=" << h << "; norm trace:";
    for (double v : trace) msg << ' ' << v;
    throw IntegratorHealthError(msg.str());
  }
  return out;
}

EvolutionState evolve(const ModeIndex& initial, const PotentialSpec& v, double q,
                      const ModelParams& params, const IntegratorConfig& config) {
  require_ladder(initial, v.w, config, params);
  const CouplingStructure coupling = build_coupling(v, params);
  EvolutionState out =
      propagate(basis_state(initial, params, v.t0), coupling, q, v.tf, config);
  out.outer_rung_population =
      rung_population(out, initial, v.w, config.ladder_rungs, params);
  return out;
}

int ladder_rungs_for(double q, double amplitude, double target) {
  const double x = 2.0 * pi * std::abs(amplitude * q);
  int n = 3;
  double term = x * x * x / 6.0;
  while (4.0 * term * term > target && n < 64) {
    ++n;
    term *= x / n;
  }
  return n;
}

double energy_of(const EvolutionState& state, const ModelParams& params) {
  const auto modes = basis_modes(params);
  CompensatedSum e;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const double pop = std::norm(state.coefficients[i]);
    if (pop != 0.0) e += pop * energy(modes[i], params);
  }
  return e.value();
}

double measured_shift(const ModeIndex& initial, const PotentialSpec& v, double q,
                      const ModelParams& params, const IntegratorConfig& config) {
  if (q == 0.0 || v.amplitude == 0.0) return 0.0;
  const EvolutionState final_state = evolve(initial, v, q, params, config);
  return energy_of(final_state, params) - energy(initial, params);
}

double rung_population(const EvolutionState& state, const ModeIndex& initial,
                       int w, int rung, const ModelParams& params) {
  double pop = 0.0;
  for (EnergySign sign : {EnergySign::negative, EnergySign::positive}) {
    for (int dir : {-1, +1}) {
      if (rung == 0 && dir == +1) continue;
      const int r = initial.r + dir * rung * w;
      if (std::abs(r) > params.R) continue;
      pop += std::norm(state.coefficients[basis_position({sign, r}, params)]);
    }
  }
  return pop;
}

double off_ladder_population(const EvolutionState& state,
                             const ModeIndex& initial, int w,
                             const ModelParams& params) {
  const auto modes = basis_modes(params);
  double worst = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const int d = modes[i].r - initial.r;
    if (d % w == 0) continue;
    worst = std::max(worst, std::norm(state.coefficients[i]));
  }
  return worst;
}

ScalingStudy scaling_study(const ModeIndex& initial, const PotentialSpec& v,
                           const std::vector<double>& q_values,
                           double reference, const ModelParams& params,
                           const IntegratorConfig& config) {
  if (q_values.empty()) throw std::invalid_argument("scaling study needs q values");
  for (std::size_t i = 0; i < q_values.size(); ++i) {
    if (!(q_values[i] > 0.0) || (i > 0 && !(q_values[i] < q_values[i - 1]))) {
      throw std::invalid_argument("q values must be positive and strictly decreasing");
    }
  }
  ScalingStudy study;
  study.mode = initial;
  study.q_values = q_values;
  study.reference = reference;
  const CouplingStructure coupling = build_coupling(v, params);
  require_ladder(initial, v.w, config, params);
  for (double q : q_values) {
    const EvolutionState out =
        propagate(basis_state(initial, params, v.t0), coupling, q, v.tf, config);
    const double shift = energy_of(out, params) - energy(initial, params);
    study.shifts.push_back(shift);
    study.residuals.push_back(std::abs(shift - q * q * reference));
    study.norm_drifts.push_back(out.norm_drift);
  }

  const std::size_t n = q_values.size();
  if (n >= 2) {
    const double q1 = q_values[n - 2];
    const double q2 = q_values[n - 1];
    const double s1 = study.shifts[n - 2] / (q1 * q1);
    const double s2 = study.shifts[n - 1] / (q2 * q2);
    const double rho2 = (q1 / q2) * (q1 / q2);
    // shift / q^2 = d2 + c q^2 + ...
    study.extrapolated = (rho2 * s2 - s1) / (rho2 - 1.0);
  }
  if (n < 3) {
    study.fit_status = "insufficient points";
    return study;
  }
  for (double r : study.residuals) {
    if (!(r > 0.0)) {
      study.fit_status = "degenerate: residual at noise floor";
      return study;
    }
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(q_values[i]);
    const double y = std::log(study.residuals[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double dn = static_cast<double>(n);
  study.fitted_order = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
  study.fit_status = "ok";
  return study;
}

double pairwise_orthogonality_check(const ModeIndex& a, const ModeIndex& b,
                                    const PotentialSpec& v, double q,
                                    const ModelParams& params,
                                    const IntegratorConfig& config) {
  if (a == b) throw std::invalid_argument("orthogonality check needs two distinct modes");
  require_ladder(a, v.w, config, params);
  require_ladder(b, v.w, config, params);
  const CouplingStructure coupling = build_coupling(v, params);
  const EvolutionState sa = propagate(basis_state(a, params, v.t0), coupling, q, v.tf, config);
  const EvolutionState sb = propagate(basis_state(b, params, v.t0), coupling, q, v.tf, config);
  return std::abs(inner_product(sa, sb));
}

}  // namespace holevac
