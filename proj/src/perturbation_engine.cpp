#include "holevac/perturbation_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "holevac/errors.hpp"
#include "holevac/summation.hpp"

namespace holevac {

namespace {

void require_cutoff(const PotentialSpec& v, const ModeIndex& mode,
                    const ModelParams& params) {
  if (std::abs(mode.r) + v.w > params.R) {
    throw CutoffError("cutoff R=" + std::to_string(params.R) +
                      " cannot hold transitions of mode " + to_string(mode) +
                      " with w=" + std::to_string(v.w) +
                      " (need |r| + w <= R)");
  }
}

}  // namespace

complex matrix_element(const PotentialSpec& v, const ModeIndex& to,
                       const ModeIndex& from, double t,
                       const ModelParams& params) {
  if (v.amplitude == 0.0) return {0.0, 0.0};
  const int reach = std::abs(to.r) + std::abs(from.r) + v.w;
  const std::size_t n = spatial_grid_size(reach, params);
  const double dz = params.L / static_cast<double>(n);
  complex sum{0.0, 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    const double z = -0.5 * params.L + dz * static_cast<double>(j);
    sum += dot(mode_function(to, z, 0.0, params),
               mode_function(from, z, 0.0, params)) *
           v.value(z, t, params);
  }
  return sum * dz;
}

complex spatial_coupling(const PotentialSpec& v, const ModeIndex& to,
                         const ModeIndex& from, const ModelParams& params) {
  if (v.amplitude == 0.0) return {0.0, 0.0};
  if (to.r != from.r + v.w && to.r != from.r - v.w) return {0.0, 0.0};
  return 0.5 * v.amplitude * params.L *
         dot(spinor(to, params), spinor(from, params));
}

complex pulse_transform(const PotentialSpec& v, double delta,
                        const ModelParams& params,
                        const QuadratureConfig& quad) {
  const double span = v.tf - v.t0;
  double h = quad.step;
  if (!(h > 0.0)) {
    h = std::min(0.02 / params.m, 0.1 / (params.m + std::abs(delta)));
  }
  auto n = static_cast<long>(std::ceil(span / h));
  if (n % 2 != 0) ++n;
  n = std::max(n, 2L);
  h = span / static_cast<double>(n);

  complex sum{0.0, 0.0};
  for (long j = 0; j <= n; ++j) {
    const double t = v.t0 + h * static_cast<double>(j);
    const double weight = (j == 0 || j == n) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
    sum += weight * v.pulse(t, params.m) * std::polar(1.0, delta * t);
  }
  return sum * (h / 3.0);
}

bool near_indicator_edge(double delta, double m, double margin_fraction) {
  return std::abs(std::abs(delta) - m) < margin_fraction * m;
}

TransitionAmplitude f_coefficient(const PotentialSpec& v, const ModeIndex& to,
                                  const ModeIndex& from,
                                  const ModelParams& params,
                                  const QuadratureConfig& quad) {
  TransitionAmplitude out{from, to, {0.0, 0.0}, false};
  const complex spatial = spatial_coupling(v, to, from, params);
  if (spatial == complex{0.0, 0.0}) return out;
  const double delta = energy(to, params) - energy(from, params);
  out.near_edge = near_indicator_edge(delta, params.m);
  out.f_value = spatial * pulse_transform(v, delta, params, quad);
  return out;
}

FirstOrderState first_order_state(const PotentialSpec& v, const ModeIndex& from,
                                  const ModelParams& params,
                                  const QuadratureConfig& quad) {
  require_cutoff(v, from, params);
  FirstOrderState state{from, {}};
  for (const ModeIndex& to : basis_modes(params)) {
    const TransitionAmplitude f = f_coefficient(v, to, from, params, quad);
    if (f.f_value == complex{0.0, 0.0}) continue;
    state.coefficients.emplace(to, complex{0.0, -1.0} * f.f_value);
  }
  return state;
}

double second_order_shift_sum(const PotentialSpec& v, const ModeIndex& mode,
                              const ModelParams& params,
                              const QuadratureConfig& quad) {
  require_cutoff(v, mode, params);
  const double eps = energy(mode, params);
  CompensatedSum total;
  for (const ModeIndex& to : basis_modes(params)) {
    const TransitionAmplitude f = f_coefficient(v, to, mode, params, quad);
    if (f.f_value == complex{0.0, 0.0}) continue;
    total += std::norm(f.f_value) * (energy(to, params) - eps);
  }
  return total.value();
}

double second_order_shift_from_state(const FirstOrderState& state,
                                     const ModelParams& params) {
  const double eps = energy(state.from, params);
  CompensatedSum h0;
  CompensatedSum norm;
  for (const auto& [mode, c] : state.coefficients) {
    h0 += std::norm(c) * energy(mode, params);
    norm += std::norm(c);
  }
  return h0.value() - eps * norm.value();
}

double first_order_shift_check(const PotentialSpec& v, const ModeIndex& mode,
                               const ModelParams& params,
                               const QuadratureConfig& quad) {
  const double eps = energy(mode, params);
  // <phi0|phi1> is the diagonal coefficient -i f_{mode;mode}.
  const complex diag = complex{0.0, -1.0} *
                       f_coefficient(v, mode, mode, params, quad).f_value;
  const double overlap_term = eps * 2.0 * diag.real();
  const complex direct = matrix_element(v, mode, mode, v.tf, params);
  return std::abs(overlap_term) + std::abs(direct);
}

}  // namespace holevac
