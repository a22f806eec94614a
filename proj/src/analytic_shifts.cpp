#include "holevac/analytic_shifts.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdlib>
#include <string>

#include "holevac/errors.hpp"
#include "holevac/summation.hpp"

namespace holevac {

namespace {

void require_below_mass(int w, const ModelParams& params) {
  const double k = momentum(w, params);
  if (!(k < params.m)) {
    throw ParameterError("k_w = " + std::to_string(k) + " must satisfy k_w = 2πw/L < m");
  }
}

double rel_dev(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace

complex f_closed(EnergySign to_sign, int s, EnergySign from_sign, int r, int w,
                 const ModelParams& params) {
  require_below_mass(w, params);
  // delta_L(+-w + r - s): integer Kronecker test times L.
  int source = 0;
  if (s == r + w) {
    source = s - w;
  } else if (s == r - w) {
    source = s + w;
  } else {
    return {0.0, 0.0};
  }
  const ModeIndex to{to_sign, s};
  const ModeIndex from{from_sign, source};
  const double mismatch = std::abs(energy(to, params) - energy(from, params));
  if (mismatch == params.m) {
    throw ParameterError("transition " + to_string(from) + " -> " + to_string(to) +
                         " sits exactly on the |eps' - eps| = m edge");
  }
  if (mismatch > params.m) return {0.0, 0.0};
  return 2.0 * pi * params.L * dot(spinor(to, params), spinor(from, params));
}

double overlap_sq(EnergySign sign, int r, int sign_w, int w,
                  const ModelParams& params) {
  const int lambda = to_int(sign);
  const int s = r + sign_w * w;
  const double p = momentum(r, params);
  const double shifted_p = momentum(s, params);
  const double e = lambda * energy_magnitude(r, params);
  const double shifted_e = lambda * energy_magnitude(s, params);
  const double m = params.m;
  return (shifted_e * e + p * shifted_p + m * m) /
         (2.0 * shifted_e * e * params.L * params.L);
}

double shift_closed(const ModeIndex& mode, int w, const ModelParams& params) {
  require_below_mass(w, params);
  const double k = momentum(w, params);
  const double p = momentum(mode.r, params);
  return 2.0 * pi * pi * mode.lambda() * k *
         ((p + k) / energy_magnitude(mode.r + w, params) -
          (p - k) / energy_magnitude(mode.r - w, params));
}

double spinor_overlap_sq(EnergySign sign, int r, int sign_w, int w,
                         const ModelParams& params) {
  const Spinor a = spinor({sign, r + sign_w * w}, params);
  const Spinor b = spinor({sign, r}, params);
  return std::norm(dot(a, b));
}

double shift_via_spinor_sum(const ModeIndex& mode, int w,
                            const ModelParams& params,
                            const OverlapFn& overlap) {
  require_below_mass(w, params);
  const double eps = energy(mode, params);
  const double up = overlap(mode.sign, mode.r, +1, w, params) *
                    (energy({mode.sign, mode.r + w}, params) - eps);
  const double down = overlap(mode.sign, mode.r, -1, w, params) *
                      (energy({mode.sign, mode.r - w}, params) - eps);
  return 4.0 * pi * pi * params.L * params.L * (up + down);
}

bool negativity_holds(double p, double k, double m) {
  const double ep = std::sqrt((p + k) * (p + k) + m * m);
  const double em = std::sqrt((p - k) * (p - k) + m * m);
  return (p + k) / ep > (p - k) / em;
}

double vacuum_integrand(double p, double k, double m) {
  const double ep = std::sqrt((p + k) * (p + k) + m * m);
  const double em = std::sqrt((p - k) * (p - k) + m * m);
  return (p + k) / ep - (p - k) / em;
}

double vacuum_integral_finite(double B, double k, double m, double q, double L) {
  if (!(k > 0.0) || !(B > k)) {
    throw ParameterError("vacuum integral needs B > k > 0");
  }
  const double e_plus = std::sqrt((B + k) * (B + k) + m * m);
  const double e_minus = std::sqrt((B - k) * (B - k) + m * m);
  return -2.0 * pi * q * q * k * L * (e_plus - e_minus);
}

double vacuum_integral_quadrature(double B, double k, double m, double q,
                                  double L) {
  if (!(k > 0.0) || !(B > k)) {
    throw ParameterError("vacuum integral needs B > k > 0");
  }
  using boost::math::quadrature::gauss_kronrod;
  const auto f = [k, m](double p) { return vacuum_integrand(p, k, m); };
  double error = 0.0;
  const double integral =
      gauss_kronrod<double, 61>::integrate(f, -B, B, 20, 1e-15, &error);
  return -pi * q * q * k * L * integral;
}

double vacuum_limit(double q, double k, double L) {
  return -4.0 * pi * q * q * k * k * L;
}

double vacuum_discrete_sum(int R, int w, double q, const ModelParams& params) {
  require_below_mass(w, params);
  if (R < w) {
    throw ParameterError("vacuum sum needs R >= w");
  }
  CompensatedSum sum;
  const auto add = [&](int r) {
    const double d2 = shift_closed(sea_mode(r), w, params);
    if (!(d2 < 0.0)) {
      throw std::logic_error("non-negative sea shift at r=" + std::to_string(r));
    }
    sum += d2;
  };
  for (int a = R; a >= 1; --a) {
    add(a);
    add(-a);
  }
  add(0);
  return q * q * sum.value();
}

double vacuum_tail_bound(int R, int w, double q, const ModelParams& params) {
  const double k = momentum(w, params);
  const double p = momentum(R, params) - k;
  const double m = params.m;
  return 2.0 * pi * params.L * q * q * k * k * m * m / (p * p);
}

VacuumReport vacuum_report(int w, double q, const ModelParams& params, double B,
                           const std::vector<int>& R_ladder,
                           const std::vector<double>& B_ladder) {
  VacuumReport rep;
  rep.q = q;
  rep.k = momentum(w, params);
  const double k = rep.k;
  const double m = params.m;
  rep.asymptotic_limit = vacuum_limit(q, k, params.L);
  rep.discrete_partial_sum = vacuum_discrete_sum(params.R, w, q, params);
  rep.tail_bound = vacuum_tail_bound(params.R, w, q, params);
  rep.density_weighted_sum =
      (2.0 * pi / params.L) * vacuum_discrete_sum(params.R, w, 1.0, params);
  rep.B = B;
  rep.integral_finite_B = vacuum_integral_finite(B, k, m, q, params.L);
  rep.integral_quadrature_B = vacuum_integral_quadrature(B, k, m, q, params.L);
  rep.sum_deviation = rel_dev(rep.discrete_partial_sum, rep.asymptotic_limit);
  rep.integral_deviation = rel_dev(rep.integral_finite_B, rep.asymptotic_limit);
  for (int R : R_ladder) {
    const double v = vacuum_discrete_sum(R, w, q, params);
    rep.sum_ladder.push_back({static_cast<double>(R), v, rel_dev(v, rep.asymptotic_limit)});
  }
  for (double b : B_ladder) {
    const double v = vacuum_integral_finite(b, k, m, q, params.L);
    rep.integral_ladder.push_back({b, v, rel_dev(v, rep.asymptotic_limit)});
  }
  return rep;
}

}  // namespace holevac
