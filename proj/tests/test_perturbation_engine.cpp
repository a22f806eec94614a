#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_expint.h>

#include <cmath>
#include <random>

#include "holevac/analytic_shifts.hpp"
#include "holevac/errors.hpp"
#include "holevac/perturbation_engine.hpp"

using namespace holevac;

namespace {

const ModelParams baseline{};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// Transform of 4 sin(mt)/t over [-T, T] via the sine integral.
double sinc_transform_si(double delta, double m, double T) {
  return 4.0 * (gsl_sf_Si((m + delta) * T) + gsl_sf_Si((m - delta) * T));
}

// L^2 |u'^dagger u|^2 = (1 + l l' (p p' + m^2) / (E E')) / 2
double overlap_sq_any(const ModeIndex& a, const ModeIndex& b, const ModelParams& params) {
  const double p = momentum(a.r, params), pp = momentum(b.r, params);
  const double e = energy_magnitude(a.r, params), ee = energy_magnitude(b.r, params);
  const double m = params.m;
  return 0.5 * (1.0 + a.lambda() * b.lambda() * (p * pp + m * m) / (e * ee)) /
         (params.L * params.L);
}

// Second-order shift on a symmetric sinc window, from sine integrals alone.
double windowed_shift_oracle(const ModeIndex& mode, int w, double a, double T,
                             const ModelParams& params) {
  double total = 0.0;
  for (int dir : {-1, 1}) {
    for (EnergySign sign : {EnergySign::negative, EnergySign::positive}) {
      const ModeIndex to{sign, mode.r + dir * w};
      const double delta = energy(to, params) - energy(mode, params);
      const double spatial_sq =
          0.25 * a * a * params.L * params.L * overlap_sq_any(to, mode, params);
      const double g = sinc_transform_si(delta, params.m, T);
      total += spatial_sq * g * g * delta;
    }
  }
  return total;
}

struct GslGaussian {
  double m, tau, delta;
  bool imag;
};

double gaussian_integrand(double t, void* data) {
  const auto* d = static_cast<GslGaussian*>(data);
  const double g = t == 0.0 ? 4.0 * d->m : 4.0 * std::sin(d->m * t) / t;
  const double env = std::exp(-t * t / (2.0 * d->tau * d->tau));
  return g * env * (d->imag ? std::sin(d->delta * t) : std::cos(d->delta * t));
}

}  // namespace

TEST_CASE("matrix element separates into spatial coupling times pulse") {
  const ModelParams params{1.0, 20.0 * pi, 30};
  const PotentialSpec v = standard_potential(params, 5, 1.0, 2000.0);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> pick_r(-20, 20), pick_sign(0, 1);
  std::uniform_real_distribution<double> pick_t(-50.0, 50.0);
  for (int i = 0; i < 200; ++i) {
    const ModeIndex from{pick_sign(rng) ? EnergySign::positive : EnergySign::negative,
                         pick_r(rng)};
    const int s = i % 3 == 0 ? pick_r(rng) : from.r + (i % 2 ? 5 : -5);
    const ModeIndex to{pick_sign(rng) ? EnergySign::positive : EnergySign::negative, s};
    const double t = i == 0 ? 0.0 : pick_t(rng);
    const double g = v.pulse(t, params.m);
    const complex direct = matrix_element(v, to, from, t, params);
    const complex separable = spatial_coupling(v, to, from, params) * g;
    CAPTURE(to_string(from));
    CAPTURE(to_string(to));
    CHECK(std::abs(direct - separable) <= 1e-12 * std::max(1.0, std::abs(g)));
    if (s != from.r + 5 && s != from.r - 5) {
      CHECK(spatial_coupling(v, to, from, params) == complex{});
    }
  }
}

TEST_CASE("spatial coupling magnitude") {
  const PotentialSpec v = standard_potential(baseline, 5, 1.0, 2000.0);
  for (int r = -20; r <= 20; r += 5) {
    const ModeIndex from = sea_mode(r);
    for (const ModeIndex& to : {sea_mode(r + 5), positive_mode(r - 5)}) {
      const double want = 0.25 * baseline.L * baseline.L * overlap_sq_any(to, from, baseline);
      CHECK(std::norm(spatial_coupling(v, to, from, baseline)) ==
            doctest::Approx(want).epsilon(1e-13));
    }
  }
}

TEST_CASE("windowed sinc transform matches the sine-integral form") {
  for (double T : {250.0, 2000.0}) {
    const PotentialSpec v = standard_potential(baseline, 5, 1.0, T);
    for (double delta : {0.0, -0.118, 0.43, -0.999, 1.3, 2.1, -2.5}) {
      CAPTURE(T);
      CAPTURE(delta);
      const complex e = pulse_transform(v, delta, baseline);
      CHECK(std::abs(e - sinc_transform_si(delta, 1.0, T)) <= 1e-9);
    }
  }
}

TEST_CASE("gaussian-envelope transform matches adaptive quadrature") {
  const PotentialSpec v = gaussian_potential(5, 1.0, 20.0);
  gsl_set_error_handler_off();
  gsl_integration_workspace* ws = gsl_integration_workspace_alloc(2000);
  for (double delta : {0.0, 0.3, -0.9, 1.7}) {
    double parts[2];
    for (int k = 0; k < 2; ++k) {
      GslGaussian data{1.0, 20.0, delta, k == 1};
      gsl_function fn{&gaussian_integrand, &data};
      double err = 0.0;
      const int status = gsl_integration_qag(&fn, v.t0, v.tf, 1e-12, 0.0, 2000,
                                             GSL_INTEG_GAUSS61, ws, &parts[k], &err);
      REQUIRE((status == GSL_SUCCESS || status == GSL_EROUND));
      REQUIRE(err < 1e-10);
    }
    const complex e = pulse_transform(v, delta, baseline);
    CAPTURE(delta);
    CHECK(std::abs(e - complex{parts[0], parts[1]}) <= 1e-9);
  }
  gsl_integration_workspace_free(ws);
}

TEST_CASE("engine shift equals the sine-integral oracle on the same window") {
  for (double T : {500.0, 2000.0}) {
    const PotentialSpec v = standard_potential(baseline, 5, 1.0, T);
    for (const ModeIndex& mode : {sea_mode(-20), sea_mode(0), sea_mode(10), positive_mode(10)}) {
      CAPTURE(T);
      CAPTURE(to_string(mode));
      CHECK(rel(second_order_shift_sum(v, mode, baseline),
                windowed_shift_oracle(mode, 5, 1.0, T, baseline)) <= 1e-8);
    }
  }
}

TEST_CASE("engine approaches the closed form as the window grows") {
  const PotentialSpec v = standard_potential(baseline, 5, 1.0, 2000.0);
  CHECK(rel(second_order_shift_sum(v, sea_mode(0), baseline),
            shift_closed(sea_mode(0), 5, baseline)) <= 2e-3);
  CHECK(rel(second_order_shift_sum(v, sea_mode(10), baseline),
            shift_closed(sea_mode(10), 5, baseline)) <= 2e-2);
  // compact pulse: no window tail, the limit is reached directly
  const PotentialSpec g = gaussian_potential(5, 1.0, 40.0);
  for (int r : {-20, 0, 10}) {
    CHECK(rel(second_order_shift_sum(g, sea_mode(r), baseline),
              shift_closed(sea_mode(r), 5, baseline)) <= 1e-4);
  }
}

TEST_CASE("first-order state carries only ladder transitions") {
  const PotentialSpec v = standard_potential(baseline, 5, 1.0, 2000.0);
  const FirstOrderState st = first_order_state(v, sea_mode(0), baseline);
  CHECK(st.coefficients.size() == 4);
  for (const auto& [mode, c] : st.coefficients) {
    CHECK(std::abs(std::abs(mode.r) - 5) == 0);
    if (mode.sign == EnergySign::positive) {
      CHECK(std::abs(c) < 0.05);  // suppressed cross-sign leakage
    } else {
      CHECK(std::abs(c) > 1.0);
    }
  }
  CHECK_THROWS_AS(first_order_state(v, sea_mode(296), baseline), CutoffError);
  CHECK_THROWS_AS(second_order_shift_sum(v, sea_mode(-296), baseline), CutoffError);
}

TEST_CASE("first-order term vanishes and both second-order routes agree") {
  const PotentialSpec v = standard_potential(baseline, 5, 1.0, 2000.0);
  for (int r : {-20, -10, 0, 10, 20}) {
    for (const ModeIndex& mode : {sea_mode(r), positive_mode(r)}) {
      CAPTURE(to_string(mode));
      const double eps = std::abs(energy(mode, baseline));
      CHECK(first_order_shift_check(v, mode, baseline) <= 1e-10 * eps);
      CHECK(rel(second_order_shift_sum(v, mode, baseline),
                second_order_shift_from_state(first_order_state(v, mode, baseline), baseline)) <=
            1e-10);
    }
  }
}

TEST_CASE("edge flag and zero amplitude") {
  CHECK(near_indicator_edge(0.98, 1.0));
  CHECK(near_indicator_edge(-1.02, 1.0));
  CHECK_FALSE(near_indicator_edge(0.5, 1.0));
  PotentialSpec v = standard_potential(baseline, 5, 1.0, 100.0);
  v.amplitude = 0.0;
  CHECK(second_order_shift_sum(v, sea_mode(0), baseline) == 0.0);
  CHECK(f_coefficient(v, sea_mode(5), sea_mode(0), baseline).f_value == complex{});
}

TEST_CASE("potential validation") {
  CHECK_THROWS_AS(standard_potential(baseline, 10, 1.0, 100.0), ParameterError);
  CHECK_THROWS_AS(standard_potential(baseline, 0, 1.0, 100.0), ParameterError);
  CHECK_THROWS_AS(standard_potential(baseline, 5, 1.0, -1.0), ParameterError);
  CHECK_THROWS_AS(gaussian_potential(5, 1.0, 0.0).validate(baseline), ParameterError);
  const PotentialSpec v = standard_potential(baseline, 5, 1.0, 100.0);
  CHECK(v.pulse(0.0, 1.0) == 4.0);
  CHECK(v.pulse(1e-6, 1.0) == doctest::Approx(4.0 * std::sin(1e-6) / 1e-6).epsilon(1e-15));
  CHECK(v.pulse(2.0, 1.0) == doctest::Approx(2.0 * std::sin(2.0)).epsilon(1e-15));
}
