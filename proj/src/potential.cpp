#include "holevac/potential.hpp"

#include <cmath>
#include <sstream>

#include "holevac/errors.hpp"

namespace holevac {

double PotentialSpec::wavenumber(const ModelParams& params) const {
  return momentum(w, params);
}

double PotentialSpec::pulse(double t, double m) const {
  const double x = m * t;
  double sinc = 0.0;
  if (std::abs(x) < 1e-4) {
    sinc = 4.0 * m * (1.0 - x * x / 6.0);
  } else {
    sinc = 4.0 * std::sin(x) / t;
  }
  if (shape == PulseShape::gaussian_sinc) {
    sinc *= std::exp(-t * t / (2.0 * tau * tau));
  }
  return sinc;
}

double PotentialSpec::value(double z, double t, const ModelParams& params) const {
  return amplitude * std::cos(wavenumber(params) * z) * pulse(t, params.m);
}

void PotentialSpec::validate(const ModelParams& params) const {
  if (w < 1) {
    throw ParameterError("wavenumber index w must be a positive integer");
  }
  if (!std::isfinite(amplitude)) {
    throw ParameterError("potential amplitude must be finite");
  }
  if (!std::isfinite(t0) || !std::isfinite(tf) || !(t0 < tf)) {
    throw ParameterError("potential window must be finite with t0 < tf");
  }
  if (shape == PulseShape::gaussian_sinc && !(tau > 0.0)) {
    throw ParameterError("gaussian envelope width tau must be positive");
  }
  if (shape == PulseShape::sinc && !(wavenumber(params) < params.m)) {
    std::ostringstream msg;
    msg << "wavenumber k_w = " << wavenumber(params)
        << " violates the constraint k_w = 2πw/L < m (m = " << params.m << ")";
    throw ParameterError(msg.str());
  }
}

PotentialSpec standard_potential(const ModelParams& params, int w,
                                 double amplitude, double half_window) {
  PotentialSpec v;
  v.w = w;
  v.amplitude = amplitude;
  v.shape = PulseShape::sinc;
  v.t0 = -half_window;
  v.tf = half_window;
  v.validate(params);
  return v;
}

PotentialSpec gaussian_potential(int w, double amplitude, double tau) {
  PotentialSpec v;
  v.w = w;
  v.amplitude = amplitude;
  v.shape = PulseShape::gaussian_sinc;
  v.tau = tau;
  v.t0 = -8.0 * tau;
  v.tf = 8.0 * tau;
  return v;
}

}  // namespace holevac
