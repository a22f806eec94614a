#pragma once

// Separable external potential V(z, t) = a cos(k_w z) g(t), k_w = 2 pi w / L.
//
// Pulse shapes:
//   sinc           g(t) = 4 sin(m t) / t
//   gaussian_sinc  g(t) = 4 sin(m t) / t * exp(-t^2 / (2 tau^2))
//
// The sinc pulse is the baseline. Its time transform is 2 pi a box of
// half-width m, so only transitions with |eps' - eps| < m survive an
// infinite window. The Gaussian envelope gives the same selection with a
// compact effective support, which lets finite-window computations be
// compared without any T -> infinity extrapolation.

#include "holevac/dirac_spectrum.hpp"

namespace holevac {

enum class PulseShape { sinc, gaussian_sinc };

struct PotentialSpec {
  int w = 5;
  double amplitude = 1.0;
  PulseShape shape = PulseShape::sinc;
  double tau = 0.0;  // gaussian_sinc only
  double t0 = -2000.0;
  double tf = 2000.0;

  double wavenumber(const ModelParams& params) const;
  /// g(t); the removable t = 0 point of sin(mt)/t is taken from its series.
  double pulse(double t, double m) const;
  double value(double z, double t, const ModelParams& params) const;

  /// Throws ParameterError. For the sinc pulse this enforces k_w < m.
  void validate(const ModelParams& params) const;
};

/// Baseline potential active on [-half_window, +half_window].
PotentialSpec standard_potential(const ModelParams& params, int w,
                                 double amplitude, double half_window);

/// Gaussian-envelope potential on [-8 tau, +8 tau].
PotentialSpec gaussian_potential(int w, double amplitude, double tau);

}  // namespace holevac
