#pragma once

// Second-order time-dependent perturbation theory for a separable
// potential. A mode (lambda, r) driven by q V picks up the first-order
// correction
//
//   phi1 = -i sum_{lambda', s} f_{lambda',s;lambda,r} phi0_{lambda',s}
//   f    = integral over the window of V_{lambda',s;lambda,r}(t) e^{i (eps' - eps) t} dt
//
// and its energy changes by q^2 sum |f|^2 (eps' - eps) at second order.
// The first-order term vanishes identically.

#include <map>

#include "holevac/dirac_spectrum.hpp"
#include "holevac/potential.hpp"

namespace holevac {

/// Composite Simpson rule on the potential window. A step of 0 selects
/// h <= min(0.02/m, 0.1/(m + |delta|)).
struct QuadratureConfig {
  double step = 0.0;
};

struct TransitionAmplitude {
  ModeIndex from;
  ModeIndex to;
  complex f_value;
  /// ||delta| - m| < 0.05 m: the infinite-window limit is a step function of
  /// delta here, so the windowed value converges slowly.
  bool near_edge = false;
};

struct FirstOrderState {
  ModeIndex from;
  std::map<ModeIndex, complex> coefficients;
};

/// <phi0_to | V(., t) | phi0_from> by periodic spatial quadrature.
complex matrix_element(const PotentialSpec& v, const ModeIndex& to,
                       const ModeIndex& from, double t,
                       const ModelParams& params);

/// Time-independent spatial factor of the matrix element:
/// (a L / 2) u_to^dagger u_from when s = r +- w, exactly zero otherwise.
complex spatial_coupling(const PotentialSpec& v, const ModeIndex& to,
                         const ModeIndex& from, const ModelParams& params);

/// integral of g(t) e^{i delta t} over the window.
complex pulse_transform(const PotentialSpec& v, double delta,
                        const ModelParams& params,
                        const QuadratureConfig& quad = {});

bool near_indicator_edge(double delta, double m, double margin_fraction = 0.05);

TransitionAmplitude f_coefficient(const PotentialSpec& v, const ModeIndex& to,
                                  const ModeIndex& from,
                                  const ModelParams& params,
                                  const QuadratureConfig& quad = {});

/// Throws CutoffError unless |r| + w <= R.
FirstOrderState first_order_state(const PotentialSpec& v, const ModeIndex& from,
                                  const ModelParams& params,
                                  const QuadratureConfig& quad = {});

/// sum over the basis of |f|^2 (eps' - eps).
double second_order_shift_sum(const PotentialSpec& v, const ModeIndex& mode,
                              const ModelParams& params,
                              const QuadratureConfig& quad = {});

/// <phi1|H0|phi1> - eps <phi1|phi1>.
double second_order_shift_from_state(const FirstOrderState& state,
                                     const ModelParams& params);

/// Magnitude of the first-order energy term
/// eps (<phi1|phi0> + <phi0|phi1>) plus the diagonal element of V at t_f.
double first_order_shift_check(const PotentialSpec& v, const ModeIndex& mode,
                               const ModelParams& params,
                               const QuadratureConfig& quad = {});

}  // namespace holevac
