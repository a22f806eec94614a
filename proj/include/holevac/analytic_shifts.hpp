#pragma once

// Closed-form results for the baseline sinc pulse over an infinite window.
//
// With k_w < m only same-sign transitions r -> r +- w survive, and the
// per-mode second-order shift reduces to
//
//   d2(lambda, r) = 2 pi^2 lambda k ((p + k)/E_{r+w} - (p - k)/E_{r-w}),
//
// whose sign is lambda for every r. Summed over the sea it converges to
// -4 pi q^2 k^2 L.

#include <functional>
#include <vector>

#include "holevac/dirac_spectrum.hpp"

namespace holevac {

/// f_{lambda',s;lambda,r} in the infinite-window limit. Throws
/// ParameterError if k_w >= m, or if |eps'_s - eps_{s-+w}| sits exactly on m.
complex f_closed(EnergySign to_sign, int s, EnergySign from_sign, int r, int w,
                 const ModelParams& params);

/// |u^dagger_{lambda, r + sign_w w} u_{lambda, r}|^2 from the energy/momentum
/// form ((lE')(lE) + p (p +- k) + m^2) / (2 (lE')(lE) L^2).
double overlap_sq(EnergySign sign, int r, int sign_w, int w,
                  const ModelParams& params);

/// Closed-form per-mode shift.
double shift_closed(const ModeIndex& mode, int w, const ModelParams& params);

/// Overlap function used by shift_via_spinor_sum; swapped in by tests.
using OverlapFn =
    std::function<double(EnergySign, int, int, int, const ModelParams&)>;

/// Direct |u^dagger u|^2 from dirac_spectrum spinors.
double spinor_overlap_sq(EnergySign sign, int r, int sign_w, int w,
                         const ModelParams& params);

/// 4 pi^2 L^2 sum_{+-} |u^dagger_{r+-w} u_r|^2 (eps_{r+-w} - eps_r).
double shift_via_spinor_sum(const ModeIndex& mode, int w,
                            const ModelParams& params,
                            const OverlapFn& overlap = spinor_overlap_sq);

/// (p + k)/E_{p+k} > (p - k)/E_{p-k}.
bool negativity_holds(double p, double k, double m);

/// (p + k)/E_{p+k} - (p - k)/E_{p-k}; positive for k > 0.
double vacuum_integrand(double p, double k, double m);

/// -2 pi q^2 k L (E_{B+k} - E_{B-k}). Throws ParameterError unless B > k > 0.
double vacuum_integral_finite(double B, double k, double m, double q, double L);

/// -pi q^2 k L times the integrand integrated numerically over [-B, B].
double vacuum_integral_quadrature(double B, double k, double m, double q,
                                  double L);

/// -4 pi q^2 k^2 L.
double vacuum_limit(double q, double k, double L);

/// q^2 sum_{|r| <= R} d2(-1, r), accumulated from large |r| inward.
/// Throws ParameterError unless R >= w and k_w < m.
double vacuum_discrete_sum(int R, int w, double q, const ModelParams& params);

struct VacuumLadderPoint {
  double cutoff;  // R for sums, B for integrals
  double value;
  double relative_deviation;  // from the limit
};

struct VacuumReport {
  double q = 0.0;
  double k = 0.0;
  double discrete_partial_sum = 0.0;  // at params.R
  double tail_bound = 0.0;            // both tails beyond p_R
  /// (2 pi / L) sum_r d2(-1, r): the per-unit-momentum view of the same sum.
  double density_weighted_sum = 0.0;
  double B = 0.0;
  double integral_finite_B = 0.0;
  double integral_quadrature_B = 0.0;
  double asymptotic_limit = 0.0;
  double sum_deviation = 0.0;
  double integral_deviation = 0.0;
  std::vector<VacuumLadderPoint> sum_ladder;
  std::vector<VacuumLadderPoint> integral_ladder;
};

/// Estimate of |q^2 sum_{|r| > R} d2(-1, r)| from the p^-3 decay of the
/// summand: 2 pi L q^2 k^2 m^2 / (p_R - k)^2.
double vacuum_tail_bound(int R, int w, double q, const ModelParams& params);

/// Partial sum and tail bound at params.R, finite-B integral both ways at B.
VacuumReport vacuum_report(int w, double q, const ModelParams& params, double B,
                           const std::vector<int>& R_ladder,
                           const std::vector<double>& B_ladder);

}  // namespace holevac
