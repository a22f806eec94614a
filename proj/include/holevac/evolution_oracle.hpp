#pragma once

// Direct integration of i dc/dt = (H0 + q V(t)) c in the truncated plane-wave
// basis. This path shares no code with the perturbative engine beyond the
// spectrum itself, so agreement between the two is a real check.

#include <optional>
#include <string>
#include <vector>

#include "holevac/dirac_spectrum.hpp"
#include "holevac/potential.hpp"

namespace holevac {

enum class Integrator {
  /// Classical RK4 on the coefficients, in a frame rotating at the
  /// reference energy of the initial state.
  schrodinger_rk4,
  /// Classical RK4 on interaction-picture coefficients b = e^{i eps t} c.
  interaction_rk4,
};

struct IntegratorConfig {
  Integrator method = Integrator::schrodinger_rk4;
  double step = 0.0;  // 0 selects the automatic rule
  /// The basis must hold this many r -> r +- w rungs around the initial mode.
  int ladder_rungs = 3;
  /// Runs whose norm drifts further than this abort.
  double abort_drift = 1e-7;
};

/// H(t) = diag(eps) + q g(t) C with C banded and time independent.
class CouplingStructure {
 public:
  struct Link {
    std::size_t col;
    complex value;
  };

  CouplingStructure(const PotentialSpec& v, const ModelParams& params);

  const std::vector<ModeIndex>& modes() const { return modes_; }
  const std::vector<double>& diagonal() const { return diagonal_; }
  const std::vector<std::vector<Link>>& rows() const { return rows_; }
  const PotentialSpec& potential() const { return potential_; }
  const ModelParams& params() const { return params_; }

  double temporal_factor(double t) const { return potential_.pulse(t, params_.m); }
  /// max over links of |C_ij|.
  double max_coupling() const;
  /// Dense H(t) for inspection.
  std::vector<std::vector<complex>> hamiltonian_at(double t, double q) const;

 private:
  PotentialSpec potential_;
  ModelParams params_;
  std::vector<ModeIndex> modes_;
  std::vector<double> diagonal_;
  std::vector<std::vector<Link>> rows_;

 public:
  /// The same links in compressed-row form, for the integrator loops.
  std::vector<std::size_t> row_offsets;
  std::vector<std::size_t> link_cols;
  std::vector<complex> link_values;
};

/// Throws CutoffError if R < w.
CouplingStructure build_coupling(const PotentialSpec& v, const ModelParams& params);

struct EvolutionState {
  double t = 0.0;
  /// Ordered as basis_modes(params).
  std::vector<complex> coefficients;
  double norm_drift = 0.0;
  long steps = 0;
  /// Population on the outermost ladder rung kept by evolve(); -1 when the
  /// state did not come from evolve().
  double outer_rung_population = -1.0;
};

/// Smallest rung count >= 3 whose estimated outer-rung population
/// 4 (x^n / n!)^2, x = 2 pi |a| q, stays below `target`.
int ladder_rungs_for(double q, double amplitude, double target = 1e-10);

EvolutionState basis_state(const ModeIndex& mode, const ModelParams& params,
                           double t);

double norm_of(const EvolutionState& state);

/// Propagates `start` from start.t to t_end under the coupling. Throws
/// IntegratorHealthError, with the norm trace, if the drift exceeds
/// config.abort_drift.
EvolutionState propagate(const EvolutionState& start,
                         const CouplingStructure& coupling, double q,
                         double t_end, const IntegratorConfig& config = {});

/// Evolves the basis state `initial` over the potential window. Throws
/// CutoffError unless R >= |r| + ladder_rungs * w.
EvolutionState evolve(const ModeIndex& initial, const PotentialSpec& v, double q,
                      const ModelParams& params,
                      const IntegratorConfig& config = {});

/// sum |c|^2 eps over the basis.
double energy_of(const EvolutionState& state, const ModelParams& params);

double measured_shift(const ModeIndex& initial, const PotentialSpec& v, double q,
                      const ModelParams& params,
                      const IntegratorConfig& config = {});

/// Population on the ladder rungs r +- rung w, both energy signs.
double rung_population(const EvolutionState& state, const ModeIndex& initial,
                       int w, int rung, const ModelParams& params);

/// Largest population on any mode off the r + j w ladder.
double off_ladder_population(const EvolutionState& state,
                             const ModeIndex& initial, int w,
                             const ModelParams& params);

struct ScalingStudy {
  ModeIndex mode;
  std::vector<double> q_values;
  std::vector<double> shifts;     // measured energy change
  std::vector<double> residuals;  // |shift - q^2 reference|
  std::vector<double> norm_drifts;
  double reference = 0.0;  // second-order coefficient the residuals use
  std::optional<double> fitted_order;
  std::optional<double> extrapolated;  // shift / q^2 extrapolated to q -> 0
  std::string fit_status;              // "ok", "insufficient points", ...
};

/// Runs the oracle at each q and fits log residual against log q.
/// q_values must be strictly decreasing and positive.
ScalingStudy scaling_study(const ModeIndex& initial, const PotentialSpec& v,
                           const std::vector<double>& q_values,
                           double reference, const ModelParams& params,
                           const IntegratorConfig& config = {});

/// |<psi_a(t_f), psi_b(t_f)>| for two basis states evolved under the same H(t).
double pairwise_orthogonality_check(const ModeIndex& a, const ModeIndex& b,
                                    const PotentialSpec& v, double q,
                                    const ModelParams& params,
                                    const IntegratorConfig& config = {});

complex inner_product(const EvolutionState& a, const EvolutionState& b);

}  // namespace holevac
