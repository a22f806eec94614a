#pragma once

// Free Dirac plane-wave basis in 1+1 dimensions on a periodic box of
// length L, natural units (hbar = c = 1). The free Hamiltonian in momentum
// space is the 2x2 matrix [[m, p], [p, -m]].

#include <complex>
#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace holevac {

using complex = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

enum class EnergySign : int { negative = -1, positive = +1 };

constexpr int to_int(EnergySign s) { return static_cast<int>(s); }
constexpr EnergySign flip(EnergySign s) {
  return s == EnergySign::positive ? EnergySign::negative : EnergySign::positive;
}

/// Plane-wave label: energy sign and integer momentum index, p_r = 2 pi r / L.
struct ModeIndex {
  EnergySign sign = EnergySign::negative;
  int r = 0;

  int lambda() const { return to_int(sign); }
  friend auto operator<=>(const ModeIndex&, const ModeIndex&) = default;
};

ModeIndex sea_mode(int r);
ModeIndex positive_mode(int r);
std::string to_string(const ModeIndex& mode);
/// Parses "-1:5", "+1:-3" or "1:0" into a mode. Throws std::invalid_argument.
ModeIndex parse_mode(const std::string& text);

/// Electron mass m, box length L and basis cutoff R (modes with |r| <= R).
struct ModelParams {
  double m = 1.0;
  double L = 20.0 * pi;
  int R = 300;

  /// Throws std::invalid_argument unless m > 0, L > 0 and R >= 1.
  void validate() const;
};

/// Two-component complex amplitude.
struct Spinor {
  complex upper;
  complex lower;
};

/// a^dagger b
complex dot(const Spinor& a, const Spinor& b);
double norm_sq(const Spinor& s);
Spinor operator*(complex scale, const Spinor& s);

double momentum(int r, const ModelParams& params);
/// E_r = +sqrt(p_r^2 + m^2).
double energy_magnitude(int r, const ModelParams& params);
/// lambda * E_r.
double energy(const ModeIndex& mode, const ModelParams& params);

/// Normalized so that u^dagger u = 1/L.
///
/// Positive-energy modes use N (1, p/(E+m)). Negative-energy modes use the
/// equivalent form N (-p/(E+m), 1), which avoids the vanishing denominator
/// of lambda*E + m at p = 0; its lower component is real and positive.
/// Both share N = sqrt((E+m) / (2 L E)).
Spinor spinor(const ModeIndex& mode, const ModelParams& params);

/// Applies [[m, p], [p, -m]] to a spinor.
Spinor apply_free_hamiltonian(double p, double m, const Spinor& s);

/// u exp(-i (eps t - p z)), with z reduced into [-L/2, L/2).
Spinor mode_function(const ModeIndex& mode, double z, double t,
                     const ModelParams& params);

/// Number of points of the periodic spatial grid used for overlap
/// quadratures involving momentum indices up to `max_index`.
std::size_t spatial_grid_size(int max_index, const ModelParams& params);

/// Overlap of two mode functions at time t by periodic trapezoid quadrature
/// over one box length. Exact for the band-limited integrands involved.
complex basis_inner_product(const ModeIndex& a, const ModeIndex& b,
                            const ModelParams& params, double t = 0.0);

/// All modes with |r| <= R, ordered by (lambda, r): the negative-energy
/// block first, each block in ascending r.
std::vector<ModeIndex> basis_modes(const ModelParams& params);

/// Position of `mode` inside basis_modes(params). Mode must lie in the basis.
std::size_t basis_position(const ModeIndex& mode, const ModelParams& params);

}  // namespace holevac
