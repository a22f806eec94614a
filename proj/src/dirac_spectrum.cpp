#include "holevac/dirac_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace holevac {

ModeIndex sea_mode(int r) { return ModeIndex{EnergySign::negative, r}; }
ModeIndex positive_mode(int r) { return ModeIndex{EnergySign::positive, r}; }

std::string to_string(const ModeIndex& mode) {
  return (mode.sign == EnergySign::positive ? "+1:" : "-1:") +
         std::to_string(mode.r);
}

ModeIndex parse_mode(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("mode '" + text + "' must look like lambda:r");
  }
  const std::string lam = text.substr(0, colon);
  const std::string idx = text.substr(colon + 1);
  ModeIndex mode;
  if (lam == "-1" || lam == "-") {
    mode.sign = EnergySign::negative;
  } else if (lam == "+1" || lam == "1" || lam == "+") {
    mode.sign = EnergySign::positive;
  } else {
    throw std::invalid_argument("mode '" + text + "': lambda must be +1 or -1");
  }
  char* end = nullptr;
  const long r = std::strtol(idx.c_str(), &end, 10);
  if (idx.empty() || *end != '\0') {
    throw std::invalid_argument("mode '" + text + "': r must be an integer");
  }
  mode.r = static_cast<int>(r);
  return mode;
}

void ModelParams::validate() const {
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw std::invalid_argument("mass m must be positive");
  }
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw std::invalid_argument("box length L must be positive");
  }
  if (R < 1) {
    throw std::invalid_argument("basis cutoff R must be >= 1");
  }
}

complex dot(const Spinor& a, const Spinor& b) {
  return std::conj(a.upper) * b.upper + std::conj(a.lower) * b.lower;
}

double norm_sq(const Spinor& s) { return std::norm(s.upper) + std::norm(s.lower); }

Spinor operator*(complex scale, const Spinor& s) {
  return Spinor{scale * s.upper, scale * s.lower};
}

double momentum(int r, const ModelParams& params) {
  return 2.0 * pi * r / params.L;
}

double energy_magnitude(int r, const ModelParams& params) {
  const double p = momentum(r, params);
  return std::sqrt(p * p + params.m * params.m);
}

double energy(const ModeIndex& mode, const ModelParams& params) {
  return mode.lambda() * energy_magnitude(mode.r, params);
}

Spinor spinor(const ModeIndex& mode, const ModelParams& params) {
  const double p = momentum(mode.r, params);
  const double E = energy_magnitude(mode.r, params);
  const double norm = std::sqrt((E + params.m) / (2.0 * params.L * E));
  const double ratio = p / (E + params.m);
  if (mode.sign == EnergySign::positive) {
    return Spinor{norm, norm * ratio};
  }
  return Spinor{-norm * ratio, norm};
}

Spinor apply_free_hamiltonian(double p, double m, const Spinor& s) {
  return Spinor{m * s.upper + p * s.lower, p * s.upper - m * s.lower};
}

Spinor mode_function(const ModeIndex& mode, double z, double t,
                     const ModelParams& params) {
  const double half = 0.5 * params.L;
  double zr = std::fmod(z + half, params.L);
  if (zr < 0.0) zr += params.L;
  zr -= half;
  const double phase = energy(mode, params) * t - momentum(mode.r, params) * zr;
  return std::polar(1.0, -phase) * spinor(mode, params);
}

std::size_t spatial_grid_size(int max_index, const ModelParams& params) {
  const int reach = std::max(params.R, std::abs(max_index));
  return static_cast<std::size_t>(8 * (2 * reach + 1));
}

complex basis_inner_product(const ModeIndex& a, const ModeIndex& b,
                            const ModelParams& params, double t) {
  const std::size_t n =
      spatial_grid_size(std::abs(a.r) + std::abs(b.r), params);
  const double dz = params.L / static_cast<double>(n);
  complex sum{0.0, 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    const double z = -0.5 * params.L + dz * static_cast<double>(j);
    sum += dot(mode_function(a, z, t, params), mode_function(b, z, t, params));
  }
  return sum * dz;
}

std::vector<ModeIndex> basis_modes(const ModelParams& params) {
  std::vector<ModeIndex> modes;
  modes.reserve(static_cast<std::size_t>(2 * (2 * params.R + 1)));
  for (EnergySign sign : {EnergySign::negative, EnergySign::positive}) {
    for (int r = -params.R; r <= params.R; ++r) modes.push_back({sign, r});
  }
  return modes;
}

std::size_t basis_position(const ModeIndex& mode, const ModelParams& params) {
  if (std::abs(mode.r) > params.R) {
    throw std::out_of_range("mode " + to_string(mode) + " outside cutoff R=" +
                            std::to_string(params.R));
  }
  const std::size_t block = static_cast<std::size_t>(2 * params.R + 1);
  const std::size_t offset = mode.sign == EnergySign::negative ? 0 : block;
  return offset + static_cast<std::size_t>(mode.r + params.R);
}

}  // namespace holevac
