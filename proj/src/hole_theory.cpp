#include "holevac/hole_theory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <set>
#include <stdexcept>

#include "holevac/errors.hpp"
#include "holevac/summation.hpp"

namespace holevac {

std::string to_string(ShiftMethod method) {
  switch (method) {
    case ShiftMethod::closed_form:
      return "closed_form";
    case ShiftMethod::engine:
      return "engine";
    case ShiftMethod::oracle:
      return "oracle";
  }
  return "unknown";
}

VacuumOccupancy VacuumOccupancy::filled_sea(const ModelParams& params) {
  std::vector<ModeIndex> sea;
  for (int r = -params.R; r <= params.R; ++r) sea.push_back(sea_mode(r));
  return VacuumOccupancy(std::move(sea));
}

VacuumOccupancy::VacuumOccupancy(std::vector<ModeIndex> occupied)
    : occupied_(std::move(occupied)) {
  for (const auto& mode : occupied_) {
    if (mode.sign != EnergySign::negative) {
      throw std::invalid_argument("sea occupancy holds only lambda = -1 modes, got " +
                                  to_string(mode));
    }
  }
  std::sort(occupied_.begin(), occupied_.end());
  if (std::adjacent_find(occupied_.begin(), occupied_.end()) != occupied_.end()) {
    throw std::invalid_argument("sea occupancy has duplicate modes");
  }
}

bool VacuumOccupancy::contains(const ModeIndex& mode) const {
  return std::binary_search(occupied_.begin(), occupied_.end(), mode);
}

double vacuum_total_shift(std::span<const ShiftRecord> records, double q,
                          const VacuumOccupancy& occupancy) {
  std::vector<const ShiftRecord*> used;
  std::set<ModeIndex> seen;
  for (const auto& rec : records) {
    if (occupancy.contains(rec.mode) && seen.insert(rec.mode).second) {
      used.push_back(&rec);
    }
  }
  for (const auto& mode : occupancy.occupied()) {
    if (!seen.count(mode)) {
      throw CoverageError("no shift record for occupied sea mode " + to_string(mode));
    }
  }
  std::stable_sort(used.begin(), used.end(), [](const ShiftRecord* a, const ShiftRecord* b) {
    const int ra = std::abs(a->mode.r);
    const int rb = std::abs(b->mode.r);
    if (ra != rb) return ra > rb;
    return a->mode.r > b->mode.r;
  });
  CompensatedSum sum;
  for (const ShiftRecord* rec : used) sum += rec->value;
  return q * q * sum.value();
}

void SlaterFixture::validate() const {
  if (orbitals.size() != N || op.size() != K) {
    throw std::invalid_argument("fixture dimensions do not match K and N");
  }
  for (const auto& row : orbitals) {
    if (row.size() != K) throw std::invalid_argument("orbital length must be K");
  }
  for (std::size_t a = 0; a < N; ++a) {
    for (std::size_t b = 0; b < N; ++b) {
      complex g{0.0, 0.0};
      for (std::size_t i = 0; i < K; ++i) g += std::conj(orbitals[a][i]) * orbitals[b][i];
      const complex expect = a == b ? 1.0 : 0.0;
      if (std::abs(g - expect) > 1e-12) {
        throw std::invalid_argument("fixture orbitals are not orthonormal");
      }
    }
  }
  for (std::size_t i = 0; i < K; ++i) {
    if (op[i].size() != K) throw std::invalid_argument("operator must be K x K");
    for (std::size_t j = 0; j < K; ++j) {
      if (std::abs(op[i][j] - std::conj(op[j][i])) > 1e-14) {
        throw std::invalid_argument("fixture operator is not Hermitian");
      }
    }
  }
}

SlaterFixture random_slater_fixture(std::size_t K, std::size_t N,
                                    std::uint64_t seed) {
  if (N == 0 || N > K) throw std::invalid_argument("need 1 <= N <= K");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SlaterFixture fix;
  fix.K = K;
  fix.N = N;
  fix.seed = seed;
  // Two Gram-Schmidt passes keep the Gram matrix at round-off level.
  while (fix.orbitals.size() < N) {
    std::vector<complex> v(K);
    for (auto& c : v) c = {gauss(rng), gauss(rng)};
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : fix.orbitals) {
        complex proj{0.0, 0.0};
        for (std::size_t i = 0; i < K; ++i) proj += std::conj(u[i]) * v[i];
        for (std::size_t i = 0; i < K; ++i) v[i] -= proj * u[i];
      }
    }
    double norm = 0.0;
    for (const auto& c : v) norm += std::norm(c);
    norm = std::sqrt(norm);
    if (norm < 1e-8) continue;
    for (auto& c : v) c /= norm;
    fix.orbitals.push_back(std::move(v));
  }
  fix.op.assign(K, std::vector<complex>(K));
  for (std::size_t i = 0; i < K; ++i) {
    fix.op[i][i] = gauss(rng);
    for (std::size_t j = i + 1; j < K; ++j) {
      fix.op[i][j] = {gauss(rng), gauss(rng)};
      fix.op[j][i] = std::conj(fix.op[i][j]);
    }
  }
  return fix;
}

SlaterFixture with_identity_operator(SlaterFixture fix) {
  fix.op.assign(fix.K, std::vector<complex>(fix.K));
  for (std::size_t i = 0; i < fix.K; ++i) fix.op[i][i] = 1.0;
  return fix;
}

namespace {

int permutation_sign(const std::vector<std::size_t>& perm) {
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = i + 1; j < perm.size(); ++j) {
      if (perm[i] > perm[j]) ++inversions;
    }
  }
  return inversions % 2 == 0 ? 1 : -1;
}

std::size_t checked_power(std::size_t base, std::size_t exp, std::size_t limit) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    out *= base;
    if (out > limit) {
      throw std::length_error("Slater tensor K^N exceeds the amplitude limit of " +
                              std::to_string(limit));
    }
  }
  return out;
}

}  // namespace

std::vector<complex> slater_tensor(const SlaterFixture& fix,
                                   std::size_t max_amplitudes) {
  fix.validate();
  const std::size_t K = fix.K;
  const std::size_t N = fix.N;
  const std::size_t size = checked_power(K, N, max_amplitudes);

  std::vector<std::size_t> perm(N);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::pair<int, std::vector<std::size_t>>> perms;
  do {
    perms.emplace_back(permutation_sign(perm), perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  const double norm = 1.0 / std::sqrt(static_cast<double>(perms.size()));

  std::vector<complex> psi(size);
  std::vector<std::size_t> idx(N);
  for (std::size_t flat = 0; flat < size; ++flat) {
    std::size_t rest = flat;
    for (std::size_t slot = N; slot-- > 0;) {
      idx[slot] = rest % K;
      rest /= K;
    }
    complex amp{0.0, 0.0};
    for (const auto& [sign, p] : perms) {
      complex term = static_cast<double>(sign);
      for (std::size_t slot = 0; slot < N; ++slot) term *= fix.orbitals[p[slot]][idx[slot]];
      amp += term;
    }
    psi[flat] = norm * amp;
  }
  return psi;
}

double slater_expectation_bruteforce(const SlaterFixture& fix,
                                     std::size_t max_amplitudes) {
  const std::vector<complex> psi = slater_tensor(fix, max_amplitudes);
  const std::size_t K = fix.K;
  const std::size_t N = fix.N;
  complex total{0.0, 0.0};
  std::size_t stride = psi.size();
  for (std::size_t slot = 0; slot < N; ++slot) {
    stride /= K;  // step between neighbouring values of this slot's index
    for (std::size_t flat = 0; flat < psi.size(); ++flat) {
      const std::size_t i = (flat / stride) % K;
      const std::size_t base = flat - i * stride;
      complex o_psi{0.0, 0.0};
      for (std::size_t j = 0; j < K; ++j) o_psi += fix.op[i][j] * psi[base + j * stride];
      total += std::conj(psi[flat]) * o_psi;
    }
  }
  return total.real();
}

double slater_expectation_reduced(const SlaterFixture& fix) {
  fix.validate();
  double total = 0.0;
  for (const auto& psi : fix.orbitals) {
    complex e{0.0, 0.0};
    for (std::size_t i = 0; i < fix.K; ++i) {
      for (std::size_t j = 0; j < fix.K; ++j) e += std::conj(psi[i]) * fix.op[i][j] * psi[j];
    }
    total += e.real();
  }
  return total;
}

}  // namespace holevac
