#pragma once

// N-electron bookkeeping for the filled negative-energy sea, plus a
// small-scale brute-force check that one-body expectation values of a
// Slater determinant reduce to sums over its orbitals.

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "holevac/dirac_spectrum.hpp"

namespace holevac {

enum class ShiftMethod { closed_form, engine, oracle };

std::string to_string(ShiftMethod method);

/// Second-order shift coefficient of one mode (the coefficient of q^2).
struct ShiftRecord {
  ModeIndex mode;
  ShiftMethod method = ShiftMethod::closed_form;
  double value = 0.0;
};

/// Occupied sea modes: lambda = -1, no duplicates, kept sorted by r.
class VacuumOccupancy {
 public:
  /// Every sea mode with |r| <= R.
  static VacuumOccupancy filled_sea(const ModelParams& params);
  /// Throws std::invalid_argument on duplicates or positive-energy entries.
  explicit VacuumOccupancy(std::vector<ModeIndex> occupied);

  const std::vector<ModeIndex>& occupied() const { return occupied_; }
  bool contains(const ModeIndex& mode) const;

 private:
  std::vector<ModeIndex> occupied_;
};

/// q^2 times the compensated sum of the record values, accumulated from the
/// largest |r| inward. Throws CoverageError if an occupied mode has no record.
double vacuum_total_shift(std::span<const ShiftRecord> records, double q,
                          const VacuumOccupancy& occupancy);

struct SlaterFixture {
  std::size_t K = 0;  // single-particle basis dimension
  std::size_t N = 0;  // particle count
  std::vector<std::vector<complex>> orbitals;  // N rows of length K
  std::vector<std::vector<complex>> op;        // K x K Hermitian
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument unless the orbitals are orthonormal within
  /// 1e-12 and the operator is Hermitian.
  void validate() const;
};

/// Random orthonormal orbitals (Gram-Schmidt on Gaussian vectors) and a
/// random Hermitian operator, reproducible from `seed`.
SlaterFixture random_slater_fixture(std::size_t K, std::size_t N,
                                    std::uint64_t seed);

/// Same orbitals as `fix` with the identity operator.
SlaterFixture with_identity_operator(SlaterFixture fix);

/// Antisymmetrized amplitude tensor of dimension K^N, row-major in the
/// particle slots, including the 1/sqrt(N!) factor. Throws
/// std::length_error if K^N exceeds `max_amplitudes`.
std::vector<complex> slater_tensor(const SlaterFixture& fix,
                                   std::size_t max_amplitudes = 10000);

/// <Psi| sum_n O_n |Psi> contracted slot by slot on the explicit tensor.
double slater_expectation_bruteforce(const SlaterFixture& fix,
                                     std::size_t max_amplitudes = 10000);

/// sum_n <psi_n|O|psi_n>.
double slater_expectation_reduced(const SlaterFixture& fix);

}  // namespace holevac
