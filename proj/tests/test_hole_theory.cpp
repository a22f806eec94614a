#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "holevac/analytic_shifts.hpp"
#include "holevac/errors.hpp"
#include "holevac/hole_theory.hpp"

using namespace holevac;

namespace {

std::vector<ShiftRecord> closed_records(const VacuumOccupancy& sea, int w,
                                        const ModelParams& params) {
  std::vector<ShiftRecord> out;
  for (const auto& mode : sea.occupied()) {
    out.push_back({mode, ShiftMethod::closed_form, shift_closed(mode, w, params)});
  }
  return out;
}

}  // namespace

TEST_CASE("filled sea occupancy") {
  const ModelParams params{1.0, 20.0 * pi, 7};
  const VacuumOccupancy sea = VacuumOccupancy::filled_sea(params);
  CHECK(sea.occupied().size() == 15);
  CHECK(sea.contains(sea_mode(-7)));
  CHECK_FALSE(sea.contains(sea_mode(8)));
  CHECK_FALSE(sea.contains(positive_mode(0)));
  CHECK_THROWS_AS(VacuumOccupancy({sea_mode(1), sea_mode(1)}), std::invalid_argument);
  CHECK_THROWS_AS(VacuumOccupancy({sea_mode(1), positive_mode(2)}), std::invalid_argument);
  const VacuumOccupancy shuffled({sea_mode(3), sea_mode(-2), sea_mode(0)});
  CHECK(shuffled.occupied().front() == sea_mode(-2));
}

TEST_CASE("vacuum total shift") {
  const VacuumOccupancy one({sea_mode(0)});
  const std::vector<ShiftRecord> single{{sea_mode(0), ShiftMethod::closed_form, -8.82766}};
  CHECK(vacuum_total_shift(single, 0.1, one) == doctest::Approx(-0.0882766).epsilon(1e-12));
  const std::vector<ShiftRecord> zero{{sea_mode(0), ShiftMethod::engine, 0.0}};
  CHECK(vacuum_total_shift(zero, 0.1, one) == 0.0);

  const ModelParams params{};
  const VacuumOccupancy sea = VacuumOccupancy::filled_sea(params);
  const auto records = closed_records(sea, 5, params);
  const double total = vacuum_total_shift(records, 0.1, sea);
  CHECK(total < 0.0);
  CHECK(std::abs(total / -1.97392 - 1.0) <= 0.01);
  CHECK(total == doctest::Approx(vacuum_discrete_sum(params.R, 5, 0.1, params)).epsilon(1e-13));
  // order of records does not matter
  auto reversed = records;
  std::reverse(reversed.begin(), reversed.end());
  CHECK(vacuum_total_shift(reversed, 0.1, sea) == total);
}

TEST_CASE("missing records are a coverage error") {
  const ModelParams params{1.0, 20.0 * pi, 10};
  const VacuumOccupancy sea = VacuumOccupancy::filled_sea(params);
  auto records = closed_records(sea, 5, params);
  records.erase(records.begin() + 4);
  CHECK_THROWS_AS(vacuum_total_shift(records, 0.1, sea), CoverageError);
}

TEST_CASE("slater: single particle and diagonal operator") {
  SlaterFixture one = random_slater_fixture(4, 1, 5);
  CHECK(slater_expectation_bruteforce(one) ==
        doctest::Approx(slater_expectation_reduced(one)).epsilon(1e-13));

  SlaterFixture diag;
  diag.K = 4;
  diag.N = 2;
  diag.orbitals = {{1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}};
  diag.op.assign(4, std::vector<complex>(4));
  for (std::size_t i = 0; i < 4; ++i) diag.op[i][i] = static_cast<double>(i + 1);
  CHECK(std::abs(slater_expectation_bruteforce(diag) - 3.0) <= 1e-15);
  CHECK(slater_expectation_reduced(diag) == 3.0);
}

TEST_CASE("property: brute force equals the orbital sum on random fixtures") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t K = 2 + seed % 4;
    const std::size_t N = std::min<std::size_t>(K, 2 + (seed / 4) % 2);
    const SlaterFixture fix = random_slater_fixture(K, N, 1000 + seed);
    CAPTURE(seed);
    CHECK_NOTHROW(fix.validate());
    CHECK(std::abs(slater_expectation_bruteforce(fix) - slater_expectation_reduced(fix)) <=
          1e-12);
    const SlaterFixture id = with_identity_operator(fix);
    CHECK(std::abs(slater_expectation_bruteforce(id) - static_cast<double>(N)) <= 1e-12);
  }
}

TEST_CASE("slater tensor: normalization and antisymmetry") {
  const SlaterFixture fix = random_slater_fixture(5, 3, 42);
  const auto psi = slater_tensor(fix);
  REQUIRE(psi.size() == 125);
  double norm = 0.0;
  for (const auto& a : psi) norm += std::norm(a);
  CHECK(std::abs(norm - 1.0) <= 1e-12);
  // swapping slots 0 and 2 negates every amplitude
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      for (std::size_t k = 0; k < 5; ++k) {
        CHECK(std::abs(psi[(i * 5 + j) * 5 + k] + psi[(k * 5 + j) * 5 + i]) <= 1e-15);
      }
    }
  }
  CHECK_THROWS_AS(slater_tensor(fix, 100), std::length_error);
}

TEST_CASE("fixture validation") {
  SlaterFixture fix = random_slater_fixture(3, 2, 1);
  fix.orbitals[1] = fix.orbitals[0];
  CHECK_THROWS_AS(fix.validate(), std::invalid_argument);
  SlaterFixture bad_op = random_slater_fixture(3, 2, 1);
  bad_op.op[0][1] += complex{0.0, 0.5};
  CHECK_THROWS_AS(bad_op.validate(), std::invalid_argument);
  CHECK_THROWS_AS(random_slater_fixture(2, 3, 1), std::invalid_argument);
  CHECK(random_slater_fixture(4, 2, 9).orbitals == random_slater_fixture(4, 2, 9).orbitals);
}
