#include <doctest.h>

#include <cmath>

#include "metacoll/potential.hpp"
#include "metacoll/scattering.hpp"

using namespace metacoll;
using constants::a0;
using constants::hbar;
using constants::pi;

TEST_CASE("Lennard-Jones geometry") {
  const auto iso = IsotopeParams::neon20();
  const auto pot = ModelPotential::from_core_radius(iso.C6, 5 * a0, iso);
  CHECK(pot(pot.core_radius()) == doctest::Approx(0.0).epsilon(1e-12).scale(pot.well_depth()));
  const double rm = pot.minimum_radius();
  CHECK(pot(rm) == doctest::Approx(-pot.well_depth()).epsilon(1e-12));
  // dV/dr vanishes at the minimum
  const double h = 1e-6 * rm;
  CHECK(std::abs(pot(rm + h) - pot(rm - h)) / (2 * h) < 1e-6 * pot.well_depth() / rm);
  CHECK_THROWS_AS(pot(0.0), Error);
}

TEST_CASE("tuning round trip and bound-state branch") {
  const auto iso = IsotopeParams::neon22();
  for (double a : {-300.0, 60.0}) {
    const auto pot = tune_to_scattering_length(iso.C6, iso, a * a0);
    const auto sl = scattering_length(pot, iso);
    CHECK(sl.value / a0 == doctest::Approx(a).epsilon(5e-3));
    // Levinson: the branch fixes the number of s-wave bound states
    CHECK(bound_state_count(pot, iso) == default_bound_state_branch);
  }
}

TEST_CASE("scattering length grows across a branch") {
  const auto iso = IsotopeParams::neon20();
  const auto [lo, hi] = branch_window(iso.C6, iso, default_bound_state_branch);
  REQUIRE(lo < hi);
  double prev = -INFINITY;
  for (double f : {0.2, 0.4, 0.6, 0.8}) {
    const auto pot = ModelPotential::from_core_radius(iso.C6, lo + f * (hi - lo), iso);
    const double a = zero_energy_scattering_length(pot, iso);
    CHECK(a > prev);
    prev = a;
  }
}

TEST_CASE("ultracold limit 8 pi a^2") {
  const auto iso = IsotopeParams::neon20();
  for (double a : {-180.0, 22.0}) {
    const auto pot = tune_to_scattering_length(iso.C6, iso, a * a0);
    const double A = scattering_length(pot, iso).value;
    const double s = elastic_cross_section(pot, iso, 2e-4, 4);
    CHECK(s == doctest::Approx(8 * pi * A * A).epsilon(1e-2));
  }
}

TEST_CASE("Bose cross section sums even partial waves") {
  const double k = 1e8;
  const double s = bose_cross_section(k, {0, 2}, {pi / 2, pi / 6});
  CHECK(s == doctest::Approx(8 * pi / (k * k) * (1.0 + 5 * 0.25)));
  // unitarity bound per partial wave
  CHECK(bose_cross_section(k, {0}, {0.3}) <= 8 * pi / (k * k));
  CHECK_THROWS_AS(bose_cross_section(k, {1}, {0.3}), Error);
}

TEST_CASE("centrifugal barrier of the van-der-Waals tail") {
  const auto iso = IsotopeParams::neon20();
  const double A = hbar * hbar * 6.0 / (2 * iso.reduced_mass());
  // A/r^2 - C6/r^6 peaks at r^4 = 3 C6 / A with height (2/3) A / r^2
  const double r4 = 3 * iso.C6 / A;
  const double expected = 2.0 / 3.0 * A / std::sqrt(r4);
  CHECK(centrifugal_barrier(iso, iso.C6, 2) == doctest::Approx(expected).epsilon(1e-6));
  CHECK(centrifugal_barrier(iso, iso.C6, 0) == 0.0);
}

TEST_CASE("cross-section interpolant holds the tails") {
  const auto iso = IsotopeParams::neon20();
  const auto pot = tune_to_scattering_length(iso.C6, iso, -180 * a0);
  const auto curve = Scatterer(pot, iso).cross_section_curve(log_grid(0.05, 5.0, 30), 4);
  const CrossSectionInterpolant f(curve);
  CHECK(f(0.01) == doctest::Approx(curve.sigma.front()));
  CHECK(f(10.0) * 100.0 == doctest::Approx(curve.sigma.back() * 25.0));
  for (std::size_t i = 0; i < curve.v.size(); ++i)
    CHECK(f(curve.v[i]) == doctest::Approx(curve.sigma[i]).epsilon(1e-9));
}
