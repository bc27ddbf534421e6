#include <doctest.h>

#include <cmath>

#include "metacoll/potential.hpp"
#include "metacoll/radial.hpp"
#include "metacoll/scattering.hpp"

using namespace metacoll;
using constants::a0;
using constants::hbar;
using constants::pi;

namespace {

// Phases compared modulo pi.
double phase_distance(double a, double b) {
  const double d = std::remainder(a - b, pi);
  return std::abs(d);
}

RadialProblem free_problem(double r_min, double r_match, RadialProblem::Start start) {
  RadialProblem p;
  p.potential = [](double) { return 0.0; };
  p.reduced_mass = 10.0 * constants::amu;
  p.r_min = r_min;
  p.r_match = r_match;
  p.start = start;
  return p;
}

}  // namespace

TEST_CASE("hard sphere phase shifts follow the spherical Bessel ratio") {
  const double R = 50 * a0;
  const RadialSolver solver(free_problem(R, 10 * R, RadialProblem::Start::wall));
  const double mu = solver.problem().reduced_mass;
  RadialOptions opt;
  opt.tolerance = 1e-5;
  opt.max_refinements = 5;
  for (double kR : {0.05, 0.3, 1.0, 2.5}) {
    const double k = kR / R;
    const double E = hbar * hbar * k * k / (2 * mu);
    for (int l : {0, 1, 2, 4}) {
      const auto l_u = static_cast<unsigned>(l);
      const double expected = std::atan(std::sph_bessel(l_u, kR) / std::sph_neumann(l_u, kR));
      const auto ps = solver.phase_shift(E, l, opt);
      CAPTURE(kR);
      CAPTURE(l);
      CHECK(phase_distance(ps.delta, expected) < 1e-4);
    }
  }
}

TEST_CASE("free particle has zero phase shift") {
  const double L = 100 * a0;
  const RadialSolver solver(free_problem(1e-3 * L, L, RadialProblem::Start::regular));
  const double mu = solver.problem().reduced_mass;
  for (double kL : {0.1, 1.0, 3.0}) {
    const double E = hbar * hbar * kL * kL / (L * L * 2 * mu);
    for (int l : {0, 2}) CHECK(phase_distance(solver.phase_shift(E, l).delta, 0.0) < 1e-4);
  }
}

TEST_CASE("attractive square well s-wave phase") {
  const double R = 40 * a0;
  auto p = free_problem(1e-3 * R, 20 * R, RadialProblem::Start::regular);
  const double mu = p.reduced_mass;
  const double KR0 = 2.0;  // well strength, K0 R
  const double V0 = hbar * hbar * KR0 * KR0 / (2 * mu * R * R);
  // Smoothed edge (width R/200) keeps the integrand continuous.
  p.potential = [=](double r) { return -V0 / (1.0 + std::exp((r - R) / (R / 200))); };
  const RadialSolver solver(p);
  for (double kR : {0.1, 0.7, 1.5}) {
    const double k = kR / R;
    const double E = hbar * hbar * k * k / (2 * mu);
    const double KR = std::sqrt(kR * kR + KR0 * KR0);
    const double expected = std::atan(kR / KR * std::tan(KR)) - kR;
    RadialOptions opt;
    opt.tolerance = 1e-5;
    opt.max_refinements = 4;
    CAPTURE(kR);
    CHECK(phase_distance(solver.phase_shift(E, 0, opt).delta, expected) < 2e-2);
  }
}

TEST_CASE("Numerov error falls as h^4") {
  const auto iso = IsotopeParams::neon20();
  const auto pot = tune_to_scattering_length(iso.C6, iso, -180 * a0);
  const RadialSolver s(pot.radial_problem(iso));
  const double E = collision_energy(iso, 1.0);
  const double h = s.automatic_step(E, 0);
  const double d1 = s.phase_shift_at_step(E, 0, 2 * h);
  const double d2 = s.phase_shift_at_step(E, 0, h);
  const double d3 = s.phase_shift_at_step(E, 0, h / 2);
  const double d4 = s.phase_shift_at_step(E, 0, h / 4);
  const double slope1 = std::log2(std::abs(d1 - d2) / std::abs(d2 - d3));
  const double slope2 = std::log2(std::abs(d2 - d3) / std::abs(d3 - d4));
  CHECK(slope1 > 3.5);
  CHECK(slope1 < 4.5);
  CHECK(slope2 > 3.5);
  CHECK(slope2 < 4.5);
}

TEST_CASE("radial problem validation") {
  auto p = free_problem(50 * a0, 10 * a0, RadialProblem::Start::wall);
  CHECK_THROWS_AS(RadialSolver{p}, Error);
  auto q = free_problem(50 * a0, 500 * a0, RadialProblem::Start::wall);
  q.reduced_mass = 0.0;
  CHECK_THROWS_AS(RadialSolver{q}, Error);
}
