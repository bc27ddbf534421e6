#include <doctest.h>

#include <cmath>
#include <sstream>

#include "metacoll/dsmc.hpp"

using namespace metacoll;

namespace {

ThermalState cloud(double N = 2e8) {
  return ThermalState(N, 600e-6, 400e-6, TrapConfig{}, IsotopeParams::neon20());
}

dsmc::SimConfig small(std::size_t particles = 4000) {
  dsmc::SimConfig c;
  c.particles = particles;
  c.cross_section = dsmc::CrossSectionSource::constant(1.16e-15);
  return c;
}

}  // namespace

TEST_CASE("cross-section sources") {
  const auto c = dsmc::CrossSectionSource::constant(2e-15);
  CHECK(c(0.1) == 2e-15);
  const auto iv = dsmc::CrossSectionSource::inverse_velocity(2e-15, 0.5);
  CHECK(iv(1.0) == doctest::Approx(1e-15));
}

TEST_CASE("collisionless cloud keeps its shape") {
  auto c = small();
  c.collisions = false;
  const auto tr = dsmc::run(c, cloud(), 0.05);
  for (double A : tr.A) CHECK(A == doctest::Approx(tr.A.front()).epsilon(0.04));
  CHECK(tr.collisions.back() == 0);
  CHECK(tr.A.front() == doctest::Approx(aspect_ratio(cloud())).epsilon(0.04));
}

TEST_CASE("energy is conserved without loss") {
  const auto tr = dsmc::run(small(), cloud(), 0.05);
  CHECK(tr.collisions.back() > 1000);
  CHECK(std::abs(tr.energy.back() / tr.energy.front() - 1) < 1e-3);
}

TEST_CASE("collision rate matches n sigma vbar") {
  const auto s0 = cloud();
  const auto c = small(8000);
  const auto tr = dsmc::run(c, s0, 0.03);
  // each collision involves two atoms; nbar is the density seen by an atom
  const double rate = 2.0 * static_cast<double>(tr.collisions.back()) /
                      static_cast<double>(tr.particles0) / tr.t.back();
  const double expected = mean_density(s0) * 1.16e-15 * mean_relative_velocity(s0);
  CHECK(rate == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("replay with the same seed is identical") {
  auto c = small(2000);
  c.seed = 42;
  std::ostringstream a, b;
  dsmc::write_trace_csv(a, dsmc::run(c, cloud(), 0.02));
  dsmc::write_trace_csv(b, dsmc::run(c, cloud(), 0.02));
  CHECK(a.str() == b.str());
  c.seed = 43;
  std::ostringstream d;
  dsmc::write_trace_csv(d, dsmc::run(c, cloud(), 0.02));
  CHECK(a.str() != d.str());
}

TEST_CASE("two-body loss removes atoms at beta nbar") {
  auto c = small(8000);
  c.collisions = false;
  c.beta = 2e-16;  // m^3/s
  const auto s0 = cloud();
  const auto tr = dsmc::run(c, s0, 0.02);
  const double lost = 1.0 - tr.N.back() / tr.N.front();
  const double expected = c.beta * mean_density(s0) * tr.t.back();
  CHECK(lost == doctest::Approx(expected).epsilon(0.15));
}

TEST_CASE("resolution violations are reported before running") {
  auto c = small();
  c.cells_per_width = 2.0;
  CHECK_THROWS_AS(dsmc::validate(c, cloud()), Error);
  c = small();
  c.dt = 1.0;
  try {
    dsmc::run(c, cloud(), 0.01);
    FAIL("no exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::domain);
  }
}

TEST_CASE("gamma measurement on an exact relaxation curve") {
  std::vector<double> t, A;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(0.003 * i);
    A.push_back(1.0 + 0.35 * std::exp(-12.0 * t.back()));
  }
  const auto g = dsmc::measure_gamma_rel(t, A);
  CHECK(g.gamma_rel == doctest::Approx(12.0).epsilon(1e-4));
  CHECK(g.A_eq == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_FALSE(g.under_relaxed);
}

TEST_CASE("trace exports the measurement-series schema") {
  const auto tr = dsmc::run(small(2000), cloud(), 0.01);
  const auto s = dsmc::to_series(tr);
  REQUIRE(s.size() == tr.t.size());
  CHECK(s[0].state.N() == doctest::Approx(2e8));
  CHECK(s[0].sigma_Tx > 0.0);
}
