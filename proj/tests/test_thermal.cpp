#include <doctest.h>

#include <cmath>

#include "metacoll/thermal.hpp"

using namespace metacoll;
using constants::a0;
using constants::k_B;
using constants::pi;

namespace {
// <1/y> under y^{2+p} e^{-y^2}
double inverse_moment(int p) { return std::tgamma(0.5 * (2 + p)) / std::tgamma(0.5 * (3 + p)); }
}  // namespace

TEST_CASE("weighted mean of simple cross sections") {
  const auto iso = IsotopeParams::neon20();
  const double mu = iso.reduced_mass(), T = 300e-6;
  const double vt = std::sqrt(2 * k_B * T / mu);
  for (int p : {0, 1, 2, 5}) {
    CAPTURE(p);
    CHECK(weighted_mean([](double) { return 3.0; }, T, mu, p) == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(weighted_mean([&](double v) { return vt / v; }, T, mu, p) ==
          doctest::Approx(inverse_moment(p)).epsilon(1e-6));
  }
}

TEST_CASE("standard kernel gives <sigma v> / <v>") {
  // sigma ~ 1/v: <sigma v> / <v> = 1 / <v> = sqrt(pi) / (2 vt)
  const auto iso = IsotopeParams::neon22();
  const double mu = iso.reduced_mass(), T = 500e-6;
  const double vt = std::sqrt(2 * k_B * T / mu);
  const auto k = AverageKernel::standard();
  CHECK(weighted_mean([](double v) { return 1.0 / v; }, T, mu, k.p) ==
        doctest::Approx(std::sqrt(pi) / (2 * vt)).epsilon(1e-6));
}

TEST_CASE("unitarity average matches quadrature") {
  const auto iso = IsotopeParams::neon20();
  const double mu = iso.reduced_mass();
  const auto kernel = AverageKernel::relaxation();
  for (double T : {100e-6, 550e-6}) {
    const auto sigma = [&](double v) {
      const double k = mu * v / constants::hbar;
      return 8 * pi / (k * k);
    };
    CHECK(unitarity_average(mu, T, kernel) ==
          doctest::Approx(kernel.scale * weighted_mean(sigma, T, mu, kernel.p)).epsilon(1e-6));
  }
}

TEST_CASE("missing weight") {
  const auto iso = IsotopeParams::neon20();
  const double mu = iso.reduced_mass(), T = 200e-6;
  const double vt = std::sqrt(2 * k_B * T / mu);
  CHECK(missing_weight(T, mu, 2, 0.0, 100 * vt) < 1e-12);
  CHECK(missing_weight(T, mu, 2, 0.0, 1e-3 * vt) == doctest::Approx(1.0).epsilon(1e-6));
  const double half = missing_weight(T, mu, 0, 0.0, vt) + missing_weight(T, mu, 0, vt, 100 * vt);
  CHECK(half == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("coverage error when the grid is too narrow") {
  const auto iso = IsotopeParams::neon20();
  CurveSettings s;
  s.v_grid = log_grid(0.5, 0.8, 12);
  const auto curve = tuned_cross_section_curve(iso, -180 * a0, s);
  try {
    thermal_average(curve, 300e-6, AverageKernel::relaxation());
    FAIL("no exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::coverage);
  }
}

TEST_CASE("relaxation curves stay below the unitarity limit") {
  const auto iso = IsotopeParams::neon22();
  const auto T = default_temperature_grid(8);
  const auto k = AverageKernel::relaxation();
  const auto u = unitarity_limit_curve(iso, T, k);
  for (double a : {150.0, -6500.0}) {
    const auto c = relaxation_curve(a * a0, iso, k, T);
    for (std::size_t i = 0; i < T.size(); ++i) CHECK(c.sigma_rel[i] <= u.sigma_rel[i] * 1.0001);
  }
}

TEST_CASE("cache reuses tuned curves") {
  CrossSectionCache cache;
  const auto iso = IsotopeParams::neon20();
  const auto a = cache.get(iso, -180 * a0);
  const auto b = cache.get(iso, -180 * a0);
  CHECK(a.get() == b.get());
  CHECK(cache.size() == 1);
  cache.clear();
  CHECK(cache.size() == 0);
}

TEST_CASE("sigma_rel converged in l_max and velocity grid") {
  const auto iso = IsotopeParams::neon20();
  const auto k = AverageKernel::relaxation();
  const std::vector<double> T = {100e-6, 800e-6};
  for (double a : {-180.0, 150.0}) {
    const auto base = relaxation_curve(a * a0, iso, k, T);
    CurveSettings more_waves;
    more_waves.l_max = 8;
    CurveSettings finer;
    finer.v_grid = log_grid(0.01, 10.0, 120);
    const auto w = relaxation_curve(a * a0, iso, k, T, more_waves);
    const auto f = relaxation_curve(a * a0, iso, k, T, finer);
    for (std::size_t i = 0; i < T.size(); ++i) {
      CHECK(w.sigma_rel[i] == doctest::Approx(base.sigma_rel[i]).epsilon(2e-3));
      CHECK(f.sigma_rel[i] == doctest::Approx(base.sigma_rel[i]).epsilon(5e-3));
    }
  }
}
