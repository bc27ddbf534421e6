#include <doctest.h>

#include <cmath>
#include <numeric>

#include "metacoll/dynamics.hpp"

using namespace metacoll;
using constants::cm3;

namespace {

ThermalState cloud(double N = 5e8) {
  return ThermalState(N, 600e-6, 400e-6, TrapConfig{}, IsotopeParams::neon20());
}

std::vector<double> grid(double T, std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = T * static_cast<double>(i) / static_cast<double>(n - 1);
  return t;
}

}  // namespace

TEST_CASE("relaxation model") {
  const RelaxationModel m{5.0, 1.0, 1.4};
  CHECK(evolve_aspect(m, 0.0) == doctest::Approx(1.4));
  CHECK(evolve_aspect(m, 0.2) == doctest::Approx(1.0 + 0.4 * std::exp(-1.0)));
}

TEST_CASE("decay with fixed volume has the logistic solution") {
  const auto s0 = cloud();
  const double alpha = 1 / 10.3, beta = 6.5e-12 * cm3;
  const DecayModel m{alpha, beta, s0, HeatingLaw::none, {}, {}};
  const auto traj = evolve_decay(m, grid(20.0, 21));
  const double V = s0.effective_volume(), N0 = s0.N();
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    const double e = std::exp(-alpha * traj.t[i]);
    const double N = alpha * N0 * e / (alpha + beta * N0 / V * (1 - e));
    CHECK(traj.states[i].N() == doctest::Approx(N).epsilon(1e-7));
  }
}

TEST_CASE("intrinsic heating integrates dT/T = beta nbar / 4") {
  const double beta = 6.5e-12 * cm3;
  const DecayModel m{1 / 10.3, beta, cloud(), HeatingLaw::intrinsic, {}, {}};
  const auto traj = evolve_decay(m, grid(20.0, 2001));
  const auto nbar = traj.mean_density();
  const auto T = traj.mean_temperature();
  double X = 0.0;
  for (std::size_t i = 1; i < nbar.size(); ++i) X += 0.5 * (nbar[i] + nbar[i - 1]) * (traj.t[i] - traj.t[i - 1]);
  CHECK(std::log(T.back() / T.front()) == doctest::Approx(beta * X / 4).epsilon(1e-5));
  CHECK(traj.states.back().T_x() / traj.states.back().T_r() == doctest::Approx(1.5));
}

TEST_CASE("tabulated heating follows the table") {
  const DecayModel m{0.1, 0.0, cloud(), HeatingLaw::tabulated, {0.0, 10.0}, {1.0, 1.2}};
  const auto traj = evolve_decay(m, {0.0, 5.0, 10.0});
  CHECK(traj.mean_temperature()[1] / traj.mean_temperature()[0] == doctest::Approx(1.1).epsilon(1e-6));
  CHECK(traj.mean_temperature()[2] / traj.mean_temperature()[0] == doctest::Approx(1.2).epsilon(1e-6));
}

TEST_CASE("linearized observables are collinear") {
  const double alpha = 1 / 10.3, beta = 6.5e-12 * cm3;
  const DecayModel m{alpha, beta, cloud(), HeatingLaw::intrinsic, {}, {}};
  const auto pts = linearized_observables(exact_series(evolve_decay(m, grid(20.0, 401))));
  REQUIRE(pts.size() == 400);
  for (const auto& p : pts) CHECK(p.y == doctest::Approx(-alpha - beta * p.x).epsilon(5e-3));
}

TEST_CASE("rescaled time reduces to t for a steady cloud") {
  const std::vector<double> t = {1.0, 2.0, 4.0};
  const std::vector<double> n = {2.0, 2.0, 2.0}, v = {3.0, 3.0, 3.0};
  const auto ts = rescale_time(t, n, v);
  CHECK(ts[0] == 0.0);
  CHECK(ts[2] == doctest::Approx(3.0));
}

TEST_CASE("intrinsic heating rate") {
  const auto s = cloud();
  const double beta = 1e-17;
  CHECK(intrinsic_heating_rate(s, beta) ==
        doctest::Approx(mean_temperature(s) * beta * mean_density(s) / 4));
}

TEST_CASE("synthetic noise is reproducible and unbiased") {
  const DecayModel m{0.1, 0.0, cloud(), HeatingLaw::none, {}, {}};
  const auto traj = evolve_decay(m, grid(10.0, 400));
  const auto a = synthesize_series(traj, {0.03, 0.03, 5});
  const auto b = synthesize_series(traj, {0.03, 0.03, 5});
  const auto c = synthesize_series(traj, {0.03, 0.03, 6});
  double mean = 0.0, var = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].state.N() == b[i].state.N());
    const double z = a[i].state.N() / traj.states[i].N() - 1;
    mean += z;
    var += z * z;
  }
  CHECK(a[3].state.N() != c[3].state.N());
  mean /= 400;
  var /= 400;
  CHECK(std::abs(mean) < 0.006);
  CHECK(std::sqrt(var) == doctest::Approx(0.03).epsilon(0.15));
}

TEST_CASE("decay grid must start at zero") {
  const DecayModel m{0.1, 0.0, cloud(), HeatingLaw::none, {}, {}};
  CHECK_THROWS_AS(evolve_decay(m, {1.0, 2.0}), Error);
}
