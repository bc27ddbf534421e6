#include <doctest.h>

#include <cmath>
#include <sstream>

#include "metacoll/dynamics.hpp"
#include "metacoll/inference.hpp"

using namespace metacoll;
using constants::a0;
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

TEST_CASE("concise uncertainty notation") {
  CHECK(format_uncertain(38.46, 16.2) == "38(16)");
  CHECK(format_uncertain(6.5, 1.8) == "6.5(18)");
  CHECK(format_uncertain(250, 80) == "250(80)");
  CHECK(format_uncertain(2.8, 0.7) == "2.8(7)");
  CHECK(format_uncertain(6.67, 4.49) == "7(4)");
  CHECK(format_uncertain(0.0123, 0.0011) == "0.0123(11)");
  CHECK(format_uncertain(1234.0, 96.0) == "1230(100)");
}

TEST_CASE("ratio propagation") {
  const auto r = propagate_ratio({250, 80}, {6.5, 1.8});
  CHECK(r.value == doctest::Approx(250 / 6.5));
  CHECK(r.error == doctest::Approx(250 / 6.5 * std::hypot(80.0 / 250, 1.8 / 6.5)));
  CHECK_THROWS_AS(propagate_ratio({1, 0.1}, {0, 0.1}), Error);
}

// Limited by the integrator tolerance (1e-8).
TEST_CASE("decay fit is exact without two-body loss") {
  const DecayModel m{1 / 10.3, 0.0, cloud(), HeatingLaw::none, {}, {}};
  const auto r = fit_decay(exact_series(evolve_decay(m, grid(20, 40))));
  CHECK(r.extra("alpha_inv_s") == doctest::Approx(10.3).epsilon(1e-7));
  CHECK(std::abs(r.value("beta")) < 1e-25);
}

TEST_CASE("decay fit recovers alpha and beta") {
  const DecayModel m{1 / 10.3, 6.5e-12 * cm3, cloud(), HeatingLaw::intrinsic, {}, {}};
  const auto r = fit_decay(exact_series(evolve_decay(m, grid(20, 400))));
  CHECK(r.extra("alpha_inv_s") == doctest::Approx(10.3).epsilon(1e-4));
  CHECK(r.extra("beta_cm3_s") == doctest::Approx(6.5e-12).epsilon(1e-3));
  CHECK(r.extra("beta_sys_high") == doctest::Approx(0.28 * r.value("beta")));
  CHECK_FALSE(r.has_flag("no_two_body_signal"));
}

TEST_CASE("decay fit is scale equivariant") {
  const DecayModel m{1 / 10.3, 6.5e-12 * cm3, cloud(), HeatingLaw::intrinsic, {}, {}};
  const auto s = synthesize_series(evolve_decay(m, grid(20, 40)), {0.03, 0.03, 3});
  // N -> 10 N multiplies nbar by 10 and divides beta by 10
  std::vector<Measurement> scaled;
  for (const auto& r : s)
    scaled.push_back({r.t, r.state.with_particles(10 * r.state.N()), 10 * r.sigma_N, r.sigma_Tx, r.sigma_Tr});
  const auto a = fit_decay(s);
  const auto b = fit_decay(MeasurementSeries(scaled));
  CHECK(b.value("alpha") == doctest::Approx(a.value("alpha")).epsilon(1e-9));
  CHECK(b.value("beta") * 10 == doctest::Approx(a.value("beta")).epsilon(1e-9));
  CHECK(b.chi2 == doctest::Approx(a.chi2).epsilon(1e-9));
}

TEST_CASE("heating fit recovers beta") {
  const DecayModel m{1 / 10.3, 6.5e-12 * cm3, cloud(), HeatingLaw::intrinsic, {}, {}};
  const auto r = fit_heating_beta(exact_series(evolve_decay(m, grid(20, 400))));
  CHECK(r.value("beta_heat") / cm3 == doctest::Approx(6.5e-12).epsilon(1e-3));
}

TEST_CASE("heating fit rejects a cooling cloud") {
  const DecayModel m{0.1, 0.0, cloud(), HeatingLaw::tabulated, {0, 20}, {1.0, 0.7}};
  CHECK_THROWS_AS(fit_heating_beta(exact_series(evolve_decay(m, grid(20, 40)), 0.001)), Error);
}

TEST_CASE("gamma fit on an exact relaxation") {
  const auto iso = IsotopeParams::neon20();
  std::vector<Measurement> recs;
  // A = sqrt(Tx/Tr) omega_r / omega_x relaxes to Tx = Tr
  const TrapConfig trap;
  for (int i = 0; i < 60; ++i) {
    const double t = 0.005 * i;
    const double A = trap.omega_r / trap.omega_x * (1 + 0.2 * std::exp(-15 * t));
    const double Tr = 450e-6;
    const double Tx = Tr * std::pow(A * trap.omega_x / trap.omega_r, 2);
    recs.push_back({t, ThermalState(1e8, Tx, Tr, trap, iso), 1e6, 1e-6, 1e-6});
  }
  const auto r = fit_gamma_rel(MeasurementSeries(recs));
  // nbar vbar varies with Tx, so the rate is in rescaled time
  CHECK(r.value("gamma_rel") > 14.0);
  CHECK(r.value("gamma_rel") < 17.0);
}

TEST_CASE("sigma_rel csv") {
  std::istringstream in("T_uK,sigma_rel_m2,unc_m2\n200,8e-17,2e-17\n550,2.8e-17,0.7e-17\n");
  const auto d = read_sigma_rel_csv(in);
  REQUIRE(d.size() == 2);
  CHECK(d[0].T == doctest::Approx(200e-6));
  std::istringstream bad("T_uK,sigma_rel_m2,unc_m2\n200,8e-17,0\n");
  CHECK_THROWS_AS(read_sigma_rel_csv(bad), Error);
}

TEST_CASE("scattering-length fit recovers a self-generated a") {
  const auto iso = IsotopeParams::neon22();
  const auto k = AverageKernel::relaxation();
  const auto truth = relaxation_curve(150 * a0, iso, k, {200e-6, 350e-6, 550e-6});
  std::vector<SigmaRelDatum> data;
  for (std::size_t i = 0; i < truth.T.size(); ++i)
    data.push_back({truth.T[i], truth.sigma_rel[i], 0.1 * truth.sigma_rel[i]});
  const auto fit = fit_scattering_length(data, iso, k, default_a_grid(5 * a0, 1e4 * a0, 30));
  CHECK(fit.best.value("a") / a0 == doctest::Approx(150).epsilon(0.02));
  CHECK(fit.candidates.front().chi2 < 1e-3);
  CHECK(fit.candidates.front().err_low > 0.0);
}

TEST_CASE("time-of-flight temperature") {
  const auto iso = IsotopeParams::neon20();
  const double T = 400e-6, omega = 2 * constants::pi * 186;
  const double v2 = constants::k_B * T / iso.mass;
  std::vector<TofPoint> pts;
  for (int i = 0; i < 8; ++i) {
    const double t = 1e-3 * (1 + i);
    pts.push_back({t, std::sqrt(v2 / (omega * omega) + v2 * t * t), 1e-6});
  }
  const auto r = tof_temperature(pts, iso, omega);
  CHECK(r.value("T") == doctest::Approx(T).epsilon(1e-6));
  CHECK(std::abs(r.extra("pull")) < 1e-3);
}
