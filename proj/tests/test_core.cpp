#include <doctest.h>

#include <cmath>
#include <sstream>

#include "metacoll/core.hpp"
#include "metacoll/csv.hpp"

using namespace metacoll;
using constants::k_B;

TEST_CASE("thermal state widths and effective volume") {
  const auto iso = IsotopeParams::neon20();
  const TrapConfig trap(2 * constants::pi * 80.0, 2 * constants::pi * 186.0);
  const ThermalState s(1e8, 600e-6, 400e-6, trap, iso);
  const double sx = std::sqrt(k_B * 600e-6 / iso.mass) / trap.omega_x;
  const double sr = std::sqrt(k_B * 400e-6 / iso.mass) / trap.omega_r;
  CHECK(s.width_x() == doctest::Approx(sx).epsilon(1e-12));
  CHECK(s.width_r() == doctest::Approx(sr).epsilon(1e-12));
  // nbar = int n^2 / int n for a Gaussian cloud
  const double V = std::pow(4 * constants::pi, 1.5) * sx * sr * sr;
  CHECK(mean_density(s) == doctest::Approx(1e8 / V).epsilon(1e-12));
  CHECK(mean_temperature(s) == doctest::Approx(1400e-6 / 3));
  CHECK(aspect_ratio(s) == doctest::Approx(sx / sr));
}

TEST_CASE("mean relative velocity of a Maxwell-Boltzmann pair") {
  const auto iso = IsotopeParams::neon22();
  const double T = 300e-6, mu = iso.reduced_mass();
  CHECK(mean_relative_velocity(T, iso.mass) ==
        doctest::Approx(std::sqrt(8 * k_B * T / (constants::pi * mu))).epsilon(1e-12));
}

TEST_CASE("isotope lookup") {
  CHECK(IsotopeParams::by_label("22Ne").mass_number == 22);
  CHECK(IsotopeParams::by_label("Ne20").mass_number == 20);
  CHECK_THROWS_AS(IsotopeParams::by_label("21"), Error);
}

TEST_CASE("series csv round trip") {
  const auto iso = IsotopeParams::neon20();
  std::istringstream in(
      "t_s,N,sigma_N,Tx_K,sigma_Tx,Tr_K,sigma_Tr\n"
      "0,1e8,3e6,6e-4,1.8e-5,4e-4,1.2e-5\n"
      "# comment\n"
      "0.5,9e7,2.7e6,6.1e-4,1.8e-5,4.1e-4,1.2e-5\n");
  const auto s = read_series_csv(in, iso, TrapConfig{});
  REQUIRE(s.size() == 2);
  std::ostringstream out;
  write_series_csv(out, s);
  std::istringstream again(out.str());
  const auto s2 = read_series_csv(again, iso, TrapConfig{});
  std::ostringstream out2;
  write_series_csv(out2, s2);
  CHECK(out.str() == out2.str());
  CHECK(s2[1].state.T_r() == 4.1e-4);
}

TEST_CASE("series csv without uncertainty columns") {
  std::istringstream in("t_s,N,Tx_K,Tr_K\n0,1e8,6e-4,4e-4\n1,9e7,6e-4,4e-4\n");
  const auto s = read_series_csv(in, IsotopeParams::neon20(), TrapConfig{});
  CHECK(s[0].sigma_N == doctest::Approx(default_relative_uncertainty * 1e8));
}

TEST_CASE("malformed csv reports the line") {
  std::istringstream in("t_s,N,Tx_K,Tr_K\n0,1e8,6e-4,4e-4\n1,abc,6e-4,4e-4\n");
  try {
    read_series_csv(in, IsotopeParams::neon20(), TrapConfig{});
    FAIL("no exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parse);
    CHECK(std::string(e.what()).find(":3") != std::string::npos);
  }
}

TEST_CASE("series must increase in time") {
  std::istringstream in("t_s,N,Tx_K,Tr_K\n1,1e8,6e-4,4e-4\n0,9e7,6e-4,4e-4\n");
  CHECK_THROWS_AS(read_series_csv(in, IsotopeParams::neon20(), TrapConfig{}), Error);
}

TEST_CASE("format_double is shortest round trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
