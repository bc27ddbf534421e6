#include <doctest.h>

#include <sstream>

#include "metacoll/config.hpp"

using namespace metacoll;

namespace {

PipelineConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.ini", "/data");
}

std::string config_error(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::config);
    return e.what();
  }
  FAIL("no exception");
  return "";
}

}  // namespace

TEST_CASE("empty config takes the defaults") {
  const auto c = parse("");
  CHECK(c.seed == 1);
  CHECK(c.isotope.mass_number == 20);
  CHECK(c.kernel.p == calibrated_relaxation_power);
  CHECK(c.a_values.empty());
  CHECK(c.T_grid.size() == 36);
  CHECK(c.table1.empty());
}

TEST_CASE("sections and unit-suffixed keys") {
  const auto c = parse(
      "seed = 9\n"
      "[isotope]\nmass_number = 22\nC6_au = 2000\n"
      "[scattering]\na_a0 = 150, -6500\n"
      "[temperature]\nT_min_uK = 200\nT_max_uK = 550\nT_points = 2\n"
      "[fit]\nsigma_rel = bins.csv\n"
      "[dsmc]\nTx_uK = 500\nbeta_cm3_s = 1e-11\ncollisions = false\ndensity_scan = 0.5,1\n");
  CHECK(c.seed == 9);
  CHECK(c.isotope.mass_number == 22);
  CHECK(c.C6_au == 2000);
  REQUIRE(c.a_values.size() == 2);
  CHECK(c.a_values[1] / constants::a0 == doctest::Approx(-6500));
  CHECK(c.T_grid.back() == doctest::Approx(550e-6));
  CHECK(c.sigma_rel_data == "/data/bins.csv");
  CHECK(c.dsmc.T_x == doctest::Approx(500e-6));
  CHECK(c.dsmc.beta == doctest::Approx(1e-17));
  CHECK_FALSE(c.dsmc.collisions);
  CHECK(c.dsmc.density_scan.size() == 2);
}

TEST_CASE("field-level errors") {
  CHECK(config_error("[isotope]\nmass_number = 21\n").find("[isotope] mass_number") != std::string::npos);
  CHECK(config_error("[trap]\nf_x_Hz = fast\n").find("[trap] f_x_Hz") != std::string::npos);
  CHECK(config_error("[dsmc]\nparticle = 10\n").find("unknown key") != std::string::npos);
  CHECK(config_error("[dsmcc]\nparticles = 10\n").find("unknown section") != std::string::npos);
  CHECK(config_error("[temperature]\nT_min_uK = 500\nT_max_uK = 100\n").find("T_max_uK") != std::string::npos);
  CHECK(config_error("[kernel]\nkind = magic\n").find("[kernel] kind") != std::string::npos);
  CHECK(config_error("[table1_20]\na_a0 = -180\n").find("beta_unpol") != std::string::npos);
}

TEST_CASE("missing input files are enumerated") {
  auto c = parse("[fit]\nseries = nope.csv\nsigma_rel = nope2.csv\n");
  try {
    validate_inputs(c);
    FAIL("no exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
    const std::string m = e.what();
    CHECK(m.find("nope.csv") != std::string::npos);
    CHECK(m.find("nope2.csv") != std::string::npos);
  }
}
