// Exercises the shared library through its C interface only.
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "metacoll/metacoll.h"

TEST_CASE("status names and errors") {
  CHECK(std::string(mcl_status_name(MCL_OK)) == "ok");
  CHECK(std::string(mcl_status_name(MCL_CONFIG)) == "config");
  double r = 0, e = 0;
  CHECK(mcl_propagate_ratio(1, 0.1, 0, 0.1, &r, &e) == MCL_DOMAIN);
  CHECK(std::strlen(mcl_last_error()) > 0);
  CHECK(mcl_propagate_ratio(1, 0.1, 2, 0.1, nullptr, &e) == MCL_INVALID_ARGUMENT);
}

TEST_CASE("ratio and notation") {
  double r = 0, e = 0;
  REQUIRE(mcl_propagate_ratio(250, 80, 6.5, 1.8, &r, &e) == MCL_OK);
  char buf[32];
  REQUIRE(mcl_format_uncertain(r, e, buf, sizeof buf) == MCL_OK);
  CHECK(std::string(buf) == "38(16)");
}

TEST_CASE("potential handle") {
  mcl_potential* p = nullptr;
  REQUIRE(mcl_tune_potential(20, 0, -180, &p) == MCL_OK);
  double a = 0, s = 0;
  CHECK(mcl_potential_scattering_length(p, &a) == MCL_OK);
  CHECK(a == doctest::Approx(-180).epsilon(5e-3));
  CHECK(mcl_potential_cross_section(p, 0.5, 4, &s) == MCL_OK);
  CHECK(s > 0);
  mcl_potential_free(p);
  CHECK(mcl_tune_potential(21, 0, -180, &p) == MCL_INVALID_ARGUMENT);
  CHECK(p == nullptr);
}

TEST_CASE("config handle") {
  mcl_config* c = nullptr;
  CHECK(mcl_config_parse("[isotope]\nmass_number = 23\n", ".", &c) == MCL_CONFIG);
  CHECK(std::string(mcl_last_error()).find("mass_number") != std::string::npos);
  REQUIRE(mcl_config_parse("[temperature]\nT_points = 3\n", ".", &c) == MCL_OK);
  CHECK(mcl_config_set_seed(c, 5) == MCL_OK);
  char summary[256];
  CHECK(mcl_run_command(c, "nope", "/tmp", summary, sizeof summary) == MCL_INVALID_ARGUMENT);
  mcl_config_free(c);
  CHECK(mcl_config_load("/nonexistent.ini", &c) == MCL_IO);
}

TEST_CASE("barrier and sigma_rel") {
  double h = 0, s = 0;
  REQUIRE(mcl_centrifugal_barrier(20, 0, 2, &h) == MCL_OK);
  CHECK(h > 1e-3);
  REQUIRE(mcl_sigma_rel(22, 0, 150, 200e-6, &s) == MCL_OK);
  CHECK(s > 1e-16);
  CHECK(std::string(mcl_command_names()).find("table1\n") != std::string::npos);
}
