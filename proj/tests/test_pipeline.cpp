#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "metacoll/pipeline.hpp"

using namespace metacoll;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

PipelineConfig parse(const std::string& text, const std::string& base = ".") {
  std::istringstream in(text);
  return parse_config(in, "test.ini", base);
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("metacoll_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("signed asymmetric notation") {
  CHECK(format_signed_asymmetric(150, 50, 80) == "+150(+80/-50)");
  CHECK(format_signed_asymmetric(-180, 40, 40) == "-180(40)");
  CHECK(format_signed_asymmetric(22, 5, 5) == "+22(5)");
  CHECK(format_signed_asymmetric(2.5, 0.3, 0.6) == "+2.5(+6/-3)");
}

TEST_CASE("table1 from the published inputs") {
  const auto cfg = load_config(METACOLL_DATA_DIR "/table1.ini");
  const auto t = build_table1(cfg);
  REQUIRE(t.columns.size() == 2);
  auto text = [&](std::size_t c, std::size_t r) { return t.cells[c][r].text; };
  CHECK(text(0, 0) == "8(2)");
  CHECK(text(0, 1) == "2.8(7)");
  CHECK(text(0, 2) == "-180(40)");
  CHECK(text(0, 3) == "6.5(18)");
  CHECK(text(0, 4) == "250(80)");
  CHECK(text(0, 5) == "38(16)");
  CHECK(text(1, 0) == "30(8)");
  CHECK(text(1, 1) == "13(3)");
  CHECK(text(1, 2) == "+150(+80/-50)");
  CHECK(text(1, 3) == "12(3)");
  CHECK(text(1, 4) == "80(50)");
}

TEST_CASE("single-isotope table has one column") {
  auto cfg = load_config(METACOLL_DATA_DIR "/table1.ini");
  cfg.table1.resize(1);
  const auto t = build_table1(cfg);
  CHECK(t.columns.size() == 1);
}

TEST_CASE("self-consistent table: ratio is beta_unpol / beta") {
  auto cfg = parse("");
  Table1Column col;
  col.label = "22";
  col.sigma_rel_data = METACOLL_DATA_DIR "/table1_ne22_sigma_rel.csv";
  col.a = 100 * constants::a0;
  col.beta = Uncertain{2e-17, 2e-18};
  col.beta_unpol = {1e-16, 1e-17};
  cfg.table1 = {col};
  const auto t = build_table1(cfg);
  CHECK(t.cells[0][5].value == doctest::Approx(5.0));
}

TEST_CASE("sigma-rel with no scattering lengths writes only the unitarity curve") {
  const auto out = scratch("unitarity");
  const auto r = run_command("sigma-rel", parse(""), out.string());
  CHECK(fs::exists(out / "sigma_rel_unitarity.csv"));
  CHECK(slurp(out / "sigma_rel.csv").rfind("T_uK,sigma_rel_unitarity_m2\n", 0) == 0);
  CHECK(r.files.size() == 2);
}

TEST_CASE("commands are idempotent") {
  const auto cfg = parse("[scattering]\na_a0 = -180\n[temperature]\nT_points = 5\n");
  const auto a = scratch("idem_a"), b = scratch("idem_b");
  run_command("sigma-rel", cfg, a.string());
  run_command("sigma-rel", cfg, b.string());
  for (const auto& f : fs::directory_iterator(a))
    CHECK(slurp(f.path()) == slurp(b / f.path().filename()));
}

TEST_CASE("synthetic series feeds the decay fit") {
  const auto dir = scratch("synth");
  run_command("synth-decay", parse("seed = 3\n"), dir.string());
  const auto cfg = parse("[fit]\nseries = synth_series.csv\n", dir.string());
  const auto r = run_command("fit-decay", cfg, dir.string());
  CHECK(fs::exists(dir / "decay_linearized.csv"));
  CHECK(r.summary.find("alpha^-1") != std::string::npos);
}

TEST_CASE("unknown commands and missing inputs") {
  CHECK_THROWS_AS(run_command("nope", parse(""), "/tmp"), Error);
  try {
    run_command("fit-decay", parse(""), scratch("missing").string());
    FAIL("no exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::config);
  }
}
