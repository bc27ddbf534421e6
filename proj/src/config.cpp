#include "metacoll/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "metacoll/scattering.hpp"

namespace metacoll {

namespace pt = boost::property_tree;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void config_error(const std::string& section, const std::string& key,
                               const std::string& what) {
  std::string where = section.empty() ? key : "[" + section + "] " + key;
  fail(ErrorCode::config, where + ": " + what);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& section, const std::string& key,
                    const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* first = t.data();
  if (!t.empty() && t[0] == '+') ++first;
  auto [p, ec] = std::from_chars(first, t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || p != t.data() + t.size() || !std::isfinite(v))
    config_error(section, key, "expected a number, got '" + t + "'");
  return v;
}

class Reader {
 public:
  Reader(const pt::ptree& tree, std::string base) : tree_(tree), base_(std::move(base)) {}

  const pt::ptree* section(const std::string& name) const {
    if (name.empty()) return &tree_;
    auto it = tree_.find(name);
    if (it == tree_.not_found()) return nullptr;
    return &it->second;
  }

  std::optional<std::string> raw(const std::string& sec, const std::string& key) {
    used_[sec].insert(key);
    const auto* s = section(sec);
    if (!s) return std::nullopt;
    auto it = s->find(key);
    if (it == s->not_found()) return std::nullopt;
    return trim(it->second.data());
  }

  double number(const std::string& sec, const std::string& key, double fallback) {
    auto r = raw(sec, key);
    return r ? parse_number(sec, key, *r) : fallback;
  }
  std::optional<double> optional_number(const std::string& sec, const std::string& key) {
    auto r = raw(sec, key);
    if (!r) return std::nullopt;
    return parse_number(sec, key, *r);
  }
  double positive(const std::string& sec, const std::string& key, double fallback) {
    const double v = number(sec, key, fallback);
    if (!(v > 0.0)) config_error(sec, key, "must be > 0");
    return v;
  }
  long integer(const std::string& sec, const std::string& key, long fallback) {
    auto r = raw(sec, key);
    if (!r) return fallback;
    long v = 0;
    auto [p, ec] = std::from_chars(r->data(), r->data() + r->size(), v);
    if (r->empty() || ec != std::errc() || p != r->data() + r->size())
      config_error(sec, key, "expected an integer, got '" + *r + "'");
    return v;
  }
  bool boolean(const std::string& sec, const std::string& key, bool fallback) {
    auto r = raw(sec, key);
    if (!r) return fallback;
    if (*r == "true" || *r == "yes" || *r == "1" || *r == "on") return true;
    if (*r == "false" || *r == "no" || *r == "0" || *r == "off") return false;
    config_error(sec, key, "expected true/false, got '" + *r + "'");
  }
  std::string text(const std::string& sec, const std::string& key, const std::string& fallback) {
    auto r = raw(sec, key);
    return r ? *r : fallback;
  }
  std::string path(const std::string& sec, const std::string& key) {
    auto r = raw(sec, key);
    if (!r || r->empty()) return "";
    fs::path p(*r);
    if (p.is_relative()) p = fs::path(base_) / p;
    return p.lexically_normal().string();
  }
  std::optional<std::vector<double>> list(const std::string& sec, const std::string& key) {
    auto r = raw(sec, key);
    if (!r) return std::nullopt;
    std::vector<double> out;
    std::stringstream ss(*r);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (trim(item).empty()) continue;
      out.push_back(parse_number(sec, key, item));
    }
    return out;
  }

  // Rejects keys and sections nobody asked for (typos).
  void check_unknown() const {
    for (const auto& [name, sub] : tree_) {
      if (sub.empty()) {
        if (!used_.count("") || !used_.at("").count(name))
          config_error("", name, "unknown key");
        continue;
      }
      auto it = used_.find(name);
      if (it == used_.end()) fail(ErrorCode::config, "[" + name + "]: unknown section");
      for (const auto& kv : sub)
        if (!it->second.count(kv.first)) config_error(name, kv.first, "unknown key");
    }
  }

 private:
  const pt::ptree& tree_;
  std::string base_;
  std::map<std::string, std::set<std::string>> used_;
};

}  // namespace

PipelineConfig parse_config(std::istream& in, const std::string& source,
                            const std::string& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorCode::config, source + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  Reader r(tree, base_dir);
  PipelineConfig c;
  c.source = source;

  const long seed = r.integer("", "seed", 1);
  if (seed < 0) config_error("", "seed", "must be >= 0");
  c.seed = static_cast<std::uint64_t>(seed);

  c.C6_au = r.positive("isotope", "C6_au", default_C6_au);
  const long mass_number = r.integer("isotope", "mass_number", 20);
  if (mass_number == 20)
    c.isotope = IsotopeParams::neon20(c.C6_au);
  else if (mass_number == 22)
    c.isotope = IsotopeParams::neon22(c.C6_au);
  else
    config_error("isotope", "mass_number", "must be 20 or 22");

  const double fx = r.positive("trap", "f_x_Hz", 80.0);
  const double fr = r.positive("trap", "f_r_Hz", 186.0);
  c.trap = TrapConfig(2.0 * constants::pi * fx, 2.0 * constants::pi * fr);

  const std::string kind = r.text("kernel", "kind", "relaxation");
  if (kind == "standard") {
    c.kernel = AverageKernel::standard();
    r.raw("kernel", "power");
    r.raw("kernel", "scale");
  } else if (kind == "relaxation") {
    const long p = r.integer("kernel", "power", calibrated_relaxation_power);
    if (p < 0) config_error("kernel", "power", "must be >= 0");
    c.kernel = AverageKernel::relaxation(static_cast<int>(p),
                                         r.positive("kernel", "scale", calibrated_relaxation_scale));
  } else {
    config_error("kernel", "kind", "must be 'standard' or 'relaxation'");
  }

  c.curve.bound_state_branch = static_cast<int>(r.integer("scattering", "branch", default_bound_state_branch));
  if (c.curve.bound_state_branch < 1) config_error("scattering", "branch", "must be >= 1");
  c.curve.l_max = static_cast<int>(r.integer("scattering", "l_max", default_l_max));
  if (c.curve.l_max < 0 || c.curve.l_max % 2) config_error("scattering", "l_max", "must be even and >= 0");
  {
    const double lo = r.positive("scattering", "v_min_mps", 0.01);
    const double hi = r.positive("scattering", "v_max_mps", 10.0);
    const long n = r.integer("scattering", "v_points", 60);
    if (hi <= lo) config_error("scattering", "v_max_mps", "must exceed v_min_mps");
    if (n < 4) config_error("scattering", "v_points", "must be >= 4");
    c.curve.v_grid = log_grid(lo, hi, static_cast<std::size_t>(n));
  }
  if (auto a = r.list("scattering", "a_a0"))
    for (double v : *a) c.a_values.push_back(v * constants::a0);

  {
    const double lo = r.positive("temperature", "T_min_uK", 100.0);
    const double hi = r.positive("temperature", "T_max_uK", 800.0);
    const long n = r.integer("temperature", "T_points", 36);
    if (hi <= lo) config_error("temperature", "T_max_uK", "must exceed T_min_uK");
    if (n < 2) config_error("temperature", "T_points", "must be >= 2");
    c.T_grid.clear();
    for (long i = 0; i < n; ++i)
      c.T_grid.push_back((lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1)) *
                         constants::microkelvin);
  }

  c.series_data = r.path("fit", "series");
  c.sigma_rel_data = r.path("fit", "sigma_rel");
  {
    const double lo = r.positive("fit", "a_min_a0", 5.0);
    const double hi = r.positive("fit", "a_max_a0", 1.0e4);
    const long n = r.integer("fit", "a_points_per_sign", 40);
    if (hi <= lo) config_error("fit", "a_max_a0", "must exceed a_min_a0");
    if (n < 2) config_error("fit", "a_points_per_sign", "must be >= 2");
    c.a_grid = default_a_grid(lo * constants::a0, hi * constants::a0, static_cast<std::size_t>(n));
  }
  c.density_systematic.low = r.number("fit", "density_sys_low", 0.23);
  c.density_systematic.high = r.number("fit", "density_sys_high", 0.28);
  if (c.density_systematic.low < 0.0 || c.density_systematic.high < c.density_systematic.low)
    config_error("fit", "density_sys_high", "need 0 <= density_sys_low <= density_sys_high");

  auto& d = c.dsmc;
  {
    const long n = r.integer("dsmc", "particles", 20000);
    if (n < 2) config_error("dsmc", "particles", "must be >= 2");
    d.particles = static_cast<std::size_t>(n);
  }
  d.N = r.positive("dsmc", "N", d.N);
  d.T_x = r.positive("dsmc", "Tx_uK", 600.0) * constants::microkelvin;
  d.T_r = r.positive("dsmc", "Tr_uK", 400.0) * constants::microkelvin;
  d.duration = r.positive("dsmc", "duration_s", d.duration);
  d.dt = r.number("dsmc", "dt_s", 0.0);
  if (d.dt < 0.0) config_error("dsmc", "dt_s", "must be >= 0");
  d.sample_interval = r.number("dsmc", "sample_interval_s", 0.0);
  if (d.sample_interval < 0.0) config_error("dsmc", "sample_interval_s", "must be >= 0");
  d.cells_per_width = r.positive("dsmc", "cells_per_width", 4.0);
  d.extent_widths = r.positive("dsmc", "extent_widths", 5.0);
  d.cross_section = r.text("dsmc", "cross_section", "constant");
  if (d.cross_section != "constant" && d.cross_section != "inverse_velocity" &&
      d.cross_section != "curve")
    config_error("dsmc", "cross_section", "must be constant, inverse_velocity or curve");
  d.sigma0 = r.positive("dsmc", "sigma0_m2", d.sigma0);
  d.a = r.number("dsmc", "a_a0", -180.0) * constants::a0;
  d.collisions = r.boolean("dsmc", "collisions", true);
  d.beta = r.number("dsmc", "beta_cm3_s", 0.0) * constants::cm3;
  if (d.beta < 0.0) config_error("dsmc", "beta_cm3_s", "must be >= 0");
  if (auto s = r.list("dsmc", "density_scan")) {
    for (double v : *s)
      if (!(v > 0.0)) config_error("dsmc", "density_scan", "multipliers must be > 0");
    d.density_scan = *s;
  }

  auto& sy = c.synth;
  sy.alpha = 1.0 / r.positive("synth", "alpha_inv_s", 10.3);
  sy.beta = r.number("synth", "beta_cm3_s", 6.5e-12) * constants::cm3;
  if (sy.beta < 0.0) config_error("synth", "beta_cm3_s", "must be >= 0");
  sy.N0 = r.positive("synth", "N0", sy.N0);
  sy.T_x = r.positive("synth", "Tx_uK", 600.0) * constants::microkelvin;
  sy.T_r = r.positive("synth", "Tr_uK", 400.0) * constants::microkelvin;
  sy.duration = r.positive("synth", "duration_s", sy.duration);
  {
    const long n = r.integer("synth", "points", 40);
    if (n < 3) config_error("synth", "points", "must be >= 3");
    sy.points = static_cast<std::size_t>(n);
  }
  sy.noise = r.number("synth", "noise", 0.03);
  if (sy.noise < 0.0) config_error("synth", "noise", "must be >= 0");
  sy.heating = r.boolean("synth", "heating", true);

  for (const std::string label : {"20", "22"}) {
    const std::string sec = "table1_" + label;
    if (!r.section(sec)) continue;
    Table1Column col;
    col.label = label;
    col.sigma_rel_data = r.path(sec, "sigma_rel");
    if (auto a = r.optional_number(sec, "a_a0")) {
      col.a = *a * constants::a0;
      col.a_err_low = r.number(sec, "a_err_low_a0", 0.0) * constants::a0;
      col.a_err_high = r.number(sec, "a_err_high_a0", col.a_err_low / constants::a0) * constants::a0;
    } else {
      r.raw(sec, "a_err_low_a0");
      r.raw(sec, "a_err_high_a0");
    }
    if (auto b = r.optional_number(sec, "beta_cm3_s")) {
      col.beta = Uncertain{*b * constants::cm3, r.number(sec, "beta_err_cm3_s", 0.0) * constants::cm3};
    } else {
      r.raw(sec, "beta_err_cm3_s");
    }
    col.decay_data = r.path(sec, "decay_series");
    auto bu = r.optional_number(sec, "beta_unpol_cm3_s");
    if (!bu) config_error(sec, "beta_unpol_cm3_s", "missing");
    col.beta_unpol = {*bu * constants::cm3, r.number(sec, "beta_unpol_err_cm3_s", 0.0) * constants::cm3};
    if (col.sigma_rel_data.empty()) config_error(sec, "sigma_rel", "missing");
    if (!col.beta && col.decay_data.empty())
      config_error(sec, "beta_cm3_s", "missing (give beta_cm3_s or decay_series)");
    c.table1.push_back(col);
  }

  r.check_unknown();
  return c;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::io, "cannot open config " + path);
  const auto base = fs::path(path).parent_path();
  return parse_config(f, path, base.empty() ? "." : base.string());
}

void validate_inputs(const PipelineConfig& c) {
  std::vector<std::string> missing;
  auto check = [&](const std::string& what, const std::string& p) {
    if (!p.empty() && !fs::exists(p)) missing.push_back(what + " = " + p);
  };
  check("[fit] series", c.series_data);
  check("[fit] sigma_rel", c.sigma_rel_data);
  for (const auto& col : c.table1) {
    check("[table1_" + col.label + "] sigma_rel", col.sigma_rel_data);
    check("[table1_" + col.label + "] decay_series", col.decay_data);
  }
  if (!missing.empty()) {
    std::string msg = "missing input files:";
    for (const auto& m : missing) msg += "\n  " + m;
    fail(ErrorCode::io, msg);
  }
}

}  // namespace metacoll
