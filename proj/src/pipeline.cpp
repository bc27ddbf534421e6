#include "metacoll/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

#include "metacoll/csv.hpp"
#include "metacoll/dynamics.hpp"
#include "metacoll/scattering.hpp"

namespace metacoll {

namespace fs = std::filesystem;
using constants::a0;

namespace {

class Output {
 public:
  explicit Output(const std::string& dir) : dir_(dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) fail(ErrorCode::io, "cannot create output directory " + dir + ": " + ec.message());
  }

  void write(const std::string& name, const std::string& content) {
    const auto path = fs::path(dir_) / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorCode::io, "cannot write " + path.string());
    f << content;
    if (!f) fail(ErrorCode::io, "write failed for " + path.string());
    result.files.push_back(name);
  }

  template <class F>
  void write_with(const std::string& name, F&& body) {
    std::ostringstream s;
    body(s);
    write(name, s.str());
  }

  CommandResult result;

 private:
  std::string dir_;
};

// Scattering lengths read from a config are a0 multiples; undo the
// conversion noise before printing.
double in_a0(double a) { return std::round(a / a0 * 1e6) / 1e6; }

std::string a_tag(double a) {
  const double v = in_a0(a);
  return std::string(v >= 0.0 ? "a+" : "a") + format_double(v);
}

const std::string& require_path(const std::string& p, const std::string& key,
                                const std::string& command) {
  if (p.empty()) fail(ErrorCode::config, key + ": required by " + command);
  return p;
}

MeasurementSeries load_series(const PipelineConfig& cfg, const std::string& command) {
  return read_series_csv(require_path(cfg.series_data, "[fit] series", command),
                         cfg.isotope, cfg.trap);
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s << std::setprecision(digits) << v;
  return s.str();
}

// Rounding exponent used by the concise notation (see format_uncertain).
int rounding_exponent(double unc) {
  int q = 0;
  double u = unc;
  for (int pass = 0; pass < 2; ++pass) {
    const int d = static_cast<int>(std::floor(std::log10(u)));
    q = d - (u / std::pow(10.0, d) < 2.0 ? 1 : 0);
    u = std::round(unc / std::pow(10.0, q)) * std::pow(10.0, q);
  }
  return q;
}

std::string fixed_at(double v, int q) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(std::max(0, -q));
  const double scale = std::pow(10.0, q);
  double r = std::round(v / scale) * scale;
  if (r == 0.0) r = 0.0;  // no "-0"
  s << r;
  return s.str();
}

std::string digits_at(double u, int q) {
  return std::to_string(std::llround(u / std::pow(10.0, std::min(q, 0))));
}

}  // namespace

std::string format_signed_asymmetric(double value, double err_low, double err_high) {
  require(std::isfinite(value), "value must be finite");
  const std::string sign = value > 0.0 ? "+" : "";
  if (!(err_low > 0.0) || !(err_high > 0.0))
    return sign + format_uncertain(value, std::max(err_low, err_high));
  const std::string lo = format_uncertain(value, err_low);
  const std::string hi = format_uncertain(value, err_high);
  if (lo == hi) return sign + lo;
  const int q = rounding_exponent(std::min(err_low, err_high));
  auto err = [&](double e) {
    return q >= 0 ? fixed_at(e, q) : digits_at(e, q);
  };
  return sign + fixed_at(value, q) + "(+" + err(err_high) + "/-" + err(err_low) + ")";
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "sigma-rel", "fit-decay", "fit-heating", "fit-gamma",
      "fit-a",     "dsmc",      "table1",      "synth-decay"};
  return names;
}

CommandResult run_command(const std::string& command, const PipelineConfig& cfg,
                          const std::string& out_dir) {
  static const std::map<std::string,
                        std::function<CommandResult(const PipelineConfig&, const std::string&)>>
      table = {{"sigma-rel", cmd_sigma_rel},  {"fit-decay", cmd_fit_decay},
               {"fit-heating", cmd_fit_heating}, {"fit-gamma", cmd_fit_gamma},
               {"fit-a", cmd_fit_a},          {"dsmc", cmd_dsmc},
               {"table1", cmd_table1},        {"synth-decay", cmd_synth_decay}};
  auto it = table.find(command);
  if (it == table.end()) fail(ErrorCode::invalid_argument, "unknown command '" + command + "'");
  validate_inputs(cfg);
  return it->second(cfg, out_dir);
}

// ---- sigma-rel ----------------------------------------------------------------

CommandResult cmd_sigma_rel(const PipelineConfig& cfg, const std::string& out_dir) {
  Output out(out_dir);
  auto& cache = CrossSectionCache::global();
  std::vector<RelaxationCurve> curves;
  for (double a : cfg.a_values)
    curves.push_back(relaxation_curve(a, cfg.isotope, cfg.kernel, cfg.T_grid, cfg.curve, &cache));
  const auto unitarity = unitarity_limit_curve(cfg.isotope, cfg.T_grid, cfg.kernel);

  out.write_with("sigma_rel.csv", [&](std::ostream& s) {
    s << "T_uK";
    for (double a : cfg.a_values) s << ",sigma_rel_" << a_tag(a) << "_m2";
    s << ",sigma_rel_unitarity_m2\n";
    for (std::size_t i = 0; i < cfg.T_grid.size(); ++i) {
      s << format_double(cfg.T_grid[i] / constants::microkelvin);
      for (const auto& c : curves) s << ',' << format_double(c.sigma_rel[i]);
      s << ',' << format_double(unitarity.sigma_rel[i]) << '\n';
    }
  });
  for (std::size_t j = 0; j < curves.size(); ++j) {
    const double a = cfg.a_values[j];
    out.write_with("sigma_rel_" + a_tag(a) + ".csv",
                   [&](std::ostream& s) { write_relaxation_csv(s, curves[j]); });
    out.write_with("cross_section_" + a_tag(a) + ".csv", [&](std::ostream& s) {
      write_cross_section_csv(s, *cache.get(cfg.isotope, a, cfg.curve));
    });
  }
  out.write_with("sigma_rel_unitarity.csv",
                 [&](std::ostream& s) { write_relaxation_csv(s, unitarity); });

  std::ostringstream sum;
  sum << "isotope " << cfg.isotope.label << ", kernel " << kernel_name(cfg.kernel) << '\n';
  const std::vector<double> bins = {200e-6, 550e-6};
  for (double a : cfg.a_values) {
    const auto c = relaxation_curve(a, cfg.isotope, cfg.kernel, bins, cfg.curve, &cache);
    sum << "  a = " << in_a0(a) << " a0: sigma_rel(200 uK) = " << fmt(c.sigma_rel[0])
        << " m^2, sigma_rel(550 uK) = " << fmt(c.sigma_rel[1]) << " m^2\n";
  }
  out.result.summary = sum.str();
  return out.result;
}

// ---- fits -------------------------------------------------------------------------

CommandResult cmd_fit_decay(const PipelineConfig& cfg, const std::string& out_dir) {
  const auto series = load_series(cfg, "fit-decay");
  const auto r = fit_decay(series, cfg.density_systematic);
  Output out(out_dir);
  out.write_with("fit_decay.txt", [&](std::ostream& s) { write_fit_report(s, r); });
  out.write_with("fit_decay.csv", [&](std::ostream& s) { write_fit_csv(s, r); });
  const double alpha = r.value("alpha"), beta = r.value("beta");
  out.write_with("decay_linearized.csv", [&](std::ostream& s) {
    s << "x_m3,y_per_s,y_fit_per_s\n";
    for (const auto& p : linearized_observables(series))
      s << format_double(p.x) << ',' << format_double(p.y) << ','
        << format_double(-alpha - beta * p.x) << '\n';
  });
  std::ostringstream sum;
  sum << "alpha^-1 = " << fmt(r.extra("alpha_inv_s")) << " +- " << fmt(r.extra("alpha_inv_err_s"), 2)
      << " s, beta = " << fmt(r.extra("beta_cm3_s")) << " +- "
      << fmt(r.extra("beta_total_err") / constants::cm3, 2) << " cm^3/s";
  for (const auto& f : r.flags) sum << " [" << f << ']';
  sum << '\n';
  out.result.summary = sum.str();
  return out.result;
}

CommandResult cmd_fit_heating(const PipelineConfig& cfg, const std::string& out_dir) {
  const auto series = load_series(cfg, "fit-heating");
  const auto r = fit_heating_beta(series, cfg.density_systematic);
  Output out(out_dir);
  out.write_with("fit_heating.txt", [&](std::ostream& s) { write_fit_report(s, r); });
  out.write_with("fit_heating.csv", [&](std::ostream& s) { write_fit_csv(s, r); });
  out.result.summary = "beta_heat = " + fmt(r.value("beta_heat") / constants::cm3) + " +- " +
                       fmt(r.error("beta_heat") / constants::cm3, 2) + " cm^3/s\n";
  return out.result;
}

CommandResult cmd_fit_gamma(const PipelineConfig& cfg, const std::string& out_dir) {
  const auto series = load_series(cfg, "fit-gamma");
  const auto r = fit_gamma_rel(series);
  const auto t_star = rescale_time(series);
  const RelaxationModel model{r.value("gamma_rel"), r.value("A_eq"), r.value("A0")};
  Output out(out_dir);
  out.write_with("fit_gamma.txt", [&](std::ostream& s) { write_fit_report(s, r); });
  out.write_with("fit_gamma.csv", [&](std::ostream& s) { write_fit_csv(s, r); });
  out.write_with("gamma_points.csv", [&](std::ostream& s) {
    s << "t_s,t_star_s,A,sigma_A,A_fit\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
      const auto& m = series[i];
      const double A = aspect_ratio(m.state);
      const double sA = 0.5 * A * std::hypot(m.sigma_Tx / m.state.T_x(), m.sigma_Tr / m.state.T_r());
      s << format_double(m.t) << ',' << format_double(t_star[i]) << ',' << format_double(A)
        << ',' << format_double(sA) << ',' << format_double(evolve_aspect(model, t_star[i]))
        << '\n';
    }
  });
  out.result.summary = "gamma_rel = " + fmt(r.value("gamma_rel")) + " +- " +
                       fmt(r.error("gamma_rel"), 2) + " 1/s at T_eff = " +
                       fmt(r.extra("T_eff_K") / constants::microkelvin) + " uK\n";
  return out.result;
}

CommandResult cmd_fit_a(const PipelineConfig& cfg, const std::string& out_dir) {
  const auto data =
      read_sigma_rel_csv(require_path(cfg.sigma_rel_data, "[fit] sigma_rel", "fit-a"));
  auto& cache = CrossSectionCache::global();
  const auto fit =
      fit_scattering_length(data, cfg.isotope, cfg.kernel, cfg.a_grid, cfg.curve, &cache);
  const auto& r = fit.best;
  Output out(out_dir);
  out.write_with("fit_a.txt", [&](std::ostream& s) { write_fit_report(s, r); });
  out.write_with("fit_a.csv", [&](std::ostream& s) { write_fit_csv(s, r); });
  out.write_with("fit_a_chi2.csv", [&](std::ostream& s) {
    s << "a_a0,chi2\n";
    for (std::size_t i = 0; i < fit.grid_a.size(); ++i)
      s << format_double(fit.grid_a[i] / a0) << ',' << format_double(fit.grid_chi2[i]) << '\n';
  });
  out.write_with("fit_a_minima.csv", [&](std::ostream& s) {
    s << "a_a0,chi2,err_low_a0,err_high_a0,relative_likelihood,at_grid_edge\n";
    for (const auto& c : fit.candidates)
      s << format_double(c.a / a0) << ',' << format_double(c.chi2) << ','
        << format_double(c.err_low / a0) << ',' << format_double(c.err_high / a0) << ','
        << format_double(c.relative_likelihood) << ',' << (c.at_grid_edge ? 1 : 0) << '\n';
  });
  const auto best =
      relaxation_curve(r.value("a"), cfg.isotope, cfg.kernel, cfg.T_grid, cfg.curve, &cache);
  out.write_with("fit_a_curve.csv", [&](std::ostream& s) { write_relaxation_csv(s, best); });

  std::ostringstream sum;
  for (const auto& c : fit.candidates)
    sum << "a = " << format_signed_asymmetric(c.a / a0, c.err_low / a0, c.err_high / a0)
        << " a0, chi2 = " << fmt(c.chi2) << ", relative likelihood " << fmt(c.relative_likelihood, 3)
        << (c.at_grid_edge ? " (grid edge)" : "") << '\n';
  out.result.summary = sum.str();
  return out.result;
}

// ---- dsmc ---------------------------------------------------------------------------

ThermalState make_initial_state(const PipelineConfig& cfg, double N_multiplier) {
  require(N_multiplier > 0.0, "density multiplier must be > 0");
  return ThermalState(cfg.dsmc.N * N_multiplier, cfg.dsmc.T_x, cfg.dsmc.T_r, cfg.trap,
                      cfg.isotope);
}

dsmc::SimConfig make_sim_config(const PipelineConfig& cfg, double N_multiplier) {
  const auto& d = cfg.dsmc;
  dsmc::SimConfig s;
  s.particles = d.particles;
  s.cells_per_width = d.cells_per_width;
  s.extent_widths = d.extent_widths;
  s.dt = d.dt;
  s.sample_interval = d.sample_interval;
  s.trap = cfg.trap;
  s.isotope = cfg.isotope;
  s.collisions = d.collisions;
  s.beta = d.beta;
  s.seed = cfg.seed;
  if (d.cross_section == "constant") {
    s.cross_section = dsmc::CrossSectionSource::constant(d.sigma0);
  } else if (d.cross_section == "inverse_velocity") {
    const auto init = make_initial_state(cfg, N_multiplier);
    s.cross_section = dsmc::CrossSectionSource::inverse_velocity(
        d.sigma0, mean_relative_velocity(init));
  } else if (d.cross_section == "curve") {
    s.cross_section = dsmc::CrossSectionSource::tabulated(
        *CrossSectionCache::global().get(cfg.isotope, d.a, cfg.curve));
  } else {
    fail(ErrorCode::config, "[dsmc] cross_section: unknown kind '" + d.cross_section + "'");
  }
  return s;
}

double predicted_gamma_rel(const PipelineConfig& cfg, const dsmc::SimConfig& sim,
                           const ThermalState& initial) {
  const double T = mean_temperature(initial);
  const double mu = initial.isotope().reduced_mass();
  double sigma_rel = 0.0;
  if (sim.cross_section.kind == dsmc::CrossSectionSource::Kind::curve) {
    sigma_rel = thermal_average(*sim.cross_section.curve, T, cfg.kernel);
  } else {
    const auto& src = sim.cross_section;
    sigma_rel = cfg.kernel.scale *
                weighted_mean([&](double v) { return src(v); }, T, mu, cfg.kernel.p);
  }
  return sigma_rel * mean_density(initial) * mean_relative_velocity(initial);
}

CommandResult cmd_dsmc(const PipelineConfig& cfg, const std::string& out_dir) {
  const auto sim = make_sim_config(cfg);
  const auto init = make_initial_state(cfg);
  dsmc::validate(sim, init);
  const auto trace = dsmc::run(sim, init, cfg.dsmc.duration);
  const auto series = dsmc::to_series(trace);
  Output out(out_dir);
  out.write_with("dsmc_trace.csv", [&](std::ostream& s) { dsmc::write_trace_csv(s, trace); });
  out.write_with("dsmc_series.csv", [&](std::ostream& s) { write_series_csv(s, series); });

  std::ostringstream sum;
  sum << "particles " << sim.particles << ", dt " << fmt(trace.dt) << " s, "
      << trace.t.size() << " samples, collisions " << trace.collisions.back() << ", losses "
      << trace.losses.back() << '\n';
  const double drift = (trace.energy.back() - trace.energy.front()) / trace.energy.front();
  sum << "energy drift " << fmt(drift, 3) << '\n';

  const double predicted = predicted_gamma_rel(cfg, sim, init);
  if (cfg.dsmc.collisions) {
    const auto g = dsmc::measure_gamma_rel(trace);
    out.write_with("dsmc_gamma.csv", [&](std::ostream& s) {
      s << "gamma_rel_per_s,predicted_per_s,ratio,A_eq,A0,rms_residual,r_squared,e_foldings,"
           "under_relaxed,nbar0_m3,Tbar0_K\n";
      s << format_double(g.gamma_rel) << ',' << format_double(predicted) << ','
        << format_double(g.gamma_rel / predicted) << ',' << format_double(g.A_eq) << ','
        << format_double(g.A0) << ',' << format_double(g.rms_residual) << ','
        << format_double(g.r_squared) << ',' << format_double(g.e_foldings) << ','
        << (g.under_relaxed ? 1 : 0) << ',' << format_double(mean_density(init)) << ','
        << format_double(mean_temperature(init)) << '\n';
    });
    sum << "gamma_rel = " << fmt(g.gamma_rel) << " 1/s, kernel prediction " << fmt(predicted)
        << " 1/s (ratio " << fmt(g.gamma_rel / predicted, 3) << ", " << fmt(g.e_foldings, 3)
        << " e-foldings" << (g.under_relaxed ? ", under-relaxed" : "") << ")\n";
  } else {
    const auto [lo, hi] = std::minmax_element(trace.A.begin(), trace.A.end());
    sum << "collisions off: A in [" << fmt(*lo) << ", " << fmt(*hi) << "]\n";
  }

  if (sim.beta > 0.0) {
    const auto h = fit_heating_beta(series, cfg.density_systematic);
    out.write_with("dsmc_heating.txt", [&](std::ostream& s) { write_fit_report(s, h); });
    sum << "beta_heat = " << fmt(h.value("beta_heat") / constants::cm3) << " cm^3/s (input "
        << fmt(sim.beta / constants::cm3) << ")\n";
  }

  if (!cfg.dsmc.density_scan.empty()) {
    struct Point {
      double m, nbar0, gamma, predicted;
    };
    std::vector<Point> pts;
    for (double m : cfg.dsmc.density_scan) {
      const auto sm = make_sim_config(cfg, m);
      const auto im = make_initial_state(cfg, m);
      dsmc::validate(sm, im);
      // Same number of e-foldings at every density.
      const auto tr = dsmc::run(sm, im, cfg.dsmc.duration / m);
      pts.push_back({m, mean_density(im), dsmc::measure_gamma_rel(tr).gamma_rel,
                     predicted_gamma_rel(cfg, sm, im)});
    }
    double sxy = 0.0, sxx = 0.0;
    for (const auto& p : pts) {
      sxy += p.nbar0 * p.gamma;
      sxx += p.nbar0 * p.nbar0;
    }
    const double slope = sxy / sxx;
    double worst = 0.0;
    for (const auto& p : pts) worst = std::max(worst, std::abs(p.gamma / (slope * p.nbar0) - 1.0));
    out.write_with("dsmc_density_scan.csv", [&](std::ostream& s) {
      s << "multiplier,nbar0_m3,gamma_rel_per_s,predicted_per_s,gamma_over_nbar_m3_s,"
           "deviation_from_origin_line\n";
      for (const auto& p : pts)
        s << format_double(p.m) << ',' << format_double(p.nbar0) << ','
          << format_double(p.gamma) << ',' << format_double(p.predicted) << ','
          << format_double(p.gamma / p.nbar0) << ','
          << format_double(p.gamma / (slope * p.nbar0) - 1.0) << '\n';
    });
    sum << "density scan: slope " << fmt(slope) << " m^3/s through the origin, largest deviation "
        << fmt(100.0 * worst, 3) << "%\n";
  }
  out.result.summary = sum.str();
  return out.result;
}

// ---- table1 -------------------------------------------------------------------------

Table1 build_table1(const PipelineConfig& cfg) {
  if (cfg.table1.empty())
    fail(ErrorCode::config, "[table1_20] / [table1_22]: no table1 section configured");
  constexpr double sigma_unit = 1e-17;
  constexpr double beta_unit = 1e-12 * constants::cm3;
  Table1 t;
  for (const auto& col : cfg.table1) {
    const auto iso = IsotopeParams::by_label(col.label, cfg.C6_au);
    const auto data = read_sigma_rel_csv(col.sigma_rel_data);
    std::vector<Table1Entry> rows;

    for (double T_uK : {200.0, 550.0}) {
      const double T = T_uK * constants::microkelvin;
      const auto it = std::min_element(data.begin(), data.end(), [&](const auto& x, const auto& y) {
        return std::abs(x.T - T) < std::abs(y.T - T);
      });
      const std::string name = "sigma_rel_" + format_double(T_uK) + "uK";
      if (it == data.end() || std::abs(it->T - T) > 0.05 * T)
        fail(ErrorCode::config, "[table1_" + col.label + "] sigma_rel: no datum within 5% of " +
                                    format_double(T_uK) + " uK");
      Table1Entry e{name, "1e-17 m^2", it->sigma_rel / sigma_unit, it->uncertainty / sigma_unit,
                    it->uncertainty / sigma_unit, ""};
      e.text = format_uncertain(e.value, e.err_high);
      rows.push_back(e);
    }

    Table1Entry ea{"a", "a0", 0, 0, 0, ""};
    if (col.a) {
      ea.value = *col.a / a0;
      ea.err_low = col.a_err_low / a0;
      ea.err_high = col.a_err_high / a0;
    } else {
      const auto fit = fit_scattering_length(data, iso, cfg.kernel, cfg.a_grid, cfg.curve,
                                             &CrossSectionCache::global());
      const auto& b = fit.candidates.front();
      ea.value = b.a / a0;
      ea.err_low = b.err_low / a0;
      ea.err_high = b.err_high / a0;
    }
    ea.text = format_signed_asymmetric(ea.value, ea.err_low, ea.err_high);
    rows.push_back(ea);

    Uncertain beta;
    if (col.beta) {
      beta = *col.beta;
    } else {
      const auto r = fit_decay(read_series_csv(col.decay_data, iso, cfg.trap), cfg.density_systematic);
      beta = {r.value("beta"), r.extra("beta_total_err")};
    }
    auto uncertain_row = [](std::string name, std::string unit, Uncertain u) {
      Table1Entry e{std::move(name), std::move(unit), u.value, u.error, u.error, ""};
      e.text = format_uncertain(u.value, u.error);
      return e;
    };
    rows.push_back(uncertain_row("beta", "1e-12 cm^3/s",
                                 {beta.value / beta_unit, beta.error / beta_unit}));
    rows.push_back(uncertain_row("beta_unpol", "1e-12 cm^3/s",
                                 {col.beta_unpol.value / beta_unit, col.beta_unpol.error / beta_unit}));
    rows.push_back(uncertain_row(
        "beta_unpol_over_beta", "1",
        propagate_ratio({col.beta_unpol.value / beta_unit, col.beta_unpol.error / beta_unit},
                        {beta.value / beta_unit, beta.error / beta_unit})));
    t.columns.push_back(iso.label);
    t.cells.push_back(std::move(rows));
  }
  return t;
}

CommandResult cmd_table1(const PipelineConfig& cfg, const std::string& out_dir) {
  const auto t = build_table1(cfg);
  const auto& first = t.cells.front();
  Output out(out_dir);
  out.write_with("table1.csv", [&](std::ostream& s) {
    s << "quantity,unit";
    for (const auto& c : t.columns) s << ',' << c;
    s << '\n';
    for (std::size_t r = 0; r < first.size(); ++r) {
      s << first[r].quantity << ',' << first[r].unit;
      for (const auto& col : t.cells) s << ',' << col[r].text;
      s << '\n';
    }
  });
  out.write_with("table1_values.csv", [&](std::ostream& s) {
    s << "isotope,quantity,unit,value,err_low,err_high\n";
    for (std::size_t c = 0; c < t.columns.size(); ++c)
      for (const auto& e : t.cells[c])
        s << t.columns[c] << ',' << e.quantity << ',' << e.unit << ',' << format_double(e.value)
          << ',' << format_double(e.err_low) << ',' << format_double(e.err_high) << '\n';
  });

  // Model sigma_rel at the tabulated a, next to the data bins.
  out.write_with("table1_model.csv", [&](std::ostream& s) {
    s << "isotope,a_a0,T_uK,sigma_rel_model_m2\n";
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      const auto iso = IsotopeParams::by_label(cfg.table1[c].label, cfg.C6_au);
      const double a = t.cells[c][2].value * a0;
      const auto curve = relaxation_curve(a, iso, cfg.kernel, {200e-6, 550e-6}, cfg.curve,
                                          &CrossSectionCache::global());
      for (std::size_t i = 0; i < curve.T.size(); ++i)
        s << t.columns[c] << ',' << format_double(in_a0(a)) << ','
          << format_double(std::round(curve.T[i] / constants::microkelvin)) << ','
          << format_double(curve.sigma_rel[i]) << '\n';
    }
  });

  std::ostringstream txt;
  std::size_t w0 = 8;
  for (const auto& e : first) w0 = std::max(w0, e.quantity.size() + e.unit.size() + 5);
  txt << std::left << std::setw(static_cast<int>(w0)) << "quantity";
  for (const auto& c : t.columns) txt << std::setw(16) << c;
  txt << '\n';
  for (std::size_t r = 0; r < first.size(); ++r) {
    txt << std::setw(static_cast<int>(w0)) << first[r].quantity + " [" + first[r].unit + "]";
    for (const auto& col : t.cells) txt << std::setw(16) << col[r].text;
    txt << '\n';
  }
  out.write("table1.txt", txt.str());
  out.result.summary = txt.str();
  return out.result;
}

// ---- synth-decay -------------------------------------------------------------------------

CommandResult cmd_synth_decay(const PipelineConfig& cfg, const std::string& out_dir) {
  const auto& sy = cfg.synth;
  const DecayModel model{sy.alpha, sy.beta,
                         ThermalState(sy.N0, sy.T_x, sy.T_r, cfg.trap, cfg.isotope),
                         sy.heating ? HeatingLaw::intrinsic : HeatingLaw::none, {}, {}};
  std::vector<double> grid(sy.points);
  for (std::size_t i = 0; i < sy.points; ++i)
    grid[i] = sy.duration * static_cast<double>(i) / static_cast<double>(sy.points - 1);
  const auto traj = evolve_decay(model, grid);
  const auto series = sy.noise > 0.0
                          ? synthesize_series(traj, NoiseModel{sy.noise, sy.noise, cfg.seed})
                          : exact_series(traj);
  Output out(out_dir);
  out.write_with("synth_series.csv", [&](std::ostream& s) { write_series_csv(s, series); });
  out.write_with("synth_truth.csv", [&](std::ostream& s) {
    s << "alpha_inv_s,beta_cm3_s,N0,Tx_K,Tr_K,noise,seed\n"
      << format_double(1.0 / sy.alpha) << ',' << format_double(sy.beta / constants::cm3) << ','
      << format_double(sy.N0) << ',' << format_double(sy.T_x) << ',' << format_double(sy.T_r)
      << ',' << format_double(sy.noise) << ',' << cfg.seed << '\n';
  });
  out.result.summary = std::to_string(series.size()) + " records over " + fmt(sy.duration) + " s\n";
  return out.result;
}

}  // namespace metacoll
