// Calibrates the relaxation kernel against the DSMC oracle.
//
// Constant sigma fixes the overall scale C = gamma / (nbar vbar sigma0).
// A 1/v cross section then selects the power p: for sigma = sigma0 vbar / v
// the kernel predicts gamma ratio c(p) = (2/sqrt(pi)) <1/y>_p with
// <1/y>_p = Gamma((2+p)/2) / Gamma((3+p)/2).
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <vector>

#include "metacoll/dsmc.hpp"
#include "metacoll/thermal.hpp"

using namespace metacoll;

namespace {

struct Stats {
  double mean = 0.0, sem = 0.0;
};

Stats stats(const std::vector<double>& x) {
  Stats s;
  for (double v : x) s.mean += v;
  s.mean /= static_cast<double>(x.size());
  double var = 0.0;
  for (double v : x) var += (v - s.mean) * (v - s.mean);
  if (x.size() > 1) s.sem = std::sqrt(var / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
  return s;
}

double ratio_for_power(int p) {
  return 2.0 / std::sqrt(constants::pi) * std::tgamma(0.5 * (2 + p)) / std::tgamma(0.5 * (3 + p));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relaxation-kernel calibration against DSMC"};
  int seeds = 8;
  std::size_t particles = 20000;
  double duration = 0.2, N = 2e8, sigma0 = 1.16e-15;
  app.add_option("--seeds", seeds, "Independent runs per cross section")->check(CLI::PositiveNumber);
  app.add_option("--particles", particles, "Test particles");
  app.add_option("--duration", duration, "Simulated time in s");
  app.add_option("--N", N, "Real atoms");
  app.add_option("--sigma0", sigma0, "Cross section in m^2");
  CLI11_PARSE(app, argc, argv);

  const auto iso = IsotopeParams::neon20();
  const ThermalState init(N, 600e-6, 400e-6, TrapConfig{}, iso);
  const double nbar = mean_density(init), vbar = mean_relative_velocity(init);

  std::vector<double> c_const, c_inv;
  for (int s = 1; s <= seeds; ++s) {
    for (int kind = 0; kind < 2; ++kind) {
      dsmc::SimConfig cfg;
      cfg.isotope = iso;
      cfg.particles = particles;
      cfg.seed = static_cast<std::uint64_t>(s);
      cfg.cross_section = kind == 0 ? dsmc::CrossSectionSource::constant(sigma0)
                                    : dsmc::CrossSectionSource::inverse_velocity(sigma0, vbar);
      const auto g = dsmc::measure_gamma_rel(dsmc::run(cfg, init, duration));
      const double C = g.gamma_rel / (nbar * vbar * sigma0);
      (kind == 0 ? c_const : c_inv).push_back(C);
      std::printf("seed %d %-16s C = %.4f  (%.2f e-foldings)\n", s,
                  kind == 0 ? "constant" : "inverse_velocity", C, g.e_foldings);
    }
  }
  const auto sc = stats(c_const), si = stats(c_inv);
  const double ratio = si.mean / sc.mean;
  const double ratio_err = ratio * std::hypot(sc.sem / sc.mean, si.sem / si.mean);
  std::printf("\nscale C = %.4f +- %.4f\n1/v ratio = %.4f +- %.4f\n\n", sc.mean, sc.sem, ratio,
              ratio_err);
  int best = 0;
  for (int p = 0; p <= 8; ++p) {
    const double c = ratio_for_power(p);
    std::printf("p = %d  c(p) = %.4f  pull = %+.2f\n", p, c, (c - ratio) / ratio_err);
    if (std::abs(c - ratio) < std::abs(ratio_for_power(best) - ratio)) best = p;
  }
  std::printf("\nselected p = %d, scale = %.3f (library: p = %d, scale = %.3f)\n", best, sc.mean,
              calibrated_relaxation_power, calibrated_relaxation_scale);
  return 0;
}
