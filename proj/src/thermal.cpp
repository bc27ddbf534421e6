#include "metacoll/thermal.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <ostream>

#include "metacoll/csv.hpp"

namespace metacoll {

using constants::k_B;
using constants::pi;

namespace {

constexpr double y_cutoff = 12.0;  // e^{-144}

double thermal_speed(double T, double mu) { return std::sqrt(2.0 * k_B * T / mu); }

// Integral of y^{2+p} e^{-y^2} over [0, Y].
double weight_integral(int p, double Y) {
  const double s = 0.5 * (3.0 + p);
  return 0.5 * std::tgamma(s) * boost::math::gamma_p(s, Y * Y);
}

}  // namespace

AverageKernel AverageKernel::standard() { return {Kind::standard, 1, 1.0}; }

AverageKernel AverageKernel::relaxation() {
  return relaxation(calibrated_relaxation_power, calibrated_relaxation_scale);
}

AverageKernel AverageKernel::relaxation(int p, double scale) {
  require(p >= 0, "kernel power must be >= 0");
  require(scale > 0.0, "kernel scale must be > 0");
  return {Kind::relaxation, p, scale};
}

std::string kernel_name(const AverageKernel& k) {
  return (k.kind == AverageKernel::Kind::standard ? "standard" : "relaxation") +
         std::string("(p=") + std::to_string(k.p) + ",scale=" +
         format_double(k.scale) + ")";
}

double weighted_mean(const std::function<double(double)>& sigma, double T,
                     double reduced_mass, int p, double v_lo, double v_hi) {
  require(T > 0.0, "temperature must be > 0");
  require(p >= 0, "kernel power must be >= 0");
  const double vt = thermal_speed(T, reduced_mass);
  const double y_lo = std::max(v_lo, 0.0) / vt;
  const double y_hi = v_hi > 0.0 ? std::min(v_hi / vt, y_cutoff) : y_cutoff;
  auto f = [&](double y) {
    if (y <= 0.0) return 0.0;
    return sigma(vt * y) * std::pow(y, 2 + p) * std::exp(-y * y);
  };
  double err = 0.0;
  const double num = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, y_lo, y_hi, 15, 1e-10, &err);
  return num / weight_integral(p, std::numeric_limits<double>::infinity());
}

double missing_weight(double T, double reduced_mass, int p, double v_lo,
                      double v_hi) {
  const double vt = thermal_speed(T, reduced_mass);
  const double total = weight_integral(p, std::numeric_limits<double>::infinity());
  const double inside = weight_integral(p, v_hi / vt) - weight_integral(p, v_lo / vt);
  return std::max(0.0, 1.0 - inside / total);
}

double thermal_average(const CrossSectionCurve& curve, double T,
                       const AverageKernel& kernel) {
  require(T > 0.0, "temperature must be > 0");
  require(!curve.v.empty(), "empty cross-section curve");
  const double mu = curve.reduced_mass;
  require(mu > 0.0, "cross-section curve lacks a reduced mass");
  const double miss =
      missing_weight(T, mu, kernel.p, curve.v.front(), curve.v.back());
  if (miss > 1e-3)
    fail(ErrorCode::coverage,
         "velocity grid misses " + format_double(miss) +
             " of the thermal weight at T = " + format_double(T) + " K");
  const CrossSectionInterpolant sigma(curve);
  return kernel.scale *
         weighted_mean([&](double v) { return sigma(v); }, T, mu, kernel.p);
}

double unitarity_average(double reduced_mass, double T,
                         const AverageKernel& kernel) {
  // 8 pi hbar^2 / (mu^2 v_t^2) * <y^-2>_p,  <y^-2>_p = 2 / (p + 1)
  const double hb = constants::hbar;
  const double vt = thermal_speed(T, reduced_mass);
  return kernel.scale * 8.0 * pi * hb * hb /
         (reduced_mass * reduced_mass * vt * vt) * 2.0 / (kernel.p + 1.0);
}

void write_relaxation_csv(std::ostream& out, const RelaxationCurve& c) {
  out << "T_uK,sigma_rel_m2\n";
  for (std::size_t i = 0; i < c.T.size(); ++i)
    out << format_double(c.T[i] / constants::microkelvin) << ','
        << format_double(c.sigma_rel[i]) << '\n';
}

CrossSectionCurve tuned_cross_section_curve(const IsotopeParams& iso, double a,
                                            const CurveSettings& s) {
  const auto pot =
      tune_to_scattering_length(iso.C6, iso, a, s.bound_state_branch);
  return Scatterer(pot, iso).cross_section_curve(s.v_grid, s.l_max);
}

std::shared_ptr<const CrossSectionCurve> CrossSectionCache::get(
    const IsotopeParams& iso, double a, const CurveSettings& s) {
  const Key key{iso.mass_number, iso.mass, iso.C6, a, s.bound_state_branch,
                s.l_max, s.v_grid.size(),
                s.v_grid.empty() ? 0.0 : s.v_grid.front(),
                s.v_grid.empty() ? 0.0 : s.v_grid.back()};
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto curve = std::make_shared<const CrossSectionCurve>(
      tuned_cross_section_curve(iso, a, s));
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.emplace(key, std::move(curve)).first->second;
}

std::size_t CrossSectionCache::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.size();
}

void CrossSectionCache::clear() {
  std::lock_guard<std::mutex> lock(mutex_);
  cache_.clear();
}

CrossSectionCache& CrossSectionCache::global() {
  static CrossSectionCache instance;
  return instance;
}

RelaxationCurve relaxation_curve(double a, const IsotopeParams& iso,
                                 const AverageKernel& kernel,
                                 const std::vector<double>& T_grid,
                                 const CurveSettings& s,
                                 CrossSectionCache* cache) {
  auto& c = cache ? *cache : CrossSectionCache::global();
  const auto curve = c.get(iso, a, s);
  RelaxationCurve out;
  out.T = T_grid;
  out.scattering_length = a;
  out.isotope = iso.label;
  out.kernel = kernel;
  out.sigma_rel.reserve(T_grid.size());
  for (double T : T_grid) out.sigma_rel.push_back(thermal_average(*curve, T, kernel));
  return out;
}

RelaxationCurve unitarity_limit_curve(const IsotopeParams& iso,
                                      const std::vector<double>& T_grid,
                                      const AverageKernel& kernel) {
  RelaxationCurve out;
  out.T = T_grid;
  out.scattering_length = std::numeric_limits<double>::quiet_NaN();
  out.isotope = iso.label;
  out.kernel = kernel;
  for (double T : T_grid) {
    require(T > 0.0, "temperature must be > 0");
    out.sigma_rel.push_back(unitarity_average(iso.reduced_mass(), T, kernel));
  }
  return out;
}

std::vector<double> default_temperature_grid(std::size_t n) {
  require(n >= 2, "temperature grid needs >= 2 points");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = (100.0 + 700.0 * static_cast<double>(i) / static_cast<double>(n - 1)) *
           constants::microkelvin;
  return g;
}

}  // namespace metacoll
