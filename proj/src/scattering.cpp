#include "metacoll/scattering.hpp"

#include "boost_pchip.hpp"
#include <cmath>
#include <memory>
#include <ostream>

#include "metacoll/csv.hpp"

namespace metacoll {

using constants::hbar;
using constants::pi;

double wavenumber(const IsotopeParams& iso, double v) {
  return iso.reduced_mass() * v / hbar;
}

double collision_energy(const IsotopeParams& iso, double v) {
  return 0.5 * iso.reduced_mass() * v * v;
}

CrossSectionInterpolant::CrossSectionInterpolant(const CrossSectionCurve& c) {
  require(c.v.size() >= 4 && c.v.size() == c.sigma.size(),
          "cross-section curve needs at least 4 points");
  std::vector<double> x(c.v.size()), y(c.v.size());
  for (std::size_t i = 0; i < c.v.size(); ++i) {
    x[i] = std::log(c.v[i]);
    y[i] = c.sigma[i] * c.v[i] * c.v[i];
  }
  v_min_ = c.v.front();
  v_max_ = c.v.back();
  sigma_lo_ = c.sigma.front();
  s_hi_ = y.back();
  auto p = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(
      std::move(x), std::move(y));
  spline_ = [p](double lnv) { return (*p)(lnv); };
}

double CrossSectionInterpolant::operator()(double v) const {
  if (v <= v_min_) return sigma_lo_;
  if (v >= v_max_) return s_hi_ / (v * v);
  return std::max(spline_(std::log(v)), 0.0) / (v * v);
}

double CrossSectionCurve::operator()(double vq) const {
  require(vq > 0.0, "cross section queried at v <= 0");
  return CrossSectionInterpolant(*this)(vq);
}

void write_cross_section_csv(std::ostream& out, const CrossSectionCurve& c) {
  out << "v_mps,sigma_m2\n";
  for (std::size_t i = 0; i < c.v.size(); ++i)
    out << format_double(c.v[i]) << ',' << format_double(c.sigma[i]) << '\n';
}

Scatterer::Scatterer(const ModelPotential& pot, const IsotopeParams& iso,
                     RadialOptions opt)
    : pot_(pot), iso_(iso), opt_(opt), solver_(pot.radial_problem(iso)) {}

PhaseShift Scatterer::phase_shift(double energy, int l) const {
  require(energy > 0.0, "phase shift needs E > 0");
  require(l >= 0, "partial wave l must be >= 0");
  return solver_.phase_shift(energy, l, opt_);
}

ScatteringLength Scatterer::scattering_length() const {
  // Start where k|a| and k beta6 are both small; the zero-energy solution
  // gives the estimate of |a|.
  const double beta6 = vdw_length(pot_.C6(), iso_.reduced_mass());
  const double a_est = solver_.zero_energy(opt_).scattering_length;
  const double k0 = std::min(0.02 / beta6, 0.02 / std::max(std::abs(a_est), beta6));

  constexpr int levels = 4;
  double table[levels][levels];
  for (int j = 0; j < levels; ++j) {
    const double k = k0 / std::pow(2.0, j);
    const double E = hbar * hbar * k * k / (2.0 * iso_.reduced_mass());
    // Numerov is fourth order; combine two steps to remove the h^4 term.
    const double h = solver_.automatic_step(E, 0) * 0.5;
    const double d1 = solver_.phase_shift_at_step(E, 0, h, opt_.match_offset);
    const double d2 =
        solver_.phase_shift_at_step(E, 0, 0.5 * h, opt_.match_offset);
    const double delta = d2 + (d2 - d1) / 15.0;
    table[j][0] = -std::tan(delta) / k;
  }
  // -tan(delta)/k = a + c k^2 + ...; halving k divides the k^2 term by 4.
  for (int m = 1; m < levels; ++m) {
    const double f = std::pow(4.0, m);
    for (int j = m; j < levels; ++j)
      table[j][m] = (f * table[j][m - 1] - table[j - 1][m - 1]) / (f - 1.0);
  }
  ScatteringLength out;
  out.value = table[levels - 1][levels - 1];
  out.error_estimate =
      std::abs(table[levels - 1][levels - 1] - table[levels - 1][levels - 2]);
  out.resonant = std::abs(out.value) > 1e5 * constants::a0;
  return out;
}

double bose_cross_section(double k, const std::vector<int>& l,
                          const std::vector<double>& delta) {
  require(k > 0.0, "wavenumber must be > 0");
  require(l.size() == delta.size(), "need one phase shift per partial wave");
  double s = 0.0;
  for (std::size_t i = 0; i < l.size(); ++i) {
    require(l[i] >= 0 && l[i] % 2 == 0, "identical bosons scatter in even partial waves only");
    const double sd = std::sin(delta[i]);
    s += (2 * l[i] + 1) * sd * sd;
  }
  return 8.0 * pi / (k * k) * s;
}

namespace {
std::vector<int> even_waves(int l_max) {
  require(l_max >= 0 && l_max % 2 == 0, "l_max must be even and >= 0");
  std::vector<int> ls;
  for (int l = 0; l <= l_max; l += 2) ls.push_back(l);
  return ls;
}
}  // namespace

double Scatterer::elastic_cross_section(double v, int l_max) const {
  require(v > 0.0, "cross section needs v > 0");
  require(iso_.bosonic, "only identical bosons are supported");
  const auto ls = even_waves(l_max);
  const double E = collision_energy(iso_, v);
  std::vector<double> d;
  for (int l : ls) d.push_back(phase_shift(E, l).delta);
  return bose_cross_section(wavenumber(iso_, v), ls, d);
}

PhaseShiftTable Scatterer::phase_shift_table(const std::vector<double>& k,
                                             int l_max) const {
  PhaseShiftTable t;
  t.k = k;
  t.l = even_waves(l_max);
  for (int l : t.l) {
    std::vector<double> row;
    row.reserve(k.size());
    for (double kk : k) {
      require(kk > 0.0, "k grid must be > 0");
      double d = phase_shift(hbar * hbar * kk * kk / (2.0 * iso_.reduced_mass()), l).delta;
      if (!row.empty()) {
        // Unwrap to the branch closest to the previous point.
        d += pi * std::round((row.back() - d) / pi);
      }
      row.push_back(d);
    }
    t.delta.push_back(std::move(row));
  }
  return t;
}

CrossSectionCurve Scatterer::cross_section_curve(const std::vector<double>& v,
                                                 int l_max) const {
  require(iso_.bosonic, "only identical bosons are supported");
  std::vector<double> k;
  k.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) require(v[i] > v[i - 1], "velocity grid must increase");
    k.push_back(wavenumber(iso_, v[i]));
  }
  const auto table = phase_shift_table(k, l_max);
  CrossSectionCurve c;
  c.v = v;
  c.l_max = l_max;
  c.isotope = iso_.label;
  c.reduced_mass = iso_.reduced_mass();
  c.scattering_length = solver_.zero_energy(opt_).scattering_length;
  c.sigma.reserve(v.size());
  std::vector<double> d(table.l.size());
  for (std::size_t j = 0; j < k.size(); ++j) {
    for (std::size_t i = 0; i < table.l.size(); ++i) d[i] = table.delta[i][j];
    c.sigma.push_back(bose_cross_section(k[j], table.l, d));
  }
  return c;
}

PhaseShift phase_shift(const ModelPotential& pot, const IsotopeParams& iso,
                       double energy, int l, const RadialOptions& opt) {
  return Scatterer(pot, iso, opt).phase_shift(energy, l);
}

ScatteringLength scattering_length(const ModelPotential& pot,
                                   const IsotopeParams& iso) {
  return Scatterer(pot, iso).scattering_length();
}

double elastic_cross_section(const ModelPotential& pot,
                             const IsotopeParams& iso, double v, int l_max) {
  return Scatterer(pot, iso).elastic_cross_section(v, l_max);
}

double centrifugal_barrier(const IsotopeParams& iso, double C6, int l) {
  require(l >= 0, "partial wave l must be >= 0");
  require(C6 > 0.0, "C6 must be > 0");
  if (l == 0) return 0.0;
  const double B = hbar * hbar * l * (l + 1) / (2.0 * iso.reduced_mass());
  return (2.0 * B / 3.0) * std::sqrt(B / (3.0 * C6));
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  require(lo > 0.0 && hi > lo && n >= 2, "invalid log grid");
  std::vector<double> g(n);
  const double r = std::log(hi / lo);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = lo * std::exp(r * static_cast<double>(i) / static_cast<double>(n - 1));
  g.back() = hi;
  return g;
}

std::vector<double> default_velocity_grid() { return log_grid(0.01, 10.0, 60); }

}  // namespace metacoll
