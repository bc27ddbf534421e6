#ifndef METACOLL_SCATTERING_HPP
#define METACOLL_SCATTERING_HPP

#include <functional>
#include <iosfwd>
#include <vector>

#include "metacoll/core.hpp"
#include "metacoll/potential.hpp"
#include "metacoll/radial.hpp"

namespace metacoll {

// Relative wavenumber k = mu v / hbar and collision energy mu v^2 / 2.
double wavenumber(const IsotopeParams& iso, double v);
double collision_energy(const IsotopeParams& iso, double v);

struct PhaseShiftTable {
  std::vector<double> k;   // 1/m
  std::vector<int> l;      // even partial waves
  // delta[i][j]: partial wave l[i] at k[j], unwrapped along k (mod pi).
  std::vector<std::vector<double>> delta;
};

struct CrossSectionCurve {
  std::vector<double> v;      // m/s, increasing
  std::vector<double> sigma;  // m^2
  double scattering_length = 0.0;  // m, of the potential used
  std::string isotope;
  int l_max = 0;
  double reduced_mass = 0.0;  // kg, for k(v)

  // Convenience lookup; builds a CrossSectionInterpolant per call.
  double operator()(double v) const;
};

// pchip interpolation of sigma v^2 (bounded, smooth through Ramsauer
// minima) on ln v. Below the grid sigma is held (ultracold limit); above it
// sigma v^2 is held.
class CrossSectionInterpolant {
 public:
  explicit CrossSectionInterpolant(const CrossSectionCurve& curve);
  double operator()(double v) const;
  double v_min() const { return v_min_; }
  double v_max() const { return v_max_; }

 private:
  std::function<double(double)> spline_;
  double v_min_, v_max_, sigma_lo_, s_hi_;
};

void write_cross_section_csv(std::ostream& out, const CrossSectionCurve& c);

struct ScatteringLength {
  double value = 0.0;           // m
  double error_estimate = 0.0;  // m, from the Richardson table
  bool resonant = false;        // |a| > 1e5 a0
};

// Binds a potential to an isotope and reuses integration grids between
// energies and partial waves.
class Scatterer {
 public:
  Scatterer(const ModelPotential& pot, const IsotopeParams& iso,
            RadialOptions opt = {});

  const ModelPotential& potential() const { return pot_; }
  const IsotopeParams& isotope() const { return iso_; }
  const RadialSolver& solver() const { return solver_; }

  PhaseShift phase_shift(double energy, int l) const;
  ScatteringLength scattering_length() const;
  // Bose-symmetrised sum over even l <= l_max.
  double elastic_cross_section(double v, int l_max) const;
  PhaseShiftTable phase_shift_table(const std::vector<double>& k,
                                    int l_max) const;
  CrossSectionCurve cross_section_curve(const std::vector<double>& v,
                                        int l_max) const;

 private:
  ModelPotential pot_;
  IsotopeParams iso_;
  RadialOptions opt_;
  RadialSolver solver_;
};

PhaseShift phase_shift(const ModelPotential& pot, const IsotopeParams& iso,
                       double energy, int l, const RadialOptions& opt = {});
ScatteringLength scattering_length(const ModelPotential& pot,
                                   const IsotopeParams& iso);
double elastic_cross_section(const ModelPotential& pot,
                             const IsotopeParams& iso, double v, int l_max);

// sigma = (8 pi / k^2) sum_{l even <= l_max} (2l+1) sin^2 delta_l
double bose_cross_section(double k, const std::vector<int>& l,
                          const std::vector<double>& delta);

// Maximum of hbar^2 l(l+1)/(2 mu r^2) - C6/r^6. Returns 0 for l = 0, where
// there is no barrier.
double centrifugal_barrier(const IsotopeParams& iso, double C6, int l);

inline constexpr int default_l_max = 4;

// 60 logarithmic points over [0.01, 10] m/s.
std::vector<double> default_velocity_grid();
std::vector<double> log_grid(double lo, double hi, std::size_t n);

}  // namespace metacoll

#endif
