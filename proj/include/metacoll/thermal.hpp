#ifndef METACOLL_THERMAL_HPP
#define METACOLL_THERMAL_HPP

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "metacoll/core.hpp"
#include "metacoll/scattering.hpp"

namespace metacoll {

// Thermal weight w_p(v) ~ v^p f_MB(v) over relative speeds, where
// f_MB(v) ~ v^2 exp(-mu v^2 / 2 k_B T). The kernel average of sigma_el is
// the normalised weighted mean times `scale`.
//
// standard:    p = 1, scale = 1 -> <sigma v> / <v>
// relaxation:  p and scale calibrated against the DSMC oracle
//              (docs/kernel_calibration.md), so that
//              gamma_rel = sigma_rel * nbar * vbar.
struct AverageKernel {
  enum class Kind { standard, relaxation };

  Kind kind = Kind::standard;
  int p = 1;
  double scale = 1.0;

  static AverageKernel standard();
  static AverageKernel relaxation();
  static AverageKernel relaxation(int p, double scale);
};

// DSMC-calibrated defaults for the relaxation kernel.
inline constexpr int calibrated_relaxation_power = 5;
inline constexpr double calibrated_relaxation_scale = 0.422;

std::string kernel_name(const AverageKernel& k);

// Normalised mean of sigma(v) under w_p at temperature T (no scale).
double weighted_mean(const std::function<double(double)>& sigma, double T,
                     double reduced_mass, int p, double v_lo = 0.0,
                     double v_hi = 0.0);

// Fraction of the w_p weight outside [v_lo, v_hi].
double missing_weight(double T, double reduced_mass, int p, double v_lo,
                      double v_hi);

// Kernel average of a tabulated cross section. Throws
// ErrorCode::coverage with the missing weight when more than 1e-3 of the
// thermal weight lies outside the curve's velocity grid.
double thermal_average(const CrossSectionCurve& curve, double T,
                       const AverageKernel& kernel);

// Closed form for sigma = 8 pi / k^2 under the kernel.
double unitarity_average(double reduced_mass, double T,
                         const AverageKernel& kernel);

struct RelaxationCurve {
  std::vector<double> T;          // K
  std::vector<double> sigma_rel;  // m^2
  double scattering_length = 0.0; // m; NaN for the unitarity curve
  std::string isotope;
  AverageKernel kernel;
};

void write_relaxation_csv(std::ostream& out, const RelaxationCurve& c);

struct CurveSettings {
  int bound_state_branch = default_bound_state_branch;
  int l_max = default_l_max;
  std::vector<double> v_grid = default_velocity_grid();
};

// Memoises tuned cross-section curves per (isotope, C6, a, settings).
class CrossSectionCache {
 public:
  std::shared_ptr<const CrossSectionCurve> get(const IsotopeParams& iso,
                                               double a,
                                               const CurveSettings& s = {});
  std::size_t size() const;
  void clear();

  static CrossSectionCache& global();

 private:
  using Key = std::tuple<int, double, double, double, int, int, std::size_t,
                         double, double>;
  mutable std::mutex mutex_;
  std::map<Key, std::shared_ptr<const CrossSectionCurve>> cache_;
};

// sigma_el(v) of the potential tuned to `a`.
CrossSectionCurve tuned_cross_section_curve(const IsotopeParams& iso, double a,
                                            const CurveSettings& s = {});

RelaxationCurve relaxation_curve(double a, const IsotopeParams& iso,
                                 const AverageKernel& kernel,
                                 const std::vector<double>& T_grid,
                                 const CurveSettings& s = {},
                                 CrossSectionCache* cache = nullptr);

RelaxationCurve unitarity_limit_curve(const IsotopeParams& iso,
                                      const std::vector<double>& T_grid,
                                      const AverageKernel& kernel);

// 100..800 uK in `n` linear steps.
std::vector<double> default_temperature_grid(std::size_t n = 36);

}  // namespace metacoll

#endif
