#ifndef METACOLL_DSMC_HPP
#define METACOLL_DSMC_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "metacoll/core.hpp"
#include "metacoll/scattering.hpp"

namespace metacoll::dsmc {

// Elastic cross section seen by the collision sampler.
struct CrossSectionSource {
  enum class Kind {
    constant,          // sigma0
    inverse_velocity,  // sigma0 * v_ref / v
    curve,             // tabulated sigma_el(v)
  };

  Kind kind = Kind::constant;
  double sigma0 = 0.0;  // m^2
  double v_ref = 1.0;   // m/s
  std::shared_ptr<const CrossSectionCurve> curve;

  static CrossSectionSource constant(double sigma0);
  static CrossSectionSource inverse_velocity(double sigma0, double v_ref);
  static CrossSectionSource tabulated(CrossSectionCurve curve);

  double operator()(double v) const;
};

struct SimConfig {
  std::size_t particles = 20000;
  double weight = 0.0;           // real atoms per test particle; 0 -> N / particles
  double cells_per_width = 4.0;  // cell edge = width / cells_per_width
  double extent_widths = 5.0;    // grid spans +-extent_widths rms widths
  double dt = 0.0;               // s; 0 -> largest admissible step
  double sample_interval = 0.0;  // s; 0 -> every 50 steps
  TrapConfig trap;
  IsotopeParams isotope = IsotopeParams::neon20();
  CrossSectionSource cross_section;
  bool collisions = true;
  double beta = 0.0;  // m^3/s, two-body loss
  std::uint64_t seed = 1;
};

struct SimTrace {
  std::vector<double> t;           // s
  std::vector<double> N;           // real atoms
  std::vector<double> T_x;         // K, from the in-trap width
  std::vector<double> T_r;         // K
  std::vector<double> A;           // sigma_x / sigma_r
  std::vector<double> nbar;        // m^-3, from the measured widths
  std::vector<double> energy;      // J, total over test particles
  std::vector<std::uint64_t> collisions;  // cumulative test-particle collisions
  std::vector<std::uint64_t> losses;      // cumulative test particles lost

  std::size_t particles0 = 0;
  double weight = 0.0;
  double dt = 0.0;
  TrapConfig trap;
  IsotopeParams isotope;
};

// Largest admissible step: min(0.02 / omega_r, tau / 10), where tau is the
// mean free time at the peak density of `initial`.
double max_time_step(const SimConfig& config, const ThermalState& initial);

// Throws ErrorCode::domain (time step or cell resolution) before running.
void validate(const SimConfig& config, const ThermalState& initial);

SimTrace run(const SimConfig& config, const ThermalState& initial,
             double duration);

struct GammaMeasurement {
  double gamma_rel = 0.0;  // 1/s, in rescaled time t* (initial nbar vbar)
  double A_eq = 0.0;
  double A0 = 0.0;
  double rms_residual = 0.0;
  double r_squared = 0.0;
  double e_foldings = 0.0;
  bool under_relaxed = false;  // fewer than 2 e-foldings covered
};

// Fits A(t*) = A_eq + (A0 - A_eq) exp(-gamma t*) by variable projection.
GammaMeasurement measure_gamma_rel(const SimTrace& trace);
GammaMeasurement measure_gamma_rel(const std::vector<double>& t_star,
                                   const std::vector<double>& A);

// Mean rescaled time t* of the trace.
std::vector<double> rescaled_time(const SimTrace& trace);

// Export as the measurement-series schema; uncertainties are the sampling
// errors of the width estimates.
MeasurementSeries to_series(const SimTrace& trace);

void write_trace_csv(std::ostream& out, const SimTrace& trace);

}  // namespace metacoll::dsmc

#endif
