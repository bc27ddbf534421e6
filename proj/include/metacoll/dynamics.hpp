#ifndef METACOLL_DYNAMICS_HPP
#define METACOLL_DYNAMICS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "metacoll/core.hpp"

namespace metacoll {

// A(t) = A_eq + (A0 - A_eq) exp(-gamma_rel t)
struct RelaxationModel {
  double gamma_rel = 0.0;  // 1/s
  double A_eq = 1.0;
  double A0 = 1.0;
};

double evolve_aspect(const RelaxationModel& model, double t);

// t*(t) = int_0^t nbar vbar / (nbar(0) vbar(0)) dt', trapezoidal over the
// samples. Times are taken relative to the first record.
std::vector<double> rescale_time(std::span<const double> t,
                                 std::span<const double> nbar,
                                 std::span<const double> vbar);
std::vector<double> rescale_time(const MeasurementSeries& series);

enum class HeatingLaw {
  none,       // temperatures frozen
  intrinsic,  // dT/T = beta nbar / 4, applied to T_x and T_r alike
  tabulated,  // Tbar(t) from a table, T_x/T_r ratio kept
};

struct DecayModel {
  double alpha = 0.0;  // 1/s
  double beta = 0.0;   // m^3/s
  ThermalState initial;
  HeatingLaw heating = HeatingLaw::none;
  std::vector<double> table_t;      // s, for HeatingLaw::tabulated
  std::vector<double> table_Tmean;  // K
};

struct DecayTrajectory {
  std::vector<double> t;
  std::vector<ThermalState> states;

  std::vector<double> N() const;
  std::vector<double> mean_temperature() const;
  std::vector<double> mean_density() const;
};

// dN/dt = -alpha N - beta N^2 / V_eff(t), adaptive Dormand-Prince with
// relative tolerance 1e-8. The grid must start at 0 and increase.
DecayTrajectory evolve_decay(const DecayModel& model,
                             const std::vector<double>& t_grid);

struct LinearizedPoint {
  double x = 0.0;  // (1/t) int_0^t nbar dt'   [1/m^3]
  double y = 0.0;  // (1/t) ln(N(t)/N(0))      [1/s]
};

// Excludes the first record (t = 0).
std::vector<LinearizedPoint> linearized_observables(
    const MeasurementSeries& series);

// Tbar * beta * nbar / 4, in K/s.
double intrinsic_heating_rate(const ThermalState& state, double beta);

struct NoiseModel {
  double relative_N = 0.03;
  double relative_T = 0.03;
  std::uint64_t seed = 1;
};

// Turns a trajectory into a measured series: Gaussian noise on N and on
// T_x, T_r; the stated uncertainties equal the noise levels.
MeasurementSeries synthesize_series(const DecayTrajectory& traj,
                                    const NoiseModel& noise);
MeasurementSeries exact_series(const DecayTrajectory& traj,
                               double relative_uncertainty = 0.03);

}  // namespace metacoll

#endif
