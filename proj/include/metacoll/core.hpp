#ifndef METACOLL_CORE_HPP
#define METACOLL_CORE_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "metacoll/constants.hpp"
#include "metacoll/error.hpp"

namespace metacoll {

// Default van-der-Waals coefficient for metastable neon in atomic units.
// Chosen so that the l=2 centrifugal barrier of mass-20 atoms sits at
// k_B x 5.6 mK; used for both isotopes.
inline constexpr double default_C6_au = 2100.0;

inline constexpr double C6_from_au(double c6_au) {
  return c6_au * constants::hartree_a0_6;
}
inline constexpr double C6_to_au(double c6_si) {
  return c6_si / constants::hartree_a0_6;
}

struct IsotopeParams {
  double mass = 0.0;  // kg
  double C6 = 0.0;    // J m^6
  int mass_number = 0;
  std::string label;
  bool bosonic = true;

  IsotopeParams() = default;
  IsotopeParams(double mass_kg, double c6, int mass_number, std::string label,
                bool bosonic = true);

  double reduced_mass() const { return 0.5 * mass; }

  static IsotopeParams neon20(double c6_au = default_C6_au);
  static IsotopeParams neon22(double c6_au = default_C6_au);
  // Looks up "20"/"22"/"Ne20"/"22Ne" style labels.
  static IsotopeParams by_label(const std::string& label,
                                double c6_au = default_C6_au);
};

struct TrapConfig {
  double omega_x = 2.0 * constants::pi * 80.0;   // rad/s, axial
  double omega_r = 2.0 * constants::pi * 186.0;  // rad/s, radial

  TrapConfig() = default;
  TrapConfig(double wx, double wr);
};

// Snapshot of a trapped cloud in per-axis thermal equilibrium.
class ThermalState {
 public:
  ThermalState(double N, double T_x, double T_r, TrapConfig trap,
               IsotopeParams isotope);

  double N() const { return N_; }
  double T_x() const { return T_x_; }
  double T_r() const { return T_r_; }
  const TrapConfig& trap() const { return trap_; }
  const IsotopeParams& isotope() const { return isotope_; }

  // In-trap rms widths, omega * sigma = sqrt(k_B T / m).
  double width_x() const;
  double width_r() const;
  // (4 pi)^{3/2} sigma_x sigma_r^2
  double effective_volume() const;

  ThermalState with_particles(double N) const;
  ThermalState with_temperatures(double T_x, double T_r) const;

 private:
  double N_;
  double T_x_;
  double T_r_;
  TrapConfig trap_;
  IsotopeParams isotope_;
};

double mean_density(const ThermalState& state);
double mean_temperature(const ThermalState& state);
double mean_temperature(double T_x, double T_r);
double mean_relative_velocity(const ThermalState& state);
double mean_relative_velocity(double T_mean, double mass);
double aspect_ratio(const ThermalState& state);

struct Measurement {
  double t = 0.0;  // s
  ThermalState state;
  double sigma_N = 0.0;
  double sigma_Tx = 0.0;
  double sigma_Tr = 0.0;
};

// Time-ordered records; t strictly increasing, uncertainties >= 0.
class MeasurementSeries {
 public:
  MeasurementSeries() = default;
  explicit MeasurementSeries(std::vector<Measurement> records);

  void push_back(Measurement m);
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const Measurement& operator[](std::size_t i) const { return records_[i]; }
  std::span<const Measurement> records() const { return records_; }
  auto begin() const { return records_.begin(); }
  auto end() const { return records_.end(); }

  std::vector<double> times() const;
  std::vector<double> mean_densities() const;
  std::vector<double> mean_temperatures() const;

 private:
  std::vector<Measurement> records_;
};

// Relative uncertainty assigned when the CSV omits an uncertainty column.
inline constexpr double default_relative_uncertainty = 0.03;

// Reads the series CSV schema: t_s,N,sigma_N,Tx_K,sigma_Tx,Tr_K,sigma_Tr.
// Uncertainty columns are optional.
MeasurementSeries read_series_csv(std::istream& in, const IsotopeParams& iso,
                                  const TrapConfig& trap);
MeasurementSeries read_series_csv(const std::string& path,
                                  const IsotopeParams& iso,
                                  const TrapConfig& trap);
void write_series_csv(std::ostream& out, const MeasurementSeries& series);

}  // namespace metacoll

#endif
