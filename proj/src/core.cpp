#include "metacoll/core.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "metacoll/csv.hpp"

namespace metacoll {

using constants::k_B;
using constants::pi;

IsotopeParams::IsotopeParams(double mass_kg, double c6, int mass_number_,
                             std::string label_, bool bosonic_)
    : mass(mass_kg),
      C6(c6),
      mass_number(mass_number_),
      label(std::move(label_)),
      bosonic(bosonic_) {
  require(mass > 0.0 && std::isfinite(mass), "isotope mass must be > 0");
  require(C6 > 0.0 && std::isfinite(C6), "C6 must be > 0");
  if (mass_number > 0) {
    const double nominal = mass_number * constants::amu;
    require(std::abs(mass - nominal) <= 1e-3 * nominal,
            "isotope mass deviates from mass number by more than 0.1%");
  }
}

IsotopeParams IsotopeParams::neon20(double c6_au) {
  return {19.9924401762 * constants::amu, C6_from_au(c6_au), 20, "20Ne"};
}

IsotopeParams IsotopeParams::neon22(double c6_au) {
  return {21.991385114 * constants::amu, C6_from_au(c6_au), 22, "22Ne"};
}

IsotopeParams IsotopeParams::by_label(const std::string& label,
                                      double c6_au) {
  if (label == "20" || label == "Ne20" || label == "20Ne" || label == "ne20")
    return neon20(c6_au);
  if (label == "22" || label == "Ne22" || label == "22Ne" || label == "ne22")
    return neon22(c6_au);
  fail(ErrorCode::config, "unknown isotope '" + label + "'");
}

TrapConfig::TrapConfig(double wx, double wr) : omega_x(wx), omega_r(wr) {
  require(wx > 0.0 && wr > 0.0, "trap frequencies must be > 0");
}

ThermalState::ThermalState(double N, double T_x, double T_r, TrapConfig trap,
                           IsotopeParams isotope)
    : N_(N), T_x_(T_x), T_r_(T_r), trap_(trap), isotope_(std::move(isotope)) {
  require(N >= 0.0 && std::isfinite(N), "particle number must be >= 0");
  require(T_x > 0.0 && T_r > 0.0 && std::isfinite(T_x) && std::isfinite(T_r),
          "temperatures must be > 0");
}

double ThermalState::width_x() const {
  return std::sqrt(k_B * T_x_ / isotope_.mass) / trap_.omega_x;
}

double ThermalState::width_r() const {
  return std::sqrt(k_B * T_r_ / isotope_.mass) / trap_.omega_r;
}

double ThermalState::effective_volume() const {
  const double sr = width_r();
  return std::pow(4.0 * pi, 1.5) * width_x() * sr * sr;
}

ThermalState ThermalState::with_particles(double N) const {
  return {N, T_x_, T_r_, trap_, isotope_};
}

ThermalState ThermalState::with_temperatures(double T_x, double T_r) const {
  return {N_, T_x, T_r, trap_, isotope_};
}

double mean_density(const ThermalState& state) {
  return state.N() / state.effective_volume();
}

double mean_temperature(double T_x, double T_r) {
  return (T_x + 2.0 * T_r) / 3.0;
}

double mean_temperature(const ThermalState& state) {
  return mean_temperature(state.T_x(), state.T_r());
}

double mean_relative_velocity(double T_mean, double mass) {
  return std::sqrt(16.0 * k_B * T_mean / (pi * mass));
}

double mean_relative_velocity(const ThermalState& state) {
  return mean_relative_velocity(mean_temperature(state),
                                state.isotope().mass);
}

double aspect_ratio(const ThermalState& state) {
  return state.width_x() / state.width_r();
}

MeasurementSeries::MeasurementSeries(std::vector<Measurement> records) {
  records_.reserve(records.size());
  for (auto& r : records) push_back(std::move(r));
}

void MeasurementSeries::push_back(Measurement m) {
  require(std::isfinite(m.t), "measurement time must be finite");
  require(m.sigma_N >= 0.0 && m.sigma_Tx >= 0.0 && m.sigma_Tr >= 0.0,
          "uncertainties must be >= 0");
  if (!records_.empty())
    require(m.t > records_.back().t,
            "measurement times must be strictly increasing");
  records_.push_back(std::move(m));
}

std::vector<double> MeasurementSeries::times() const {
  std::vector<double> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(r.t);
  return out;
}

std::vector<double> MeasurementSeries::mean_densities() const {
  std::vector<double> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(mean_density(r.state));
  return out;
}

std::vector<double> MeasurementSeries::mean_temperatures() const {
  std::vector<double> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(mean_temperature(r.state));
  return out;
}

MeasurementSeries read_series_csv(std::istream& in, const IsotopeParams& iso,
                                  const TrapConfig& trap) {
  auto table = CsvTable::read(in, "series");
  const auto ct = table.require_column("t_s");
  const auto cN = table.require_column("N");
  const auto cTx = table.require_column("Tx_K");
  const auto cTr = table.require_column("Tr_K");
  const auto csN = table.column("sigma_N");
  const auto csTx = table.column("sigma_Tx");
  const auto csTr = table.column("sigma_Tr");

  MeasurementSeries series;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    const double N = table.at(i, cN);
    const double Tx = table.at(i, cTx);
    const double Tr = table.at(i, cTr);
    try {
      Measurement m{
          table.at(i, ct), ThermalState(N, Tx, Tr, trap, iso),
          csN ? table.at(i, *csN) : default_relative_uncertainty * N,
          csTx ? table.at(i, *csTx) : default_relative_uncertainty * Tx,
          csTr ? table.at(i, *csTr) : default_relative_uncertainty * Tr};
      series.push_back(std::move(m));
    } catch (const Error& e) {
      fail(ErrorCode::parse,
           "series:" + std::to_string(table.line_of(i)) + ": " + e.what());
    }
  }
  return series;
}

MeasurementSeries read_series_csv(const std::string& path,
                                  const IsotopeParams& iso,
                                  const TrapConfig& trap) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open " + path);
  try {
    return read_series_csv(in, iso, trap);
  } catch (const Error& e) {
    fail(e.code(), path + ": " + e.what());
  }
}

void write_series_csv(std::ostream& out, const MeasurementSeries& series) {
  out << "t_s,N,sigma_N,Tx_K,sigma_Tx,Tr_K,sigma_Tr\n";
  for (const auto& m : series) {
    out << format_double(m.t) << ',' << format_double(m.state.N()) << ','
        << format_double(m.sigma_N) << ',' << format_double(m.state.T_x())
        << ',' << format_double(m.sigma_Tx) << ','
        << format_double(m.state.T_r()) << ',' << format_double(m.sigma_Tr)
        << '\n';
  }
}

}  // namespace metacoll
