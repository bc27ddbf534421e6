#ifndef METACOLL_CONFIG_HPP
#define METACOLL_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "metacoll/core.hpp"
#include "metacoll/dsmc.hpp"
#include "metacoll/inference.hpp"
#include "metacoll/thermal.hpp"

namespace metacoll {

struct DsmcSettings {
  std::size_t particles = 20000;
  double N = 2e8;
  double T_x = 600e-6;  // K
  double T_r = 400e-6;  // K
  double duration = 0.2;        // s
  double dt = 0.0;              // s; 0 -> automatic
  double sample_interval = 0.0; // s; 0 -> every 50 steps
  double cells_per_width = 4.0;
  double extent_widths = 5.0;
  std::string cross_section = "constant";  // constant | inverse_velocity | curve
  double sigma0 = 1e-15;                   // m^2
  double a = -180.0 * constants::a0;       // m, for "curve"
  bool collisions = true;
  double beta = 0.0;                       // m^3/s
  std::vector<double> density_scan;        // multipliers of N; runs last duration / m
};

// Synthetic decay series (closed-loop checks from the command line).
struct SynthSettings {
  double alpha = 1.0 / 10.3;     // 1/s
  double beta = 6.5e-18;         // m^3/s
  double N0 = 5e8;
  double T_x = 600e-6;           // K
  double T_r = 400e-6;           // K
  double duration = 20.0;        // s
  std::size_t points = 40;
  double noise = 0.03;           // relative, on N and T
  bool heating = true;           // intrinsic two-body heating
};

struct Table1Column {
  std::string label;                  // "20" or "22"
  std::string sigma_rel_data;         // path, T_uK,sigma_rel_m2,unc_m2
  std::optional<double> a;            // m; refit from sigma_rel_data when absent
  double a_err_low = 0.0, a_err_high = 0.0;
  std::optional<Uncertain> beta;      // m^3/s
  std::string decay_data;             // series CSV; used when beta is absent
  Uncertain beta_unpol;               // m^3/s
};

struct PipelineConfig {
  std::string source;
  std::uint64_t seed = 1;

  IsotopeParams isotope = IsotopeParams::neon20();
  double C6_au = default_C6_au;
  TrapConfig trap;
  AverageKernel kernel = AverageKernel::relaxation();
  CurveSettings curve;

  std::vector<double> a_values;  // m, curves for sigma-rel
  std::vector<double> T_grid = default_temperature_grid();
  std::vector<double> a_grid = default_a_grid();

  std::string series_data;     // fit-decay, fit-heating, fit-gamma
  std::string sigma_rel_data;  // fit-a
  DensitySystematic density_systematic;

  DsmcSettings dsmc;
  SynthSettings synth;
  std::vector<Table1Column> table1;
};

// INI-style text: "key = value" lines in [sections]; '#' or ';' comments.
// Physical quantities carry their unit in the key (T_min_uK, C6_au, ...).
// Relative paths resolve against `base_dir`. Throws ErrorCode::config with
// "[section] key: problem" messages.
PipelineConfig parse_config(std::istream& in, const std::string& source,
                            const std::string& base_dir = ".");
PipelineConfig load_config(const std::string& path);

// Checks that every referenced input file exists.
void validate_inputs(const PipelineConfig& cfg);

}  // namespace metacoll

#endif
