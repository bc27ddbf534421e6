#ifndef METACOLL_PIPELINE_HPP
#define METACOLL_PIPELINE_HPP

#include <string>
#include <vector>

#include "metacoll/config.hpp"

namespace metacoll {

// Files written (relative to the output directory) and a short text
// summary for the terminal.
struct CommandResult {
  std::vector<std::string> files;
  std::string summary;
};

// sigma-rel, fit-decay, fit-heating, fit-gamma, fit-a, dsmc, table1,
// synth-decay
const std::vector<std::string>& command_names();

// Validates inputs, runs one command and writes its CSV artifacts into
// `out_dir` (created if needed). Outputs carry no timestamps.
CommandResult run_command(const std::string& command, const PipelineConfig& cfg,
                          const std::string& out_dir);

CommandResult cmd_sigma_rel(const PipelineConfig& cfg, const std::string& out_dir);
CommandResult cmd_fit_decay(const PipelineConfig& cfg, const std::string& out_dir);
CommandResult cmd_fit_heating(const PipelineConfig& cfg, const std::string& out_dir);
CommandResult cmd_fit_gamma(const PipelineConfig& cfg, const std::string& out_dir);
CommandResult cmd_fit_a(const PipelineConfig& cfg, const std::string& out_dir);
CommandResult cmd_dsmc(const PipelineConfig& cfg, const std::string& out_dir);
CommandResult cmd_table1(const PipelineConfig& cfg, const std::string& out_dir);
CommandResult cmd_synth_decay(const PipelineConfig& cfg, const std::string& out_dir);

struct Table1Entry {
  std::string quantity;  // sigma_rel_200uK, ..., beta_unpol_over_beta
  std::string unit;
  double value = 0.0;
  double err_low = 0.0;
  double err_high = 0.0;
  std::string text;      // concise notation, "-180(40)", "+150(+80/-50)"
};

struct Table1 {
  std::vector<std::string> columns;             // isotope labels
  std::vector<std::vector<Table1Entry>> cells;  // [column][row]
};

Table1 build_table1(const PipelineConfig& cfg);

// Concise notation with a sign: "+150(+80/-50)", or "-180(40)" when the
// rounded errors agree.
std::string format_signed_asymmetric(double value, double err_low, double err_high);

// DSMC settings to a simulator configuration and its initial state.
dsmc::SimConfig make_sim_config(const PipelineConfig& cfg, double N_multiplier = 1.0);
ThermalState make_initial_state(const PipelineConfig& cfg, double N_multiplier = 1.0);

// Kernel prediction sigma_rel(Tbar) nbar vbar for the configured cross section.
double predicted_gamma_rel(const PipelineConfig& cfg, const dsmc::SimConfig& sim,
                           const ThermalState& initial);

}  // namespace metacoll

#endif
