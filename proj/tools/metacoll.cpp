// Command-line front end; talks to the library through the C interface only.
#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "metacoll/metacoll.h"

namespace {

int report(int status) {
  if (status != MCL_OK)
    std::fprintf(stderr, "error[%s]: %s\n", mcl_status_name(status), mcl_last_error());
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collision analysis of spin-polarized metastable neon"};
  app.set_version_flag("--version", std::string(mcl_version()));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  auto* config_opt = app.add_option("--config", config_path, "INI configuration file")
                         ->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory");
  auto* seed_opt = app.add_option("--seed", seed, "Override the configured seed");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"sigma-rel", "Relaxation cross-section curves and the unitarity limit"},
      {"fit-decay", "Fit alpha and beta to a decay series"},
      {"fit-heating", "Fit beta from two-body heating"},
      {"fit-gamma", "Fit the cross-dimensional relaxation rate"},
      {"fit-a", "Scattering length from sigma_rel data"},
      {"dsmc", "Run the particle simulation"},
      {"table1", "Summary table of collision parameters"},
      {"synth-decay", "Write a synthetic decay series"}};
  // Global options may also follow the subcommand.
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : MCL_INVALID_ARGUMENT;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  mcl_config* cfg = nullptr;
  int status = config_opt->count() ? mcl_config_load(config_path.c_str(), &cfg)
                                   : mcl_config_parse("", ".", &cfg);
  if (status != MCL_OK) return report(status);
  if (seed_opt->count()) mcl_config_set_seed(cfg, seed);

  std::vector<char> summary(1 << 16);
  status = mcl_run_command(cfg, command.c_str(), out_dir.c_str(), summary.data(), summary.size());
  mcl_config_free(cfg);
  if (status != MCL_OK) return report(status);
  std::fputs(summary.data(), stdout);
  return 0;
}
