// Batch frontend: config -> ingestion -> estimation -> structural outputs.
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mfvar/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"mfvar - mixed-frequency Bayesian VAR with common stochastic "
               "volatility"};
  app.require_subcommand(1);

  std::string config_path, spec_path, store_dir, out_dir = "out";
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  double rhat_max = 1.1;

  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", [&seed](const CLI::results_t& r) {
      seed = std::stoull(r[0]);
      return true;
    }, "Override the config seed");
  };

  auto* ingest = app.add_subcommand("ingest", "Assemble the panel CSV");
  ingest->add_option("--config", config_path, "Run config JSON")->required();
  ingest->add_option("--out", out_dir, "Output directory");

  auto* estimate = app.add_subcommand("estimate", "Run the Gibbs sampler");
  estimate->add_option("--config", config_path, "Run config JSON")->required();
  estimate->add_option("--out", out_dir, "Output directory");
  estimate->add_option("--jobs", jobs, "Parallel chains");
  add_seed(estimate);

  auto* irf = app.add_subcommand("irf", "Impulse response quantiles and plot");
  irf->add_option("--config", config_path, "Run config JSON")->required();
  irf->add_option("--store", store_dir, "Draw store directory")->required();
  irf->add_option("--out", out_dir, "Output directory");

  auto* cf = app.add_subcommand("counterfactual",
                                "Zero-shock scenario bands and plots");
  cf->add_option("--config", config_path, "Run config JSON")->required();
  cf->add_option("--store", store_dir, "Draw store directory")->required();
  cf->add_option("--out", out_dir, "Output directory");

  auto* sim = app.add_subcommand("simulate", "Generate synthetic data");
  sim->add_option("--spec", spec_path, "DGP spec JSON")->required();
  sim->add_option("--out", out_dir, "Output directory");
  add_seed(sim);

  auto* diag = app.add_subcommand("diagnostics", "ESS and split R-hat report");
  diag->add_option("--store", store_dir, "Draw store directory")->required();
  diag->add_option("--out", out_dir, "Output directory");
  diag->add_option("--rhat-max", rhat_max, "Flag threshold");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) return mfvar::cmd_ingest(config_path, out_dir);
    if (estimate->parsed())
      return mfvar::cmd_estimate(config_path, out_dir, jobs, seed);
    if (irf->parsed()) return mfvar::cmd_irf(config_path, store_dir, out_dir);
    if (cf->parsed())
      return mfvar::cmd_counterfactual(config_path, store_dir, out_dir);
    if (sim->parsed()) return mfvar::cmd_simulate(spec_path, out_dir, seed);
    if (diag->parsed())
      return mfvar::cmd_diagnostics(store_dir, out_dir, rhat_max);
  } catch (const std::exception& e) {
    std::cerr << "mfvar: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
