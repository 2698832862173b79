#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mfvar/coefficients.hpp"
#include "mfvar/gibbs.hpp"
#include "mfvar/structural.hpp"

namespace mfvar {

/// Batch-run configuration. Every constant the model leaves open surfaces
/// here with its default; see README for the file format.
struct RunConfig {
  std::filesystem::path manifest;  // panel manifest (resolved against config dir)
  VarPrior prior;
  ChainConfig chain;
  int n_chains = 2;
  std::vector<std::uint64_t> seeds;  // optional explicit per-chain seeds

  std::string shock_variable = "policy";
  int irf_horizons = 48;
  std::string irf_scale = "mean_vol";          // or "at_date"
  std::optional<WeekStamp> irf_scale_date;

  std::vector<std::string> scenario_shocks;    // defaults to the policy shock
  WeekStamp scenario_start{2020, 9};
  std::optional<WeekStamp> scenario_end;       // defaults to sample end

  std::vector<double> quantiles{0.05, 0.5, 0.95};
  double rhat_threshold = 1.1;

  std::uint64_t chain_seed(int chain_index) const;
};

RunConfig load_run_config(const std::filesystem::path& path);

/// Hash of the estimation-relevant part of the config (data reference,
/// model, priors, chain settings). Output artifacts carry it; mixing a store
/// with a different estimation config is refused.
std::string config_hash(const RunConfig& config);

}  // namespace mfvar
