#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

namespace mfvar {

/// Batch command implementations behind the CLI. Each returns a process
/// exit code (0 success, 2 diagnostics failure) and throws on errors, which
/// the CLI maps to exit code 1. All outputs are deterministic functions of
/// (config file, input files, seed).
int cmd_ingest(const std::filesystem::path& config_path,
               const std::filesystem::path& out_dir);

int cmd_estimate(const std::filesystem::path& config_path,
                 const std::filesystem::path& out_dir, int jobs = 1,
                 std::optional<std::uint64_t> seed_override = std::nullopt);

int cmd_irf(const std::filesystem::path& config_path,
            const std::filesystem::path& store_dir,
            const std::filesystem::path& out_dir);

int cmd_counterfactual(const std::filesystem::path& config_path,
                       const std::filesystem::path& store_dir,
                       const std::filesystem::path& out_dir);

int cmd_simulate(const std::filesystem::path& spec_path,
                 const std::filesystem::path& out_dir,
                 std::optional<std::uint64_t> seed_override = std::nullopt);

int cmd_diagnostics(const std::filesystem::path& store_dir,
                    const std::filesystem::path& out_dir,
                    double rhat_threshold = 1.1);

}  // namespace mfvar
