#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mfvar/gibbs.hpp"

namespace mfvar {

/// Posterior draws persisted as flat little-endian double matrices (one file
/// per parameter group per chain) plus a JSON manifest carrying dimensions,
/// seeds and the config hash.
struct StoreMeta {
  int M = 0;
  int M_L = 0;
  int P = 0;
  int T = 0;
  bool include_intercept = false;
  std::vector<std::uint64_t> seeds;
  std::string config_hash;
  std::vector<std::string> names;
  std::vector<WeekStamp> stamps;
  std::vector<int> draws_per_chain;
};

void save_store(const std::filesystem::path& dir, const StoreMeta& meta,
                const std::vector<std::vector<PosteriorDraw>>& chains);

struct LoadedStore {
  StoreMeta meta;
  std::vector<std::vector<PosteriorDraw>> chains;

  std::vector<PosteriorDraw> merged() const;
};
LoadedStore load_store(const std::filesystem::path& dir);

/// FNV-1a 64-bit over a string, hex-encoded. Used for config hashes.
std::string fnv1a_hex(const std::string& text);

}  // namespace mfvar
