#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace mfvar {

/// One subplot in a small-multiples grid: median line, shaded band between
/// lo and hi, optional second line (dashed), horizontal zero line in red.
struct SvgPanel {
  std::string title;
  std::vector<double> x;
  std::vector<double> median;
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<double> second;  // optional dashed overlay (e.g. actual path)
};

void write_small_multiples(const std::filesystem::path& path,
                           const std::vector<SvgPanel>& panels, int columns = 3);

}  // namespace mfvar
