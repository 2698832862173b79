#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mfvar/panel.hpp"

namespace mfvar {

/// One `date,value` CSV file; empty value field means missing.
std::vector<std::pair<Date, double>> read_series_csv(
    const std::filesystem::path& path);

/// Writes `year,week,<var1>,...` with empty cells for missing values.
void write_panel_csv(const MixedPanel& panel, const std::filesystem::path& path);

/// Reads a panel CSV as written by write_panel_csv. Roles are not stored in
/// the CSV; the caller assigns them (see load_panel below).
struct RawPanel {
  Eigen::MatrixXd values;
  std::vector<WeekStamp> stamps;
  std::vector<std::string> names;
};
RawPanel read_panel_csv(const std::filesystem::path& path);

/// Panel manifest (JSON). Two layouts:
///  - per-series: {"series":[{"name","file","frequency","transform","role"},...]}
///    with "transform" one of "none", "yoy_log", "yoy_arith";
///  - pre-assembled: {"panel_csv": "...", "monthly": [...], "policy": "..."}.
struct ManifestEntry {
  SeriesSpec spec;
  std::string file;
};
struct PanelManifest {
  std::vector<ManifestEntry> series;            // per-series layout
  std::optional<std::string> panel_csv;         // pre-assembled layout
  std::vector<std::string> monthly;
  std::string policy;
};

PanelManifest load_manifest(const std::filesystem::path& path);

/// Full ingestion: manifest -> stamped/transformed series -> ordered panel.
/// Relative file references resolve against the manifest's directory.
MixedPanel load_panel(const std::filesystem::path& manifest_path);

}  // namespace mfvar
