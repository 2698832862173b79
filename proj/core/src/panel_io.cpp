#include "mfvar/panel_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mfvar {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& cell, const std::filesystem::path& path,
                  int line_no) {
  std::string c = trim(cell);
  if (c.empty() || c == "." || c == "NA" || c == "NaN") return kMissing;
  try {
    size_t pos = 0;
    double v = std::stod(c, &pos);
    if (pos != c.size()) throw std::invalid_argument(c);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                             ": cannot parse value '" + cell + "'");
  }
}

/// Lossless, locale-independent double formatting for data files.
std::string format_value(double v) {
  if (is_missing(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  return in;
}

}  // namespace

std::vector<std::pair<Date, double>> read_series_csv(
    const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  std::string line;
  std::vector<std::pair<Date, double>> out;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty()) continue;
    auto cells = split_csv_line(t);
    if (line_no == 1) {
      // header row expected: date,value
      if (cells.size() < 2 || trim(cells[0]) != "date")
        throw std::runtime_error(path.string() +
                                 ": expected header 'date,value'");
      continue;
    }
    if (cells.size() != 2)
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected two fields");
    out.emplace_back(parse_iso_date(trim(cells[0])),
                     parse_cell(cells[1], path, line_no));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

void write_panel_csv(const MixedPanel& panel,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << "year,week";
  for (const auto& n : panel.names) out << "," << n;
  out << "\n";
  for (int t = 0; t < panel.rows(); ++t) {
    out << panel.stamps[t].year << "," << panel.stamps[t].week;
    for (int j = 0; j < panel.cols(); ++j)
      out << "," << format_value(panel.values(t, j));
    out << "\n";
  }
}

RawPanel read_panel_csv(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  std::string line;
  RawPanel raw;
  std::vector<std::vector<double>> rows;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty()) continue;
    auto cells = split_csv_line(t);
    if (line_no == 1) {
      if (cells.size() < 3 || trim(cells[0]) != "year" || trim(cells[1]) != "week")
        throw std::runtime_error(path.string() +
                                 ": expected header 'year,week,...'");
      for (size_t j = 2; j < cells.size(); ++j)
        raw.names.push_back(trim(cells[j]));
      continue;
    }
    if (cells.size() != raw.names.size() + 2)
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": field count mismatch");
    WeekStamp s{static_cast<int>(parse_cell(cells[0], path, line_no)),
                static_cast<int>(parse_cell(cells[1], path, line_no))};
    if (!s.valid())
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": invalid week stamp");
    raw.stamps.push_back(s);
    std::vector<double> row;
    for (size_t j = 2; j < cells.size(); ++j)
      row.push_back(parse_cell(cells[j], path, line_no));
    rows.push_back(std::move(row));
  }
  raw.values.resize(static_cast<int>(rows.size()),
                    static_cast<int>(raw.names.size()));
  for (size_t t = 0; t < rows.size(); ++t)
    for (size_t j = 0; j < rows[t].size(); ++j)
      raw.values(static_cast<int>(t), static_cast<int>(j)) = rows[t][j];
  return raw;
}

namespace {

Frequency parse_frequency(const std::string& s) {
  if (s == "daily") return Frequency::daily;
  if (s == "weekly") return Frequency::weekly;
  if (s == "monthly") return Frequency::monthly;
  throw std::runtime_error("manifest: unknown frequency '" + s + "'");
}

Role parse_role(const std::string& s) {
  if (s == "monthly_block") return Role::monthly_block;
  if (s == "policy") return Role::policy;
  if (s == "weekly_block") return Role::weekly_block;
  throw std::runtime_error("manifest: unknown role '" + s + "'");
}

void parse_transform(const std::string& s, SeriesSpec& spec) {
  if (s == "none") {
    spec.transform = Transform::none;
  } else if (s == "yoy_log") {
    spec.transform = Transform::yoy;
    spec.yoy_mode = YoyMode::log_difference;
  } else if (s == "yoy_arith") {
    spec.transform = Transform::yoy;
    spec.yoy_mode = YoyMode::arithmetic_difference;
  } else {
    throw std::runtime_error("manifest: unknown transform '" + s + "'");
  }
}

}  // namespace

PanelManifest load_manifest(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error("manifest " + path.string() + ": " + e.what());
  }
  PanelManifest m;
  if (j.contains("panel_csv")) {
    m.panel_csv = j.at("panel_csv").get<std::string>();
    if (j.contains("monthly"))
      m.monthly = j.at("monthly").get<std::vector<std::string>>();
    m.policy = j.at("policy").get<std::string>();
    return m;
  }
  if (!j.contains("series"))
    throw std::runtime_error("manifest " + path.string() +
                             ": needs 'series' or 'panel_csv'");
  for (const auto& e : j.at("series")) {
    ManifestEntry entry;
    entry.spec.name = e.at("name").get<std::string>();
    entry.file = e.at("file").get<std::string>();
    entry.spec.frequency = parse_frequency(e.at("frequency").get<std::string>());
    entry.spec.role = parse_role(e.at("role").get<std::string>());
    parse_transform(e.value("transform", std::string("none")), entry.spec);
    m.series.push_back(std::move(entry));
  }
  return m;
}

namespace {

MixedPanel panel_from_raw(const RawPanel& raw, const PanelManifest& m) {
  std::vector<SeriesSpec> specs;
  std::vector<StampedSeries> data;
  for (size_t j = 0; j < raw.names.size(); ++j) {
    SeriesSpec spec;
    spec.name = raw.names[j];
    bool monthly = std::find(m.monthly.begin(), m.monthly.end(), spec.name) !=
                   m.monthly.end();
    if (monthly) {
      spec.frequency = Frequency::monthly;
      spec.role = Role::monthly_block;
    } else {
      spec.frequency = Frequency::weekly;
      spec.role = spec.name == m.policy ? Role::policy : Role::weekly_block;
    }
    StampedSeries s;
    for (size_t t = 0; t < raw.stamps.size(); ++t)
      if (!is_missing(raw.values(static_cast<int>(t), static_cast<int>(j))))
        s.emplace_back(raw.stamps[t],
                       raw.values(static_cast<int>(t), static_cast<int>(j)));
    specs.push_back(std::move(spec));
    data.push_back(std::move(s));
  }
  return assemble_panel(specs, data);
}

}  // namespace

MixedPanel load_panel(const std::filesystem::path& manifest_path) {
  PanelManifest m = load_manifest(manifest_path);
  auto base = manifest_path.parent_path();
  if (m.panel_csv) {
    auto p = std::filesystem::path(*m.panel_csv);
    if (p.is_relative()) p = base / p;
    return panel_from_raw(read_panel_csv(p), m);
  }
  std::vector<SeriesSpec> specs;
  std::vector<StampedSeries> data;
  for (const auto& entry : m.series) {
    auto p = std::filesystem::path(entry.file);
    if (p.is_relative()) p = base / p;
    auto raw = read_series_csv(p);
    auto stamped = stamp_series(raw, entry.spec.frequency, entry.spec.name);
    if (entry.spec.transform == Transform::yoy)
      stamped = yoy_transform(stamped, entry.spec.yoy_mode);
    specs.push_back(entry.spec);
    data.push_back(std::move(stamped));
  }
  return assemble_panel(specs, data);
}

}  // namespace mfvar
