#include "mfvar/panel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace mfvar {

std::string to_string(Frequency f) {
  switch (f) {
    case Frequency::daily: return "daily";
    case Frequency::weekly: return "weekly";
    case Frequency::monthly: return "monthly";
  }
  return "?";
}

std::string to_string(Role r) {
  switch (r) {
    case Role::monthly_block: return "monthly_block";
    case Role::policy: return "policy";
    case Role::weekly_block: return "weekly_block";
  }
  return "?";
}

StampedSeries weekly_average(
    const std::vector<std::pair<Date, double>>& daily) {
  std::map<WeekStamp, std::pair<double, int>> acc;
  for (const auto& [date, value] : daily) {
    if (is_missing(value)) continue;
    auto& slot = acc[map_date_to_week(date)];
    slot.first += value;
    slot.second += 1;
  }
  StampedSeries out;
  out.reserve(acc.size());
  for (const auto& [stamp, slot] : acc)
    out.emplace_back(stamp, slot.first / slot.second);
  return out;
}

StampedSeries stamp_series(const std::vector<std::pair<Date, double>>& raw,
                           Frequency freq, const std::string& name) {
  if (freq == Frequency::daily || freq == Frequency::weekly)
    return weekly_average(raw);
  // Monthly: one value per month, stamped on the month's last week.
  StampedSeries out;
  std::set<std::pair<int, int>> seen;
  for (const auto& [date, value] : raw) {
    if (is_missing(value)) continue;
    if (!seen.insert({date.year, date.month}).second)
      throw std::invalid_argument("stamp_series: series '" + name +
                                  "' has more than one observation in " +
                                  std::to_string(date.year) + "-" +
                                  std::to_string(date.month));
    out.emplace_back(WeekStamp{date.year, 4 * date.month}, value);
  }
  std::sort(out.begin(), out.end());
  return out;
}

StampedSeries yoy_transform(const StampedSeries& series, YoyMode mode) {
  std::map<WeekStamp, double> lookup(series.begin(), series.end());
  StampedSeries out;
  for (const auto& [stamp, value] : series) {
    auto prev = lookup.find(WeekStamp{stamp.year - 1, stamp.week});
    if (prev == lookup.end()) continue;
    if (mode == YoyMode::log_difference) {
      if (value <= 0.0 || prev->second <= 0.0)
        throw std::invalid_argument(
            "yoy_transform: log difference requires positive values (at " +
            to_string(stamp) + ")");
      out.emplace_back(stamp, 100.0 * (std::log(value) - std::log(prev->second)));
    } else {
      out.emplace_back(stamp, value - prev->second);
    }
  }
  return out;
}

void MixedPanel::validate() const {
  const int T = rows(), M = cols();
  if (static_cast<int>(stamps.size()) != T)
    throw std::runtime_error("MixedPanel: stamp count does not match rows");
  if (static_cast<int>(names.size()) != M || n_monthly + n_weekly != M)
    throw std::runtime_error("MixedPanel: column bookkeeping inconsistent");
  for (int t = 1; t < T; ++t)
    if (weeks_between(stamps[t - 1], stamps[t]) != 1)
      throw std::runtime_error("MixedPanel: stamps not contiguous at row " +
                               std::to_string(t));
  for (int j = 0; j < n_monthly; ++j)
    for (int t = 0; t < T; ++t)
      if (!is_missing(values(t, j)) && !stamps[t].is_month_end())
        throw std::runtime_error("MixedPanel: monthly column '" + names[j] +
                                 "' observed off month-end at " +
                                 to_string(stamps[t]));
}

MixedPanel assemble_panel(const std::vector<SeriesSpec>& specs,
                          const std::vector<StampedSeries>& data) {
  if (specs.size() != data.size())
    throw std::invalid_argument("assemble_panel: specs and data size mismatch");
  if (specs.empty()) throw std::invalid_argument("assemble_panel: no series");

  std::set<std::string> names;
  for (const auto& s : specs)
    if (!names.insert(s.name).second)
      throw std::invalid_argument("assemble_panel: duplicate series name '" +
                                  s.name + "'");

  // Model ordering: monthly block, then the policy series, then weeklies.
  std::vector<int> order;
  for (size_t i = 0; i < specs.size(); ++i)
    if (specs[i].role == Role::monthly_block) order.push_back(static_cast<int>(i));
  int n_monthly = static_cast<int>(order.size());
  int n_policy = 0;
  for (size_t i = 0; i < specs.size(); ++i)
    if (specs[i].role == Role::policy) {
      order.push_back(static_cast<int>(i));
      ++n_policy;
    }
  if (n_policy != 1)
    throw std::invalid_argument("assemble_panel: exactly one policy series "
                                "required, found " + std::to_string(n_policy));
  for (size_t i = 0; i < specs.size(); ++i)
    if (specs[i].role == Role::weekly_block) order.push_back(static_cast<int>(i));

  for (int idx : order) {
    const auto& s = specs[idx];
    if (s.role == Role::monthly_block && s.frequency != Frequency::monthly)
      throw std::invalid_argument("assemble_panel: monthly_block series '" +
                                  s.name + "' must have monthly frequency");
    if (s.role != Role::monthly_block && s.frequency == Frequency::monthly)
      throw std::invalid_argument("assemble_panel: series '" + s.name +
                                  "' resolves to monthly data but has role " +
                                  to_string(s.role));
    if (data[idx].empty())
      throw std::invalid_argument("assemble_panel: series '" + s.name +
                                  "' has no observations");
  }

  // Common span: union of series spans; samples must pairwise overlap with
  // the span of the panel (checked via a shared intersection).
  WeekStamp lo = data[order[0]].front().first;
  WeekStamp hi = data[order[0]].back().first;
  WeekStamp inner_lo = lo, inner_hi = hi;
  for (int idx : order) {
    lo = std::min(lo, data[idx].front().first);
    hi = std::max(hi, data[idx].back().first);
    inner_lo = std::max(inner_lo, data[idx].front().first);
    inner_hi = std::min(inner_hi, data[idx].back().first);
  }
  if (inner_hi < inner_lo)
    throw std::invalid_argument(
        "assemble_panel: series samples do not overlap");

  MixedPanel panel;
  panel.stamps = build_calendar(lo, hi);
  const int T = static_cast<int>(panel.stamps.size());
  const int M = static_cast<int>(order.size());
  panel.values = Eigen::MatrixXd::Constant(T, M, kMissing);
  panel.n_monthly = n_monthly;
  panel.n_weekly = M - n_monthly;
  for (int j = 0; j < M; ++j) {
    const auto& s = specs[order[j]];
    panel.names.push_back(s.name);
    for (const auto& [stamp, value] : data[order[j]]) {
      int t = weeks_between(lo, stamp);
      if (j < n_monthly && !stamp.is_month_end())
        throw std::invalid_argument("assemble_panel: monthly series '" +
                                    s.name + "' observed off month-end at " +
                                    to_string(stamp));
      panel.values(t, j) = value;
    }
  }
  panel.validate();
  return panel;
}

}  // namespace mfvar
