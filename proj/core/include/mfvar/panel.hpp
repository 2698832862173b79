#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mfvar/calendar.hpp"

namespace mfvar {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return std::isnan(v); }

enum class Frequency { daily, weekly, monthly };
enum class Transform { none, yoy };
enum class YoyMode { log_difference, arithmetic_difference };
enum class Role { monthly_block, policy, weekly_block };

std::string to_string(Frequency f);
std::string to_string(Role r);

struct SeriesSpec {
  std::string name;
  Frequency frequency = Frequency::weekly;
  Transform transform = Transform::none;
  YoyMode yoy_mode = YoyMode::log_difference;
  Role role = Role::weekly_block;
};

/// Sparse week-stamped series, sorted by stamp, finite values only.
using StampedSeries = std::vector<std::pair<WeekStamp, double>>;

/// Per-week arithmetic mean of the available daily observations. Weeks with
/// no finite observation are absent from the output.
StampedSeries weekly_average(const std::vector<std::pair<Date, double>>& daily);

/// Aggregates raw observations onto week stamps according to frequency:
/// daily/weekly values falling into the same calendar week are averaged,
/// monthly values are stamped on the last week of their month.
StampedSeries stamp_series(const std::vector<std::pair<Date, double>>& raw,
                           Frequency freq, const std::string& name);

/// out_t = f(v_t) - f(v_{t-48 weeks}), f = 100*log or identity. Entries
/// without a same-week previous-year value are dropped.
StampedSeries yoy_transform(const StampedSeries& series, YoyMode mode);

/// Mixed-frequency panel on the 48-week calendar. Columns are ordered:
/// monthly block, policy variable, remaining weekly variables.
struct MixedPanel {
  Eigen::MatrixXd values;          // T x M, NaN = missing
  std::vector<WeekStamp> stamps;   // length T
  std::vector<std::string> names;  // length M, model order
  int n_monthly = 0;               // M_L
  int n_weekly = 0;                // M_H (includes the policy variable)

  int rows() const { return static_cast<int>(values.rows()); }
  int cols() const { return static_cast<int>(values.cols()); }
  int policy_index() const { return n_monthly; }
  bool is_monthly_column(int j) const { return j < n_monthly; }

  /// Throws when a structural invariant is violated (dimensions, ordering,
  /// monthly observations away from month ends).
  void validate() const;
};

/// Orders series (monthly, policy, weekly), lays them out on the common
/// calendar span, and enforces the panel invariants. Exactly one policy
/// series is required; series samples must overlap.
MixedPanel assemble_panel(const std::vector<SeriesSpec>& specs,
                          const std::vector<StampedSeries>& data);

}  // namespace mfvar
