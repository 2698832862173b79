#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "mfvar/calendar.hpp"
#include "mfvar/panel.hpp"
#include "mfvar/panel_io.hpp"

using namespace mfvar;

TEST_CASE("build_calendar spans") {
  CHECK(build_calendar({2011, 1}, {2011, 48}).size() == 48);
  // first week of 2011 to week 24 of 2020: 9 full years plus 24 weeks
  CHECK(build_calendar({2011, 1}, {2020, 24}).size() == 9 * 48 + 24);
  CHECK(build_calendar({2020, 5}, {2020, 5}).size() == 1);

  auto cal = build_calendar({2019, 47}, {2020, 2});
  REQUIRE(cal.size() == 4);
  CHECK(cal[1] == WeekStamp{2019, 48});
  CHECK(cal[2] == WeekStamp{2020, 1});

  CHECK_THROWS_AS(build_calendar({2011, 0}, {2011, 4}), std::invalid_argument);
  CHECK_THROWS_AS(build_calendar({2011, 49}, {2012, 4}), std::invalid_argument);
  CHECK_THROWS_AS(build_calendar({2012, 1}, {2011, 48}), std::invalid_argument);
}

TEST_CASE("week stamp ordering and month arithmetic") {
  CHECK(WeekStamp{2011, 5} < WeekStamp{2011, 6});
  CHECK(WeekStamp{2011, 48} < WeekStamp{2012, 1});
  CHECK(WeekStamp{2011, 5}.month() == 2);
  CHECK(WeekStamp{2011, 48}.month() == 12);
  CHECK(WeekStamp{2011, 8}.is_month_end());
  CHECK_FALSE(WeekStamp{2011, 7}.is_month_end());
  CHECK(weeks_between({2011, 1}, {2012, 1}) == 48);
  // a scenario window from week 9 to a sample end at week 24 spans 16 weeks
  CHECK(weeks_between({2020, 9}, {2020, 24}) + 1 == 16);
  CHECK(advance_weeks({2020, 1}, -1) == WeekStamp{2019, 48});
  CHECK(advance_weeks({2019, 48}, 49) == WeekStamp{2021, 1});
}

TEST_CASE("date to week mapping") {
  CHECK(map_date_to_week({2020, 3, 1}) == WeekStamp{2020, 9});
  CHECK(map_date_to_week({2020, 3, 31}) == WeekStamp{2020, 12});  // clamped
  CHECK(map_date_to_week({2011, 1, 7}) == WeekStamp{2011, 1});
  CHECK(map_date_to_week({2011, 1, 8}) == WeekStamp{2011, 2});
  CHECK(map_date_to_week({2011, 12, 22}) == WeekStamp{2011, 48});

  CHECK(parse_iso_date("2020-03-01") == Date{2020, 3, 1});
  CHECK(parse_iso_date("2020-02-29") == Date{2020, 2, 29});
  CHECK_THROWS_AS(parse_iso_date("2019-02-29"), std::invalid_argument);
  CHECK_THROWS_AS(parse_iso_date("2020/03/01"), std::invalid_argument);
  CHECK_THROWS_AS(parse_iso_date("2020-13-01"), std::invalid_argument);
}

TEST_CASE("weekly_average") {
  auto week_of = [](int day) { return Date{2020, 1, day}; };
  std::vector<std::pair<Date, double>> daily;
  for (int d = 1; d <= 5; ++d) daily.push_back({week_of(d), 5.0});
  auto avg = weekly_average(daily);
  REQUIRE(avg.size() == 1);
  CHECK(avg[0].second == doctest::Approx(5.0));

  daily = {{week_of(1), 1.0}, {week_of(2), 2.0}, {week_of(3), 3.0}};
  CHECK(weekly_average(daily)[0].second == doctest::Approx(2.0));

  // missing days are skipped, empty weeks absent
  daily = {{week_of(1), 1.0}, {week_of(2), kMissing}, {week_of(3), 3.0},
           {week_of(10), kMissing}};
  avg = weekly_average(daily);
  REQUIRE(avg.size() == 1);
  CHECK(avg[0].second == doctest::Approx(2.0));

  SUBCASE("permutation invariant within a week") {
    std::vector<std::pair<Date, double>> a = {
        {week_of(1), 1.5}, {week_of(3), -2.0}, {week_of(5), 7.0}};
    std::vector<std::pair<Date, double>> b = {a[2], a[0], a[1]};
    CHECK(weekly_average(a)[0].second == weekly_average(b)[0].second);
  }

  SUBCASE("identity on single-observation weeks") {
    auto one = weekly_average({{week_of(4), 3.25}});
    REQUIRE(one.size() == 1);
    CHECK(one[0].second == 3.25);
  }
}

TEST_CASE("yoy_transform") {
  StampedSeries constant, linear, expo;
  auto cal = build_calendar({2011, 1}, {2013, 48});
  for (size_t t = 0; t < cal.size(); ++t) {
    constant.emplace_back(cal[t], 3.5);
    linear.emplace_back(cal[t], static_cast<double>(t));
    expo.emplace_back(cal[t], std::exp(0.01 * static_cast<double>(t)));
  }

  auto zero = yoy_transform(constant, YoyMode::arithmetic_difference);
  CHECK(zero.size() == cal.size() - 48);
  for (const auto& [s, v] : zero) CHECK(v == doctest::Approx(0.0));

  for (const auto& [s, v] : yoy_transform(linear, YoyMode::arithmetic_difference))
    CHECK(v == doctest::Approx(48.0));

  // closed form: 100 * (0.01 t - 0.01 (t - 48)) = 48
  for (const auto& [s, v] : yoy_transform(expo, YoyMode::log_difference))
    CHECK(v == doctest::Approx(48.0).epsilon(1e-10));

  SUBCASE("periodic series vanishes") {
    StampedSeries periodic;
    for (size_t t = 0; t < cal.size(); ++t)
      periodic.emplace_back(cal[t], std::sin(2 * M_PI * (t % 48) / 48.0) + 2.0);
    for (const auto& [s, v] :
         yoy_transform(periodic, YoyMode::arithmetic_difference))
      CHECK(v == doctest::Approx(0.0));
  }

  SUBCASE("log mode rejects nonpositive values") {
    StampedSeries bad = {{{2011, 1}, 1.0}, {{2012, 1}, -2.0}};
    CHECK_THROWS_AS(yoy_transform(bad, YoyMode::log_difference),
                    std::invalid_argument);
  }
}

namespace {

SeriesSpec spec_of(const std::string& name, Role role) {
  SeriesSpec s;
  s.name = name;
  s.role = role;
  s.frequency = role == Role::monthly_block ? Frequency::monthly
                                            : Frequency::weekly;
  return s;
}

StampedSeries weekly_series(WeekStamp start, int n, double base) {
  StampedSeries out;
  for (int t = 0; t < n; ++t)
    out.emplace_back(advance_weeks(start, t), base + 0.1 * t);
  return out;
}

StampedSeries monthly_series(WeekStamp start, int n_weeks, double base) {
  StampedSeries out;
  for (int t = 0; t < n_weeks; ++t) {
    WeekStamp s = advance_weeks(start, t);
    if (s.is_month_end()) out.emplace_back(s, base + 0.01 * t);
  }
  return out;
}

}  // namespace

TEST_CASE("assemble_panel ordering and shapes") {
  WeekStamp start{2015, 1};
  std::vector<SeriesSpec> specs = {
      spec_of("w2", Role::weekly_block),  spec_of("cpi", Role::monthly_block),
      spec_of("m2", Role::policy),        spec_of("unrate", Role::monthly_block),
      spec_of("w1", Role::weekly_block),  spec_of("indpro", Role::monthly_block),
      spec_of("w3", Role::weekly_block),  spec_of("w4", Role::weekly_block),
      spec_of("w5", Role::weekly_block),
  };
  std::vector<StampedSeries> data;
  for (const auto& s : specs)
    data.push_back(s.role == Role::monthly_block
                       ? monthly_series(start, 96, 1.0)
                       : weekly_series(start, 96, 2.0));

  auto panel = assemble_panel(specs, data);
  CHECK(panel.cols() == 9);
  CHECK(panel.n_monthly == 3);
  CHECK(panel.n_weekly == 6);
  CHECK(panel.names[panel.policy_index()] == "m2");
  // monthly block keeps input order, weeklies after the policy column
  CHECK(panel.names[0] == "cpi");
  CHECK(panel.names[1] == "unrate");
  CHECK(panel.names[2] == "indpro");

  SUBCASE("policy position invariant to spec permutation") {
    std::vector<size_t> perm = {4, 0, 3, 2, 8, 1, 6, 5, 7};
    std::vector<SeriesSpec> specs2;
    std::vector<StampedSeries> data2;
    for (size_t i : perm) {
      specs2.push_back(specs[i]);
      data2.push_back(data[i]);
    }
    auto p2 = assemble_panel(specs2, data2);
    CHECK(p2.names[p2.policy_index()] == "m2");
    CHECK(p2.n_monthly == 3);
  }

  SUBCASE("monthly columns observed only at month ends") {
    for (int j = 0; j < panel.n_monthly; ++j) {
      int count = 0;
      for (int t = 0; t < panel.rows(); ++t) {
        if (!is_missing(panel.values(t, j))) {
          CHECK(panel.stamps[t].week % 4 == 0);
          ++count;
        }
      }
      CHECK(count == 96 / 4);
    }
  }
}

TEST_CASE("assemble_panel error paths") {
  WeekStamp start{2015, 1};
  auto w = weekly_series(start, 96, 0.0);
  auto m = monthly_series(start, 96, 0.0);

  SUBCASE("duplicate names") {
    CHECK_THROWS_WITH_AS(
        assemble_panel({spec_of("x", Role::policy), spec_of("x", Role::weekly_block)},
                       {w, w}),
        doctest::Contains("duplicate"), std::invalid_argument);
  }
  SUBCASE("policy series missing") {
    CHECK_THROWS_AS(assemble_panel({spec_of("a", Role::weekly_block)}, {w}),
                    std::invalid_argument);
  }
  SUBCASE("two policy series") {
    CHECK_THROWS_AS(
        assemble_panel({spec_of("a", Role::policy), spec_of("b", Role::policy)},
                       {w, w}),
        std::invalid_argument);
  }
  SUBCASE("non-overlapping samples") {
    auto late = weekly_series({2020, 1}, 48, 0.0);
    CHECK_THROWS_WITH_AS(
        assemble_panel(
            {spec_of("a", Role::policy), spec_of("b", Role::weekly_block)},
            {w, late}),
        doctest::Contains("overlap"), std::invalid_argument);
  }
  SUBCASE("monthly role requires monthly frequency") {
    auto bad = spec_of("a", Role::monthly_block);
    bad.frequency = Frequency::weekly;
    CHECK_THROWS_AS(
        assemble_panel({bad, spec_of("b", Role::policy)}, {m, w}),
        std::invalid_argument);
  }
  SUBCASE("ragged edge keeps trailing missings") {
    auto short_w = weekly_series(start, 92, 0.0);
    auto panel = assemble_panel(
        {spec_of("a", Role::policy), spec_of("b", Role::weekly_block)},
        {w, short_w});
    CHECK(panel.rows() == 96);
    for (int t = 92; t < 96; ++t) CHECK(is_missing(panel.values(t, 1)));
    CHECK_FALSE(is_missing(panel.values(95, 0)));
  }
}

TEST_CASE("series csv and panel csv round trips") {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "mfvar_test_ingest";
  fs::create_directories(dir);

  SUBCASE("series csv") {
    {
      std::ofstream f(dir / "s.csv");
      f << "date,value\n2020-01-01,1.5\n2020-01-02,\n2020-01-03,2.5\n";
    }
    auto rows = read_series_csv(dir / "s.csv");
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].second == 1.5);
    CHECK(is_missing(rows[1].second));
    CHECK(rows[2].second == 2.5);
    CHECK_THROWS(read_series_csv(dir / "does_not_exist.csv"));
  }

  SUBCASE("panel csv") {
    Eigen::MatrixXd weekly(8, 2);
    for (int t = 0; t < 8; ++t) {
      weekly(t, 0) = 0.25 * t;
      weekly(t, 1) = std::sin(t * 0.7);
    }
    MixedPanel panel;
    panel.stamps = build_calendar({2019, 45}, {2020, 4});
    panel.values = weekly;
    panel.values(3, 1) = kMissing;
    panel.names = {"a", "b"};
    panel.n_monthly = 0;
    panel.n_weekly = 2;
    write_panel_csv(panel, dir / "p.csv");
    auto raw = read_panel_csv(dir / "p.csv");
    CHECK(raw.names == panel.names);
    REQUIRE(raw.stamps.size() == 8);
    CHECK(raw.stamps[0] == WeekStamp{2019, 45});
    for (int t = 0; t < 8; ++t)
      for (int j = 0; j < 2; ++j) {
        if (is_missing(panel.values(t, j)))
          CHECK(is_missing(raw.values(t, j)));
        else
          CHECK(raw.values(t, j) == panel.values(t, j));  // lossless
      }
  }

  SUBCASE("manifest ingestion end to end") {
    // two weekly series (one daily source), one monthly, policy tagged
    {
      std::ofstream f(dir / "pol.csv");
      f << "date,value\n";
      for (int y = 2015; y <= 2017; ++y)
        for (int m = 1; m <= 12; ++m)
          for (int d : {3, 10, 17, 24})
            f << y << "-" << (m < 10 ? "0" : "") << m << "-"
              << (d < 10 ? "0" : "") << d << "," << 100.0 + y - 2015 + 0.1 * m
              << "\n";
    }
    {
      std::ofstream f(dir / "mon.csv");
      f << "date,value\n";
      for (int y = 2015; y <= 2017; ++y)
        for (int m = 1; m <= 12; ++m)
          f << y << "-" << (m < 10 ? "0" : "") << m << "-01,"
            << 50.0 + 0.2 * m << "\n";
    }
    {
      std::ofstream f(dir / "manifest.json");
      f << R"({"series":[
        {"name":"pol","file":"pol.csv","frequency":"daily","transform":"yoy_log","role":"policy"},
        {"name":"mon","file":"mon.csv","frequency":"monthly","transform":"yoy_log","role":"monthly_block"}
      ]})";
    }
    auto panel = load_panel(dir / "manifest.json");
    CHECK(panel.n_monthly == 1);
    CHECK(panel.names[0] == "mon");
    CHECK(panel.names[1] == "pol");
    // yoy drops the first year
    CHECK(panel.stamps.front().year == 2016);
    panel.validate();
  }

  fs::remove_all(dir);
}
