#include "mfvar/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "mfvar/config.hpp"
#include "mfvar/dgp.hpp"
#include "mfvar/diagnostics.hpp"
#include "mfvar/panel_io.hpp"
#include "mfvar/store.hpp"
#include "mfvar/structural.hpp"
#include "mfvar/svg.hpp"

namespace mfvar {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_output_manifest(const std::filesystem::path& dir,
                           const std::string& command,
                           const std::string& hash) {
  nlohmann::json j;
  j["command"] = command;
  j["config_hash"] = hash;
  std::ofstream out(dir / "manifest.json");
  if (!out)
    throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
  out << j.dump(2) << "\n";
}

int resolve_variable(const std::vector<std::string>& names,
                     const std::string& name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end())
    throw std::runtime_error("variable '" + name + "' not found in the panel");
  return static_cast<int>(it - names.begin());
}

LoadedStore load_checked_store(const std::filesystem::path& store_dir,
                               const RunConfig& cfg) {
  LoadedStore store = load_store(store_dir);
  std::string expect = config_hash(cfg);
  if (store.meta.config_hash != expect)
    throw std::runtime_error(
        "store/config mismatch: store was estimated under config hash " +
        store.meta.config_hash + ", current config hashes to " + expect);
  return store;
}

std::optional<double> irf_scale_log(const RunConfig& cfg,
                                    const LoadedStore& store,
                                    const PosteriorDraw& draw) {
  if (cfg.irf_scale == "mean_vol") return std::nullopt;  // use draw.mu_h
  if (!cfg.irf_scale_date)
    throw std::runtime_error("config: irf scale 'at_date' needs scale_date");
  int t = weeks_between(store.meta.stamps.front(), *cfg.irf_scale_date);
  if (t < 0 || t >= static_cast<int>(store.meta.stamps.size()))
    throw std::runtime_error("config: irf scale_date outside the sample");
  return draw.h[t];
}

}  // namespace

int cmd_ingest(const std::filesystem::path& config_path,
               const std::filesystem::path& out_dir) {
  RunConfig cfg = load_run_config(config_path);
  MixedPanel panel = load_panel(cfg.manifest);
  std::filesystem::create_directories(out_dir);
  write_panel_csv(panel, out_dir / "panel.csv");
  write_output_manifest(out_dir, "ingest", config_hash(cfg));
  std::cout << "ingest: wrote " << (out_dir / "panel.csv").string() << " ("
            << panel.rows() << " weeks, " << panel.n_monthly << " monthly + "
            << panel.n_weekly << " weekly series)\n";
  return 0;
}

namespace {

void write_diagnostics_csv(const std::filesystem::path& path,
                           const ChainDiagnostics& diag) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "parameter,ess,rhat,flagged\n";
  for (const auto& s : diag.scalars)
    out << s.name << "," << fmt(s.ess) << "," << fmt(s.rhat) << ","
        << (s.flagged ? 1 : 0) << "\n";
}

}  // namespace

int cmd_estimate(const std::filesystem::path& config_path,
                 const std::filesystem::path& out_dir, int jobs,
                 std::optional<std::uint64_t> seed_override) {
  RunConfig cfg = load_run_config(config_path);
  if (seed_override) cfg.chain.seed = *seed_override;
  MixedPanel panel = load_panel(cfg.manifest);

  const int n_chains = std::max(1, cfg.n_chains);
  std::vector<std::vector<PosteriorDraw>> chains(
      static_cast<size_t>(n_chains));
  std::vector<std::uint64_t> seeds;
  for (int c = 0; c < n_chains; ++c) seeds.push_back(cfg.chain_seed(c));

  std::vector<std::exception_ptr> errors(static_cast<size_t>(n_chains));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      int c = next.fetch_add(1);
      if (c >= n_chains) return;
      try {
        ChainConfig cc = cfg.chain;
        cc.seed = seeds[static_cast<size_t>(c)];
        chains[static_cast<size_t>(c)] = gibbs_run(panel, cfg.prior, cc);
      } catch (...) {
        errors[static_cast<size_t>(c)] = std::current_exception();
      }
    }
  };
  int n_threads = std::clamp(jobs, 1, n_chains);
  std::vector<std::thread> pool;
  for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::filesystem::create_directories(out_dir);
  StoreMeta meta;
  meta.M = panel.cols();
  meta.M_L = panel.n_monthly;
  meta.P = cfg.chain.P;
  meta.T = panel.rows();
  meta.include_intercept = cfg.prior.include_intercept;
  meta.seeds = seeds;
  meta.config_hash = config_hash(cfg);
  meta.names = panel.names;
  meta.stamps = panel.stamps;
  save_store(out_dir / "store", meta, chains);

  ChainDiagnostics diag = chain_diagnostics(chains, cfg.rhat_threshold);
  write_diagnostics_csv(out_dir / "diagnostics.csv", diag);
  write_output_manifest(out_dir, "estimate", meta.config_hash);

  int retained = 0;
  for (const auto& c : chains) retained += static_cast<int>(c.size());
  std::cout << "estimate: " << n_chains << " chain(s), " << retained
            << " retained draws, max split R-hat " << diag.max_rhat << "\n";
  if (diag.any_flagged) {
    std::cerr << "estimate: R-hat above " << cfg.rhat_threshold
              << " on at least one monitored scalar\n";
    return 2;
  }
  return 0;
}

int cmd_irf(const std::filesystem::path& config_path,
            const std::filesystem::path& store_dir,
            const std::filesystem::path& out_dir) {
  RunConfig cfg = load_run_config(config_path);
  LoadedStore store = load_checked_store(store_dir, cfg);
  std::vector<PosteriorDraw> draws = store.merged();
  if (draws.size() < 2) throw std::runtime_error("cmd_irf: store has < 2 draws");

  int shock =
      cfg.shock_variable == "policy"
          ? store.meta.M_L
          : resolve_variable(store.meta.names, cfg.shock_variable);
  // config counts horizon rows, starting at impact: rows h = 0..horizons-1
  const int H = cfg.irf_horizons - 1;

  std::vector<Eigen::MatrixXd> per_draw;
  int excluded = 0;
  for (const auto& d : draws) {
    try {
      IdentifiedDraw id = identify(d, irf_scale_log(cfg, store, d));
      per_draw.push_back(irf(d.A, id.B0, shock, H));
    } catch (const std::runtime_error&) {
      ++excluded;
    }
  }
  if (per_draw.size() < 2)
    throw std::runtime_error("cmd_irf: fewer than 2 identifiable draws");
  IrfResult res = summarize_irf(per_draw, cfg.quantiles);
  res.n_excluded = excluded;

  // Zero-impact restriction on the slower-ordered variables, checked before
  // anything is written.
  for (const auto& r : per_draw)
    for (int i = 0; i < shock; ++i)
      if (r(0, i) != 0.0)
        throw std::runtime_error(
            "cmd_irf: nonzero impact response above the shocked variable");

  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out(out_dir / "irf.csv");
    if (!out) throw std::runtime_error("cannot write irf.csv");
    out << "horizon,variable,q05,q50,q95\n";
    for (int h = 0; h <= H; ++h)
      for (int j = 0; j < store.meta.M; ++j)
        out << h << "," << store.meta.names[static_cast<size_t>(j)] << ","
            << fmt(res.bands[0](h, j)) << "," << fmt(res.bands[1](h, j)) << ","
            << fmt(res.bands[2](h, j)) << "\n";
  }
  std::vector<SvgPanel> panels;
  for (int j = 0; j < store.meta.M; ++j) {
    SvgPanel p;
    p.title = store.meta.names[static_cast<size_t>(j)];
    for (int h = 0; h <= H; ++h) {
      p.x.push_back(h);
      p.lo.push_back(res.bands[0](h, j));
      p.median.push_back(res.bands[1](h, j));
      p.hi.push_back(res.bands[2](h, j));
    }
    panels.push_back(std::move(p));
  }
  write_small_multiples(out_dir / "irf.svg", panels);
  write_output_manifest(out_dir, "irf", store.meta.config_hash);
  std::cout << "irf: shock " << store.meta.names[static_cast<size_t>(shock)]
            << ", " << per_draw.size() << " draws";
  if (excluded > 0) std::cout << " (" << excluded << " excluded)";
  std::cout << "\n";
  return 0;
}

int cmd_counterfactual(const std::filesystem::path& config_path,
                       const std::filesystem::path& store_dir,
                       const std::filesystem::path& out_dir) {
  RunConfig cfg = load_run_config(config_path);
  LoadedStore store = load_checked_store(store_dir, cfg);
  std::vector<PosteriorDraw> draws = store.merged();
  if (draws.size() < 2)
    throw std::runtime_error("cmd_counterfactual: store has < 2 draws");

  ScenarioSpec scenario;
  if (cfg.scenario_shocks.empty()) {
    scenario.shock_indices.insert(store.meta.M_L);  // the policy shock
  } else {
    for (const auto& n : cfg.scenario_shocks)
      scenario.shock_indices.insert(
          n == "policy" ? store.meta.M_L : resolve_variable(store.meta.names, n));
  }
  scenario.start = cfg.scenario_start;
  scenario.end = cfg.scenario_end.value_or(store.meta.stamps.back());

  std::vector<CounterfactualResult> per_draw;
  int excluded = 0;
  for (const auto& d : draws) {
    // failed factorizations are draw-level and excluded; window/config
    // problems throw std::invalid_argument and propagate
    try {
      IdentifiedDraw id = identify(d);
      per_draw.push_back(counterfactual(d, id, store.meta.stamps, scenario));
    } catch (const std::runtime_error&) {
      ++excluded;
    }
  }
  if (per_draw.size() < 2)
    throw std::runtime_error("cmd_counterfactual: fewer than 2 usable draws");
  CounterfactualBands bands = summarize_counterfactual(per_draw, cfg.quantiles);
  bands.n_excluded = excluded;

  std::filesystem::create_directories(out_dir);
  const auto& names = store.meta.names;
  const auto& stamps = store.meta.stamps;
  {
    std::ofstream out(out_dir / "counterfactual.csv");
    if (!out) throw std::runtime_error("cannot write counterfactual.csv");
    out << "year,week,variable,series,q05,q50,q95\n";
    auto rows = [&](const std::vector<Eigen::MatrixXd>& b, const char* tag) {
      for (size_t t = 0; t < stamps.size(); ++t)
        for (size_t j = 0; j < names.size(); ++j)
          out << stamps[t].year << "," << stamps[t].week << "," << names[j]
              << "," << tag << ","
              << fmt(b[0](static_cast<int>(t), static_cast<int>(j))) << ","
              << fmt(b[1](static_cast<int>(t), static_cast<int>(j))) << ","
              << fmt(b[2](static_cast<int>(t), static_cast<int>(j))) << "\n";
    };
    rows(bands.actual, "actual");
    rows(bands.counterfactual, "cf");
    rows(bands.difference, "diff");
  }

  auto time_axis = [&](std::vector<double>& x) {
    for (size_t t = 0; t < stamps.size(); ++t)
      x.push_back(stamps[t].year + (stamps[t].week - 1) / 48.0);
  };
  std::vector<SvgPanel> levels, diffs;
  for (size_t j = 0; j < names.size(); ++j) {
    SvgPanel lv, df;
    lv.title = names[j] + " (actual vs counterfactual)";
    df.title = names[j] + " (actual - counterfactual)";
    time_axis(lv.x);
    time_axis(df.x);
    for (size_t t = 0; t < stamps.size(); ++t) {
      int ti = static_cast<int>(t), ji = static_cast<int>(j);
      lv.lo.push_back(bands.counterfactual[0](ti, ji));
      lv.median.push_back(bands.counterfactual[1](ti, ji));
      lv.hi.push_back(bands.counterfactual[2](ti, ji));
      lv.second.push_back(bands.actual[1](ti, ji));
      df.lo.push_back(bands.difference[0](ti, ji));
      df.median.push_back(bands.difference[1](ti, ji));
      df.hi.push_back(bands.difference[2](ti, ji));
    }
    levels.push_back(std::move(lv));
    diffs.push_back(std::move(df));
  }
  write_small_multiples(out_dir / "counterfactual_levels.svg", levels);
  write_small_multiples(out_dir / "counterfactual_diff.svg", diffs);
  write_output_manifest(out_dir, "counterfactual", store.meta.config_hash);
  std::cout << "counterfactual: window " << to_string(scenario.start) << " .. "
            << to_string(scenario.end) << ", " << per_draw.size() << " draws";
  if (excluded > 0) std::cout << " (" << excluded << " excluded)";
  std::cout << "\n";
  return 0;
}

namespace {

Eigen::MatrixXd json_matrix(const nlohmann::json& j, int rows, int cols,
                            const char* what) {
  Eigen::MatrixXd m(rows, cols);
  if (static_cast<int>(j.size()) != rows)
    throw std::runtime_error(std::string("simulate spec: ") + what +
                             " row count mismatch");
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j.at(r).size()) != cols)
      throw std::runtime_error(std::string("simulate spec: ") + what +
                               " column count mismatch");
    for (int c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
  }
  return m;
}

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

int cmd_simulate(const std::filesystem::path& spec_path,
                 const std::filesystem::path& out_dir,
                 std::optional<std::uint64_t> seed_override) {
  std::ifstream in(spec_path);
  if (!in) throw std::runtime_error("cannot open spec: " + spec_path.string());
  nlohmann::json j;
  in >> j;

  int M = j.value("M", 2);
  int M_L = j.value("M_L", 1);
  int P = j.value("P", 4);
  int T = j.value("T", 200);
  std::uint64_t seed = j.value("seed", 1ull);
  if (seed_override) seed = *seed_override;

  DgpSpec spec = default_dgp(M, M_L, P, T, seed);
  if (j.contains("A")) spec.A = json_matrix(j.at("A"), M, M * P, "A");
  if (j.contains("Sigma")) spec.Sigma = json_matrix(j.at("Sigma"), M, M, "Sigma");
  if (j.contains("intercept")) {
    auto v = j.at("intercept").get<std::vector<double>>();
    spec.intercept = Eigen::Map<Eigen::VectorXd>(v.data(),
                                                 static_cast<int>(v.size()));
  }
  spec.mu_h = j.value("mu_h", spec.mu_h);
  spec.rho_h = j.value("rho_h", spec.rho_h);
  spec.sigma_h = j.value("sigma_h", spec.sigma_h);
  if (j.contains("start")) {
    spec.start = WeekStamp{j.at("start").at(0).get<int>(),
                           j.at("start").at(1).get<int>()};
  }
  if (j.contains("ragged_tail"))
    spec.ragged_tail = j.at("ragged_tail").get<std::vector<int>>();
  if (j.contains("names"))
    spec.names = j.at("names").get<std::vector<std::string>>();

  DgpOutput out = simulate(spec);
  std::filesystem::create_directories(out_dir);
  write_panel_csv(out.panel, out_dir / "panel.csv");

  nlohmann::json truth;
  truth["A"] = matrix_json(spec.A);
  truth["Sigma"] = matrix_json(spec.Sigma);
  truth["mu_h"] = spec.mu_h;
  truth["rho_h"] = spec.rho_h;
  truth["sigma_h"] = spec.sigma_h;
  truth["seed"] = seed;
  truth["M"] = M;
  truth["M_L"] = M_L;
  truth["P"] = P;
  truth["T"] = T;
  truth["h"] = matrix_json(out.h);
  truth["weekly"] = matrix_json(out.weekly);
  truth["eps"] = matrix_json(out.eps);
  {
    std::ofstream tf(out_dir / "truth.json");
    if (!tf) throw std::runtime_error("cannot write truth.json");
    tf << truth.dump() << "\n";
  }

  // Ready-to-estimate manifest referencing the generated panel.
  nlohmann::json manifest;
  manifest["panel_csv"] = "panel.csv";
  std::vector<std::string> monthly(out.panel.names.begin(),
                                   out.panel.names.begin() + M_L);
  manifest["monthly"] = monthly;
  manifest["policy"] = out.panel.names[static_cast<size_t>(M_L)];
  {
    std::ofstream mf(out_dir / "panel_manifest.json");
    if (!mf) throw std::runtime_error("cannot write panel_manifest.json");
    mf << manifest.dump(2) << "\n";
  }
  std::cout << "simulate: wrote panel.csv, truth.json, panel_manifest.json to "
            << out_dir.string() << "\n";
  return 0;
}

int cmd_diagnostics(const std::filesystem::path& store_dir,
                    const std::filesystem::path& out_dir,
                    double rhat_threshold) {
  LoadedStore store = load_store(store_dir);
  ChainDiagnostics diag = chain_diagnostics(store.chains, rhat_threshold);
  std::filesystem::create_directories(out_dir);
  write_diagnostics_csv(out_dir / "diagnostics.csv", diag);
  std::cout << "diagnostics: " << diag.scalars.size()
            << " monitored scalars, max split R-hat " << diag.max_rhat << "\n";
  for (const auto& s : diag.scalars)
    if (s.flagged)
      std::cout << "  flagged: " << s.name << " (R-hat " << s.rhat << ")\n";
  return diag.any_flagged ? 2 : 0;
}

}  // namespace mfvar
