#include "mfvar/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mfvar/store.hpp"

namespace mfvar {

std::uint64_t RunConfig::chain_seed(int chain_index) const {
  if (!seeds.empty()) {
    if (chain_index >= static_cast<int>(seeds.size()))
      throw std::invalid_argument("RunConfig: not enough explicit seeds");
    return seeds[static_cast<size_t>(chain_index)];
  }
  return chain.seed + static_cast<std::uint64_t>(chain_index);
}

namespace {

WeekStamp parse_stamp(const nlohmann::json& j, const char* where) {
  if (!j.is_array() || j.size() != 2)
    throw std::runtime_error(std::string("config: ") + where +
                             " must be [year, week]");
  WeekStamp s{j.at(0).get<int>(), j.at(1).get<int>()};
  if (!s.valid())
    throw std::runtime_error(std::string("config: ") + where +
                             " week outside 1..48");
  return s;
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error("config " + path.string() + ": " + e.what());
  }

  RunConfig cfg;
  auto base = path.parent_path();
  {
    auto m = std::filesystem::path(
        j.at("data").at("manifest").get<std::string>());
    cfg.manifest = m.is_relative() ? base / m : m;
  }
  if (j.contains("model")) {
    const auto& m = j.at("model");
    cfg.chain.P = m.value("lags", 4);
    cfg.prior.include_intercept = m.value("intercept", false);
    cfg.chain.state_prior_var = m.value("state_prior_var", 10.0);
  }
  if (j.contains("priors")) {
    const auto& p = j.at("priors");
    if (p.contains("minnesota")) {
      const auto& mn = p.at("minnesota");
      auto& hy = cfg.prior.minnesota;
      hy.lambda_overall = mn.value("lambda_overall", 0.2);
      hy.lambda_cross = mn.value("lambda_cross", 0.5);
      hy.lambda_lag_decay = mn.value("lambda_lag_decay", 1.0);
      hy.lambda_intercept = mn.value("lambda_intercept", 100.0);
      std::string form = mn.value("form", std::string("conjugate"));
      if (form == "conjugate") {
        cfg.prior.form = MinnesotaForm::conjugate;
      } else if (form == "independent") {
        cfg.prior.form = MinnesotaForm::independent;
      } else {
        throw std::runtime_error("config: unknown minnesota form '" + form + "'");
      }
    }
    if (p.contains("csv")) {
      const auto& cv = p.at("csv");
      auto& pr = cfg.prior.csv;
      pr.rho_a = cv.value("rho_a", 25.0);
      pr.rho_b = cv.value("rho_b", 5.0);
      pr.mu_mean = cv.value("mu_mean", 0.0);
      pr.mu_var = cv.value("mu_var", 10.0);
      pr.sigma2_shape = cv.value("sigma2_shape", 0.5);
      pr.sigma2_rate = cv.value("sigma2_rate", 0.5);
      pr.sigma2_inverse_gamma = cv.value("sigma2_inverse_gamma", false);
      pr.iw_df = cv.value("iw_df", 0.0);
      pr.iw_scale_diag = cv.value("iw_scale_diag", 0.1);
    }
  }
  if (j.contains("chain")) {
    const auto& c = j.at("chain");
    cfg.n_chains = c.value("chains", 2);
    cfg.chain.n_draws = c.value("draws", 1000);
    cfg.chain.n_burn = c.value("burn", 500);
    cfg.chain.thin = c.value("thin", 1);
    cfg.chain.seed = c.value("seed", 1ull);
    if (c.contains("seeds"))
      cfg.seeds = c.at("seeds").get<std::vector<std::uint64_t>>();
    if (c.contains("fix_h") && !c.at("fix_h").is_null())
      cfg.chain.fix_h = c.at("fix_h").get<double>();
  }
  if (j.contains("irf")) {
    const auto& i = j.at("irf");
    cfg.shock_variable = i.value("shock", std::string("policy"));
    cfg.irf_horizons = i.value("horizons", 48);
    cfg.irf_scale = i.value("scale", std::string("mean_vol"));
    if (cfg.irf_scale != "mean_vol" && cfg.irf_scale != "at_date")
      throw std::runtime_error("config: irf scale must be mean_vol or at_date");
    if (i.contains("scale_date"))
      cfg.irf_scale_date = parse_stamp(i.at("scale_date"), "irf.scale_date");
    if (cfg.irf_horizons < 1)
      throw std::runtime_error("config: irf horizons must be >= 1");
  }
  if (j.contains("scenario")) {
    const auto& s = j.at("scenario");
    if (s.contains("shocks"))
      cfg.scenario_shocks = s.at("shocks").get<std::vector<std::string>>();
    if (s.contains("start"))
      cfg.scenario_start = parse_stamp(s.at("start"), "scenario.start");
    if (s.contains("end"))
      cfg.scenario_end = parse_stamp(s.at("end"), "scenario.end");
  }
  if (j.contains("diagnostics"))
    cfg.rhat_threshold = j.at("diagnostics").value("rhat_max", 1.1);
  return cfg;
}

std::string config_hash(const RunConfig& cfg) {
  // Canonical serialization of everything that shapes the posterior draws.
  std::ostringstream os;
  os << "manifest=" << cfg.manifest.string() << ";P=" << cfg.chain.P
     << ";intercept=" << cfg.prior.include_intercept
     << ";spv=" << cfg.chain.state_prior_var
     << ";form=" << (cfg.prior.form == MinnesotaForm::conjugate ? "c" : "i")
     << ";l0=" << cfg.prior.minnesota.lambda_overall
     << ";lc=" << cfg.prior.minnesota.lambda_cross
     << ";ld=" << cfg.prior.minnesota.lambda_lag_decay
     << ";li=" << cfg.prior.minnesota.lambda_intercept
     << ";rho=" << cfg.prior.csv.rho_a << "," << cfg.prior.csv.rho_b
     << ";mu=" << cfg.prior.csv.mu_mean << "," << cfg.prior.csv.mu_var
     << ";s2=" << cfg.prior.csv.sigma2_shape << "," << cfg.prior.csv.sigma2_rate
     << "," << cfg.prior.csv.sigma2_inverse_gamma
     << ";iw=" << cfg.prior.csv.iw_df << "," << cfg.prior.csv.iw_scale_diag
     << ";chains=" << cfg.n_chains << ";draws=" << cfg.chain.n_draws
     << ";burn=" << cfg.chain.n_burn << ";thin=" << cfg.chain.thin
     << ";seed=" << cfg.chain.seed;
  for (auto s : cfg.seeds) os << ",s" << s;
  if (cfg.chain.fix_h) os << ";fixh=" << *cfg.chain.fix_h;
  return fnv1a_hex(os.str());
}

}  // namespace mfvar
