#include "mfvar/gibbs.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mfvar/linalg.hpp"

namespace mfvar {

void ChainConfig::validate() const {
  if (n_draws <= 0) throw std::invalid_argument("ChainConfig: n_draws must be > 0");
  if (n_burn < 0) throw std::invalid_argument("ChainConfig: n_burn must be >= 0");
  if (thin < 1) throw std::invalid_argument("ChainConfig: thin must be >= 1");
  if (P < 1) throw std::invalid_argument("ChainConfig: P must be >= 1");
  if (!(state_prior_var > 0.0))
    throw std::invalid_argument("ChainConfig: state_prior_var must be > 0");
}

Eigen::VectorXd PosteriorDraw::normalized_h() const {
  return h.array() - h.mean();
}

Eigen::MatrixXd PosteriorDraw::normalized_sigma() const {
  return std::exp(h.mean()) * Sigma;
}

Eigen::MatrixXd var_residuals(const Eigen::MatrixXd& weekly,
                              const Eigen::MatrixXd& A,
                              const Eigen::VectorXd& intercept, int P) {
  const int T = static_cast<int>(weekly.rows());
  const int M = static_cast<int>(weekly.cols());
  Eigen::MatrixXd eps(T - P, M);
  for (int t = P; t < T; ++t) {
    Eigen::VectorXd pred = intercept.size() == M
                               ? Eigen::VectorXd(intercept)
                               : Eigen::VectorXd::Zero(M);
    for (int l = 1; l <= P; ++l)
      pred += A.middleCols((l - 1) * M, M) * weekly.row(t - l).transpose();
    eps.row(t - P) = weekly.row(t) - pred.transpose();
  }
  return eps;
}

namespace {

[[noreturn]] void block_failure(const char* block, int iter,
                                const std::exception& e) {
  throw std::runtime_error("gibbs_run: block '" + std::string(block) +
                           "' failed at iteration " + std::to_string(iter) +
                           ": " + e.what());
}

}  // namespace

std::vector<PosteriorDraw> gibbs_run(const MixedPanel& panel,
                                     const VarPrior& prior,
                                     const ChainConfig& config) {
  config.validate();
  panel.validate();
  const int M = panel.cols();
  const int P = config.P;
  const int T = panel.rows();
  if (panel.n_monthly > 0 && P < 4)
    throw std::invalid_argument(
        "gibbs_run: P >= 4 required with monthly variables");
  prior.csv.validate(M);

  VarPrior pr = prior;
  if (pr.minnesota.scale_estimates.size() != M)
    pr.minnesota.scale_estimates = ar4_scale_estimates(panel);

  ObservationMap map = build_observation_map(panel, P);
  Rng rng(config.seed);

  // Initial values: prior means.
  ConjugateParts parts = conjugate_parts(pr, M, P);
  CoefficientDraw coef;
  coef.A = parts.beta_bar.topRows(M * P).transpose();
  coef.intercept = Eigen::VectorXd::Zero(M);
  coef.Sigma = pr.csv.iw_scale_for(M) / (pr.csv.iw_df_for(M) - M - 1);
  SvParams sv;
  sv.mu_h = pr.csv.mu_mean;
  sv.rho_h = 2.0 * pr.csv.rho_a / (pr.csv.rho_a + pr.csv.rho_b) - 1.0;
  sv.sigma2_h = pr.csv.sigma2_shape / pr.csv.sigma2_rate;
  Eigen::VectorXd h = Eigen::VectorXd::Constant(T, sv.mu_h);
  if (config.fix_h) {
    h.setConstant(*config.fix_h);
    sv.mu_h = *config.fix_h;
    sv.rho_h = 0.0;
    sv.sigma2_h = 1.0;
  }

  const int total = config.n_burn + config.n_draws * config.thin;
  std::vector<PosteriorDraw> draws;
  draws.reserve(static_cast<size_t>(config.n_draws));

  for (int iter = 0; iter < total; ++iter) {
    StatePath states;
    try {
      CompanionSystem sys = build_companion(coef.A, coef.intercept);
      SsmProblem problem =
          build_ssm(map, sys, coef.Sigma, h, config.state_prior_var);
      states = simulation_smoother(problem, map, rng);
    } catch (const std::exception& e) {
      block_failure("simulation_smoother", iter, e);
    }

    if (!config.fix_h) {
      try {
        Eigen::MatrixXd eps =
            var_residuals(states.weekly, coef.A, coef.intercept, P);
        h = draw_h_path(eps, coef.Sigma, sv, h, P, rng);
      } catch (const std::exception& e) {
        block_failure("draw_h_path", iter, e);
      }
      try {
        sv = draw_sv_params(h, pr.csv, sv, rng);
      } catch (const std::exception& e) {
        block_failure("draw_sv_params", iter, e);
      }
    }

    try {
      coef = draw_coefficients_and_sigma(states, h, pr, rng, coef);
    } catch (const std::exception& e) {
      block_failure("draw_coefficients_and_sigma", iter, e);
    }

    int past_burn = iter - config.n_burn;
    if (past_burn >= 0 && (past_burn + 1) % config.thin == 0) {
      PosteriorDraw d;
      d.A = coef.A;
      d.intercept = coef.intercept;
      d.Sigma = coef.Sigma;
      d.h = h;
      d.mu_h = sv.mu_h;
      d.rho_h = sv.rho_h;
      d.sigma_h = sv.sigma_h();
      d.weekly = states.weekly;
      draws.push_back(std::move(d));
    }
  }
  return draws;
}

}  // namespace mfvar
