#include "mfvar/priors.hpp"

#include <cmath>
#include <stdexcept>

#include "mfvar/linalg.hpp"

namespace mfvar {

namespace {

double ar4_residual_sd(const std::vector<double>& obs, const std::string& name) {
  const int p = 4;
  const int n = static_cast<int>(obs.size()) - p;
  if (n < p + 3)
    throw std::runtime_error("ar4_scale_estimates: series '" + name +
                             "' has too few observations (" +
                             std::to_string(obs.size()) + ")");
  Eigen::MatrixXd X(n, p + 1);
  Eigen::VectorXd y(n);
  for (int t = 0; t < n; ++t) {
    y[t] = obs[static_cast<size_t>(t + p)];
    X(t, 0) = 1.0;
    for (int l = 1; l <= p; ++l) X(t, l) = obs[static_cast<size_t>(t + p - l)];
  }
  Eigen::VectorXd beta =
      (X.transpose() * X).ldlt().solve(X.transpose() * y);
  double ssr = (y - X * beta).squaredNorm();
  double s2 = ssr / (n - p - 1);
  if (!(s2 > 0.0))
    throw std::runtime_error("ar4_scale_estimates: zero residual scale for '" +
                             name + "'");
  return std::sqrt(s2);
}

}  // namespace

Eigen::VectorXd ar4_scale_estimates(const Eigen::MatrixXd& values,
                                    const std::vector<std::string>& names) {
  const int M = static_cast<int>(values.cols());
  Eigen::VectorXd s(M);
  for (int j = 0; j < M; ++j) {
    std::vector<double> obs;
    for (int t = 0; t < values.rows(); ++t)
      if (!is_missing(values(t, j))) obs.push_back(values(t, j));
    s[j] = ar4_residual_sd(obs, j < static_cast<int>(names.size())
                                    ? names[static_cast<size_t>(j)]
                                    : std::to_string(j));
  }
  return s;
}

Eigen::VectorXd ar4_scale_estimates(const MixedPanel& panel) {
  return ar4_scale_estimates(panel.values, panel.names);
}

MinnesotaMoments minnesota_moments(const MinnesotaHyper& hyper, int M, int P) {
  if (hyper.scale_estimates.size() != M)
    throw std::invalid_argument(
        "minnesota_moments: scale estimates required for all M variables");
  for (int i = 0; i < M; ++i)
    if (!(hyper.scale_estimates[i] > 0.0))
      throw std::invalid_argument(
          "minnesota_moments: nonpositive scale estimate at variable " +
          std::to_string(i));

  MinnesotaMoments mom;
  mom.mean = Eigen::MatrixXd::Zero(M, M * P);
  mom.variance.resize(M, M * P);
  const double l2 = hyper.lambda_overall * hyper.lambda_overall;
  const double c2 = hyper.lambda_cross * hyper.lambda_cross;
  for (int i = 0; i < M; ++i) {
    if (hyper.prior_mean_own_first_lag.size() == M)
      mom.mean(i, i) = hyper.prior_mean_own_first_lag[i];
    for (int l = 1; l <= P; ++l) {
      double decay = std::pow(static_cast<double>(l), 2.0 * hyper.lambda_lag_decay);
      for (int j = 0; j < M; ++j) {
        double v = l2 / decay;
        if (i != j) {
          double si = hyper.scale_estimates[i];
          double sj = hyper.scale_estimates[j];
          v *= c2 * (si * si) / (sj * sj);
        }
        mom.variance(i, (l - 1) * M + j) = v;
      }
    }
  }
  return mom;
}

Eigen::MatrixXd CsvPrior::iw_scale_for(int M) const {
  if (iw_scale.size() == 0)
    return iw_scale_diag * Eigen::MatrixXd::Identity(M, M);
  return iw_scale;
}

void CsvPrior::validate(int M) const {
  if (!(rho_a > 0.0 && rho_b > 0.0 && mu_var > 0.0 && sigma2_shape > 0.0 &&
        sigma2_rate > 0.0))
    throw std::invalid_argument("CsvPrior: hyperparameters must be positive");
  if (!(iw_df_for(M) > M + 1))
    throw std::invalid_argument("CsvPrior: inverse Wishart df must exceed M+1");
  Eigen::MatrixXd s = iw_scale_for(M);
  if (s.rows() != M || s.cols() != M)
    throw std::invalid_argument("CsvPrior: inverse Wishart scale must be M x M");
  chol_lower(s, "CsvPrior::validate");
}

SvParams draw_sv_prior(const CsvPrior& prior, Rng& rng) {
  SvParams sv;
  sv.mu_h = prior.mu_mean + std::sqrt(prior.mu_var) * rng.normal();
  sv.rho_h = 2.0 * rng.beta(prior.rho_a, prior.rho_b) - 1.0;
  sv.sigma2_h = prior.sigma2_inverse_gamma
                    ? rng.inv_gamma(prior.sigma2_shape, prior.sigma2_rate)
                    : rng.gamma(prior.sigma2_shape, prior.sigma2_rate);
  return sv;
}

Eigen::MatrixXd draw_inverse_wishart(double df, const Eigen::MatrixXd& scale,
                                     Rng& rng) {
  // W ~ Wishart(df, scale^{-1}) by Bartlett decomposition, return W^{-1}.
  const int M = static_cast<int>(scale.rows());
  Eigen::MatrixXd scale_inv_chol =
      chol_lower(scale, "draw_inverse_wishart")
          .triangularView<Eigen::Lower>()
          .solve(Eigen::MatrixXd::Identity(M, M));
  // scale^{-1} = scale_inv_chol' * scale_inv_chol; C with C C' = scale^{-1}:
  Eigen::MatrixXd C = chol_lower(
      scale_inv_chol.transpose() * scale_inv_chol, "draw_inverse_wishart");
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(M, M);
  for (int i = 0; i < M; ++i) {
    A(i, i) = std::sqrt(rng.chi_squared(df - i));
    for (int j = 0; j < i; ++j) A(i, j) = rng.normal();
  }
  Eigen::MatrixXd L = C * A;  // W = L L'
  Eigen::MatrixXd Linv =
      L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(M, M));
  return symmetrize(Linv.transpose() * Linv);
}

}  // namespace mfvar
