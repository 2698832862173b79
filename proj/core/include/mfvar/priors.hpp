#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mfvar/panel.hpp"
#include "mfvar/rng.hpp"

namespace mfvar {

/// Minnesota shrinkage hyperparameters. The implied prior variance of the
/// coefficient on variable j at lag l in equation i is
///   (lambda_overall^2 / l^{2 lambda_lag_decay}) *
///   (1 if i == j else lambda_cross^2 * s_i^2 / s_j^2).
struct MinnesotaHyper {
  double lambda_overall = 0.2;
  double lambda_cross = 0.5;
  double lambda_lag_decay = 1.0;
  double lambda_intercept = 100.0;  // relative scale of the intercept prior
  Eigen::VectorXd prior_mean_own_first_lag;  // per variable; empty = zeros
  Eigen::VectorXd scale_estimates;           // s_i, from univariate AR(4) fits
};

/// Residual standard deviations from per-column AR(4)+intercept fits on the
/// observed (non-missing) values. Throws when a column has too few
/// observations or a zero residual scale.
Eigen::VectorXd ar4_scale_estimates(const MixedPanel& panel);
Eigen::VectorXd ar4_scale_estimates(const Eigen::MatrixXd& values,
                                    const std::vector<std::string>& names);

/// Prior mean and (diagonal) prior covariance of the coefficient matrix,
/// both shaped M x (M*P) in (equation, variable-lag) layout.
struct MinnesotaMoments {
  Eigen::MatrixXd mean;      // M x MP
  Eigen::MatrixXd variance;  // M x MP
};
MinnesotaMoments minnesota_moments(const MinnesotaHyper& hyper, int M, int P);

/// Priors on the common-volatility block and Sigma:
///   (rho_h + 1)/2 ~ Beta(rho_a, rho_b),  mu_h ~ N(mu_mean, mu_var),
///   sigma2_h ~ Gamma(shape, rate) (or inverse gamma when
///   sigma2_inverse_gamma is set),  Sigma ~ IW(iw_df, iw_scale).
struct CsvPrior {
  double rho_a = 25.0;
  double rho_b = 5.0;
  double mu_mean = 0.0;
  double mu_var = 10.0;
  double sigma2_shape = 0.5;
  double sigma2_rate = 0.5;
  bool sigma2_inverse_gamma = false;
  double iw_df = 0.0;            // 0 = default M + 2
  double iw_scale_diag = 0.1;    // used when iw_scale is left empty
  Eigen::MatrixXd iw_scale;      // empty = default iw_scale_diag * I

  double iw_df_for(int M) const { return iw_df > 0 ? iw_df : M + 2; }
  Eigen::MatrixXd iw_scale_for(int M) const;
  void validate(int M) const;
};

struct SvParams {
  double mu_h = 0.0;
  double rho_h = 0.0;
  double sigma2_h = 1.0;

  double sigma_h() const { return std::sqrt(sigma2_h); }
};

/// Direct draws from the priors (used for initialization and for
/// joint-distribution testing).
SvParams draw_sv_prior(const CsvPrior& prior, Rng& rng);
Eigen::MatrixXd draw_inverse_wishart(double df, const Eigen::MatrixXd& scale,
                                     Rng& rng);

}  // namespace mfvar
