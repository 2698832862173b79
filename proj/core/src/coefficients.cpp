#include "mfvar/coefficients.hpp"

#include <cmath>
#include <stdexcept>

#include "mfvar/linalg.hpp"

namespace mfvar {

ScaledRegression build_regression(const StatePath& states,
                                  const Eigen::VectorXd& h,
                                  bool include_intercept) {
  const int T = static_cast<int>(states.weekly.rows());
  const int M = static_cast<int>(states.weekly.cols());
  const int P = states.P;
  const int n = T - P;
  const int Kr = M * P + (include_intercept ? 1 : 0);
  if (h.size() != T)
    throw std::invalid_argument("build_regression: h must have T entries");
  if (n < 1) throw std::invalid_argument("build_regression: sample too short");

  ScaledRegression reg;
  reg.X.resize(n, Kr);
  reg.Y.resize(n, M);
  for (int t = P; t < T; ++t) {
    double w = std::exp(-0.5 * h[t]);
    int r = t - P;
    for (int l = 1; l <= P; ++l)
      reg.X.row(r).segment((l - 1) * M, M) = w * states.weekly.row(t - l);
    if (include_intercept) reg.X(r, Kr - 1) = w;
    reg.Y.row(r) = w * states.weekly.row(t);
  }
  return reg;
}

ConjugateParts conjugate_parts(const VarPrior& prior, int M, int P) {
  const auto& hyper = prior.minnesota;
  if (hyper.scale_estimates.size() != M)
    throw std::invalid_argument(
        "conjugate_parts: scale estimates required for all M variables");
  const int Kr = M * P + (prior.include_intercept ? 1 : 0);
  ConjugateParts parts;
  parts.beta_bar = Eigen::MatrixXd::Zero(Kr, M);
  if (hyper.prior_mean_own_first_lag.size() == M)
    for (int i = 0; i < M; ++i)
      parts.beta_bar(i, i) = hyper.prior_mean_own_first_lag[i];
  parts.omega_diag.resize(Kr);
  const double l2 = hyper.lambda_overall * hyper.lambda_overall;
  for (int l = 1; l <= P; ++l) {
    double decay = std::pow(static_cast<double>(l), 2.0 * hyper.lambda_lag_decay);
    for (int j = 0; j < M; ++j) {
      double sj = hyper.scale_estimates[j];
      parts.omega_diag[(l - 1) * M + j] = l2 / (decay * sj * sj);
    }
  }
  if (prior.include_intercept)
    parts.omega_diag[Kr - 1] =
        l2 * hyper.lambda_intercept * hyper.lambda_intercept;
  return parts;
}

namespace {

CoefficientDraw split_draw(const Eigen::MatrixXd& beta, int M, int P,
                           bool include_intercept,
                           const Eigen::MatrixXd& sigma) {
  CoefficientDraw draw;
  draw.A = beta.topRows(M * P).transpose();
  draw.intercept = include_intercept ? Eigen::VectorXd(beta.row(M * P))
                                     : Eigen::VectorXd::Zero(M);
  draw.Sigma = sigma;
  return draw;
}

CoefficientDraw draw_conjugate(const ScaledRegression& reg,
                               const VarPrior& prior, int M, int P, Rng& rng) {
  ConjugateParts parts = conjugate_parts(prior, M, P);
  const int Kr = static_cast<int>(parts.omega_diag.size());
  const int n = static_cast<int>(reg.X.rows());

  Eigen::MatrixXd prec = reg.X.transpose() * reg.X;
  prec.diagonal() += parts.omega_diag.cwiseInverse();
  Eigen::LLT<Eigen::MatrixXd> llt(symmetrize(prec));
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(
        "draw_coefficients_and_sigma: Gram matrix numerically singular");
  Eigen::MatrixXd rhs = reg.X.transpose() * reg.Y +
                        parts.omega_diag.cwiseInverse().asDiagonal() *
                            parts.beta_bar;
  Eigen::MatrixXd beta_n = llt.solve(rhs);

  // Residual form of the posterior scale keeps it positive semi-definite.
  Eigen::MatrixXd resid = reg.Y - reg.X * beta_n;
  Eigen::MatrixXd prior_gap = beta_n - parts.beta_bar;
  Eigen::MatrixXd S_n =
      prior.csv.iw_scale_for(M) + resid.transpose() * resid +
      prior_gap.transpose() *
          (parts.omega_diag.cwiseInverse().asDiagonal() * prior_gap);
  double nu_n = prior.csv.iw_df_for(M) + n;

  Eigen::MatrixXd sigma = draw_inverse_wishart(nu_n, symmetrize(S_n), rng);
  // beta | Sigma: beta_n + chol(prec)^{-T} Z chol(Sigma)'.
  Eigen::MatrixXd Z = rng.normal_matrix(Kr, M);
  Eigen::MatrixXd W = llt.matrixU().solve(Z);
  Eigen::MatrixXd beta =
      beta_n + W * chol_lower(sigma, "draw_coefficients_and_sigma").transpose();
  return split_draw(beta, M, P, prior.include_intercept, sigma);
}

CoefficientDraw draw_independent(const ScaledRegression& reg,
                                 const VarPrior& prior, int M, int P, Rng& rng,
                                 const CoefficientDraw& current) {
  const int n = static_cast<int>(reg.X.rows());
  const int Kr = static_cast<int>(reg.X.cols());

  // Sigma | A: inverse Wishart on the scaled residuals.
  Eigen::MatrixXd beta_cur(Kr, M);
  beta_cur.topRows(M * P) = current.A.transpose();
  if (prior.include_intercept) beta_cur.row(M * P) = current.intercept.transpose();
  Eigen::MatrixXd resid = reg.Y - reg.X * beta_cur;
  Eigen::MatrixXd sigma = draw_inverse_wishart(
      prior.csv.iw_df_for(M) + n,
      symmetrize(prior.csv.iw_scale_for(M) + resid.transpose() * resid), rng);

  // vec(A) | Sigma: Gaussian with the exact diagonal Minnesota covariance.
  // Layout: vec stacks equations fastest (column index = regressor).
  MinnesotaMoments mom = minnesota_moments(prior.minnesota, M, P);
  Eigen::VectorXd prior_prec(M * Kr), prior_mean(M * Kr);
  for (int r = 0; r < Kr; ++r) {
    for (int i = 0; i < M; ++i) {
      int k = r * M + i;
      if (r < M * P) {
        prior_prec[k] = 1.0 / mom.variance(i, r);
        prior_mean[k] = mom.mean(i, r);
      } else {
        double s = prior.minnesota.scale_estimates[i] *
                   prior.minnesota.lambda_overall *
                   prior.minnesota.lambda_intercept;
        prior_prec[k] = 1.0 / (s * s);
        prior_mean[k] = 0.0;
      }
    }
  }
  Eigen::MatrixXd sigma_inv = pinv_sym(sigma).inverse;
  Eigen::MatrixXd gram = reg.X.transpose() * reg.X;
  Eigen::MatrixXd prec(M * Kr, M * Kr);
  for (int r = 0; r < Kr; ++r)
    for (int c = 0; c < Kr; ++c)
      prec.block(r * M, c * M, M, M) = gram(r, c) * sigma_inv;
  prec.diagonal() += prior_prec;
  Eigen::VectorXd lin = prior_prec.asDiagonal() * prior_mean;
  Eigen::MatrixXd xty = reg.X.transpose() * reg.Y;  // Kr x M
  for (int r = 0; r < Kr; ++r)
    lin.segment(r * M, M) += sigma_inv * xty.row(r).transpose();

  Eigen::LLT<Eigen::MatrixXd> llt(symmetrize(prec));
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(
        "draw_coefficients_and_sigma: Gram matrix numerically singular");
  Eigen::VectorXd mean = llt.solve(lin);
  Eigen::VectorXd draw_vec =
      mean + llt.matrixU().solve(rng.normal_vector(M * Kr));

  Eigen::MatrixXd beta(Kr, M);
  for (int r = 0; r < Kr; ++r)
    beta.row(r) = draw_vec.segment(r * M, M).transpose();
  return split_draw(beta, M, P, prior.include_intercept, sigma);
}

}  // namespace

CoefficientDraw draw_coefficients_and_sigma(
    const StatePath& states, const Eigen::VectorXd& h, const VarPrior& prior,
    Rng& rng, std::optional<CoefficientDraw> current) {
  const int M = static_cast<int>(states.weekly.cols());
  const int P = states.P;
  if (!states.weekly.allFinite())
    throw std::invalid_argument(
        "draw_coefficients_and_sigma: states must be complete");
  ScaledRegression reg = build_regression(states, h, prior.include_intercept);
  if (prior.form == MinnesotaForm::conjugate)
    return draw_conjugate(reg, prior, M, P, rng);
  if (!current)
    throw std::invalid_argument(
        "draw_coefficients_and_sigma: independent form needs the current draw");
  return draw_independent(reg, prior, M, P, rng, *current);
}

CoefficientDraw draw_coefficients_prior(const VarPrior& prior, int M, int P,
                                        Rng& rng) {
  ConjugateParts parts = conjugate_parts(prior, M, P);
  const int Kr = static_cast<int>(parts.omega_diag.size());
  Eigen::MatrixXd sigma = draw_inverse_wishart(prior.csv.iw_df_for(M),
                                               prior.csv.iw_scale_for(M), rng);
  Eigen::MatrixXd beta =
      parts.beta_bar +
      parts.omega_diag.cwiseSqrt().asDiagonal() * rng.normal_matrix(Kr, M) *
          chol_lower(sigma, "draw_coefficients_prior").transpose();
  return split_draw(beta, M, P, prior.include_intercept, sigma);
}

}  // namespace mfvar
