#include "mfvar/sv.hpp"

#include <cmath>
#include <stdexcept>

#include "mfvar/linalg.hpp"

namespace mfvar {

const std::array<double, 10> LogChi2Mixture::weight = {
    0.00609, 0.04775, 0.13057, 0.20674, 0.22715,
    0.18842, 0.12047, 0.05591, 0.01575, 0.00115};
const std::array<double, 10> LogChi2Mixture::mean = {
    1.92677, 1.34744, 0.73504, 0.02266, -0.85173,
    -1.97278, -3.46788, -5.55246, -8.68384, -14.65000};
const std::array<double, 10> LogChi2Mixture::variance = {
    0.11265, 0.17788, 0.26768, 0.40611, 0.62699,
    0.98583, 1.57469, 2.54498, 4.16591, 7.33342};

double LogChi2Mixture::mixture_mean() {
  double m = 0.0;
  for (int j = 0; j < kComponents; ++j) m += weight[j] * mean[j];
  return m;
}

Eigen::VectorXd draw_h_path(const Eigen::MatrixXd& residuals,
                            const Eigen::MatrixXd& sigma, const SvParams& sv,
                            const Eigen::VectorXd& h_current,
                            int first_data_row, Rng& rng) {
  const int T = static_cast<int>(h_current.size());
  const int n = static_cast<int>(residuals.rows());
  const int M = static_cast<int>(residuals.cols());
  if (first_data_row + n != T)
    throw std::invalid_argument(
        "draw_h_path: residual rows must cover first_data_row..T-1");
  if (!(sv.sigma2_h > 0.0) || !(std::fabs(sv.rho_h) < 1.0))
    throw std::invalid_argument("draw_h_path: need sigma2_h > 0, |rho_h| < 1");

  // Orthogonalize: e_t = L^{-1} eps_t, then y*_{ti} = log(e_{ti}^2 + 1e-10).
  Eigen::MatrixXd L = chol_lower(sigma, "draw_h_path");
  Eigen::MatrixXd e =
      L.triangularView<Eigen::Lower>().solve(residuals.transpose());
  Eigen::MatrixXd ystar(n, M);
  for (int t = 0; t < n; ++t)
    for (int i = 0; i < M; ++i)
      ystar(t, i) = std::log(e(i, t) * e(i, t) + 1e-10);

  // Mixture indicators given the current path.
  const auto& w = LogChi2Mixture::weight;
  const auto& m = LogChi2Mixture::mean;
  const auto& v2 = LogChi2Mixture::variance;
  double inv_sd[10], log_norm[10];
  for (int j = 0; j < 10; ++j) {
    inv_sd[j] = 1.0 / std::sqrt(v2[j]);
    log_norm[j] = std::log(w[j] * inv_sd[j]);
  }
  Eigen::MatrixXi idx(n, M);
  double cum[10];
  for (int t = 0; t < n; ++t) {
    double ht = h_current[first_data_row + t];
    for (int i = 0; i < M; ++i) {
      double resid = ystar(t, i) - ht;
      double acc = 0.0;
      for (int j = 0; j < 10; ++j) {
        double z = (resid - m[j]) * inv_sd[j];
        acc += std::exp(log_norm[j] - 0.5 * z * z);
        cum[j] = acc;
      }
      idx(t, i) = rng.categorical_from_cumulative(cum, 10);
    }
  }

  // Tridiagonal precision of g = h - mu: AR(1) with stationary start plus
  // per-period measurement precisions.
  const double s2inv = 1.0 / sv.sigma2_h;
  const double rho = sv.rho_h;
  Eigen::VectorXd diag(T), covec = Eigen::VectorXd::Zero(T);
  for (int t = 0; t < T; ++t) {
    double d = (t == 0 ? (1.0 - rho * rho) : 1.0) * s2inv;
    if (t < T - 1) d += rho * rho * s2inv;
    diag[t] = d;
  }
  const double offdiag = -rho * s2inv;
  for (int t = 0; t < n; ++t) {
    int row = first_data_row + t;
    for (int i = 0; i < M; ++i) {
      int j = idx(t, i);
      double prec = 1.0 / v2[j];
      diag[row] += prec;
      covec[row] += (ystar(t, i) - m[j] - sv.mu_h) * prec;
    }
  }

  // Cholesky of the tridiagonal precision, then forward/backward solves;
  // adding standard normals between the solves yields a draw with the
  // correct covariance.
  Eigen::VectorXd chol_d(T), chol_o(T - 1 > 0 ? T - 1 : 0);
  chol_d[0] = std::sqrt(diag[0]);
  for (int t = 1; t < T; ++t) {
    chol_o[t - 1] = offdiag / chol_d[t - 1];
    chol_d[t] = std::sqrt(diag[t] - chol_o[t - 1] * chol_o[t - 1]);
  }
  Eigen::VectorXd wvec(T);
  wvec[0] = covec[0] / chol_d[0];
  for (int t = 1; t < T; ++t)
    wvec[t] = (covec[t] - chol_o[t - 1] * wvec[t - 1]) / chol_d[t];
  for (int t = 0; t < T; ++t) wvec[t] += rng.normal();
  Eigen::VectorXd g(T);
  g[T - 1] = wvec[T - 1] / chol_d[T - 1];
  for (int t = T - 2; t >= 0; --t)
    g[t] = (wvec[t] - chol_o[t] * g[t + 1]) / chol_d[t];

  return g.array() + sv.mu_h;
}

SvParams draw_sv_params(const Eigen::VectorXd& h, const CsvPrior& prior,
                        const SvParams& current, Rng& rng) {
  const int T = static_cast<int>(h.size());
  if (T < 4) throw std::invalid_argument("draw_sv_params: path too short");
  SvParams sv = current;

  // mu_h | h, rho, sigma2: Gaussian.
  {
    double s2inv = 1.0 / sv.sigma2_h;
    double rho = sv.rho_h;
    double prec = 1.0 / prior.mu_var + (1.0 - rho * rho) * s2inv +
                  (T - 1) * (1.0 - rho) * (1.0 - rho) * s2inv;
    double lin = prior.mu_mean / prior.mu_var + h[0] * (1.0 - rho * rho) * s2inv;
    for (int t = 1; t < T; ++t)
      lin += (1.0 - rho) * (h[t] - rho * h[t - 1]) * s2inv;
    sv.mu_h = lin / prec + rng.normal() / std::sqrt(prec);
  }

  Eigen::VectorXd g = h.array() - sv.mu_h;
  double sum_gg1 = 0.0, sum_g1g1 = 0.0;
  for (int t = 1; t < T; ++t) {
    sum_gg1 += g[t] * g[t - 1];
    sum_g1g1 += g[t - 1] * g[t - 1];
  }

  // rho_h: independence MH. The truncated-normal proposal equals the
  // conditional likelihood of rho from t >= 1, so only the Beta prior and
  // the stationary-start term enter the acceptance ratio.
  {
    double s2 = sv.sigma2_h;
    if (sum_g1g1 > 0.0) {
      double rho_hat = sum_gg1 / sum_g1g1;
      double prop_sd = std::sqrt(s2 / sum_g1g1);
      double cand = rng.trunc_normal(rho_hat, prop_sd, -1.0 + 1e-8, 1.0 - 1e-8);
      auto log_target = [&](double r) {
        return (prior.rho_a - 1.0) * std::log1p(r) +
               (prior.rho_b - 1.0) * std::log1p(-r) +
               0.5 * std::log1p(-r * r) -
               0.5 * (1.0 - r * r) * g[0] * g[0] / s2;
      };
      double log_acc = log_target(cand) - log_target(sv.rho_h);
      if (std::log(std::max(rng.uniform(), 1e-300)) < log_acc) sv.rho_h = cand;
    }
  }

  // sigma2_h: Q picks up the stationary start and the AR increments.
  {
    double rho = sv.rho_h;
    double Q = (1.0 - rho * rho) * g[0] * g[0];
    for (int t = 1; t < T; ++t) {
      double u = g[t] - rho * g[t - 1];
      Q += u * u;
    }
    if (prior.sigma2_inverse_gamma) {
      sv.sigma2_h = rng.inv_gamma(prior.sigma2_shape + 0.5 * T,
                                  prior.sigma2_rate + 0.5 * Q);
    } else {
      // Likelihood-matched proposal IG(T/2 - 1, Q/2); the Gamma prior ratio
      // is all that survives in the acceptance probability. Candidates that
      // underflow to zero are rejected (sigma2_h must stay positive).
      double cand = rng.inv_gamma(0.5 * T - 1.0, 0.5 * Q);
      if (cand > 0.0 && std::isfinite(cand)) {
        double log_acc = (prior.sigma2_shape - 1.0) *
                             (std::log(cand) - std::log(sv.sigma2_h)) -
                         prior.sigma2_rate * (cand - sv.sigma2_h);
        if (std::log(std::max(rng.uniform(), 1e-300)) < log_acc)
          sv.sigma2_h = cand;
      }
    }
  }
  return sv;
}

}  // namespace mfvar
