#pragma once

#include <array>

#include <Eigen/Dense>

#include "mfvar/priors.hpp"
#include "mfvar/rng.hpp"

namespace mfvar {

/// Ten-component Gaussian mixture approximation to the log chi-squared(1)
/// distribution (Omori, Chib, Shephard & Nakajima 2007).
struct LogChi2Mixture {
  static constexpr int kComponents = 10;
  static const std::array<double, 10> weight;
  static const std::array<double, 10> mean;
  static const std::array<double, 10> variance;

  static double mixture_mean();
};

/// Joint draw of the common log-volatility path h_{0..T-1}.
///
/// residuals holds eps_t for panel rows t = first_data_row..T-1 (one row
/// each). The residuals are orthogonalized by the lower Cholesky factor of
/// sigma, squared and logged (offset 1e-10), giving M conditionally
/// independent measurements of h_t per row; mixture indicators are drawn per
/// (variable, t) given the current path, then the path is redrawn from the
/// resulting linear-Gaussian model with AR(1) prior (stationary start).
/// Rows before first_data_row carry no measurement.
Eigen::VectorXd draw_h_path(const Eigen::MatrixXd& residuals,
                            const Eigen::MatrixXd& sigma, const SvParams& sv,
                            const Eigen::VectorXd& h_current,
                            int first_data_row, Rng& rng);

/// Full-conditional draw of (mu_h, rho_h, sigma2_h) given the h path:
/// Gaussian update for mu_h; independence Metropolis-Hastings for rho_h
/// (truncated-normal proposal from the AR regression, accept against the
/// Beta prior and the stationary-start term); Metropolis-Hastings for
/// sigma2_h under the Gamma prior (likelihood-matched inverse-gamma
/// proposal), or a direct draw when the prior is inverse gamma.
SvParams draw_sv_params(const Eigen::VectorXd& h, const CsvPrior& prior,
                        const SvParams& current, Rng& rng);

}  // namespace mfvar
