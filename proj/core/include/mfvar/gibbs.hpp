#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mfvar/coefficients.hpp"
#include "mfvar/kalman.hpp"
#include "mfvar/panel.hpp"
#include "mfvar/sv.hpp"

namespace mfvar {

struct ChainConfig {
  int n_draws = 1000;
  int n_burn = 500;
  int thin = 1;
  std::uint64_t seed = 1;
  int P = 4;
  double state_prior_var = 10.0;     // diffuse-proxy anchor variance
  std::optional<double> fix_h;       // pin h_t to this value, skip SV blocks

  void validate() const;
};

/// One retained Gibbs draw. h is stored unnormalized; normalized_h /
/// normalized_sigma report the identified split h - mean(h), e^{mean(h)} Sigma.
struct PosteriorDraw {
  Eigen::MatrixXd A;          // M x (M*P)
  Eigen::VectorXd intercept;  // M
  Eigen::MatrixXd Sigma;      // M x M
  Eigen::VectorXd h;          // T
  double mu_h = 0.0;
  double rho_h = 0.0;
  double sigma_h = 0.0;
  Eigen::MatrixXd weekly;     // T x M latent weekly panel

  int M() const { return static_cast<int>(Sigma.rows()); }
  int P() const { return static_cast<int>(A.cols()) / M(); }
  Eigen::VectorXd normalized_h() const;
  Eigen::MatrixXd normalized_sigma() const;
};

/// Reduced-form residuals eps_t = y_t - sum_l A_l y_{t-l} - c for
/// t = P..T-1 (one row each).
Eigen::MatrixXd var_residuals(const Eigen::MatrixXd& weekly,
                              const Eigen::MatrixXd& A,
                              const Eigen::VectorXd& intercept, int P);

/// Gibbs sampler cycling states -> h -> SV parameters -> (A, Sigma).
/// Deterministic for a given seed. Block failures are rethrown with the
/// block name and iteration number.
std::vector<PosteriorDraw> gibbs_run(const MixedPanel& panel,
                                     const VarPrior& prior,
                                     const ChainConfig& config);

}  // namespace mfvar
