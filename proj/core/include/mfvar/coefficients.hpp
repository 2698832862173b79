#pragma once

#include <optional>

#include <Eigen/Dense>

#include "mfvar/kalman.hpp"
#include "mfvar/priors.hpp"
#include "mfvar/rng.hpp"

namespace mfvar {

enum class MinnesotaForm {
  conjugate,    // matric-variate normal - inverse Wishart (Kronecker)
  independent,  // diagonal Litterman prior, A and Sigma drawn in turn
};

struct VarPrior {
  MinnesotaHyper minnesota;
  CsvPrior csv;
  MinnesotaForm form = MinnesotaForm::conjugate;
  bool include_intercept = false;
};

struct CoefficientDraw {
  Eigen::MatrixXd A;          // M x (M*P), stacked (A_1 ... A_P)
  Eigen::VectorXd intercept;  // M (zeros when the intercept is disabled)
  Eigen::MatrixXd Sigma;      // M x M
};

/// Regression design built from a latent state path: rows t = P..T-1 of
/// y_t on (y_{t-1}, ..., y_{t-P})[, 1], each scaled by e^{-h_t/2}.
struct ScaledRegression {
  Eigen::MatrixXd X;  // n x (M*P [+1])
  Eigen::MatrixXd Y;  // n x M
};
ScaledRegression build_regression(const StatePath& states,
                                  const Eigen::VectorXd& h,
                                  bool include_intercept);

/// Draws (A, Sigma) from the full conditional given states and h.
///
/// Conjugate form: Sigma from its inverse Wishart conditional with the
/// coefficients integrated out, then the coefficients from the matric-
/// variate normal given Sigma. The Kronecker row covariance uses
/// lambda_overall^2 / (l^{2 decay} s_j^2); an equation-specific cross
/// discount is not representable in this form.
///
/// Independent form: Sigma | A from its inverse Wishart conditional, then
/// vec(A) | Sigma from the Gaussian conditional under the exact diagonal
/// Minnesota covariance (lambda_cross binds).
CoefficientDraw draw_coefficients_and_sigma(const StatePath& states,
                                            const Eigen::VectorXd& h,
                                            const VarPrior& prior, Rng& rng,
                                            std::optional<CoefficientDraw>
                                                current = std::nullopt);

/// Prior draw from the same structures (conjugate form), used for
/// initialization and joint-distribution testing.
CoefficientDraw draw_coefficients_prior(const VarPrior& prior, int M, int P,
                                        Rng& rng);

/// Conjugate-form prior mean and row covariance diagonal (exposed for the
/// reference computations in tests).
struct ConjugateParts {
  Eigen::MatrixXd beta_bar;   // K_r x M
  Eigen::VectorXd omega_diag; // K_r
};
ConjugateParts conjugate_parts(const VarPrior& prior, int M, int P);

}  // namespace mfvar
