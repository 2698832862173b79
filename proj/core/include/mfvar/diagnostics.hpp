#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mfvar/gibbs.hpp"

namespace mfvar {

/// Effective sample size of one chain via the initial-monotone-sequence
/// autocorrelation estimator. A zero-variance chain reports 1.
double effective_sample_size(const Eigen::VectorXd& chain);

/// Split R-hat: each chain is halved and the usual between/within variance
/// ratio is computed over the 2*m half-chains. Zero-variance input reports 1.
double split_rhat(const std::vector<Eigen::VectorXd>& chains);

struct ScalarDiagnostic {
  std::string name;
  double ess = 0.0;   // summed over chains
  double rhat = 1.0;
  bool flagged = false;  // rhat above threshold or degenerate ESS
};

struct ChainDiagnostics {
  std::vector<ScalarDiagnostic> scalars;
  double max_rhat = 1.0;
  bool any_flagged = false;
};

/// Per-scalar ESS and split R-hat over the monitored functionals of the
/// draws: coefficient entries, the normalized-scale Sigma entries
/// (e^{mean h} Sigma, the identified object), rho_h and sigma_h. Scalars
/// with R-hat above the threshold are flagged.
ChainDiagnostics chain_diagnostics(
    const std::vector<std::vector<PosteriorDraw>>& chains,
    double rhat_threshold = 1.1);

/// Pointwise sample quantile, linear interpolation between order statistics
/// (type 7). q in [0, 1].
double quantile(std::vector<double> values, double q);

}  // namespace mfvar
