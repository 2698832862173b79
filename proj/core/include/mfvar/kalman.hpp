#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mfvar/companion.hpp"
#include "mfvar/rng.hpp"

namespace mfvar {

/// Observations entering the filter at one step, already expressed as exact
/// linear functionals of the state: value = loading * z (no measurement
/// noise). `vars` records the originating variable index of each row.
struct ObsBlock {
  Eigen::MatrixXd loading;  // n x K
  Eigen::VectorXd value;    // n
  std::vector<int> vars;
};

/// Anchored state-space problem. The state sequence starts at panel row
/// `anchor` with prior N(init_mean, init_cov); transitions t -> t+1 use
/// innovation covariance e^{log_scale[t+1]} * sigma (in the first lag block
/// only). blocks[s] holds the observations treated at panel row anchor + s;
/// blocks[0] stacks everything observed in rows 0..anchor onto the anchor
/// state.
struct SsmProblem {
  const CompanionSystem* sys = nullptr;
  int anchor = 0;
  Eigen::VectorXd init_mean;
  Eigen::MatrixXd init_cov;
  std::vector<ObsBlock> blocks;
  Eigen::MatrixXd sigma;      // M x M base innovation covariance
  Eigen::VectorXd log_scale;  // length T (panel rows); entries <= anchor unused

  int steps() const { return static_cast<int>(blocks.size()); }
  int K() const { return sys->K(); }
};

/// Builds the anchored problem from an observation map. When
/// fold_initial_obs is false, blocks[0] is empty (used by tests that supply
/// an exact anchor distribution).
SsmProblem build_ssm(const ObservationMap& map, const CompanionSystem& sys,
                     const Eigen::MatrixXd& sigma,
                     const Eigen::VectorXd& log_scale,
                     const Eigen::VectorXd& init_mean,
                     const Eigen::MatrixXd& init_cov,
                     bool fold_initial_obs = true);

/// Diffuse-proxy anchor: init_mean = 0, init_cov = prior_var * I.
SsmProblem build_ssm(const ObservationMap& map, const CompanionSystem& sys,
                     const Eigen::MatrixXd& sigma,
                     const Eigen::VectorXd& log_scale,
                     double prior_var = 10.0);

/// Forward Kalman pass under exact observation. Rank-deficient innovation
/// covariances are handled with a symmetric pseudo-inverse (eigenvalue floor
/// 1e-12 relative) and Joseph-form covariance updates.
struct FilterOutput {
  double loglik = 0.0;
  std::vector<Eigen::VectorXd> pred_mean;  // a_{t|t-1} (prior at step 0)
  std::vector<Eigen::MatrixXd> pred_cov;
  std::vector<Eigen::VectorXd> filt_mean;  // a_{t|t}
  std::vector<Eigen::MatrixXd> filt_cov;
  std::vector<Eigen::VectorXd> innov;      // v_t
  std::vector<Eigen::MatrixXd> sinv;       // pseudo-inverse of S_t
  std::vector<Eigen::MatrixXd> gain;       // P_{t|t-1} L' S^+
  std::vector<std::pair<int, int>> rank_deficient;  // (step, dropped count)
};

FilterOutput kalman_filter(const SsmProblem& problem);

/// Smoothed state means E[z_t | all observations], one row per step, via the
/// backward disturbance recursion. Needs the corresponding FilterOutput.
Eigen::MatrixXd smoother_mean(const SsmProblem& problem,
                              const FilterOutput& filter);

/// One joint draw of the latent weekly panel from its full conditional.
/// Algorithm: simulate an unconditional state/observation pair from the
/// model, smooth the observation difference, and add the correction (mean-
/// correction simulation smoothing). Active weekly observations are then
/// reproduced exactly in the returned panel.
struct StatePath {
  Eigen::MatrixXd weekly;  // T x M latent weekly panel
  int P = 0;

  /// z_t = (y_t', ..., y_{t-P+1}')' for t >= P-1.
  Eigen::VectorXd state(int t) const;
};

StatePath simulation_smoother(const SsmProblem& problem,
                              const ObservationMap& map, Rng& rng);

/// Smoothed-mean variant of the same panel extraction (the deterministic
/// counterpart of simulation_smoother).
StatePath smoothed_state_path(const SsmProblem& problem,
                              const ObservationMap& map);

/// Max |mean of four weekly latents - monthly observation| over all active
/// monthly cells, and max |weekly latent - observation| over active weekly
/// cells. Used to check the aggregation identity.
struct AggregationCheck {
  double max_monthly_gap = 0.0;
  double max_weekly_gap = 0.0;
};
AggregationCheck check_aggregation(const StatePath& path,
                                   const ObservationMap& map);

}  // namespace mfvar
