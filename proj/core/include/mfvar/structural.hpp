#pragma once

#include <set>
#include <vector>

#include <Eigen/Dense>

#include "mfvar/gibbs.hpp"

namespace mfvar {

/// Recursive identification for one posterior draw: B0 is the lower Cholesky
/// factor of e^{mu_h} Sigma (sample-average-volatility normalization), and
/// shocks holds u_t = e^{-h_t/2} B0^{-1} eps_t for t = P..T-1.
struct IdentifiedDraw {
  Eigen::MatrixXd B0;      // M x M lower triangular, positive diagonal
  Eigen::MatrixXd shocks;  // (T-P) x M
};

/// scale_log overrides the volatility level of the impact normalization
/// (default: the draw's mu_h). Throws on Cholesky failure; callers looping
/// over draws catch and count exclusions.
IdentifiedDraw identify(const PosteriorDraw& draw,
                        std::optional<double> scale_log = std::nullopt);

/// Impulse responses to a one-standard-deviation shock: row h holds
/// J F^h J' B0 e_j for horizons 0..H.
Eigen::MatrixXd irf(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B0,
                    int shock_index, int horizons);

/// Pointwise quantiles over per-draw response matrices.
struct IrfResult {
  std::vector<double> quantiles;        // e.g. {0.05, 0.5, 0.95}
  std::vector<Eigen::MatrixXd> bands;   // one (H+1) x M matrix per quantile
  int n_excluded = 0;                   // draws dropped by failed Cholesky
};
IrfResult summarize_irf(const std::vector<Eigen::MatrixXd>& per_draw,
                        const std::vector<double>& quantiles = {0.05, 0.5,
                                                                0.95});

/// Additive attribution of the latent weekly panel: one T x M slice per
/// structural shock, one initial-condition slice (rows before P live
/// entirely in the initial slice), and a deterministic slice when the model
/// carries an intercept. Slices sum to the weekly panel.
struct DecompositionResult {
  std::vector<Eigen::MatrixXd> shock_slices;  // M slices, T x M
  Eigen::MatrixXd initial;                    // T x M
  Eigen::MatrixXd deterministic;              // T x M (zero without intercept)

  Eigen::MatrixXd total() const;
};
DecompositionResult historical_decomposition(const PosteriorDraw& draw,
                                             const IdentifiedDraw& id);

/// Structural shocks to neutralize (set to zero) over a stamp window.
struct ScenarioSpec {
  std::set<int> shock_indices;  // 0-based positions in the variable order
  WeekStamp start;
  WeekStamp end;
};

/// Re-simulates the states from the window start with the draw's own
/// structural shocks, zeroing the selected ones inside the window. Returns
/// actual, counterfactual and difference panels; the difference is exactly
/// zero before the window.
struct CounterfactualResult {
  Eigen::MatrixXd actual;
  Eigen::MatrixXd counterfactual;
  Eigen::MatrixXd difference;
};
CounterfactualResult counterfactual(const PosteriorDraw& draw,
                                    const IdentifiedDraw& id,
                                    const std::vector<WeekStamp>& stamps,
                                    const ScenarioSpec& scenario);

/// Quantile bands per (time, variable) for the three panels; difference
/// bands are computed on per-draw differences.
struct CounterfactualBands {
  std::vector<double> quantiles;
  std::vector<Eigen::MatrixXd> actual;          // per quantile, T x M
  std::vector<Eigen::MatrixXd> counterfactual;  // per quantile, T x M
  std::vector<Eigen::MatrixXd> difference;      // per quantile, T x M
  int n_excluded = 0;
};
CounterfactualBands summarize_counterfactual(
    const std::vector<CounterfactualResult>& per_draw,
    const std::vector<double>& quantiles = {0.05, 0.5, 0.95});

}  // namespace mfvar
