#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mfvar/panel.hpp"

namespace mfvar {

/// Companion form of a VAR(P): z_t = F z_{t-1} + eta_t with
/// z_t = (y_t', ..., y_{t-P+1}')' of dimension K = P*M. The first M rows of
/// F hold (A_1, ..., A_P); the rows below shift the lag blocks. Only the
/// first M entries of eta_t are nonzero.
struct CompanionSystem {
  Eigen::MatrixXd F;           // K x K
  Eigen::VectorXd intercept;   // K, zero outside the first M entries
  int M = 0;
  int P = 0;

  int K() const { return M * P; }

  /// K x M matrix mapping eps_t into eta_t (identity block over zeros).
  Eigen::MatrixXd innovation_loading() const;

  /// M x K selector J with y_t = J z_t.
  Eigen::MatrixXd selector() const;

  /// The stacked coefficient block (A_1, ..., A_P), i.e. the first M rows.
  Eigen::MatrixXd coefficient_rows() const { return F.topRows(M); }
};

/// A_stacked is M x (M*P) = [A_1 ... A_P].
CompanionSystem build_companion(const Eigen::MatrixXd& A_stacked,
                                const Eigen::VectorXd& intercept = {});

CompanionSystem build_companion(const std::vector<Eigen::MatrixXd>& A);

/// Observation loading x_t = M_t Lambda z_t. Monthly rows carry four 1/4
/// weights across the current and three lagged positions of the variable;
/// weekly rows are unit selectors on the current block. A row is active when
/// the panel value exists (and, for monthly rows, all four latent lags lie
/// inside the state).
struct ObservationMap {
  Eigen::MatrixXd Lambda;                // M x K
  std::vector<std::vector<int>> active;  // per panel row: active variable ids
  Eigen::MatrixXd obs;                   // T x M panel values (NaN inactive)
  int T = 0;
  int M = 0;
  int M_L = 0;
  int P = 0;
  int dropped_initial_monthly = 0;  // month-ends whose lags precede the sample

  int K() const { return M * P; }
};

ObservationMap build_observation_map(const MixedPanel& panel, int P);

}  // namespace mfvar
