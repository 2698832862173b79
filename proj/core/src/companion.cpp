#include "mfvar/companion.hpp"

#include <stdexcept>
#include <string>

namespace mfvar {

Eigen::MatrixXd CompanionSystem::innovation_loading() const {
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(K(), M);
  L.topRows(M).setIdentity();
  return L;
}

Eigen::MatrixXd CompanionSystem::selector() const {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(M, K());
  J.leftCols(M).setIdentity();
  return J;
}

CompanionSystem build_companion(const Eigen::MatrixXd& A_stacked,
                                const Eigen::VectorXd& intercept) {
  const int M = static_cast<int>(A_stacked.rows());
  if (M < 1 || A_stacked.cols() % M != 0)
    throw std::invalid_argument(
        "build_companion: coefficient block must be M x (M*P), got " +
        std::to_string(A_stacked.rows()) + " x " +
        std::to_string(A_stacked.cols()));
  const int P = static_cast<int>(A_stacked.cols()) / M;
  const int K = M * P;

  CompanionSystem sys;
  sys.M = M;
  sys.P = P;
  sys.F = Eigen::MatrixXd::Zero(K, K);
  sys.F.topRows(M) = A_stacked;
  if (P > 1)
    sys.F.block(M, 0, K - M, K - M).setIdentity();
  sys.intercept = Eigen::VectorXd::Zero(K);
  if (intercept.size() > 0) {
    if (intercept.size() != M)
      throw std::invalid_argument("build_companion: intercept must have M entries");
    sys.intercept.head(M) = intercept;
  }
  return sys;
}

CompanionSystem build_companion(const std::vector<Eigen::MatrixXd>& A) {
  if (A.empty()) throw std::invalid_argument("build_companion: P must be >= 1");
  const int M = static_cast<int>(A[0].rows());
  Eigen::MatrixXd stacked(M, M * static_cast<int>(A.size()));
  for (size_t l = 0; l < A.size(); ++l) {
    if (A[l].rows() != M || A[l].cols() != M)
      throw std::invalid_argument("build_companion: lag matrix " +
                                  std::to_string(l + 1) + " is not M x M");
    stacked.middleCols(static_cast<int>(l) * M, M) = A[l];
  }
  return build_companion(stacked);
}

ObservationMap build_observation_map(const MixedPanel& panel, int P) {
  const int M = panel.cols();
  const int M_L = panel.n_monthly;
  if (P < 1)
    throw std::invalid_argument("build_observation_map: P must be >= 1");
  if (M_L > 0 && P < 4)
    throw std::invalid_argument(
        "build_observation_map: P >= 4 required to represent the four-week "
        "aggregation constraint, got P = " + std::to_string(P));

  ObservationMap map;
  map.T = panel.rows();
  map.M = M;
  map.M_L = M_L;
  map.P = P;
  map.Lambda = Eigen::MatrixXd::Zero(M, M * P);
  for (int i = 0; i < M_L; ++i)
    for (int l = 0; l < 4; ++l) map.Lambda(i, l * M + i) = 0.25;
  for (int i = M_L; i < M; ++i) map.Lambda(i, i) = 1.0;

  map.obs = panel.values;
  map.active.resize(static_cast<size_t>(map.T));
  for (int t = 0; t < map.T; ++t) {
    for (int i = 0; i < M; ++i) {
      if (is_missing(panel.values(t, i))) continue;
      if (i < M_L) {
        if (t < 3) {  // aggregation lags precede the sample
          ++map.dropped_initial_monthly;
          map.obs(t, i) = kMissing;
          continue;
        }
      }
      map.active[static_cast<size_t>(t)].push_back(i);
    }
  }
  return map;
}

}  // namespace mfvar
