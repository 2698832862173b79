#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "mfvar/calendar.hpp"
#include "mfvar/panel.hpp"
#include "mfvar/priors.hpp"

namespace mfvar {

/// Ground-truth process for tests and synthetic experiments.
struct DgpSpec {
  int M = 2;
  int M_L = 1;
  int P = 4;
  int T = 200;
  std::uint64_t seed = 1;
  Eigen::MatrixXd A;          // M x (M*P)
  Eigen::VectorXd intercept;  // optional, M entries
  Eigen::MatrixXd Sigma;      // M x M
  double mu_h = 0.0;
  double rho_h = 0.0;
  double sigma_h = 0.0;
  WeekStamp start{2011, 1};
  std::vector<int> ragged_tail;  // per variable: trailing missing weeks
  std::vector<std::string> names;  // optional; defaults m1..policy..w_k

  void validate() const;
};

struct DgpOutput {
  Eigen::MatrixXd weekly;  // T x M true latent panel
  MixedPanel panel;        // observed mixed-frequency panel
  Eigen::VectorXd h;       // T true log-volatility path
  Eigen::MatrixXd eps;     // T x M reduced-form innovations (burn-in removed)
};

/// Simulates the VAR forward with common-volatility noise, discarding a
/// 500-period burn-in, then forms monthly observations as exact four-week
/// means at month ends and copies weekly observations (with optional ragged
/// edge). Deterministic for a given spec and seed.
DgpOutput simulate(const DgpSpec& spec);

/// Convenience builder: diagonal-dominant stable coefficients and a
/// correlated Sigma, deterministic in the seed.
DgpSpec default_dgp(int M, int M_L, int P, int T, std::uint64_t seed);

}  // namespace mfvar
