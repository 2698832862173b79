#include "mfvar/dgp.hpp"

#include <cmath>
#include <stdexcept>

#include "mfvar/companion.hpp"
#include "mfvar/linalg.hpp"
#include "mfvar/rng.hpp"

namespace mfvar {

void DgpSpec::validate() const {
  if (M < 1 || M_L < 0 || M_L > M || P < 1 || T < 2 * P)
    throw std::invalid_argument("DgpSpec: invalid dimensions");
  if (M_L > 0 && P < 4)
    throw std::invalid_argument("DgpSpec: P >= 4 required with monthly block");
  if (A.rows() != M || A.cols() != M * P)
    throw std::invalid_argument("DgpSpec: A must be M x (M*P)");
  if (Sigma.rows() != M || Sigma.cols() != M)
    throw std::invalid_argument("DgpSpec: Sigma must be M x M");
  if (!(sigma_h >= 0.0) || (sigma_h > 0.0 && !(std::fabs(rho_h) < 1.0)))
    throw std::invalid_argument("DgpSpec: need sigma_h >= 0 and |rho_h| < 1");
  if (!ragged_tail.empty() && static_cast<int>(ragged_tail.size()) != M)
    throw std::invalid_argument("DgpSpec: ragged_tail needs one entry per variable");
  double radius =
      spectral_radius(build_companion(A).F);
  if (radius >= 1.0)
    throw std::invalid_argument("DgpSpec: explosive process, spectral radius " +
                                std::to_string(radius));
  chol_lower(Sigma, "DgpSpec::validate");
}

DgpOutput simulate(const DgpSpec& spec) {
  spec.validate();
  const int burn = 500;
  const int M = spec.M;
  const int P = spec.P;
  const int total = burn + spec.T;
  Rng rng(spec.seed);

  Eigen::MatrixXd chol = chol_lower(spec.Sigma, "simulate");
  Eigen::VectorXd c = spec.intercept.size() == M
                          ? Eigen::VectorXd(spec.intercept)
                          : Eigen::VectorXd::Zero(M);

  // Volatility path with a stationary start.
  Eigen::VectorXd h_full(total);
  if (spec.sigma_h > 0.0) {
    h_full[0] = spec.mu_h +
                spec.sigma_h / std::sqrt(1.0 - spec.rho_h * spec.rho_h) *
                    rng.normal();
    for (int t = 1; t < total; ++t)
      h_full[t] = spec.mu_h + spec.rho_h * (h_full[t - 1] - spec.mu_h) +
                  spec.sigma_h * rng.normal();
  } else {
    h_full.setConstant(spec.mu_h);
  }

  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(total, M);
  Eigen::MatrixXd eps_full(total, M);
  std::vector<Eigen::VectorXd> lags(static_cast<size_t>(P),
                                    Eigen::VectorXd::Zero(M));
  for (int t = 0; t < total; ++t) {
    Eigen::VectorXd mean = c;
    for (int l = 1; l <= P; ++l)
      mean += spec.A.middleCols((l - 1) * M, M) * lags[static_cast<size_t>(l - 1)];
    Eigen::VectorXd eps =
        std::exp(0.5 * h_full[t]) * (chol * rng.normal_vector(M));
    Eigen::VectorXd yt = mean + eps;
    eps_full.row(t) = eps.transpose();
    y.row(t) = yt.transpose();
    for (int l = P - 1; l > 0; --l) lags[static_cast<size_t>(l)] = lags[static_cast<size_t>(l - 1)];
    lags[0] = yt;
  }

  DgpOutput out;
  out.weekly = y.bottomRows(spec.T);
  out.h = h_full.tail(spec.T);
  out.eps = eps_full.bottomRows(spec.T);

  MixedPanel panel;
  panel.stamps = build_calendar(spec.start, advance_weeks(spec.start, spec.T - 1));
  panel.values = Eigen::MatrixXd::Constant(spec.T, M, kMissing);
  panel.n_monthly = spec.M_L;
  panel.n_weekly = M - spec.M_L;
  for (int j = 0; j < M; ++j) {
    if (!spec.names.empty()) {
      panel.names.push_back(spec.names[static_cast<size_t>(j)]);
    } else if (j < spec.M_L) {
      panel.names.push_back("m" + std::to_string(j + 1));
    } else if (j == spec.M_L) {
      panel.names.push_back("policy");
    } else {
      panel.names.push_back("w" + std::to_string(j - spec.M_L));
    }
    int tail = spec.ragged_tail.empty() ? 0 : spec.ragged_tail[static_cast<size_t>(j)];
    int t_max = spec.T - tail;
    for (int t = 0; t < t_max; ++t) {
      if (j < spec.M_L) {
        if (panel.stamps[static_cast<size_t>(t)].is_month_end() && t >= 3)
          panel.values(t, j) = (out.weekly(t, j) + out.weekly(t - 1, j) +
                                out.weekly(t - 2, j) + out.weekly(t - 3, j)) /
                               4.0;
      } else {
        panel.values(t, j) = out.weekly(t, j);
      }
    }
  }
  panel.validate();
  out.panel = std::move(panel);
  return out;
}

DgpSpec default_dgp(int M, int M_L, int P, int T, std::uint64_t seed) {
  DgpSpec spec;
  spec.M = M;
  spec.M_L = M_L;
  spec.P = P;
  spec.T = T;
  spec.seed = seed;
  Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
  spec.A = Eigen::MatrixXd::Zero(M, M * P);
  for (int i = 0; i < M; ++i) {
    spec.A(i, i) = 0.45 + 0.1 * rng.uniform();
    spec.A(i, M + i) = 0.15;
    if (P >= 3) spec.A(i, 2 * M + i) = 0.05;
    for (int j = 0; j < M; ++j)
      if (i != j) spec.A(i, j) = 0.08 * (rng.uniform() - 0.5);
  }
  Eigen::MatrixXd G = rng.normal_matrix(M, M) / std::sqrt(static_cast<double>(M));
  spec.Sigma = symmetrize(0.2 * G * G.transpose() +
                          Eigen::MatrixXd::Identity(M, M));
  spec.mu_h = 0.0;
  spec.rho_h = 0.9;
  spec.sigma_h = 0.2;
  return spec;
}

}  // namespace mfvar
