#include "mfvar/kalman.hpp"

#include <cmath>
#include <stdexcept>

#include "mfvar/linalg.hpp"

namespace mfvar {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

/// Stacks all observations from panel rows 0..anchor as functionals of the
/// anchor state z_anchor = (y_anchor', ..., y_0')'.
ObsBlock anchor_block(const ObservationMap& map, int anchor) {
  const int M = map.M;
  const int K = M * map.P;
  std::vector<std::pair<int, int>> rows;  // (panel row, variable)
  for (int t = 0; t <= anchor; ++t)
    for (int i : map.active[static_cast<size_t>(t)]) rows.push_back({t, i});

  ObsBlock block;
  block.loading = Eigen::MatrixXd::Zero(static_cast<int>(rows.size()), K);
  block.value.resize(static_cast<int>(rows.size()));
  int r = 0;
  for (auto [t, i] : rows) {
    int lag = anchor - t;  // y_t lives in lag block `lag` of z_anchor
    if (i < map.M_L) {
      for (int l = 0; l < 4; ++l)
        block.loading(r, (lag + l) * M + i) = 0.25;
    } else {
      block.loading(r, lag * M + i) = 1.0;
    }
    block.value[r] = map.obs(t, i);
    block.vars.push_back(i);
    ++r;
  }
  return block;
}

ObsBlock row_block(const ObservationMap& map, int t) {
  ObsBlock block;
  const auto& act = map.active[static_cast<size_t>(t)];
  block.loading.resize(static_cast<int>(act.size()), map.K());
  block.value.resize(static_cast<int>(act.size()));
  for (size_t r = 0; r < act.size(); ++r) {
    block.loading.row(static_cast<int>(r)) = map.Lambda.row(act[r]);
    block.value[static_cast<int>(r)] = map.obs(t, act[r]);
    block.vars.push_back(act[r]);
  }
  return block;
}

}  // namespace

SsmProblem build_ssm(const ObservationMap& map, const CompanionSystem& sys,
                     const Eigen::MatrixXd& sigma,
                     const Eigen::VectorXd& log_scale,
                     const Eigen::VectorXd& init_mean,
                     const Eigen::MatrixXd& init_cov, bool fold_initial_obs) {
  if (sys.M != map.M || sys.P != map.P)
    throw std::invalid_argument("build_ssm: system/map dimension mismatch");
  if (log_scale.size() != map.T)
    throw std::invalid_argument("build_ssm: log_scale must have one entry per "
                                "panel row");
  SsmProblem p;
  p.sys = &sys;
  p.anchor = map.P - 1;
  p.init_mean = init_mean;
  p.init_cov = init_cov;
  p.sigma = sigma;
  p.log_scale = log_scale;
  p.blocks.reserve(static_cast<size_t>(map.T - p.anchor));
  p.blocks.push_back(fold_initial_obs ? anchor_block(map, p.anchor)
                                      : ObsBlock{});
  for (int t = p.anchor + 1; t < map.T; ++t)
    p.blocks.push_back(row_block(map, t));
  return p;
}

SsmProblem build_ssm(const ObservationMap& map, const CompanionSystem& sys,
                     const Eigen::MatrixXd& sigma,
                     const Eigen::VectorXd& log_scale, double prior_var) {
  const int K = sys.K();
  return build_ssm(map, sys, sigma, log_scale, Eigen::VectorXd::Zero(K),
                   prior_var * Eigen::MatrixXd::Identity(K, K), true);
}

FilterOutput kalman_filter(const SsmProblem& problem) {
  const auto& sys = *problem.sys;
  const int K = sys.K();
  const int M = sys.M;
  const int S = problem.steps();

  FilterOutput out;
  out.pred_mean.resize(static_cast<size_t>(S));
  out.pred_cov.resize(static_cast<size_t>(S));
  out.filt_mean.resize(static_cast<size_t>(S));
  out.filt_cov.resize(static_cast<size_t>(S));
  out.innov.resize(static_cast<size_t>(S));
  out.sinv.resize(static_cast<size_t>(S));
  out.gain.resize(static_cast<size_t>(S));

  Eigen::VectorXd a = problem.init_mean;
  Eigen::MatrixXd P = problem.init_cov;

  for (int s = 0; s < S; ++s) {
    if (s > 0) {
      int t = problem.anchor + s;
      a = sys.F * a + sys.intercept;
      P = sys.F * P * sys.F.transpose();
      P.topLeftCorner(M, M) += std::exp(problem.log_scale[t]) * problem.sigma;
      P = symmetrize(P);
    }
    out.pred_mean[static_cast<size_t>(s)] = a;
    out.pred_cov[static_cast<size_t>(s)] = P;

    const ObsBlock& block = problem.blocks[static_cast<size_t>(s)];
    const int n = static_cast<int>(block.value.size());
    if (n > 0) {
      Eigen::VectorXd v = block.value - block.loading * a;
      Eigen::MatrixXd S_t = block.loading * P * block.loading.transpose();
      SymPinv pinv = pinv_sym(S_t);
      if (pinv.dropped > 0) out.rank_deficient.push_back({s, pinv.dropped});
      Eigen::MatrixXd gain = P * block.loading.transpose() * pinv.inverse;
      a += gain * v;
      Eigen::MatrixXd IKL =
          Eigen::MatrixXd::Identity(K, K) - gain * block.loading;
      P = symmetrize(IKL * P * IKL.transpose());
      out.loglik -= 0.5 * (pinv.rank * kLog2Pi + pinv.log_pdet +
                           v.dot(pinv.inverse * v));
      out.innov[static_cast<size_t>(s)] = std::move(v);
      out.sinv[static_cast<size_t>(s)] = std::move(pinv.inverse);
      out.gain[static_cast<size_t>(s)] = std::move(gain);
    } else {
      out.innov[static_cast<size_t>(s)].resize(0);
      out.sinv[static_cast<size_t>(s)].resize(0, 0);
      out.gain[static_cast<size_t>(s)].resize(K, 0);
    }
    out.filt_mean[static_cast<size_t>(s)] = a;
    out.filt_cov[static_cast<size_t>(s)] = P;
  }
  return out;
}

Eigen::MatrixXd smoother_mean(const SsmProblem& problem,
                              const FilterOutput& filter) {
  const auto& sys = *problem.sys;
  const int K = sys.K();
  const int S = problem.steps();

  Eigen::MatrixXd smoothed(S, K);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(K);
  for (int s = S - 1; s >= 0; --s) {
    const ObsBlock& block = problem.blocks[static_cast<size_t>(s)];
    if (block.value.size() > 0) {
      // r_{s-1} = L' S^+ v + (F (I - K L))' r_s
      Eigen::VectorXd Fr = sys.F.transpose() * r;
      r = block.loading.transpose() *
              (filter.sinv[static_cast<size_t>(s)] *
               filter.innov[static_cast<size_t>(s)]) +
          Fr -
          block.loading.transpose() *
              (filter.gain[static_cast<size_t>(s)].transpose() * Fr);
    } else {
      r = sys.F.transpose() * r;
    }
    smoothed.row(s) = (filter.pred_mean[static_cast<size_t>(s)] +
                       filter.pred_cov[static_cast<size_t>(s)] * r)
                          .transpose();
  }
  return smoothed;
}

Eigen::VectorXd StatePath::state(int t) const {
  const int M = static_cast<int>(weekly.cols());
  if (t < P - 1 || t >= weekly.rows())
    throw std::out_of_range("StatePath::state: t outside [P-1, T)");
  Eigen::VectorXd z(M * P);
  for (int l = 0; l < P; ++l) z.segment(l * M, M) = weekly.row(t - l);
  return z;
}

namespace {

/// Extracts the weekly panel from smoothed/drawn states: rows 0..anchor come
/// from the anchor state's lag blocks, later rows from each state's first
/// block.
Eigen::MatrixXd states_to_panel(const Eigen::MatrixXd& states,
                                const SsmProblem& problem) {
  const int M = problem.sys->M;
  const int T = problem.anchor + problem.steps();
  Eigen::MatrixXd weekly(T, M);
  for (int t = 0; t <= problem.anchor; ++t)
    weekly.row(t) = states.row(0).segment((problem.anchor - t) * M, M);
  for (int s = 1; s < problem.steps(); ++s)
    weekly.row(problem.anchor + s) = states.row(s).head(M);
  return weekly;
}

void snap_weekly(Eigen::MatrixXd& weekly, const ObservationMap& map) {
  for (int t = 0; t < map.T; ++t)
    for (int i : map.active[static_cast<size_t>(t)])
      if (i >= map.M_L) weekly(t, i) = map.obs(t, i);
}

}  // namespace

StatePath simulation_smoother(const SsmProblem& problem,
                              const ObservationMap& map, Rng& rng) {
  const auto& sys = *problem.sys;
  const int K = sys.K();
  const int M = sys.M;
  const int S = problem.steps();

  // Unconditional simulation of states and observations from the model.
  Eigen::MatrixXd sigma_chol = chol_lower(problem.sigma, "simulation_smoother");
  Eigen::MatrixXd init_root = psd_sqrt(problem.init_cov);
  Eigen::MatrixXd z_plus(S, K);
  Eigen::VectorXd z = problem.init_mean + init_root * rng.normal_vector(K);
  z_plus.row(0) = z.transpose();
  for (int s = 1; s < S; ++s) {
    int t = problem.anchor + s;
    z = sys.F * z + sys.intercept;
    z.head(M) += std::exp(0.5 * problem.log_scale[t]) *
                 (sigma_chol * rng.normal_vector(M));
    z_plus.row(s) = z.transpose();
  }

  // Smooth the observation difference with a zero-mean copy of the problem.
  SsmProblem diff = problem;
  diff.init_mean.setZero();
  for (int s = 0; s < S; ++s) {
    auto& block = diff.blocks[static_cast<size_t>(s)];
    if (block.value.size() > 0)
      block.value -= block.loading * z_plus.row(s).transpose();
  }
  // The intercept cancels in the difference system.
  CompanionSystem sys_nc = sys;
  sys_nc.intercept.setZero();
  diff.sys = &sys_nc;
  FilterOutput filter = kalman_filter(diff);
  Eigen::MatrixXd correction = smoother_mean(diff, filter);

  StatePath path;
  path.P = sys.P;
  path.weekly = states_to_panel(z_plus + correction, problem);
  snap_weekly(path.weekly, map);
  return path;
}

StatePath smoothed_state_path(const SsmProblem& problem,
                              const ObservationMap& map) {
  FilterOutput filter = kalman_filter(problem);
  Eigen::MatrixXd smoothed = smoother_mean(problem, filter);
  StatePath path;
  path.P = problem.sys->P;
  path.weekly = states_to_panel(smoothed, problem);
  snap_weekly(path.weekly, map);
  return path;
}

AggregationCheck check_aggregation(const StatePath& path,
                                   const ObservationMap& map) {
  AggregationCheck check;
  for (int t = 0; t < map.T; ++t) {
    for (int i : map.active[static_cast<size_t>(t)]) {
      if (i < map.M_L) {
        if (t < 3) continue;
        double mean4 = (path.weekly(t, i) + path.weekly(t - 1, i) +
                        path.weekly(t - 2, i) + path.weekly(t - 3, i)) /
                       4.0;
        check.max_monthly_gap =
            std::max(check.max_monthly_gap, std::fabs(mean4 - map.obs(t, i)));
      } else {
        check.max_weekly_gap = std::max(
            check.max_weekly_gap, std::fabs(path.weekly(t, i) - map.obs(t, i)));
      }
    }
  }
  return check;
}

}  // namespace mfvar
