#include "mfvar/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace mfvar {

double effective_sample_size(const Eigen::VectorXd& chain) {
  const int n = static_cast<int>(chain.size());
  if (n < 2) return static_cast<double>(n);
  double mean = chain.mean();
  Eigen::VectorXd c = chain.array() - mean;
  double var = c.squaredNorm() / n;
  if (var <= 0.0) return 1.0;

  // Sum autocorrelations over consecutive pairs while the pair sums stay
  // positive and nonincreasing (Geyer's initial monotone sequence).
  double tau = 1.0;
  double prev_pair = std::numeric_limits<double>::infinity();
  for (int k = 1; k + 1 < n; k += 2) {
    double g0 = c.head(n - k).dot(c.tail(n - k)) / n / var;
    double g1 = c.head(n - k - 1).dot(c.tail(n - k - 1)) / n / var;
    double pair = g0 + g1;
    if (pair <= 0.0) break;
    pair = std::min(pair, prev_pair);
    prev_pair = pair;
    tau += 2.0 * pair;
  }
  return std::max(1.0, n / tau);
}

double split_rhat(const std::vector<Eigen::VectorXd>& chains) {
  std::vector<Eigen::VectorXd> halves;
  for (const auto& c : chains) {
    int half = static_cast<int>(c.size()) / 2;
    if (half < 2) throw std::invalid_argument("split_rhat: chains too short");
    halves.push_back(c.head(half));
    halves.push_back(c.tail(half));
  }
  const int m = static_cast<int>(halves.size());
  const int n = static_cast<int>(halves[0].size());
  Eigen::VectorXd means(m), vars(m);
  for (int j = 0; j < m; ++j) {
    means[j] = halves[j].mean();
    vars[j] = (halves[j].array() - means[j]).square().sum() / (n - 1);
  }
  double grand = means.mean();
  double B = n * (means.array() - grand).square().sum() / (m - 1);
  double W = vars.mean();
  if (W <= 0.0) return 1.0;
  double vhat = (n - 1.0) / n * W + B / n;
  return std::sqrt(vhat / W);
}

namespace {

using Extractor = std::function<double(const PosteriorDraw&)>;

void add_scalar(ChainDiagnostics& out,
                const std::vector<std::vector<PosteriorDraw>>& chains,
                const std::string& name, const Extractor& f,
                double threshold) {
  std::vector<Eigen::VectorXd> series;
  for (const auto& chain : chains) {
    Eigen::VectorXd v(static_cast<int>(chain.size()));
    for (size_t i = 0; i < chain.size(); ++i)
      v[static_cast<int>(i)] = f(chain[i]);
    series.push_back(std::move(v));
  }
  ScalarDiagnostic d;
  d.name = name;
  d.rhat = split_rhat(series);
  for (const auto& v : series) d.ess += effective_sample_size(v);
  d.flagged = d.rhat > threshold;
  out.max_rhat = std::max(out.max_rhat, d.rhat);
  out.any_flagged = out.any_flagged || d.flagged;
  out.scalars.push_back(std::move(d));
}

}  // namespace

ChainDiagnostics chain_diagnostics(
    const std::vector<std::vector<PosteriorDraw>>& chains,
    double rhat_threshold) {
  if (chains.empty() || chains[0].size() < 2)
    throw std::invalid_argument("chain_diagnostics: need at least 2 draws");
  ChainDiagnostics out;
  const auto& first = chains[0][0];
  const int M = first.M();
  const int Kr = static_cast<int>(first.A.cols());
  for (int i = 0; i < M; ++i)
    for (int r = 0; r < Kr; ++r)
      add_scalar(out, chains, "A[" + std::to_string(i) + "," + std::to_string(r) + "]",
                 [i, r](const PosteriorDraw& d) { return d.A(i, r); },
                 rhat_threshold);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j <= i; ++j)
      add_scalar(out, chains,
                 "Sigma*[" + std::to_string(i) + "," + std::to_string(j) + "]",
                 [i, j](const PosteriorDraw& d) {
                   return d.normalized_sigma()(i, j);
                 },
                 rhat_threshold);
  add_scalar(out, chains, "rho_h",
             [](const PosteriorDraw& d) { return d.rho_h; }, rhat_threshold);
  add_scalar(out, chains, "sigma_h",
             [](const PosteriorDraw& d) { return d.sigma_h; }, rhat_threshold);
  return out;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: empty input");
  q = std::clamp(q, 0.0, 1.0);
  std::sort(values.begin(), values.end());
  double pos = q * (static_cast<double>(values.size()) - 1.0);
  size_t lo = static_cast<size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

}  // namespace mfvar
