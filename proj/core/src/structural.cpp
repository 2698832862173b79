#include "mfvar/structural.hpp"

#include <cmath>
#include <stdexcept>

#include "mfvar/linalg.hpp"

namespace mfvar {

IdentifiedDraw identify(const PosteriorDraw& draw,
                        std::optional<double> scale_log) {
  const int P = draw.P();
  double level = scale_log.value_or(draw.mu_h);
  IdentifiedDraw id;
  id.B0 = std::exp(0.5 * level) * chol_lower(draw.Sigma, "identify");
  Eigen::MatrixXd eps = var_residuals(draw.weekly, draw.A, draw.intercept, P);
  id.shocks.resize(eps.rows(), eps.cols());
  for (int r = 0; r < eps.rows(); ++r) {
    double w = std::exp(-0.5 * draw.h[P + r]);
    id.shocks.row(r) =
        (w * id.B0.triangularView<Eigen::Lower>().solve(eps.row(r).transpose()))
            .transpose();
  }
  return id;
}

Eigen::MatrixXd irf(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B0,
                    int shock_index, int horizons) {
  const int M = static_cast<int>(B0.rows());
  if (shock_index < 0 || shock_index >= M)
    throw std::invalid_argument("irf: shock index out of range");
  if (horizons < 0) throw std::invalid_argument("irf: horizons must be >= 0");
  CompanionSystem sys = build_companion(A);
  Eigen::MatrixXd out(horizons + 1, M);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(sys.K());
  z.head(M) = B0.col(shock_index);
  out.row(0) = z.head(M).transpose();
  for (int h = 1; h <= horizons; ++h) {
    z = sys.F * z;
    out.row(h) = z.head(M).transpose();
  }
  return out;
}

namespace {

std::vector<Eigen::MatrixXd> pointwise_quantiles(
    const std::vector<const Eigen::MatrixXd*>& draws,
    const std::vector<double>& qs) {
  const int rows = static_cast<int>(draws[0]->rows());
  const int cols = static_cast<int>(draws[0]->cols());
  std::vector<Eigen::MatrixXd> out(qs.size(), Eigen::MatrixXd(rows, cols));
  std::vector<double> cell(draws.size());
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      for (size_t d = 0; d < draws.size(); ++d) cell[d] = (*draws[d])(r, c);
      std::vector<double> sorted = cell;
      std::sort(sorted.begin(), sorted.end());
      for (size_t q = 0; q < qs.size(); ++q) {
        double pos = qs[q] * (static_cast<double>(sorted.size()) - 1.0);
        size_t lo = static_cast<size_t>(pos);
        double frac = pos - static_cast<double>(lo);
        out[q](r, c) = lo + 1 < sorted.size()
                           ? sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
                           : sorted.back();
      }
    }
  }
  return out;
}

}  // namespace

IrfResult summarize_irf(const std::vector<Eigen::MatrixXd>& per_draw,
                        const std::vector<double>& quantiles) {
  if (per_draw.size() < 2)
    throw std::invalid_argument("summarize_irf: need at least 2 draws");
  IrfResult res;
  res.quantiles = quantiles;
  std::vector<const Eigen::MatrixXd*> ptrs;
  for (const auto& m : per_draw) ptrs.push_back(&m);
  res.bands = pointwise_quantiles(ptrs, quantiles);
  return res;
}

Eigen::MatrixXd DecompositionResult::total() const {
  Eigen::MatrixXd t = initial + deterministic;
  for (const auto& s : shock_slices) t += s;
  return t;
}

DecompositionResult historical_decomposition(const PosteriorDraw& draw,
                                             const IdentifiedDraw& id) {
  const int T = static_cast<int>(draw.weekly.rows());
  const int M = draw.M();
  const int P = draw.P();
  CompanionSystem sys = build_companion(draw.A, draw.intercept);
  const int K = sys.K();

  DecompositionResult res;
  res.shock_slices.assign(static_cast<size_t>(M), Eigen::MatrixXd::Zero(T, M));
  res.initial = Eigen::MatrixXd::Zero(T, M);
  res.deterministic = Eigen::MatrixXd::Zero(T, M);

  // Rows before the first regression week sit entirely in the initial slice.
  for (int t = 0; t < P; ++t) res.initial.row(t) = draw.weekly.row(t);

  StatePath path{draw.weekly, P};
  Eigen::VectorXd z_init = path.state(P - 1);
  std::vector<Eigen::VectorXd> z_shock(static_cast<size_t>(M),
                                       Eigen::VectorXd::Zero(K));
  Eigen::VectorXd z_det = Eigen::VectorXd::Zero(K);

  for (int t = P; t < T; ++t) {
    int r = t - P;
    // Structural split of the reduced-form innovation: eps_t = sum_j
    // e^{h_t/2} u_{jt} B0[:,j]; the scale factors cancel in the product.
    double w = std::exp(0.5 * draw.h[t]);
    z_init = sys.F * z_init;
    z_det = sys.F * z_det + sys.intercept;
    res.initial.row(t) = z_init.head(M).transpose();
    res.deterministic.row(t) = z_det.head(M).transpose();
    for (int j = 0; j < M; ++j) {
      auto& zj = z_shock[static_cast<size_t>(j)];
      zj = sys.F * zj;
      zj.head(M) += w * id.shocks(r, j) * id.B0.col(j);
      res.shock_slices[static_cast<size_t>(j)].row(t) = zj.head(M).transpose();
    }
  }
  return res;
}

CounterfactualResult counterfactual(const PosteriorDraw& draw,
                                    const IdentifiedDraw& id,
                                    const std::vector<WeekStamp>& stamps,
                                    const ScenarioSpec& scenario) {
  const int T = static_cast<int>(draw.weekly.rows());
  const int M = draw.M();
  const int P = draw.P();
  if (static_cast<int>(stamps.size()) != T)
    throw std::invalid_argument("counterfactual: stamp/panel length mismatch");
  if (scenario.end < scenario.start)
    throw std::invalid_argument("counterfactual: window end before start");
  int ws = weeks_between(stamps.front(), scenario.start);
  int we = weeks_between(stamps.front(), scenario.end);
  if (ws < P || we >= T)
    throw std::invalid_argument(
        "counterfactual: window outside the usable sample (" +
        to_string(scenario.start) + " .. " + to_string(scenario.end) + ")");
  for (int j : scenario.shock_indices)
    if (j < 0 || j >= M)
      throw std::invalid_argument("counterfactual: shock index out of range");

  CounterfactualResult res;
  res.actual = draw.weekly;
  res.counterfactual = draw.weekly;
  res.difference = Eigen::MatrixXd::Zero(T, M);
  if (scenario.shock_indices.empty()) return res;

  CompanionSystem sys = build_companion(draw.A, draw.intercept);
  Eigen::MatrixXd eps = var_residuals(draw.weekly, draw.A, draw.intercept, P);
  StatePath path{draw.weekly, P};
  Eigen::VectorXd z = path.state(ws - 1);
  for (int t = ws; t < T; ++t) {
    Eigen::VectorXd e = eps.row(t - P).transpose();
    if (t <= we) {
      // Remove only the neutralized structural components; the others keep
      // the actual reduced-form innovation untouched.
      double w = std::exp(0.5 * draw.h[t]);
      for (int j : scenario.shock_indices)
        e -= w * id.shocks(t - P, j) * id.B0.col(j);
    }
    z = sys.F * z + sys.intercept;
    z.head(M) += e;
    res.counterfactual.row(t) = z.head(M).transpose();
    res.difference.row(t) = res.actual.row(t) - res.counterfactual.row(t);
  }
  return res;
}

CounterfactualBands summarize_counterfactual(
    const std::vector<CounterfactualResult>& per_draw,
    const std::vector<double>& quantiles) {
  if (per_draw.size() < 2)
    throw std::invalid_argument("summarize_counterfactual: need >= 2 draws");
  CounterfactualBands bands;
  bands.quantiles = quantiles;
  std::vector<const Eigen::MatrixXd*> a, c, d;
  for (const auto& r : per_draw) {
    a.push_back(&r.actual);
    c.push_back(&r.counterfactual);
    d.push_back(&r.difference);
  }
  bands.actual = pointwise_quantiles(a, quantiles);
  bands.counterfactual = pointwise_quantiles(c, quantiles);
  bands.difference = pointwise_quantiles(d, quantiles);
  return bands;
}

}  // namespace mfvar
