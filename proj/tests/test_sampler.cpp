#include <doctest.h>

#include <cmath>

#include "mfvar/coefficients.hpp"
#include "mfvar/dgp.hpp"
#include "mfvar/diagnostics.hpp"
#include "mfvar/gibbs.hpp"
#include "mfvar/linalg.hpp"
#include "mfvar/sv.hpp"
#include "test_util.hpp"

using namespace mfvar;

TEST_CASE("minnesota_moments formula") {
  MinnesotaHyper hyper;
  hyper.lambda_overall = 0.3;
  hyper.lambda_cross = 0.5;
  hyper.lambda_lag_decay = 1.0;
  hyper.scale_estimates = Eigen::Vector2d(2.0, 1.0);
  const double l2 = 0.09;

  auto mom = minnesota_moments(hyper, 2, 2);
  // own first lag
  CHECK(mom.variance(0, 0) == doctest::Approx(l2));
  CHECK(mom.variance(1, 1) == doctest::Approx(l2));
  // own second lag, decay exponent 1 -> /4
  CHECK(mom.variance(0, 2) == doctest::Approx(l2 / 4.0));
  // cross (i=0, j=1) lag 1: l2 * 0.25 * (2/1)^2 = l2
  CHECK(mom.variance(0, 1) == doctest::Approx(l2));
  // cross (i=1, j=0) lag 1: l2 * 0.25 * (1/2)^2 = l2/16
  CHECK(mom.variance(1, 0) == doctest::Approx(l2 / 16.0));
  CHECK(mom.mean.isZero());

  SUBCASE("own-lag prior means land on the diagonal") {
    hyper.prior_mean_own_first_lag = Eigen::Vector2d(0.7, 0.9);
    auto m2 = minnesota_moments(hyper, 2, 2);
    CHECK(m2.mean(0, 0) == 0.7);
    CHECK(m2.mean(1, 1) == 0.9);
    CHECK(m2.mean(0, 1) == 0.0);
    CHECK(m2.mean(0, 2) == 0.0);
  }
  SUBCASE("zero scale rejected") {
    hyper.scale_estimates = Eigen::Vector2d(1.0, 0.0);
    CHECK_THROWS_AS(minnesota_moments(hyper, 2, 2), std::invalid_argument);
  }
}

TEST_CASE("ar4 scale estimates") {
  Rng rng(12);
  const int T = 400;
  Eigen::MatrixXd values(T, 1);
  double prev = 0.0;
  for (int t = 0; t < T; ++t) {
    prev = 0.6 * prev + 0.5 * rng.normal();
    values(t, 0) = prev;
  }
  auto s = ar4_scale_estimates(values, {"x"});
  CHECK(s[0] == doctest::Approx(0.5).epsilon(0.15));

  Eigen::MatrixXd tiny = Eigen::MatrixXd::Zero(6, 1);
  CHECK_THROWS_AS(ar4_scale_estimates(tiny, {"x"}), std::runtime_error);
}

namespace {

StatePath path_of(const Eigen::MatrixXd& weekly, int P) {
  return StatePath{weekly, P};
}

VarPrior flat_ish_prior(int M, double lambda) {
  VarPrior prior;
  prior.minnesota.lambda_overall = lambda;
  prior.minnesota.scale_estimates = Eigen::VectorXd::Ones(M);
  prior.csv.iw_df = M + 2;
  prior.csv.iw_scale_diag = 0.01;
  return prior;
}

/// Weighted least squares on the e^{-h/2}-rescaled rows, the flat-prior
/// oracle for the coefficient block.
Eigen::MatrixXd wls_oracle(const Eigen::MatrixXd& weekly,
                           const Eigen::VectorXd& h, int P) {
  const int T = static_cast<int>(weekly.rows());
  const int M = static_cast<int>(weekly.cols());
  Eigen::MatrixXd XtX = Eigen::MatrixXd::Zero(M * P, M * P);
  Eigen::MatrixXd XtY = Eigen::MatrixXd::Zero(M * P, M);
  for (int t = P; t < T; ++t) {
    Eigen::VectorXd z(M * P);
    for (int l = 1; l <= P; ++l)
      z.segment((l - 1) * M, M) = weekly.row(t - l).transpose();
    double w = std::exp(-h[t]);
    XtX += w * z * z.transpose();
    XtY += w * z * weekly.row(t);
  }
  return XtX.ldlt().solve(XtY).transpose();  // M x MP
}

}  // namespace

TEST_CASE("coefficient draw limits") {
  const int M = 2, P = 2, T = 300;
  DgpSpec spec = default_dgp(M, 0, P, T, 31);
  spec.sigma_h = 0.0;
  auto out = simulate(spec);
  auto states = path_of(out.weekly, P);

  SUBCASE("dogmatic prior pins the posterior at the prior mean") {
    VarPrior prior = flat_ish_prior(M, 1e-8);
    prior.minnesota.prior_mean_own_first_lag = Eigen::Vector2d(0.3, -0.2);
    Rng rng(1);
    auto draw = draw_coefficients_and_sigma(states, Eigen::VectorXd::Zero(T),
                                            prior, rng);
    Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(M, M * P);
    expect(0, 0) = 0.3;
    expect(1, 1) = -0.2;
    CHECK((draw.A - expect).cwiseAbs().maxCoeff() < 1e-6);
  }

  SUBCASE("flat prior recovers weighted least squares") {
    Eigen::VectorXd h(T);
    Rng hr(2);
    for (int t = 0; t < T; ++t) h[t] = 0.8 * hr.normal();
    VarPrior prior = flat_ish_prior(M, 1e6);
    Eigen::MatrixXd wls = wls_oracle(out.weekly, h, P);

    Rng rng(3);
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(M, M * P);
    const int n = 3000;
    for (int k = 0; k < n; ++k)
      mean += draw_coefficients_and_sigma(states, h, prior, rng).A;
    mean /= n;
    CHECK((mean - wls).cwiseAbs().maxCoeff() < 0.02);
  }

  SUBCASE("h = 0 flat prior equals the OLS center") {
    VarPrior prior = flat_ish_prior(M, 1e6);
    Eigen::VectorXd h0 = Eigen::VectorXd::Zero(T);
    Eigen::MatrixXd ols = wls_oracle(out.weekly, h0, P);
    Rng rng(4);
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(M, M * P);
    const int n = 3000;
    for (int k = 0; k < n; ++k)
      mean += draw_coefficients_and_sigma(states, h0, prior, rng).A;
    mean /= n;
    CHECK((mean - ols).cwiseAbs().maxCoeff() < 0.02);
  }

  SUBCASE("independent form obeys the same limits") {
    VarPrior prior = flat_ish_prior(M, 1e-8);
    prior.form = MinnesotaForm::independent;
    prior.minnesota.prior_mean_own_first_lag = Eigen::Vector2d(0.4, 0.1);
    CoefficientDraw cur;
    cur.A = Eigen::MatrixXd::Zero(M, M * P);
    cur.intercept = Eigen::VectorXd::Zero(M);
    cur.Sigma = Eigen::MatrixXd::Identity(M, M);
    Rng rng(5);
    auto draw = draw_coefficients_and_sigma(states, Eigen::VectorXd::Zero(T),
                                            prior, rng, cur);
    CHECK(std::fabs(draw.A(0, 0) - 0.4) < 1e-5);
    CHECK(std::fabs(draw.A(1, 1) - 0.1) < 1e-5);
    CHECK(std::fabs(draw.A(0, 1)) < 1e-5);
  }

  SUBCASE("incomplete states rejected") {
    Eigen::MatrixXd holes = out.weekly;
    holes(10, 0) = kMissing;
    VarPrior prior = flat_ish_prior(M, 0.2);
    Rng rng(6);
    CHECK_THROWS_AS(draw_coefficients_and_sigma(path_of(holes, P),
                                                Eigen::VectorXd::Zero(T),
                                                prior, rng),
                    std::invalid_argument);
  }

  SUBCASE("singular Gram matrix rejected with a diagnostic") {
    // an exactly duplicated column under a flat prior kills the precision
    Eigen::MatrixXd dup = out.weekly;
    dup.col(1) = dup.col(0);
    VarPrior prior = flat_ish_prior(M, 1e9);
    Rng rng(7);
    CHECK_THROWS_WITH_AS(
        draw_coefficients_and_sigma(path_of(dup, P), Eigen::VectorXd::Zero(T),
                                    prior, rng),
        doctest::Contains("singular"), std::runtime_error);
  }
}

TEST_CASE("log chi-squared mixture against quadrature") {
  double quad = test::elog_chi2_quadrature();
  // digamma(1/2) + log 2 = -1.2703628...
  CHECK(quad == doctest::Approx(-1.2703628455).epsilon(1e-6));
  CHECK(std::fabs(LogChi2Mixture::mixture_mean() - quad) < 1e-3);
}

TEST_CASE("draw_h_path") {
  const int T = 120, M = 2, t0 = 4;
  Rng data_rng(41);
  Eigen::MatrixXd sigma(2, 2);
  sigma << 1.0, 0.3, 0.3, 0.8;
  Eigen::MatrixXd chol = chol_lower(sigma, "test");
  Eigen::MatrixXd eps(T - t0, M);
  for (int t = 0; t < T - t0; ++t)
    eps.row(t) = (chol * data_rng.normal_vector(M)).transpose();

  SUBCASE("sigma_h -> 0 collapses the path to mu_h") {
    SvParams sv;
    sv.mu_h = 0.7;
    sv.rho_h = 0.9;
    sv.sigma2_h = 1e-10;
    Rng rng(42);
    auto h = draw_h_path(eps, sigma, sv, Eigen::VectorXd::Zero(T), t0, rng);
    CHECK((h.array() - 0.7).abs().maxCoeff() < 1e-3);
  }

  SUBCASE("location identity of the log measurement equation") {
    const double c = 1.3;
    SvParams sv;
    sv.mu_h = 0.2;
    sv.rho_h = 0.8;
    sv.sigma2_h = 0.09;
    Eigen::VectorXd h_cur = Eigen::VectorXd::Constant(T, 0.2);

    Rng rng_a(7);
    auto base = draw_h_path(eps, sigma, sv, h_cur, t0, rng_a);

    SvParams sv_shift = sv;
    sv_shift.mu_h += c;
    Rng rng_b(7);
    auto shifted = draw_h_path(std::exp(0.5 * c) * eps, sigma, sv_shift,
                               h_cur.array() + c, t0, rng_b);
    CHECK((shifted - base).cwiseAbs().maxCoeff() ==
          doctest::Approx(c).epsilon(1e-9));
  }

  SUBCASE("bad inputs") {
    SvParams sv;
    sv.sigma2_h = 0.1;
    Rng rng(1);
    CHECK_THROWS_AS(draw_h_path(eps, sigma, sv, Eigen::VectorXd::Zero(T + 1),
                                t0, rng),
                    std::invalid_argument);
    sv.rho_h = 1.5;
    CHECK_THROWS_AS(draw_h_path(eps, sigma, sv, Eigen::VectorXd::Zero(T), t0,
                                rng),
                    std::invalid_argument);
  }
}

TEST_CASE("draw_sv_params") {
  CsvPrior prior;  // defaults: Beta(25,5), N(0,10), Gamma(0.5, 0.5)

  SUBCASE("constant path concentrates mu_h") {
    // near-constant: an exactly flat path makes the sigma2_h conditional
    // degenerate (posterior mass at zero), which is not what this probes
    const int T = 400;
    Rng noise(88);
    Eigen::VectorXd h =
        Eigen::VectorXd::Constant(T, 2.5) + 0.05 * noise.normal_vector(T);
    Rng rng(8);
    SvParams sv;
    sv.mu_h = 0.0;
    sv.rho_h = 0.5;
    sv.sigma2_h = 0.5;
    double acc = 0.0;
    const int n = 2000;
    for (int k = 0; k < n; ++k) {
      sv = draw_sv_params(h, prior, sv, rng);
      acc += sv.mu_h;
    }
    CHECK(acc / n == doctest::Approx(2.5).epsilon(0.02));
  }

  SUBCASE("simulate-then-estimate recovers AR(1) parameters") {
    const int T = 2000;
    const double mu = 0.0, rho = 0.9, sig = 0.2;
    Rng sim(9);
    Eigen::VectorXd h(T);
    h[0] = mu + sig / std::sqrt(1 - rho * rho) * sim.normal();
    for (int t = 1; t < T; ++t)
      h[t] = mu + rho * (h[t - 1] - mu) + sig * sim.normal();

    Rng rng(10);
    SvParams sv;
    sv.sigma2_h = 1.0;
    const int burn = 500, n = 4000;
    double sum_mu = 0, sum_rho = 0, sum_s2 = 0;
    double ss_mu = 0, ss_rho = 0, ss_s2 = 0;
    for (int k = 0; k < burn + n; ++k) {
      sv = draw_sv_params(h, prior, sv, rng);
      if (k >= burn) {
        sum_mu += sv.mu_h;
        sum_rho += sv.rho_h;
        sum_s2 += sv.sigma2_h;
        ss_mu += sv.mu_h * sv.mu_h;
        ss_rho += sv.rho_h * sv.rho_h;
        ss_s2 += sv.sigma2_h * sv.sigma2_h;
      }
    }
    auto check_cover = [n](double sum, double ss, double truth) {
      double mean = sum / n;
      double sd = std::sqrt(std::max(1e-12, ss / n - mean * mean));
      CHECK(std::fabs(mean - truth) < 3.0 * sd);
    };
    check_cover(sum_mu, ss_mu, mu);
    check_cover(sum_rho, ss_rho, rho);
    check_cover(sum_s2, ss_s2, sig * sig);
  }

  SUBCASE("prior-only draws reproduce prior moments") {
    Rng rng(11);
    const int n = 40000;
    double sum_mu = 0, sum_rt = 0, sum_s2 = 0;
    for (int k = 0; k < n; ++k) {
      auto sv = draw_sv_prior(prior, rng);
      sum_mu += sv.mu_h;
      sum_rt += 0.5 * (sv.rho_h + 1.0);
      sum_s2 += sv.sigma2_h;
    }
    // N(0,10): SE = sqrt(10/n); Beta(25,5) mean 5/6; Gamma(.5,.5) mean 1
    CHECK(std::fabs(sum_mu / n) < 3.0 * std::sqrt(10.0 / n));
    CHECK(sum_rt / n == doctest::Approx(25.0 / 30.0).epsilon(0.01));
    CHECK(sum_s2 / n == doctest::Approx(1.0).epsilon(0.05));
  }

  SUBCASE("inverse gamma switch draws conjugately") {
    CsvPrior ig = prior;
    ig.sigma2_inverse_gamma = true;
    Rng sim(12);
    Eigen::VectorXd h(500);
    h[0] = 0.0;
    for (int t = 1; t < 500; ++t) h[t] = 0.8 * h[t - 1] + 0.3 * sim.normal();
    Rng rng(13);
    SvParams sv;
    sv.sigma2_h = 1.0;
    for (int k = 0; k < 200; ++k) sv = draw_sv_params(h, ig, sv, rng);
    CHECK(sv.sigma2_h > 0.0);
    CHECK(std::fabs(sv.rho_h) < 1.0);
  }
}

TEST_CASE("gibbs_run") {
  const int M = 3, M_L = 1, P = 4, T = 120;
  DgpSpec spec = default_dgp(M, M_L, P, T, 55);
  auto out = simulate(spec);

  VarPrior prior;
  ChainConfig cfg;
  cfg.n_draws = 40;
  cfg.n_burn = 20;
  cfg.seed = 99;
  cfg.P = P;

  SUBCASE("same seed gives bit-identical draw sequences") {
    auto a = gibbs_run(out.panel, prior, cfg);
    auto b = gibbs_run(out.panel, prior, cfg);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
      CHECK((a[i].A - b[i].A).cwiseAbs().maxCoeff() == 0.0);
      CHECK((a[i].h - b[i].h).cwiseAbs().maxCoeff() == 0.0);
      CHECK((a[i].weekly - b[i].weekly).cwiseAbs().maxCoeff() == 0.0);
      CHECK(a[i].rho_h == b[i].rho_h);
    }
    ChainConfig cfg2 = cfg;
    cfg2.seed = 100;
    auto c = gibbs_run(out.panel, prior, cfg2);
    CHECK((a[0].A - c[0].A).cwiseAbs().maxCoeff() > 0.0);
  }

  SUBCASE("every retained draw satisfies the invariants") {
    auto draws = gibbs_run(out.panel, prior, cfg);
    auto map = build_observation_map(out.panel, P);
    for (const auto& d : draws) {
      CHECK_NOTHROW(chol_lower(d.Sigma, "test"));
      CHECK(std::fabs(d.rho_h) < 1.0);
      CHECK(d.sigma_h > 0.0);
      auto check = check_aggregation(StatePath{d.weekly, P}, map);
      CHECK(check.max_weekly_gap == 0.0);
      CHECK(check.max_monthly_gap < 1e-8);
    }
  }

  SUBCASE("scale split normalization is invariant to constant shifts") {
    auto draws = gibbs_run(out.panel, prior, cfg);
    PosteriorDraw d = draws[0];
    PosteriorDraw shifted = d;
    const double c = 0.9;
    shifted.h.array() += c;
    shifted.Sigma *= std::exp(-c);
    shifted.mu_h += c;
    CHECK(shifted.normalized_sigma().isApprox(d.normalized_sigma(), 1e-12));
    CHECK(shifted.normalized_h().isApprox(d.normalized_h(), 1e-12));
    // the identification scale e^{mu_h} Sigma is invariant too
    CHECK((std::exp(shifted.mu_h) * shifted.Sigma)
              .isApprox(std::exp(d.mu_h) * d.Sigma, 1e-12));
  }

  SUBCASE("posterior invariant to weekly-block relabeling") {
    const int M4 = 4, T4 = 160;
    DgpSpec s4 = default_dgp(M4, 1, P, T4, 77);
    auto o4 = simulate(s4);
    ChainConfig c4 = cfg;
    c4.n_draws = 250;
    c4.n_burn = 100;

    auto draws_a = gibbs_run(o4.panel, prior, c4);

    // swap the two non-policy weekly columns (2 <-> 3)
    MixedPanel swapped = o4.panel;
    swapped.values.col(2).swap(swapped.values.col(3));
    std::swap(swapped.names[2], swapped.names[3]);
    auto draws_b = gibbs_run(swapped, prior, c4);

    // compare posterior means entrywise within ESS-based Monte Carlo error
    auto series = [](const std::vector<PosteriorDraw>& ds, int i, int j) {
      Eigen::VectorXd v(static_cast<int>(ds.size()));
      for (size_t k = 0; k < ds.size(); ++k)
        v[static_cast<int>(k)] = ds[k].normalized_sigma()(i, j);
      return v;
    };
    auto remap = [](int i) { return i == 2 ? 3 : (i == 3 ? 2 : i); };
    int outside = 0;
    for (int i = 0; i < M4; ++i)
      for (int j = 0; j <= i; ++j) {
        Eigen::VectorXd va = series(draws_a, i, j);
        Eigen::VectorXd vb = series(draws_b, remap(i), remap(j));
        auto sd = [](const Eigen::VectorXd& v) {
          return std::sqrt((v.array() - v.mean()).square().sum() / v.size());
        };
        double se_a = sd(va) / std::sqrt(effective_sample_size(va));
        double se_b = sd(vb) / std::sqrt(effective_sample_size(vb));
        double tol = 4.0 * std::sqrt(se_a * se_a + se_b * se_b) + 1e-6;
        if (std::fabs(va.mean() - vb.mean()) > tol) ++outside;
      }
    CHECK(outside <= 1);
  }

  SUBCASE("P >= 4 enforced with monthly variables") {
    ChainConfig bad = cfg;
    bad.P = 3;
    CHECK_THROWS_AS(gibbs_run(out.panel, prior, bad), std::invalid_argument);
  }
}

TEST_CASE("chain diagnostics") {
  SUBCASE("iid chains pass R-hat") {
    Rng rng(21);
    std::vector<Eigen::VectorXd> chains;
    for (int c = 0; c < 2; ++c) chains.push_back(rng.normal_vector(2000));
    CHECK(split_rhat(chains) < 1.02);
    CHECK(effective_sample_size(chains[0]) > 1000.0);
  }
  SUBCASE("constant chain flags ESS <= 1") {
    CHECK(effective_sample_size(Eigen::VectorXd::Constant(500, 2.0)) <= 1.0);
    CHECK(split_rhat({Eigen::VectorXd::Constant(500, 2.0)}) ==
          doctest::Approx(1.0));
  }
  SUBCASE("AR(1) chain with rho 0.5 has ESS near N/3") {
    Rng rng(22);
    const int N = 60000;
    Eigen::VectorXd chain(N);
    chain[0] = 0.0;
    for (int t = 1; t < N; ++t)
      chain[t] = 0.5 * chain[t - 1] + rng.normal();
    double ess = effective_sample_size(chain);
    CHECK(ess == doctest::Approx(N / 3.0).epsilon(0.2));
  }
  SUBCASE("monitored scalars over posterior draws") {
    DgpSpec spec = default_dgp(2, 0, 4, 80, 5);
    auto out = simulate(spec);
    VarPrior prior;
    ChainConfig cfg;
    cfg.n_draws = 30;
    cfg.n_burn = 10;
    cfg.P = 4;
    std::vector<std::vector<PosteriorDraw>> chains;
    for (std::uint64_t s : {1ull, 2ull}) {
      cfg.seed = s;
      chains.push_back(gibbs_run(out.panel, prior, cfg));
    }
    auto diag = chain_diagnostics(chains, 1.1);
    CHECK(diag.scalars.size() ==
          static_cast<size_t>(2 * 8 + 3 + 2));  // A entries, Sigma*, rho, sigma
    CHECK(diag.max_rhat > 0.0);
  }
}

TEST_CASE("quantile definition") {
  std::vector<double> v;
  for (int i = 1; i <= 100; ++i) v.push_back(i);
  CHECK(quantile(v, 0.5) == doctest::Approx(50.5));
  CHECK(quantile(v, 0.0) == doctest::Approx(1.0));
  CHECK(quantile(v, 1.0) == doctest::Approx(100.0));
  CHECK(quantile({3.0}, 0.5) == doctest::Approx(3.0));
}
