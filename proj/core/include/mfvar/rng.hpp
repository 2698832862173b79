#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace mfvar {

/// Deterministic random source. All distribution transforms are implemented
/// here rather than through std:: distributions so that a given seed produces
/// the same stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal (Marsaglia polar method, one spare cached).
  double normal();

  /// Gamma with given shape and rate (Marsaglia-Tsang).
  double gamma(double shape, double rate);

  /// Inverse gamma: density proportional to x^{-shape-1} exp(-scale/x).
  double inv_gamma(double shape, double scale);

  double beta(double a, double b);

  double chi_squared(double df);

  /// Normal(mean, sd^2) restricted to (lo, hi), drawn by inverse CDF.
  double trunc_normal(double mean, double sd, double lo, double hi);

  Eigen::VectorXd normal_vector(int n);
  Eigen::MatrixXd normal_matrix(int rows, int cols);

  /// Index in [0, n) from cumulative weights (unnormalized, nondecreasing).
  int categorical_from_cumulative(const double* cum, int n);

  std::uint64_t next_raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Standard normal quantile function (Wichura's AS241, double precision).
double normal_quantile(double p);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace mfvar
