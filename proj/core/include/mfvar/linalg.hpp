#pragma once

#include <Eigen/Dense>

namespace mfvar {

struct SymPinv {
  Eigen::MatrixXd inverse;  // pseudo-inverse on the retained eigenspace
  double log_pdet = 0.0;    // log product of retained eigenvalues
  int rank = 0;
  int dropped = 0;          // eigenvalues below the floor
};

/// Symmetric pseudo-inverse with a relative eigenvalue floor. Eigenvalues
/// below floor * max(lambda_max, 1) are dropped from the inverse and the
/// pseudo-determinant.
SymPinv pinv_sym(const Eigen::MatrixXd& s, double floor = 1e-12);

/// Square root of a symmetric PSD matrix via eigendecomposition; negative
/// eigenvalues from roundoff are clamped to zero.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& s);

/// Lower Cholesky factor; throws std::runtime_error with the given context
/// when the matrix is not positive definite.
Eigen::MatrixXd chol_lower(const Eigen::MatrixXd& s, const char* context);

inline Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& s) {
  return 0.5 * (s + s.transpose());
}

/// Spectral radius of a general square matrix.
double spectral_radius(const Eigen::MatrixXd& a);

}  // namespace mfvar
