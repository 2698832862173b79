#include "mfvar/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mfvar {

SymPinv pinv_sym(const Eigen::MatrixXd& s, double floor) {
  SymPinv out;
  const int n = static_cast<int>(s.rows());
  if (n == 0) {
    out.inverse.resize(0, 0);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrize(s));
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("pinv_sym: eigendecomposition failed");
  const Eigen::VectorXd& ev = eig.eigenvalues();
  double lmax = ev.cwiseAbs().maxCoeff();
  double thresh = floor * std::max(lmax, 1.0);
  Eigen::VectorXd inv_ev = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (ev[i] > thresh) {
      inv_ev[i] = 1.0 / ev[i];
      out.log_pdet += std::log(ev[i]);
      ++out.rank;
    } else {
      ++out.dropped;
    }
  }
  out.inverse = eig.eigenvectors() * inv_ev.asDiagonal() *
                eig.eigenvectors().transpose();
  return out;
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrize(s));
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("psd_sqrt: eigendecomposition failed");
  Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

Eigen::MatrixXd chol_lower(const Eigen::MatrixXd& s, const char* context) {
  Eigen::LLT<Eigen::MatrixXd> llt(symmetrize(s));
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(std::string(context) +
                             ": matrix not positive definite");
  return llt.matrixL();
}

double spectral_radius(const Eigen::MatrixXd& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> eig(a, false);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace mfvar
