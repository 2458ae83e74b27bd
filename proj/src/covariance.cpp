#include "optoepr/covariance.hpp"

#include <algorithm>
#include <complex>

namespace optoepr {

Eigen::Matrix4d symplectic_form() {
  Eigen::Matrix4d w = Eigen::Matrix4d::Zero();
  w(0, 1) = 1.0;
  w(1, 0) = -1.0;
  w(2, 3) = 1.0;
  w(3, 2) = -1.0;
  return w;
}

bool is_physical(const Covariance4& V, double tol) {
  const Eigen::Matrix4cd m =
      V.entries.cast<std::complex<double>>() +
      std::complex<double>(0.0, 1.0) * symplectic_form().cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m, Eigen::EigenvaluesOnly);
  // Relative to the matrix scale; thermal entries reach 1e2.
  const double scale = std::max(1.0, V.entries.cwiseAbs().maxCoeff());
  return es.eigenvalues().minCoeff() >= -tol * scale;
}

}  // namespace optoepr
