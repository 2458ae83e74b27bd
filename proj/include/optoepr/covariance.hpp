#pragma once

#include <Eigen/Dense>

namespace optoepr {

/// Symmetrized spectral correlation matrix of (X1, P1, X2, P2) at one sideband
/// frequency, with X = a + a^dag and P = (a - a^dag)/i (vacuum variance 1).
struct Covariance4 {
  Eigen::Matrix4d entries = Eigen::Matrix4d::Identity();
  double omega = 0.0;
};

/// Local-rotation invariants of a two-mode covariance. For a symmetric state
/// the diagonal blocks are n I and the cross block is diag(k_x, k_p).
struct StandardForm {
  double n = 1.0;
  double k_x = 0.0;
  double k_p = 0.0;
  double residual = 0.0;

  double epr_variance() const { return n - k_x; }
  // Direct quadrature combinations in the X = a + a^dag normalization.
  double var_sum_direct() const { return 2.0 * (n - k_x); }
  double var_diff_direct() const { return 2.0 * (n + k_x); }
};

/// Two-mode symplectic form for the (X1, P1, X2, P2) ordering.
Eigen::Matrix4d symplectic_form();

/// Uncertainty relation V + i Omega >= 0 within `tol` on the smallest eigenvalue.
bool is_physical(const Covariance4& V, double tol = 1e-8);

}  // namespace optoepr
