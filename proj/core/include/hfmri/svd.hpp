#pragma once

#include <Eigen/Core>

namespace hfmri {

/// Thin-U singular value decomposition a = u * diag(sigma) * v.adjoint()
/// with a FULL right factor: v is always n x n unitary (the tail columns
/// span the null space), sigma has min(m, n) entries in nonincreasing order.
struct Svd {
  Eigen::MatrixXcd u;
  Eigen::VectorXd sigma;
  Eigen::MatrixXcd v;
};

/// Throws NumericalError if the backend fails to converge.
Svd svd_full_v(const Eigen::MatrixXcd& a);

}  // namespace hfmri
