#include "hfmri/svd.hpp"

#include <lapacke.h>

#include <algorithm>
#include <string>

#include "hfmri/errors.hpp"

namespace hfmri {

Svd svd_full_v(const Eigen::MatrixXcd& a) {
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(m, n);

  Eigen::MatrixXcd work = a;  // both drivers destroy the input
  Svd out;
  out.sigma.resize(k);
  out.v.resize(n, n);

  lapack_int info = 0;
  if (m >= n) {
    // Divide-and-conquer; with m >= n the 'S' job already yields all n right
    // singular vectors.
    out.u.resize(m, n);
    Eigen::MatrixXcd vt(n, n);
    info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', m, n,
                          reinterpret_cast<lapack_complex_double*>(work.data()), m,
                          out.sigma.data(),
                          reinterpret_cast<lapack_complex_double*>(out.u.data()), m,
                          reinterpret_cast<lapack_complex_double*>(vt.data()), n);
    out.v = vt.adjoint();
  } else {
    // Wide matrix: zgesvd with jobvt='A' still returns the full n x n V.
    out.u.resize(m, m);
    Eigen::MatrixXcd vt(n, n);
    std::vector<double> superb(static_cast<std::size_t>(std::max<lapack_int>(1, k - 1)));
    info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'S', 'A', m, n,
                          reinterpret_cast<lapack_complex_double*>(work.data()), m,
                          out.sigma.data(),
                          reinterpret_cast<lapack_complex_double*>(out.u.data()), m,
                          reinterpret_cast<lapack_complex_double*>(vt.data()), n,
                          superb.data());
    out.v = vt.adjoint();
  }
  if (info != 0)
    throw NumericalError("SVD failed to converge (LAPACK info=" + std::to_string(info) + ")");
  return out;
}

}  // namespace hfmri
