#include <lapacke.h>

#include <algorithm>
#include <string>

#include "fga/eigensolvers.hpp"
#include "fga/error.hpp"

namespace fga {

DenseEigen symmetric_eigen(const Eigen::MatrixXd& matrix, int count) {
  const auto n = static_cast<lapack_int>(matrix.rows());
  if (matrix.cols() != matrix.rows() || n == 0) throw InvalidArgument("symmetric_eigen: matrix must be square and nonempty");
  const lapack_int want = (count <= 0) ? n : std::min<lapack_int>(count, n);

  Eigen::MatrixXd a = matrix;  // dsyevr destroys its input
  Eigen::VectorXd w(n);
  Eigen::MatrixXd z(n, want);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(std::max<lapack_int>(want, 1)));
  lapack_int found = 0;
  const char range = (want == n) ? 'A' : 'I';
  const lapack_int info =
      LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', range, 'U', n, a.data(), n, 0.0, 0.0, 1, want, 0.0, &found, w.data(),
                     z.data(), n, support.data());
  if (info != 0) throw Error("symmetric_eigen: dsyevr failed with info=" + std::to_string(info));
  if (found < want) throw Error("symmetric_eigen: dsyevr returned fewer eigenvalues than requested");
  return {w.head(want), z.leftCols(want)};
}

DenseEigen dense_eigen(const HamiltonianOp& h, int count) {
  return symmetric_eigen(dense_matrix(h), count);
}

}  // namespace fga
