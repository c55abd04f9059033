#include "grayhol/matrix.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include "grayhol/errors.hpp"

namespace grayhol {

bool all_finite(const Mat& a) { return a.allFinite(); }

Mat inverse(const Mat& a) {
  if (a.rows() != a.cols()) throw SingularMatrix("inverse of a non-square matrix");
  if (a.rows() <= 4) {
    // Closed-form path for tiny matrices; these dominate the holonomy loops.
    Mat out(a.rows(), a.cols());
    bool ok = false;
    double det = 0.0;
    switch (a.rows()) {
      case 1: {
        det = a(0, 0);
        ok = det != 0.0;
        if (ok) out(0, 0) = 1.0 / det;
        break;
      }
      case 2: {
        Eigen::Matrix2d m = a, inv;
        m.computeInverseAndDetWithCheck(inv, det, ok, 0.0);
        out = inv;
        break;
      }
      case 3: {
        Eigen::Matrix3d m = a, inv;
        m.computeInverseAndDetWithCheck(inv, det, ok, 0.0);
        out = inv;
        break;
      }
      default: {
        Eigen::Matrix4d m = a, inv;
        m.computeInverseAndDetWithCheck(inv, det, ok, 0.0);
        out = inv;
        break;
      }
    }
    const double scale = std::pow(std::max(a.cwiseAbs().maxCoeff(), 1e-300), a.rows());
    if (!ok || std::abs(det) <= 1e-14 * scale || !out.allFinite())
      throw SingularMatrix("matrix is numerically singular");
    return out;
  }
  Eigen::PartialPivLU<Mat> lu(a);
  const double rc = lu.rcond();
  if (!(rc > 1e-14)) throw SingularMatrix("matrix is numerically singular (rcond " + std::to_string(rc) + ")");
  return lu.inverse();
}

Mat group_commutator(const Mat& x, const Mat& y) { return x * y * inverse(x) * inverse(y); }

Mat expm(const Mat& a) { return a.exp(); }

Mat logm(const Mat& a) { return a.log(); }

Mat null_space(const Mat& a, double rel) {
  if (a.rows() == 0) return Mat::Identity(a.cols(), a.cols());
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > rel * smax && sv(i) > 0.0) ++rank;
  const int n = static_cast<int>(a.cols());
  return svd.matrixV().rightCols(n - rank);
}

Vec solve_in_span(const Mat& basis, const Vec& target) {
  return basis.completeOrthogonalDecomposition().solve(target);
}

Mat Rng::matrix(int rows, int cols, double lo, double hi) {
  Mat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = uniform(lo, hi);
  return m;
}

}  // namespace grayhol
