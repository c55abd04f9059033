#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <random>

namespace grayhol {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline double frob(const Mat& a) { return a.norm(); }
inline double frob_diff(const Mat& a, const Mat& b) { return (a - b).norm(); }

bool all_finite(const Mat& a);

// Throws SingularMatrix when a is not numerically invertible.
Mat inverse(const Mat& a);

inline Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }
// xyx^{-1}y^{-1}
Mat group_commutator(const Mat& x, const Mat& y);

Mat expm(const Mat& a);
Mat logm(const Mat& a);

// Orthonormal basis of the null space, one vector per column.  Singular values
// below rel * sigma_max count as zero.
Mat null_space(const Mat& a, double rel = 1e-10);

// Coordinates of `target` in the span of `basis` columns (least squares).
Vec solve_in_span(const Mat& basis, const Vec& target);

inline Vec flatten(const Mat& a) { return Eigen::Map<const Vec>(a.data(), a.size()); }
inline Mat unflatten(const Vec& v, int rows, int cols) {
  return Eigen::Map<const Mat>(v.data(), rows, cols);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform(double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  Mat matrix(int rows, int cols, double lo = -1.0, double hi = 1.0);
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace grayhol
