#pragma once
#include <functional>
#include <memory>
#include <vector>

#include "grayhol/forms.hpp"
#include "grayhol/matrix.hpp"

namespace grayhol {

// φ_ε: 0 on [0, ε], 1 on [1−ε, 1], the normalised integral of the bump
// exp(−1/(σ(1−σ))) in between.
class SmoothStep {
 public:
  explicit SmoothStep(double eps = 0.1);
  double eps() const { return eps_; }
  double operator()(double t) const;
  double derivative(double t) const;

 private:
  double eps_;
  double norm_;
  std::vector<double> table_;  // φ at equally spaced σ nodes
  double bump(double sigma) const;
};

const SmoothStep& default_smooth_step();
// Shared instance for a given ε (kept alive for the program's lifetime).
const SmoothStep& smooth_step(double eps);

// A smooth map [0,1]^n -> R^d with its Jacobian.
class CubeMap {
 public:
  virtual ~CubeMap() = default;
  virtual int n() const = 0;
  virtual int d() const = 0;
  // p = c(u), jac (d x n) = ∂c/∂u.
  virtual void eval(const Vec& u, Vec& p, Mat& jac) const = 0;

  Vec point(const Vec& u) const;
  Mat jacobian(const Vec& u) const;
};
using CubePtr = std::shared_ptr<const CubeMap>;

// B(u) = (1−t)P0 + t P1 + t(1−t) Σ_j w_j(u) u^{α_j} v_j with t = u_0.  For
// n = 3, terms that depend on u_2 carry w = Π_k (u_1 − knot_k), so the faces
// u_1 = knot are independent of u_2 (a good 3-path after smoothing).
struct PolynomialTerm {
  std::vector<int> alpha;
  Vec v;
};
class PolynomialBase : public CubeMap {
 public:
  PolynomialBase(int n, Vec P0, Vec P1, std::vector<PolynomialTerm> terms,
                 std::vector<double> knots = {0.0, 1.0});
  int n() const override { return n_; }
  int d() const override { return static_cast<int>(P0_.size()); }
  void eval(const Vec& u, Vec& p, Mat& jac) const override;

  static std::shared_ptr<PolynomialBase> random(int n, int d, int degree, double amplitude,
                                                Rng& rng, const Vec& P0, const Vec& P1,
                                                std::vector<double> knots = {0.0, 1.0});

 private:
  int n_;
  Vec P0_, P1_;
  std::vector<PolynomialTerm> terms_;
  std::vector<double> knots_;
};

// B(u) = (1−t)P0 + t P1 + Σ_j sin(π a_j t) cos(π b_j s + c_j) X_j(s, x) v_j, where
// X_j = sin(π s) cos(π k_j x + q_j) for terms with k_j ≥ 0 (n = 3) and 1 otherwise.
struct TrigTerm {
  int a = 1;
  double b = 0, c = 0;
  int k = -1;
  double q = 0;
  Vec v;
};
class TrigBase : public CubeMap {
 public:
  TrigBase(int n, Vec P0, Vec P1, std::vector<TrigTerm> terms);
  int n() const override { return n_; }
  int d() const override { return static_cast<int>(P0_.size()); }
  void eval(const Vec& u, Vec& p, Mat& jac) const override;

 private:
  int n_;
  Vec P0_, P1_;
  std::vector<TrigTerm> terms_;
};

// [−1,1]^3 -> S^3 ⊂ R^4 (radius r, centre c): v ↦ c + r (2 v w, |v|² − w²)/(|v|² + w²),
// w = Π(1 − v_i²).  The whole boundary of the cube goes to the point c + r e_4.
class SphereBase : public CubeMap {
 public:
  SphereBase(Vec centre, double radius);
  int n() const override { return 3; }
  int d() const override { return 4; }
  void eval(const Vec& u, Vec& p, Mat& jac) const override;

 private:
  Vec c_;
  double r_;
};

// u_i ↦ base(lo_i + (hi_i − lo_i) φ(u_i)); gives sitting instants on every face.
class SmoothedCube : public CubeMap {
 public:
  SmoothedCube(CubePtr base, std::vector<double> lo, std::vector<double> hi,
               const SmoothStep& phi = default_smooth_step());
  explicit SmoothedCube(CubePtr base, const SmoothStep& phi = default_smooth_step());
  int n() const override { return base_->n(); }
  int d() const override { return base_->d(); }
  void eval(const Vec& u, Vec& p, Mat& jac) const override;

 private:
  CubePtr base_;
  std::vector<double> lo_, hi_;
  const SmoothStep* phi_;
};

// a ♮_axis b: a on u_axis ∈ [0,½], b on [½,1].
class Concatenation : public CubeMap {
 public:
  Concatenation(CubePtr a, CubePtr b, int axis);
  int n() const override { return a_->n(); }
  int d() const override { return a_->d(); }
  void eval(const Vec& u, Vec& p, Mat& jac) const override;

 private:
  CubePtr a_, b_;
  int axis_;
};

// Views a lower-dimensional cube as an n-cube depending only on the listed
// coordinates: (u) ↦ base(u[axes[0]], u[axes[1]], ...).
class Extend : public CubeMap {
 public:
  Extend(CubePtr base, int n, std::vector<int> axes);
  int n() const override { return n_; }
  int d() const override { return base_->d(); }
  void eval(const Vec& u, Vec& p, Mat& jac) const override;

 private:
  CubePtr base_;
  int n_;
  std::vector<int> axes_;
};

// Restriction to u_axis = value (one dimension lower).
class Slice : public CubeMap {
 public:
  Slice(CubePtr base, int axis, double value);
  int n() const override { return base_->n() - 1; }
  int d() const override { return base_->d(); }
  void eval(const Vec& u, Vec& p, Mat& jac) const override;

 private:
  CubePtr base_;
  int axis_;
  double value_;
};

// u_axis ↦ 1 − u_axis.
class Reversed : public CubeMap {
 public:
  Reversed(CubePtr base, int axis);
  int n() const override { return base_->n(); }
  int d() const override { return base_->d(); }
  void eval(const Vec& u, Vec& p, Mat& jac) const override;

 private:
  CubePtr base_;
  int axis_;
};

// base ∘ ρ for a self-map ρ of the cube with Jacobian.
using CubeReparam = std::function<void(const Vec& u, Vec& v, Mat& dv)>;
class Reparametrized : public CubeMap {
 public:
  Reparametrized(CubePtr base, CubeReparam rho);
  int n() const override { return base_->n(); }
  int d() const override { return base_->d(); }
  void eval(const Vec& u, Vec& p, Mat& jac) const override;

 private:
  CubePtr base_;
  CubeReparam rho_;
};

CubePtr constant_cube(int n, const Vec& point);

// c*α sampled on the grid^n lattice of [0,1]^n: values[node][j] is the
// coefficient of du_{sets[j]}, i.e. α_{c(u)}(∂_{i₁}c, …, ∂_{i_k}c).  Nodes are
// ordered with u_0 fastest.
struct SampledForm {
  int n = 0, k = 0, grid = 0;
  std::vector<std::vector<int>> sets;
  std::vector<Vec> nodes;
  std::vector<std::vector<Mat>> values;
};
SampledForm pullback(const FormField& alpha, const CubeMap& c, int grid);

// The 3-path Γ#Γ′ between the horizontal composites (Γ ♮₁ ∂₂⁻Γ′) ♮₂ (∂₂⁺Γ ♮₁ Γ′)
// at x = 0 and (∂₂⁻Γ ♮₁ Γ′) ♮₂ (Γ ♮₁ ∂₂⁺Γ′) at x = 1.  Needs Γ(1,·) = Γ′(0,·).
class InterchangeCube : public CubeMap {
 public:
  InterchangeCube(CubePtr gamma, CubePtr gamma_prime,
                  const SmoothStep& phi = default_smooth_step());
  int n() const override { return 3; }
  int d() const override { return a_->d(); }
  void eval(const Vec& u, Vec& p, Mat& jac) const override;

 private:
  CubePtr a_, b_;
  const SmoothStep* phi_;
};

// Thin deformations.  Each member of the returned family is a cube with the
// same holonomy as c:
//   rank1     — t ↦ ρ(t) reparametrisations of a 1-path;
//   laminated — (t, s) ↦ (ρ(t, s), σ(s)) reparametrisations of a 2-path and
//               clause-(b) slides (a ∂_s + b ∂_x annihilates the homotopy);
//   rank3     — (t, s, x) ↦ (ρ, σ, χ) with ρ(t, 0, x) = ρ(t, 0) etc., so the
//               boundary faces move by laminated homotopies.
enum class ThinKind { rank1, laminated, rank3 };
std::vector<CubePtr> thin_perturbations(const CubePtr& c, ThinKind kind, int count,
                                        std::uint64_t seed);

// The clause-(b) homotopy J(t, s, x) = Γ(t, (1−x)s + xσ(s)) from Γ to its
// s-reparametrisation, with σ(s) = s + κ sin(2πjs)/(2πj).  At every (s, x) the
// constants a = σ(s) − s, b = −(1 − x + xσ′(s)) satisfy a ∂_s J + b ∂_x J = 0.
struct SlideHomotopy {
  CubePtr homotopy;
  CubePtr end;  // ∂₃⁺J
  std::function<std::pair<double, double>(double s, double x)> coefficients;
};
SlideHomotopy laminated_slide(const CubePtr& gamma, double kappa, int j);

}  // namespace grayhol
