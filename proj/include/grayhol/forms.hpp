#pragma once
#include <functional>
#include <vector>

#include "grayhol/algebra.hpp"

namespace grayhol {

// x^alpha · coeff
struct Monomial {
  std::vector<int> alpha;
  Mat coeff;
};

// c_I(x) dx_I with I strictly increasing.
struct FormTerm {
  std::vector<int> I;
  std::vector<Monomial> monomials;
};

// A polynomial k-form on R^d with values in rows x cols matrices.
class FormField {
 public:
  int d = 0, k = 0, rows = 0, cols = 0;
  std::vector<FormTerm> terms;  // sorted by I

  FormField() = default;
  FormField(int d, int k, int rows, int cols);

  // Adds coeff · x^alpha dx_{I[0]} ∧ ... ; I need not be sorted (the sign of
  // the sorting permutation is applied); repeated indices give zero.
  void add(std::vector<int> I, const std::vector<int>& alpha, const Mat& coeff);

  // ω_x(v_1, ..., v_k) with the v_j the columns of V (d x k).
  Mat evaluate(const Vec& x, const Mat& V) const;
  // c_I(x) for a strictly increasing I.
  Mat component(const std::vector<int>& I, const Vec& x) const;

  int max_degree() const;
  double max_coefficient() const;
  // Drops monomials whose coefficient norm is ≤ tol.
  FormField pruned(double tol = 0.0) const;

  FormField operator+(const FormField& o) const;
  FormField operator-(const FormField& o) const;
  FormField operator*(double c) const;
};

// All strictly increasing k-subsets of {0, ..., d-1} in lexicographic order.
std::vector<std::vector<int>> index_sets(int d, int k);

FormField map_values(const FormField& f, const Unary& linear, int rows, int cols);
// α ∧^B β = Σ over shuffles; equals ((a+b)!/(a!b!)) Alt(α ⊗^B β).
FormField wedge(const FormField& a, const FormField& b, const Binary& pairing, int rows,
                int cols);
FormField exterior_derivative(const FormField& f);

// Random polynomial k-form of total degree ≤ degree.
FormField random_form(int d, int k, int rows, int cols, int degree, Rng& rng,
                      const std::function<Mat(Rng&)>& value, double density = 1.0);

// Ω = dω + ½ ω ∧^[,] ω
FormField curvature(const DifferentialTwoCrossedModule& h, const FormField& omega);
// D_ω A = dA + ω ∧^▷ A, with ▷ the action on e or l.
FormField covariant_derivative(const FormField& omega, const FormField& A, const Binary& act);
// 𝓜 = dm + ω ∧^▷ m
FormField two_curvature(const DifferentialTwoCrossedModule& h, const FormField& omega,
                        const FormField& m);
// m ∧^{,} m under the shuffle convention (the antisymmetrisation of 6{m,m}).
FormField lifting_square(const DifferentialTwoCrossedModule& h, const FormField& m);
// Θ = dθ + ω ∧^▷ θ − (factor/6) m ∧^{,} m.  factor = 6 is the literal reading.
FormField three_curvature(const DifferentialTwoCrossedModule& h, const FormField& omega,
                          const FormField& m, const FormField& theta, double factor);

// Fast evaluation of all components at a point, for the holonomy integrators.
class CompiledForm {
 public:
  CompiledForm() = default;
  explicit CompiledForm(const FormField& f);

  int k() const { return k_; }
  int d() const { return d_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool zero() const { return nmono_ == 0; }

  // Column c of `out` is vec(c_{I_c}(x)) for the c-th index set.
  void components(const Vec& x, Mat& out) const;
  // Contracts precomputed components with the columns of V (d x k).
  Mat contract(const Mat& comps, const Mat& V) const;
  Mat evaluate(const Vec& x, const Mat& V) const;

 private:
  int d_ = 0, k_ = 0, rows_ = 0, cols_ = 0, nmono_ = 0, maxdeg_ = 0;
  std::vector<std::vector<int>> sets_;
  std::vector<int> alpha_;  // nmono x d, row-major
  Mat coeff_;               // (rows*cols*ncomp) x nmono
};

}  // namespace grayhol
