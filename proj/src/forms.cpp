#include "grayhol/forms.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "grayhol/errors.hpp"

namespace grayhol {

namespace {

// Sorts I in place; returns the permutation sign, or 0 on a repeated index.
int sort_with_sign(std::vector<int>& I) {
  int sign = 1;
  for (size_t i = 1; i < I.size(); ++i)
    for (size_t j = i; j > 0 && I[j - 1] > I[j]; --j) {
      std::swap(I[j - 1], I[j]);
      sign = -sign;
    }
  for (size_t i = 1; i < I.size(); ++i)
    if (I[i] == I[i - 1]) return 0;
  return sign;
}

double monomial_value(const std::vector<int>& alpha, const Vec& x) {
  double v = 1.0;
  for (size_t i = 0; i < alpha.size(); ++i)
    for (int p = 0; p < alpha[i]; ++p) v *= x(static_cast<Eigen::Index>(i));
  return v;
}

// det of the rows I of V (|I| = V.cols() ≤ 4).
double minor_det(const Mat& V, const std::vector<int>& I) {
  const size_t k = I.size();
  if (k == 0) return 1.0;
  auto a = [&](size_t r, int c) { return V(I[r], c); };
  switch (k) {
    case 1:
      return a(0, 0);
    case 2:
      return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    case 3:
      return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
             a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
             a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    default: {
      Mat sub(k, k);
      for (size_t r = 0; r < k; ++r) sub.row(static_cast<Eigen::Index>(r)) = V.row(I[r]);
      return sub.determinant();
    }
  }
}

void require_same_shape(const FormField& a, const FormField& b) {
  if (a.d != b.d || a.k != b.k || a.rows != b.rows || a.cols != b.cols)
    throw DimensionMismatch("forms have different shapes");
}

}  // namespace

std::vector<std::vector<int>> index_sets(int d, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > d) return out;
  std::vector<int> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == d - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

FormField::FormField(int d_, int k_, int rows_, int cols_) : d(d_), k(k_), rows(rows_), cols(cols_) {
  if (d < 0 || k < 0) throw DimensionMismatch("negative form dimensions");
}

void FormField::add(std::vector<int> I, const std::vector<int>& alpha, const Mat& coeff) {
  if (static_cast<int>(I.size()) != k) throw DimensionMismatch("index set has wrong length");
  if (static_cast<int>(alpha.size()) != d) throw DimensionMismatch("multi-index has wrong length");
  if (coeff.rows() != rows || coeff.cols() != cols)
    throw DimensionMismatch("coefficient has wrong shape");
  for (int i : I)
    if (i < 0 || i >= d) throw DimensionMismatch("form index out of range");
  const int sign = sort_with_sign(I);
  if (sign == 0) return;
  auto it = std::lower_bound(terms.begin(), terms.end(), I,
                             [](const FormTerm& t, const std::vector<int>& key) { return t.I < key; });
  if (it == terms.end() || it->I != I) it = terms.insert(it, FormTerm{I, {}});
  for (auto& mono : it->monomials)
    if (mono.alpha == alpha) {
      mono.coeff += sign * coeff;
      return;
    }
  it->monomials.push_back({alpha, sign * coeff});
}

Mat FormField::evaluate(const Vec& x, const Mat& V) const {
  if (V.rows() != d || V.cols() != k) throw DimensionMismatch("evaluate: V must be d x k");
  Mat out = Mat::Zero(rows, cols);
  for (const auto& t : terms) {
    const double w = minor_det(V, t.I);
    if (w == 0.0) continue;
    for (const auto& mono : t.monomials) out += (w * monomial_value(mono.alpha, x)) * mono.coeff;
  }
  return out;
}

Mat FormField::component(const std::vector<int>& I, const Vec& x) const {
  Mat out = Mat::Zero(rows, cols);
  for (const auto& t : terms)
    if (t.I == I)
      for (const auto& mono : t.monomials) out += monomial_value(mono.alpha, x) * mono.coeff;
  return out;
}

int FormField::max_degree() const {
  int m = 0;
  for (const auto& t : terms)
    for (const auto& mono : t.monomials) {
      int s = 0;
      for (int a : mono.alpha) s += a;
      m = std::max(m, s);
    }
  return m;
}

double FormField::max_coefficient() const {
  double m = 0.0;
  for (const auto& t : terms)
    for (const auto& mono : t.monomials) m = std::max(m, mono.coeff.norm());
  return m;
}

FormField FormField::pruned(double tol) const {
  FormField out(d, k, rows, cols);
  for (const auto& t : terms) {
    FormTerm nt{t.I, {}};
    for (const auto& mono : t.monomials)
      if (mono.coeff.norm() > tol) nt.monomials.push_back(mono);
    if (!nt.monomials.empty()) out.terms.push_back(std::move(nt));
  }
  return out;
}

FormField FormField::operator+(const FormField& o) const {
  require_same_shape(*this, o);
  FormField out = *this;
  for (const auto& t : o.terms)
    for (const auto& mono : t.monomials) out.add(t.I, mono.alpha, mono.coeff);
  return out;
}

FormField FormField::operator-(const FormField& o) const { return *this + o * -1.0; }

FormField FormField::operator*(double c) const {
  FormField out = *this;
  for (auto& t : out.terms)
    for (auto& mono : t.monomials) mono.coeff *= c;
  return out;
}

FormField map_values(const FormField& f, const Unary& linear, int rows, int cols) {
  FormField out(f.d, f.k, rows, cols);
  for (const auto& t : f.terms)
    for (const auto& mono : t.monomials) out.add(t.I, mono.alpha, linear(mono.coeff));
  return out;
}

FormField wedge(const FormField& a, const FormField& b, const Binary& pairing, int rows,
                int cols) {
  if (a.d != b.d) throw DimensionMismatch("wedge: forms live on different spaces");
  FormField out(a.d, a.k + b.k, rows, cols);
  if (a.k + b.k > a.d) return out;
  std::vector<int> alpha(a.d);
  for (const auto& ta : a.terms)
    for (const auto& tb : b.terms) {
      std::vector<int> I = ta.I;
      I.insert(I.end(), tb.I.begin(), tb.I.end());
      std::vector<int> probe = I;
      if (sort_with_sign(probe) == 0) continue;
      for (const auto& ma : ta.monomials)
        for (const auto& mb : tb.monomials) {
          for (int i = 0; i < a.d; ++i) alpha[i] = ma.alpha[i] + mb.alpha[i];
          const Mat c = pairing(ma.coeff, mb.coeff);
          if (c.rows() != rows || c.cols() != cols)
            throw DimensionMismatch("wedge: pairing returned the wrong shape");
          out.add(I, alpha, c);
        }
    }
  return out;
}

FormField exterior_derivative(const FormField& f) {
  FormField out(f.d, f.k + 1, f.rows, f.cols);
  if (f.k + 1 > f.d) return out;
  for (const auto& t : f.terms)
    for (const auto& mono : t.monomials)
      for (int j = 0; j < f.d; ++j) {
        if (mono.alpha[j] == 0) continue;
        std::vector<int> I{j};
        I.insert(I.end(), t.I.begin(), t.I.end());
        std::vector<int> alpha = mono.alpha;
        --alpha[j];
        out.add(I, alpha, static_cast<double>(mono.alpha[j]) * mono.coeff);
      }
  return out;
}

FormField random_form(int d, int k, int rows, int cols, int degree, Rng& rng,
                      const std::function<Mat(Rng&)>& value, double density) {
  FormField out(d, k, rows, cols);
  // All multi-indices of total degree ≤ degree.
  std::vector<std::vector<int>> alphas{std::vector<int>(d, 0)};
  for (int deg = 1; deg <= degree; ++deg) {
    std::vector<std::vector<int>> next;
    for (const auto& a : alphas) {
      int s = 0;
      for (int v : a) s += v;
      if (s != deg - 1) continue;
      int last = d - 1;
      while (last >= 0 && a[last] == 0) --last;
      for (int j = std::max(last, 0); j < d; ++j) {
        auto b = a;
        ++b[j];
        next.push_back(b);
      }
    }
    alphas.insert(alphas.end(), next.begin(), next.end());
  }
  for (const auto& I : index_sets(d, k))
    for (const auto& alpha : alphas) {
      if (density < 1.0 && rng.uniform(0.0, 1.0) > density) continue;
      out.add(I, alpha, value(rng));
    }
  return out;
}

FormField curvature(const DifferentialTwoCrossedModule& h, const FormField& omega) {
  return exterior_derivative(omega) + wedge(omega, omega, h.g.bracket, omega.rows, omega.cols) * 0.5;
}

FormField covariant_derivative(const FormField& omega, const FormField& A, const Binary& act) {
  return exterior_derivative(A) + wedge(omega, A, act, A.rows, A.cols);
}

FormField two_curvature(const DifferentialTwoCrossedModule& h, const FormField& omega,
                        const FormField& m) {
  return covariant_derivative(omega, m, h.act_e);
}

FormField lifting_square(const DifferentialTwoCrossedModule& h, const FormField& m) {
  return wedge(m, m, h.lifting, h.l.rows, h.l.cols);
}

FormField three_curvature(const DifferentialTwoCrossedModule& h, const FormField& omega,
                          const FormField& m, const FormField& theta, double factor) {
  return covariant_derivative(omega, theta, h.act_l) - lifting_square(h, m) * (factor / 6.0);
}

// ---------------------------------------------------------------------------

CompiledForm::CompiledForm(const FormField& f)
    : d_(f.d), k_(f.k), rows_(f.rows), cols_(f.cols), sets_(index_sets(f.d, f.k)) {
  std::map<std::vector<int>, int> mono_index;
  for (const auto& t : f.terms)
    for (const auto& mono : t.monomials)
      if (!mono_index.count(mono.alpha)) {
        const int id = static_cast<int>(mono_index.size());
        mono_index[mono.alpha] = id;
      }
  nmono_ = static_cast<int>(mono_index.size());
  alpha_.assign(static_cast<size_t>(nmono_) * d_, 0);
  for (const auto& [alpha, id] : mono_index)
    for (int i = 0; i < d_; ++i) {
      alpha_[static_cast<size_t>(id) * d_ + i] = alpha[i];
      maxdeg_ = std::max(maxdeg_, alpha[i]);
    }
  const int rc = rows_ * cols_;
  coeff_ = Mat::Zero(rc * static_cast<int>(sets_.size()), nmono_);
  for (const auto& t : f.terms) {
    const int c = static_cast<int>(std::find(sets_.begin(), sets_.end(), t.I) - sets_.begin());
    for (const auto& mono : t.monomials)
      coeff_.block(c * rc, mono_index[mono.alpha], rc, 1) += flatten(mono.coeff);
  }
}

void CompiledForm::components(const Vec& x, Mat& out) const {
  const int rc = rows_ * cols_;
  const int nc = static_cast<int>(sets_.size());
  out.resize(rc, nc);
  if (nmono_ == 0) {
    out.setZero();
    return;
  }
  // powers(i, p) = x_i^p
  Eigen::MatrixXd powers(d_, maxdeg_ + 1);
  for (int i = 0; i < d_; ++i) {
    powers(i, 0) = 1.0;
    for (int p = 1; p <= maxdeg_; ++p) powers(i, p) = powers(i, p - 1) * x(i);
  }
  Vec mono(nmono_);
  for (int j = 0; j < nmono_; ++j) {
    double v = 1.0;
    const int* a = &alpha_[static_cast<size_t>(j) * d_];
    for (int i = 0; i < d_; ++i)
      if (a[i]) v *= powers(i, a[i]);
    mono(j) = v;
  }
  Vec y = coeff_ * mono;
  out = Eigen::Map<const Mat>(y.data(), rc, nc);
}

Mat CompiledForm::contract(const Mat& comps, const Mat& V) const {
  Vec w(static_cast<Eigen::Index>(sets_.size()));
  for (size_t c = 0; c < sets_.size(); ++c) w(static_cast<Eigen::Index>(c)) = minor_det(V, sets_[c]);
  const Vec r = comps * w;
  return Eigen::Map<const Mat>(r.data(), rows_, cols_);
}

Mat CompiledForm::evaluate(const Vec& x, const Mat& V) const {
  Mat comps;
  components(x, comps);
  return contract(comps, V);
}

}  // namespace grayhol
