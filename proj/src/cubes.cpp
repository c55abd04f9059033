#include "grayhol/cubes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "grayhol/errors.hpp"

namespace grayhol {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kTableCells = 4096;

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// d/dx x^k
double dpow(double x, int k) { return k == 0 ? 0.0 : k * ipow(x, k - 1); }

}  // namespace

SmoothStep::SmoothStep(double eps) : eps_(eps) {
  if (!(eps >= 0.0 && eps < 0.5)) throw Error("smoothing epsilon must lie in [0, 0.5)");
  // Cumulative integral of the bump by 5-point Gauss–Legendre on each cell.
  static const double xg[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                               0.9061798459386640};
  static const double wg[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                               0.2369268850561891, 0.2369268850561891};
  const double h = 1.0 / kTableCells;
  table_.assign(kTableCells + 1, 0.0);
  for (int i = 0; i < kTableCells; ++i) {
    double mid = (i + 0.5) * h, acc = 0.0;
    for (int q = 0; q < 5; ++q) acc += wg[q] * bump(mid + 0.5 * h * xg[q]);
    table_[i + 1] = table_[i] + 0.5 * h * acc;
  }
  norm_ = table_.back();
  for (double& v : table_) v /= norm_;
}

double SmoothStep::bump(double sigma) const {
  if (sigma <= 0.0 || sigma >= 1.0) return 0.0;
  return std::exp(-1.0 / (sigma * (1.0 - sigma)));
}

double SmoothStep::operator()(double t) const {
  double width = 1.0 - 2.0 * eps_;
  double sigma = (t - eps_) / width;
  if (sigma <= 0.0) return 0.0;
  if (sigma >= 1.0) return 1.0;
  const double h = 1.0 / kTableCells;
  int i = std::min(kTableCells - 1, static_cast<int>(sigma / h));
  double tau = (sigma - i * h) / h;
  double f0 = table_[i], f1 = table_[i + 1];
  double d0 = bump(i * h) / norm_ * h, d1 = bump((i + 1) * h) / norm_ * h;
  double t2 = tau * tau, t3 = t2 * tau;
  return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + tau) * d0 + (-2 * t3 + 3 * t2) * f1 +
         (t3 - t2) * d1;
}

double SmoothStep::derivative(double t) const {
  double width = 1.0 - 2.0 * eps_;
  return bump((t - eps_) / width) / (norm_ * width);
}

const SmoothStep& default_smooth_step() {
  static const SmoothStep phi(0.1);
  return phi;
}

const SmoothStep& smooth_step(double eps) {
  if (eps == 0.1) return default_smooth_step();
  static std::map<double, std::unique_ptr<SmoothStep>> cache;
  auto& slot = cache[eps];
  if (!slot) slot = std::make_unique<SmoothStep>(eps);
  return *slot;
}

Vec CubeMap::point(const Vec& u) const {
  Vec p;
  Mat j;
  eval(u, p, j);
  return p;
}

Mat CubeMap::jacobian(const Vec& u) const {
  Vec p;
  Mat j;
  eval(u, p, j);
  return j;
}

PolynomialBase::PolynomialBase(int n, Vec P0, Vec P1, std::vector<PolynomialTerm> terms,
                               std::vector<double> knots)
    : n_(n), P0_(std::move(P0)), P1_(std::move(P1)), terms_(std::move(terms)),
      knots_(std::move(knots)) {
  if (n < 1 || n > 3) throw DimensionMismatch("polynomial cubes have dimension 1, 2 or 3");
  if (P0_.size() != P1_.size()) throw DimensionMismatch("endpoint dimensions differ");
  for (const auto& t : terms_)
    if (static_cast<int>(t.alpha.size()) != n || t.v.size() != P0_.size())
      throw DimensionMismatch("polynomial cube term has the wrong shape");
}

void PolynomialBase::eval(const Vec& u, Vec& p, Mat& jac) const {
  const double t = u[0];
  p = (1.0 - t) * P0_ + t * P1_;
  jac = Mat::Zero(P0_.size(), n_);
  jac.col(0) = P1_ - P0_;
  const double bt = t * (1.0 - t), dbt = 1.0 - 2.0 * t;
  double w_knots = 1.0, dw_knots = 0.0;
  if (n_ == 3) {
    for (std::size_t a = 0; a < knots_.size(); ++a) {
      double prod = 1.0;
      for (std::size_t b = 0; b < knots_.size(); ++b)
        if (b != a) prod *= u[1] - knots_[b];
      dw_knots += prod;
      w_knots *= u[1] - knots_[a];
    }
  }
  double mono[3], dmono[3];
  for (const auto& term : terms_) {
    double m = 1.0;
    for (int i = 0; i < n_; ++i) {
      mono[i] = ipow(u[i], term.alpha[i]);
      dmono[i] = dpow(u[i], term.alpha[i]);
      m *= mono[i];
    }
    double grad[3];
    for (int i = 0; i < n_; ++i) {
      grad[i] = dmono[i];
      for (int j = 0; j < n_; ++j)
        if (j != i) grad[i] *= mono[j];
    }
    double w = 1.0, dw = 0.0;
    if (n_ == 3 && term.alpha[2] > 0) w = w_knots, dw = dw_knots;
    p += bt * w * m * term.v;
    jac.col(0) += (dbt * w * m + bt * w * grad[0]) * term.v;
    if (n_ >= 2) jac.col(1) += bt * (dw * m + w * grad[1]) * term.v;
    if (n_ == 3) jac.col(2) += bt * w * grad[2] * term.v;
  }
}

std::shared_ptr<PolynomialBase> PolynomialBase::random(int n, int d, int degree, double amplitude,
                                                       Rng& rng, const Vec& P0, const Vec& P1,
                                                       std::vector<double> knots) {
  if (P0.size() != d || P1.size() != d) throw DimensionMismatch("endpoint dimension");
  std::vector<PolynomialTerm> terms;
  std::vector<int> alpha(n, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == n) {
      Vec v(d);
      for (int k = 0; k < d; ++k) v[k] = amplitude * rng.uniform();
      terms.push_back({alpha, v});
      return;
    }
    for (int a = 0; a <= left; ++a) {
      alpha[i] = a;
      rec(i + 1, left - a);
    }
    alpha[i] = 0;
  };
  rec(0, degree);
  return std::make_shared<PolynomialBase>(n, P0, P1, std::move(terms), std::move(knots));
}

TrigBase::TrigBase(int n, Vec P0, Vec P1, std::vector<TrigTerm> terms)
    : n_(n), P0_(std::move(P0)), P1_(std::move(P1)), terms_(std::move(terms)) {
  if (n < 1 || n > 3) throw DimensionMismatch("trigonometric cubes have dimension 1, 2 or 3");
  if (P0_.size() != P1_.size()) throw DimensionMismatch("endpoint dimensions differ");
  for (const auto& t : terms_) {
    if (t.v.size() != P0_.size()) throw DimensionMismatch("trig term has the wrong shape");
    if (t.a < 1) throw Error("trig term frequency in t must be a positive integer");
  }
}

void TrigBase::eval(const Vec& u, Vec& p, Mat& jac) const {
  const double t = u[0], s = n_ >= 2 ? u[1] : 0.0, x = n_ == 3 ? u[2] : 0.0;
  p = (1.0 - t) * P0_ + t * P1_;
  jac = Mat::Zero(P0_.size(), n_);
  jac.col(0) = P1_ - P0_;
  for (const auto& term : terms_) {
    double ft = std::sin(kPi * term.a * t), dft = kPi * term.a * std::cos(kPi * term.a * t);
    double fs = std::cos(kPi * term.b * s + term.c), dfs = -kPi * term.b * std::sin(kPi * term.b * s + term.c);
    double fx = 1.0, dfx_s = 0.0, dfx_x = 0.0;
    if (n_ == 3 && term.k >= 0) {
      double cx = std::cos(kPi * term.k * x + term.q);
      fx = std::sin(kPi * s) * cx;
      dfx_s = kPi * std::cos(kPi * s) * cx;
      dfx_x = -std::sin(kPi * s) * kPi * term.k * std::sin(kPi * term.k * x + term.q);
    }
    p += ft * fs * fx * term.v;
    jac.col(0) += dft * fs * fx * term.v;
    if (n_ >= 2) jac.col(1) += ft * (dfs * fx + fs * dfx_s) * term.v;
    if (n_ == 3) jac.col(2) += ft * fs * dfx_x * term.v;
  }
}

SphereBase::SphereBase(Vec centre, double radius) : c_(std::move(centre)), r_(radius) {
  if (c_.size() != 4) throw DimensionMismatch("sphere centre must lie in R^4");
}

void SphereBase::eval(const Vec& u, Vec& p, Mat& jac) const {
  double om[3], w = 1.0;
  for (int i = 0; i < 3; ++i) {
    om[i] = 1.0 - u[i] * u[i];
    w *= om[i];
  }
  double dw[3];
  for (int i = 0; i < 3; ++i) {
    dw[i] = -2.0 * u[i];
    for (int j = 0; j < 3; ++j)
      if (j != i) dw[i] *= om[j];
  }
  double v2 = u.head(3).squaredNorm();
  double N = v2 + w * w;
  Vec P(4);
  P.head(3) = 2.0 * w * u.head(3);
  P[3] = v2 - w * w;
  p = c_ + r_ * P / N;
  jac.resize(4, 3);
  for (int i = 0; i < 3; ++i) {
    Vec dP(4);
    dP.head(3) = 2.0 * dw[i] * u.head(3);
    dP[i] += 2.0 * w;
    dP[3] = 2.0 * u[i] - 2.0 * w * dw[i];
    double dN = 2.0 * u[i] + 2.0 * w * dw[i];
    jac.col(i) = r_ * (dP * N - P * dN) / (N * N);
  }
}

SmoothedCube::SmoothedCube(CubePtr base, std::vector<double> lo, std::vector<double> hi,
                           const SmoothStep& phi)
    : base_(std::move(base)), lo_(std::move(lo)), hi_(std::move(hi)), phi_(&phi) {
  if (static_cast<int>(lo_.size()) != base_->n() || static_cast<int>(hi_.size()) != base_->n())
    throw DimensionMismatch("smoothing bounds must match the cube dimension");
}

SmoothedCube::SmoothedCube(CubePtr base, const SmoothStep& phi)
    : SmoothedCube(base, std::vector<double>(base->n(), 0.0), std::vector<double>(base->n(), 1.0),
                   phi) {}

void SmoothedCube::eval(const Vec& u, Vec& p, Mat& jac) const {
  const int n = base_->n();
  Vec v(n);
  Vec scale(n);
  for (int i = 0; i < n; ++i) {
    double span = hi_[i] - lo_[i];
    v[i] = lo_[i] + span * (*phi_)(u[i]);
    scale[i] = span * phi_->derivative(u[i]);
  }
  base_->eval(v, p, jac);
  for (int i = 0; i < n; ++i) jac.col(i) *= scale[i];
}

Concatenation::Concatenation(CubePtr a, CubePtr b, int axis)
    : a_(std::move(a)), b_(std::move(b)), axis_(axis) {
  if (a_->n() != b_->n() || a_->d() != b_->d())
    throw DimensionMismatch("concatenated cubes must have equal dimensions");
  if (axis < 0 || axis >= a_->n()) throw DimensionMismatch("concatenation axis out of range");
}

void Concatenation::eval(const Vec& u, Vec& p, Mat& jac) const {
  Vec v = u;
  if (u[axis_] <= 0.5) {
    v[axis_] = 2.0 * u[axis_];
    a_->eval(v, p, jac);
  } else {
    v[axis_] = 2.0 * u[axis_] - 1.0;
    b_->eval(v, p, jac);
  }
  jac.col(axis_) *= 2.0;
}

Extend::Extend(CubePtr base, int n, std::vector<int> axes)
    : base_(std::move(base)), n_(n), axes_(std::move(axes)) {
  if (static_cast<int>(axes_.size()) != base_->n())
    throw DimensionMismatch("extension needs one axis per base coordinate");
}

void Extend::eval(const Vec& u, Vec& p, Mat& jac) const {
  Vec v(base_->n());
  for (int i = 0; i < base_->n(); ++i) v[i] = u[axes_[i]];
  Mat jb;
  base_->eval(v, p, jb);
  jac = Mat::Zero(p.size(), n_);
  for (int i = 0; i < base_->n(); ++i) jac.col(axes_[i]) += jb.col(i);
}

Slice::Slice(CubePtr base, int axis, double value)
    : base_(std::move(base)), axis_(axis), value_(value) {
  if (axis < 0 || axis >= base_->n()) throw DimensionMismatch("slice axis out of range");
}

void Slice::eval(const Vec& u, Vec& p, Mat& jac) const {
  const int n = base_->n();
  Vec v(n);
  for (int i = 0, k = 0; i < n; ++i) v[i] = i == axis_ ? value_ : u[k++];
  Mat jb;
  base_->eval(v, p, jb);
  jac.resize(p.size(), n - 1);
  for (int i = 0, k = 0; i < n; ++i)
    if (i != axis_) jac.col(k++) = jb.col(i);
}

Reversed::Reversed(CubePtr base, int axis) : base_(std::move(base)), axis_(axis) {}

void Reversed::eval(const Vec& u, Vec& p, Mat& jac) const {
  Vec v = u;
  v[axis_] = 1.0 - u[axis_];
  base_->eval(v, p, jac);
  jac.col(axis_) *= -1.0;
}

Reparametrized::Reparametrized(CubePtr base, CubeReparam rho)
    : base_(std::move(base)), rho_(std::move(rho)) {}

void Reparametrized::eval(const Vec& u, Vec& p, Mat& jac) const {
  Vec v;
  Mat dv, jb;
  rho_(u, v, dv);
  base_->eval(v, p, jb);
  jac = jb * dv;
}

namespace {

class ConstantCube : public CubeMap {
 public:
  ConstantCube(int n, Vec p) : n_(n), p_(std::move(p)) {}
  int n() const override { return n_; }
  int d() const override { return static_cast<int>(p_.size()); }
  void eval(const Vec&, Vec& p, Mat& jac) const override {
    p = p_;
    jac = Mat::Zero(p_.size(), n_);
  }

 private:
  int n_;
  Vec p_;
};

}  // namespace

CubePtr constant_cube(int n, const Vec& point) { return std::make_shared<ConstantCube>(n, point); }

InterchangeCube::InterchangeCube(CubePtr gamma, CubePtr gamma_prime, const SmoothStep& phi)
    : a_(std::move(gamma)), b_(std::move(gamma_prime)), phi_(&phi) {
  if (a_->n() != 2 || b_->n() != 2 || a_->d() != b_->d())
    throw DimensionMismatch("interchange needs two 2-paths in the same space");
  Vec u(2);
  double worst = 0.0;
  for (int i = 0; i <= 8; ++i) {
    u << 1.0, i / 8.0;
    Vec pa = a_->point(u);
    u << 0.0, i / 8.0;
    worst = std::max(worst, (pa - b_->point(u)).norm());
  }
  if (worst > 1e-8) throw BoundaryMismatch("interchange: Γ(1,·) differs from Γ′(0,·)", worst);
}

// Left half t ≤ ½: Γ(2t, clamp(2s − φ(x)));  right half: Γ′(2t − 1, clamp(2s − 1 + φ(x))).
// The clamps only act where the 2-paths sit, so the result is smooth.
void InterchangeCube::eval(const Vec& u, Vec& p, Mat& jac) const {
  const double t = u[0], s = u[1], x = u[2];
  const double xt = (*phi_)(x), dxt = phi_->derivative(x);
  const bool left = t <= 0.5;
  double z = left ? 2.0 * s - xt : 2.0 * s - 1.0 + xt;
  double dz_ds = 2.0, dz_dx = left ? -dxt : dxt;
  if (z <= 0.0 || z >= 1.0) {
    z = std::clamp(z, 0.0, 1.0);
    dz_ds = dz_dx = 0.0;
  }
  Vec v(2);
  v << (left ? 2.0 * t : 2.0 * t - 1.0), z;
  Mat jb;
  (left ? a_ : b_)->eval(v, p, jb);
  jac.resize(p.size(), 3);
  jac.col(0) = 2.0 * jb.col(0);
  jac.col(1) = dz_ds * jb.col(1);
  jac.col(2) = dz_dx * jb.col(1);
}

namespace {

// S_k(t) = sin(2πkt)/(2πk), vanishing at t = 0, 1 with S_k′ = cos(2πkt).
double wave(double t, int k) { return std::sin(2 * kPi * k * t) / (2 * kPi * k); }
double dwave(double t, int k) { return std::cos(2 * kPi * k * t); }

CubeReparam rank1_reparam(Rng& rng, int member) {
  if (member == 0) {
    return [](const Vec& u, Vec& v, Mat& dv) {
      const SmoothStep& phi = default_smooth_step();
      double f = phi(u[0]);
      v = Vec::Constant(1, f * f);
      dv = Mat::Constant(1, 1, 2.0 * f * phi.derivative(u[0]));
    };
  }
  int k = rng.integer(1, 3);
  double kappa = rng.uniform(-0.9, 0.9);
  return [k, kappa](const Vec& u, Vec& v, Mat& dv) {
    v = Vec::Constant(1, u[0] + kappa * wave(u[0], k));
    dv = Mat::Constant(1, 1, 1.0 + kappa * dwave(u[0], k));
  };
}

CubeReparam laminated_reparam(Rng& rng) {
  int k = rng.integer(1, 3), m = rng.integer(1, 2), j = rng.integer(1, 3);
  double kt = rng.uniform(-0.6, 0.6), ks = rng.uniform(-0.9, 0.9);
  return [=](const Vec& u, Vec& v, Mat& dv) {
    double t = u[0], s = u[1];
    double g = 1.0 + 0.5 * std::sin(kPi * m * s), dg = 0.5 * kPi * m * std::cos(kPi * m * s);
    v.resize(2);
    v << t + kt * wave(t, k) * g, s + ks * wave(s, j);
    dv.resize(2, 2);
    dv << 1.0 + kt * dwave(t, k) * g, kt * wave(t, k) * dg, 0.0, 1.0 + ks * dwave(s, j);
  };
}

CubeReparam rank3_reparam(Rng& rng) {
  int k = rng.integer(1, 3), j = rng.integer(1, 3);
  double kt = rng.uniform(-0.6, 0.6), ks = rng.uniform(-0.6, 0.6), kx = rng.uniform(-0.9, 0.9);
  return [=](const Vec& u, Vec& v, Mat& dv) {
    double t = u[0], s = u[1], x = u[2];
    double hs = std::sin(kPi * s), dhs = kPi * std::cos(kPi * s);
    double hx = 1.0 + 0.5 * std::cos(kPi * x), dhx = -0.5 * kPi * std::sin(kPi * x);
    double gx = 1.0 + 0.5 * std::sin(kPi * x), dgx = 0.5 * kPi * std::cos(kPi * x);
    v.resize(3);
    v << t + kt * wave(t, k) * hs * hx, s + ks * wave(s, j) * gx, x + kx * wave(x, 1);
    dv.resize(3, 3);
    dv << 1.0 + kt * dwave(t, k) * hs * hx, kt * wave(t, k) * dhs * hx, kt * wave(t, k) * hs * dhx,
        0.0, 1.0 + ks * dwave(s, j) * gx, ks * wave(s, j) * dgx,
        0.0, 0.0, 1.0 + kx * dwave(x, 1);
  };
}

class SlideCube : public CubeMap {
 public:
  SlideCube(CubePtr gamma, double kappa, int j) : g_(std::move(gamma)), kappa_(kappa), j_(j) {}
  int n() const override { return 3; }
  int d() const override { return g_->d(); }
  void eval(const Vec& u, Vec& p, Mat& jac) const override {
    const SmoothStep& phi = default_smooth_step();
    double s = u[1], xt = phi(u[2]), dxt = phi.derivative(u[2]);
    double sig = s + kappa_ * wave(s, j_), dsig = 1.0 + kappa_ * dwave(s, j_);
    Vec v(2);
    v << u[0], (1.0 - xt) * s + xt * sig;
    Mat jb;
    g_->eval(v, p, jb);
    jac.resize(p.size(), 3);
    jac.col(0) = jb.col(0);
    jac.col(1) = (1.0 - xt + xt * dsig) * jb.col(1);
    jac.col(2) = dxt * (sig - s) * jb.col(1);
  }

 private:
  CubePtr g_;
  double kappa_;
  int j_;
};

}  // namespace

std::vector<CubePtr> thin_perturbations(const CubePtr& c, ThinKind kind, int count,
                                        std::uint64_t seed) {
  const int need = kind == ThinKind::rank1 ? 1 : kind == ThinKind::laminated ? 2 : 3;
  if (c->n() != need) throw UnsupportedKind("perturbation kind does not match the cube dimension");
  Rng rng(seed);
  std::vector<CubePtr> out;
  for (int i = 0; i < count; ++i) {
    CubeReparam rho = kind == ThinKind::rank1       ? rank1_reparam(rng, i)
                      : kind == ThinKind::laminated ? laminated_reparam(rng)
                                                    : rank3_reparam(rng);
    out.push_back(std::make_shared<Reparametrized>(c, rho));
  }
  return out;
}

SlideHomotopy laminated_slide(const CubePtr& gamma, double kappa, int j) {
  if (gamma->n() != 2) throw UnsupportedKind("laminated slides act on 2-paths");
  SlideHomotopy out;
  out.homotopy = std::make_shared<SlideCube>(gamma, kappa, j);
  out.end = std::make_shared<Reparametrized>(gamma, [kappa, j](const Vec& u, Vec& v, Mat& dv) {
    v.resize(2);
    v << u[0], u[1] + kappa * wave(u[1], j);
    dv.resize(2, 2);
    dv << 1.0, 0.0, 0.0, 1.0 + kappa * dwave(u[1], j);
  });
  out.coefficients = [kappa, j](double s, double x) {
    const SmoothStep& phi = default_smooth_step();
    double xt = phi(x);
    double a = phi.derivative(x) * kappa * wave(s, j);
    double b = -(1.0 - xt + xt * (1.0 + kappa * dwave(s, j)));
    return std::make_pair(a, b);
  };
  return out;
}

SampledForm pullback(const FormField& alpha, const CubeMap& c, int grid) {
  if (alpha.d != c.d()) throw DimensionMismatch("pullback: form and cube live in different R^d");
  if (grid < 2) throw DimensionMismatch("pullback: grid needs at least two nodes per axis");
  SampledForm out;
  out.n = c.n();
  out.k = alpha.k;
  out.grid = grid;
  out.sets = index_sets(out.n, out.k);
  const CompiledForm f(alpha);
  std::vector<int> idx(out.n, 0);
  Vec u(out.n), p;
  Mat jac, comps, V(c.d(), out.k);
  while (true) {
    for (int i = 0; i < out.n; ++i) u[i] = static_cast<double>(idx[i]) / (grid - 1);
    c.eval(u, p, jac);
    std::vector<Mat> row;
    if (!f.zero()) f.components(p, comps);
    for (const auto& I : out.sets) {
      for (int j = 0; j < out.k; ++j) V.col(j) = jac.col(I[j]);
      row.push_back(f.zero() ? Mat::Zero(alpha.rows, alpha.cols) : f.contract(comps, V));
    }
    out.nodes.push_back(u);
    out.values.push_back(std::move(row));
    int i = 0;
    while (i < out.n && ++idx[i] == grid) idx[i++] = 0;
    if (i == out.n) break;
  }
  return out;
}

}  // namespace grayhol
