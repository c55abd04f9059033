#include <cmath>

#include "grayhol/errors.hpp"
#include "grayhol/instances.hpp"

namespace grayhol {

Vec XModData::g_bracket(const Vec& x, const Vec& y) const {
  Vec out = Vec::Zero(dg);
  for (int i = 0; i < dg; ++i)
    if (x(i) != 0.0) out += x(i) * (g_ad[i] * y);
  return out;
}

Vec XModData::e_bracket(const Vec& u, const Vec& v) const {
  Vec out = Vec::Zero(de);
  for (int i = 0; i < de; ++i)
    if (u(i) != 0.0) out += u(i) * (e_ad[i] * v);
  return out;
}

Mat XModData::ad_g(const Vec& x) const {
  Mat out = Mat::Zero(dg, dg);
  for (int i = 0; i < dg; ++i) out += x(i) * g_ad[i];
  return out;
}

Mat XModData::act_of(const Vec& x) const {
  Mat out = Mat::Zero(de, de);
  for (int i = 0; i < dg; ++i) out += x(i) * act[i];
  return out;
}

Mat XModData::F(const Vec& e) const {
  Mat out(de, dg);
  for (int i = 0; i < dg; ++i) out.col(i) = act[i] * e;
  return out;
}

std::vector<Mat> structure_constants(const std::vector<Mat>& basis) {
  const int d = static_cast<int>(basis.size());
  Mat B(basis.empty() ? 0 : basis[0].size(), d);
  for (int i = 0; i < d; ++i) B.col(i) = flatten(basis[i]);
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(B);
  std::vector<Mat> ad(d, Mat::Zero(d, d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Vec target = flatten(commutator(basis[i], basis[j]));
      const Vec c = cod.solve(target);
      if ((B * c - target).norm() > 1e-9 * (1.0 + target.norm()))
        throw DegenerateCrossedModule("basis does not span a Lie subalgebra");
      ad[i].col(j) = c;
    }
  return ad;
}

XModData identity_xmod(const std::vector<Mat>& basis) {
  XModData x;
  x.dg = x.de = static_cast<int>(basis.size());
  x.g_ad = structure_constants(basis);
  x.e_ad = x.g_ad;
  x.D = Mat::Identity(x.dg, x.dg);
  x.act = x.g_ad;
  return x;
}

std::vector<Mat> so3_basis() {
  std::vector<Mat> b(3, Mat::Zero(3, 3));
  b[0](1, 2) = -1; b[0](2, 1) = 1;
  b[1](0, 2) = 1;  b[1](2, 0) = -1;
  b[2](0, 1) = -1; b[2](1, 0) = 1;
  return b;
}

std::vector<Mat> gl_basis(int n) {
  std::vector<Mat> b;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      Mat m = Mat::Zero(n, n);
      m(i, j) = 1.0;
      b.push_back(m);
    }
  return b;
}

namespace {

Vec unit(int n, int i) {
  Vec v = Vec::Zero(n);
  v(i) = 1.0;
  return v;
}

// Null space of a linear residual map R: R^k -> R^m, given as a callback.
Mat kernel_of(int k, const std::function<Vec(const Vec&)>& residual) {
  if (k == 0) return Mat(0, 0);
  Vec r0 = residual(Vec::Zero(k));
  Mat sys(r0.size(), k);
  for (int c = 0; c < k; ++c) sys.col(c) = residual(unit(k, c));
  return null_space(sys);
}

void check_xmod(const XModData& x) {
  if (x.dg <= 0 || x.de <= 0) throw DegenerateCrossedModule("empty crossed module");
  if (static_cast<int>(x.g_ad.size()) != x.dg || static_cast<int>(x.e_ad.size()) != x.de ||
      static_cast<int>(x.act.size()) != x.dg || x.D.rows() != x.dg || x.D.cols() != x.de)
    throw DimensionMismatch("crossed module data has inconsistent shapes");
  double worst = 0.0, scale = 1.0;
  for (int i = 0; i < x.de; ++i)
    for (int j = 0; j < x.de; ++j) {
      const Vec u = unit(x.de, i), v = unit(x.de, j);
      // ∂(u) ▷ v = [u, v]  and  ∂[u,v] = [∂u, ∂v]
      worst = std::max(worst, (x.act_of(x.D * u) * v - x.e_bracket(u, v)).norm());
      worst = std::max(worst, (x.D * x.e_bracket(u, v) - x.g_bracket(x.D * u, x.D * v)).norm());
    }
  for (int i = 0; i < x.dg; ++i)
    for (int j = 0; j < x.de; ++j) {
      const Vec X = unit(x.dg, i), v = unit(x.de, j);
      worst = std::max(worst, (x.D * (x.act_of(X) * v) - x.g_bracket(X, x.D * v)).norm());
    }
  for (const auto& m : x.g_ad) scale = std::max(scale, m.norm());
  if (worst > 1e-9 * scale)
    throw DegenerateCrossedModule("input violates the differential crossed-module laws (residual " +
                                  std::to_string(worst) + ")");
}

}  // namespace

Mat AutomorphismInstance::make_gl2(const Vec& a, const Mat& s) const {
  Mat v(xmod.dg + xmod.de * xmod.dg, 1);
  v.topRows(xmod.dg) = a;
  v.bottomRows(xmod.de * xmod.dg) = flatten(s);
  return v;
}

Vec AutomorphismInstance::gl2_a(const Mat& v) const { return v.topRows(xmod.dg); }

Mat AutomorphismInstance::gl2_s(const Mat& v) const {
  return unflatten(v.bottomRows(xmod.de * xmod.dg), xmod.de, xmod.dg);
}

AutomorphismInstance make_automorphism(const XModData& xmod) {
  check_xmod(xmod);
  AutomorphismInstance A;
  A.xmod = xmod;
  const XModData X = xmod;
  const int dg = X.dg, de = X.de, n1 = dg + de;

  // gl¹: pairs (f1, f2) of derivations forming a chain map compatible with ▷.
  auto residual_gl1 = [X, dg, de](const Vec& coeffs) {
    const Mat f1 = unflatten(coeffs.head(dg * dg), dg, dg);
    const Mat f2 = unflatten(coeffs.tail(de * de), de, de);
    std::vector<double> r;
    auto push = [&r](const Vec& v) { r.insert(r.end(), v.data(), v.data() + v.size()); };
    for (int i = 0; i < dg; ++i)
      for (int j = 0; j < dg; ++j) {
        const Vec x = unit(dg, i), y = unit(dg, j);
        push(f1 * X.g_bracket(x, y) - X.g_bracket(f1 * x, y) - X.g_bracket(x, f1 * y));
      }
    for (int i = 0; i < de; ++i)
      for (int j = 0; j < de; ++j) {
        const Vec u = unit(de, i), v = unit(de, j);
        push(f2 * X.e_bracket(u, v) - X.e_bracket(f2 * u, v) - X.e_bracket(u, f2 * v));
      }
    push(flatten(X.D * f2 - f1 * X.D));
    for (int i = 0; i < dg; ++i)
      for (int j = 0; j < de; ++j) {
        const Vec x = unit(dg, i), v = unit(de, j);
        push(f2 * (X.act_of(x) * v) - X.act_of(f1 * x) * v - X.act_of(x) * (f2 * v));
      }
    return Vec(Eigen::Map<Vec>(r.data(), static_cast<Eigen::Index>(r.size())));
  };
  const Mat k1 = kernel_of(dg * dg + de * de, residual_gl1);
  A.gl1_basis = Mat::Zero(n1 * n1, k1.cols());
  for (int c = 0; c < k1.cols(); ++c) {
    Mat f = Mat::Zero(n1, n1);
    f.topLeftCorner(dg, dg) = unflatten(k1.col(c).head(dg * dg), dg, dg);
    f.bottomRightCorner(de, de) = unflatten(k1.col(c).tail(de * de), de, de);
    A.gl1_basis.col(c) = flatten(f);
  }

  // Der(g, e): s([x,y]) = x ▷ s(y) − y ▷ s(x).
  auto residual_der = [X, dg, de](const Vec& coeffs) {
    const Mat s = unflatten(coeffs, de, dg);
    std::vector<double> r;
    for (int i = 0; i < dg; ++i)
      for (int j = 0; j < dg; ++j) {
        const Vec x = unit(dg, i), y = unit(dg, j);
        const Vec v = s * X.g_bracket(x, y) - X.act_of(x) * (s * y) + X.act_of(y) * (s * x);
        r.insert(r.end(), v.data(), v.data() + v.size());
      }
    return Vec(Eigen::Map<Vec>(r.data(), static_cast<Eigen::Index>(r.size())));
  };
  A.der_basis = kernel_of(de * dg, residual_der);
  if (A.gl1_basis.cols() == 0)
    throw DegenerateCrossedModule("no compatible derivation pairs were found");

  const Mat gl1_basis = A.gl1_basis, der_basis = A.der_basis;
  const AutomorphismInstance shape = A;  // for the (de)serialisation helpers
  auto f1_of = [dg](const Mat& f) -> Mat { return f.topLeftCorner(dg, dg); };
  auto f2_of = [dg, de](const Mat& f) -> Mat { return f.bottomRightCorner(de, de); };
  auto diag = [dg, de, n1](const Mat& f1, const Mat& f2) {
    Mat f = Mat::Zero(n1, n1);
    f.topLeftCorner(dg, dg) = f1;
    f.bottomRightCorner(de, de) = f2;
    return f;
  };
  // q'(a) = (ad_a, a ▷ ·)
  auto qprime = [X, diag](const Vec& a) { return diag(X.ad_g(a), X.act_of(a)); };
  // (f1, f2) ▷ s = f2 s − s f1
  auto act_der = [f1_of, f2_of](const Mat& f, const Mat& s) -> Mat {
    return f2_of(f) * s - s * f1_of(f);
  };

  DifferentialTwoCrossedModule& h = A.diff;
  h.name = "automorphism 2-crossed module";
  h.g = {"gl1", n1, n1, [](const Mat& a, const Mat& b) { return commutator(a, b); },
         [gl1_basis, n1](Rng& rng) -> Mat {
           return unflatten(gl1_basis * rng.matrix(static_cast<int>(gl1_basis.cols()), 1), n1, n1);
         }};
  h.e = {"gl2", dg + de * dg, 1,
         [shape, X, qprime, act_der](const Mat& p, const Mat& q) -> Mat {
           const Vec x = shape.gl2_a(p), y = shape.gl2_a(q);
           const Mat s = shape.gl2_s(p), t = shape.gl2_s(q);
           const Mat st = s * X.D * t - t * X.D * s;
           return shape.make_gl2(X.g_bracket(x, y),
                                 act_der(qprime(x), t) - act_der(qprime(y), s) + st);
         },
         [shape, der_basis, dg, de](Rng& rng) -> Mat {
           const Vec a = rng.matrix(dg, 1);
           const Vec c = rng.matrix(static_cast<int>(der_basis.cols()), 1);
           const Mat s = der_basis.cols() ? unflatten(der_basis * c, de, dg) : Mat::Zero(de, dg);
           return shape.make_gl2(a, s);
         }};
  h.l = {"gl3 = e", de, 1,
         [X](const Mat& u, const Mat& v) -> Mat { return X.e_bracket(u.col(0), v.col(0)); },
         [de](Rng& rng) { return rng.matrix(de, 1); }};
  // α'(e) = (∂e, F_e)
  h.delta = [shape, X](const Mat& e) { return shape.make_gl2(X.D * e.col(0), X.F(e.col(0))); };
  // β'(a, s) = q'(a) + q(s), q(s) = (∂s, s∂)
  h.partial = [shape, X, qprime, diag](const Mat& v) -> Mat {
    const Vec a = shape.gl2_a(v);
    const Mat s = shape.gl2_s(v);
    return qprime(a) + diag(X.D * s, s * X.D);
  };
  h.act_e = [shape, f1_of, act_der](const Mat& f, const Mat& v) {
    return shape.make_gl2(f1_of(f) * shape.gl2_a(v), act_der(f, shape.gl2_s(v)));
  };
  h.act_l = [f2_of](const Mat& f, const Mat& e) -> Mat { return f2_of(f) * e; };
  // {(x,s),(y,t)} = −s(y)
  h.lifting = [shape](const Mat& p, const Mat& q) -> Mat {
    return -(shape.gl2_s(p) * shape.gl2_a(q));
  };
  return A;
}

}  // namespace grayhol
