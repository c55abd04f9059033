#include "grayhol/instances.hpp"

#include <cmath>

#include "grayhol/errors.hpp"

namespace grayhol {

namespace {

bool invertible(const Mat& m) {
  try {
    inverse(m);
    return true;
  } catch (const SingularMatrix&) {
    return false;
  }
}

}  // namespace

GroupSpec make_gl(int n) {
  if (n <= 0) throw DimensionMismatch("GL(n) needs n >= 1");
  GroupSpec G;
  G.name = "GL(" + std::to_string(n) + ")";
  G.dim = G.rows = G.cols = n;
  G.identity = [n] { return Mat::Identity(n, n); };
  G.multiply = [](const Mat& a, const Mat& b) -> Mat { return a * b; };
  G.inverse = [](const Mat& a) { return inverse(a); };
  G.exp = [](const Mat& x) { return expm(x); };
  G.log = [](const Mat& g) { return logm(g); };
  G.contains = [n](const Mat& g) {
    return g.rows() == n && g.cols() == n && g.allFinite() && invertible(g);
  };
  G.random_algebra = [n](Rng& rng) { return rng.matrix(n, n); };
  G.bracket = [](const Mat& x, const Mat& y) { return commutator(x, y); };
  G.translate = [](const Mat& g, const Mat& x) -> Mat { return g * x; };
  return G;
}

GroupSpec make_so(int n) {
  GroupSpec G = make_gl(n);
  G.name = "SO(" + std::to_string(n) + ")";
  G.contains = [n](const Mat& g) {
    return g.rows() == n && g.cols() == n && g.allFinite() &&
           (g.transpose() * g - Mat::Identity(n, n)).norm() < 1e-8 && g.determinant() > 0;
  };
  G.project = [](const Mat& g) -> Mat {
    Eigen::JacobiSVD<Mat> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().transpose();
  };
  G.random_algebra = [n](Rng& rng) -> Mat {
    Mat a = rng.matrix(n, n);
    return 0.5 * (a - a.transpose());
  };
  return G;
}

Mat pair_first(const Mat& p) { return p.topRows(p.rows() / 2); }
Mat pair_second(const Mat& p) { return p.bottomRows(p.rows() / 2); }
Mat make_pair(const Mat& a, const Mat& b) {
  Mat p(a.rows() + b.rows(), a.cols());
  p << a, b;
  return p;
}

AdjointInstance make_adjoint(const GroupSpec& base) {
  const int n = base.dim;
  if (n <= 0) throw DimensionMismatch("adjoint instance needs a nonempty base group");
  AdjointInstance A;
  A.base = base;
  const GroupSpec G = base;

  GroupSpec E;
  E.name = G.name + " ⋊ " + G.name;
  E.dim = n;
  E.rows = 2 * n;
  E.cols = n;
  E.identity = [G] { return make_pair(G.identity(), G.identity()); };
  // (a,b)(c,d) = (a b c b^{-1}, b d)
  E.multiply = [G](const Mat& x, const Mat& y) {
    const Mat a = pair_first(x), b = pair_second(x), c = pair_first(y), d = pair_second(y);
    const Mat binv = G.inverse(b);
    return make_pair(a * b * c * binv, b * d);
  };
  // (a,b)^{-1} = (b^{-1} a^{-1} b, b^{-1})
  E.inverse = [G](const Mat& x) {
    const Mat a = pair_first(x), b = pair_second(x);
    const Mat binv = G.inverse(b);
    return make_pair(binv * G.inverse(a) * b, binv);
  };
  // (a,b) -> (ab, b) is an isomorphism onto G x G.
  E.exp = [G](const Mat& u) {
    const Mat x = pair_first(u), y = pair_second(u);
    return make_pair(G.exp(x + y) * G.exp(-y), G.exp(y));
  };
  E.log = [G](const Mat& p) {
    const Mat a = pair_first(p), b = pair_second(p);
    const Mat y = G.log(b);
    return make_pair(G.log(a * b) - y, y);
  };
  E.contains = [G, n](const Mat& p) {
    return p.rows() == 2 * n && p.cols() == n && G.contains(pair_first(p)) &&
           G.contains(pair_second(p));
  };
  if (G.project)
    E.project = [G](const Mat& p) {
      return make_pair(G.project(pair_first(p)), G.project(pair_second(p)));
    };
  E.random_algebra = [G](Rng& rng) {
    Mat x = G.random_algebra(rng);
    Mat y = G.random_algebra(rng);
    return make_pair(x, y);
  };
  E.bracket = [](const Mat& p, const Mat& q) {
    const Mat u1 = pair_first(p), v1 = pair_second(p), u2 = pair_first(q), v2 = pair_second(q);
    return make_pair(commutator(u1, u2) + commutator(u1, v2) + commutator(v1, u2),
                     commutator(v1, v2));
  };
  E.translate = [G](const Mat& p, const Mat& t) {
    const Mat a = pair_first(p), b = pair_second(p), u = pair_first(t), v = pair_second(t);
    return make_pair(a * b * u * G.inverse(b), b * v);
  };

  TwoCrossedModule& H = A.group;
  H.name = "adjoint " + G.name;
  H.G = G;
  H.E = E;
  H.L = G;
  H.delta = [G](const Mat& g) { return make_pair(G.inverse(g), g); };
  H.partial = [](const Mat& p) -> Mat { return pair_first(p) * pair_second(p); };
  H.act_E = [G](const Mat& X, const Mat& p) {
    const Mat Xi = G.inverse(X);
    return make_pair(X * pair_first(p) * Xi, X * pair_second(p) * Xi);
  };
  H.act_L = [G](const Mat& X, const Mat& g) -> Mat { return X * g * G.inverse(X); };
  // {(a,b),(c,d)} = [b d b^{-1}, a]
  H.lifting = [G](const Mat& p, const Mat& q) {
    const Mat a = pair_first(p), b = pair_second(p), d = pair_second(q);
    return group_commutator(b * d * G.inverse(b), a);
  };
  H.act_g_alg = H.act_L;
  H.act_e_alg = H.act_E;
  H.act_l_alg = H.act_L;
  // (a,b) ▷' x = b x b^{-1}
  H.derived_act_alg = [G](const Mat& p, const Mat& x) -> Mat {
    const Mat b = pair_second(p);
    return b * x * G.inverse(b);
  };

  DifferentialTwoCrossedModule& h = A.diff;
  h.name = "differential adjoint " + G.name;
  h.g = {"g", n, n, G.bracket, G.random_algebra};
  h.e = {"g ⋊ g", 2 * n, n, E.bracket, E.random_algebra};
  h.l = h.g;
  h.delta = [](const Mat& x) { return make_pair(-x, x); };
  h.partial = [](const Mat& p) -> Mat { return pair_first(p) + pair_second(p); };
  h.act_e = [](const Mat& X, const Mat& p) {
    return make_pair(commutator(X, pair_first(p)), commutator(X, pair_second(p)));
  };
  h.act_l = [](const Mat& X, const Mat& x) { return commutator(X, x); };
  // second differential of [b d b^{-1}, a]: {(u1,v1),(u2,v2)} = [v2, u1]
  h.lifting = [](const Mat& p, const Mat& q) { return commutator(pair_second(q), pair_first(p)); };
  return A;
}

TwoCrossedModule make_trivial_l_instance(const GroupSpec& base) {
  TwoCrossedModule H;
  const GroupSpec G = base;
  H.name = "crossed module id: " + G.name + " -> " + G.name;
  H.G = G;
  H.E = G;
  GroupSpec L;
  L.name = "1";
  L.dim = L.rows = L.cols = 1;
  L.identity = [] { return Mat::Identity(1, 1); };
  L.multiply = [](const Mat&, const Mat&) { return Mat::Identity(1, 1); };
  L.inverse = [](const Mat&) { return Mat::Identity(1, 1); };
  L.exp = [](const Mat&) { return Mat::Identity(1, 1); };
  L.log = [](const Mat&) { return Mat::Zero(1, 1); };
  L.contains = [](const Mat& m) { return m.rows() == 1 && m.cols() == 1 && m(0, 0) == 1.0; };
  L.random_algebra = [](Rng&) { return Mat::Zero(1, 1); };
  L.bracket = [](const Mat&, const Mat&) { return Mat::Zero(1, 1); };
  L.translate = [](const Mat&, const Mat&) { return Mat::Zero(1, 1); };
  H.L = L;
  H.delta = [G](const Mat&) { return G.identity(); };
  H.partial = [](const Mat& e) { return e; };
  H.act_E = [G](const Mat& X, const Mat& e) -> Mat { return X * e * G.inverse(X); };
  H.act_L = [](const Mat&, const Mat& l) { return l; };
  H.lifting = [](const Mat&, const Mat&) { return Mat::Identity(1, 1); };
  H.act_g_alg = H.act_E;
  H.act_e_alg = H.act_E;
  H.act_l_alg = [](const Mat&, const Mat& x) { return x; };
  H.derived_act_alg = [](const Mat&, const Mat& x) { return x; };
  return H;
}

// ---------------------------------------------------------------------------
// Chain complexes

Mat ChainComplex::degree_mask(int degree) const {
  Mat m = Mat::Zero(total, total);
  for (int n = 0; n < 3; ++n) {
    const int target = n + degree;
    if (target < 0 || target > 2) continue;
    m.block(offset[target], offset[n], dims[target], dims[n]).setOnes();
  }
  return m;
}

Mat ChainComplex::chain_map_basis() const {
  const Mat mask = degree_mask(0);
  std::vector<int> free;
  for (int j = 0; j < total * total; ++j)
    if (mask.data()[j] != 0.0) free.push_back(j);
  // Columns: ∂f − f∂ for unit f on each free entry.
  Mat sys(total * total, static_cast<int>(free.size()));
  for (size_t c = 0; c < free.size(); ++c) {
    Mat f = Mat::Zero(total, total);
    f.data()[free[c]] = 1.0;
    sys.col(static_cast<int>(c)) = flatten(D * f - f * D);
  }
  const Mat ns = null_space(sys);
  Mat basis = Mat::Zero(total * total, ns.cols());
  for (int k = 0; k < ns.cols(); ++k)
    for (size_t c = 0; c < free.size(); ++c) basis(free[c], k) = ns(static_cast<int>(c), k);
  return basis;
}

ChainComplex make_complex(const std::vector<int>& dims_in, const std::vector<Mat>& boundaries) {
  std::vector<int> dims = dims_in;
  while (dims.size() > 1 && dims.back() == 0) dims.pop_back();
  if (dims.size() > 3) throw LengthUnsupported("chain complexes of length > 2 are not supported");
  if (dims.empty()) throw DimensionMismatch("empty chain complex");
  for (int d : dims)
    if (d < 0) throw DimensionMismatch("negative chain-group dimension");
  while (dims.size() < 3) dims.push_back(0);
  ChainComplex C;
  C.dims = dims;
  C.offset = {0, dims[0], dims[0] + dims[1]};
  C.total = dims[0] + dims[1] + dims[2];
  if (C.total == 0) throw DimensionMismatch("chain complex has no nonzero degree");
  C.D = Mat::Zero(C.total, C.total);
  std::vector<Mat> bd = boundaries;
  while (bd.size() < 2) bd.push_back(Mat());
  for (int n = 1; n <= 2; ++n) {
    Mat b = bd[n - 1];
    if (b.size() == 0) b = Mat::Zero(dims[n - 1], dims[n]);
    if (b.rows() != dims[n - 1] || b.cols() != dims[n])
      throw DimensionMismatch("boundary ∂_" + std::to_string(n) + " has wrong shape");
    C.D.block(C.offset[n - 1], C.offset[n], dims[n - 1], dims[n]) = b;
    bd[n - 1] = b;
  }
  C.boundaries = {bd[0], bd[1]};
  const double dd = (C.D * C.D).norm();
  if (dd > 1e-12 * std::max(1.0, C.D.squaredNorm()))
    throw NotAComplex("boundaries do not compose to zero (|∂∂| = " + std::to_string(dd) + ")");
  return C;
}

ChainComplex random_complex(const std::vector<int>& dims, Rng& rng) {
  if (dims.size() != 3) throw DimensionMismatch("random_complex expects three dimensions");
  // ∂_2 = a b^T (rank one), ∂_1 = c d^T with d ⟂ a, so ∂_1 ∂_2 = 0.
  const Vec a = rng.matrix(dims[1], 1);
  const Vec b = rng.matrix(dims[2], 1);
  const Vec c = rng.matrix(dims[0], 1);
  Vec d = rng.matrix(dims[1], 1);
  d -= a * (a.dot(d) / a.dot(a));
  const Mat d2 = a * b.transpose();
  const Mat d1 = c * d.transpose();
  return make_complex(dims, {d1, d2});
}

Mat ChainComplexInstance::beta(const Mat& s) const {
  const Mat& D = complex.D;
  return Mat::Identity(complex.total, complex.total) + D * s + s * D;
}

Mat ChainComplexInstance::alpha(const Mat& b) const {
  const Mat& D = complex.D;
  return -D * b + b * D;
}

namespace {

Mat masked_basis(const Mat& mask) {
  std::vector<int> free;
  for (int j = 0; j < mask.size(); ++j)
    if (mask.data()[j] != 0.0) free.push_back(j);
  Mat basis = Mat::Zero(mask.size(), static_cast<int>(free.size()));
  for (size_t c = 0; c < free.size(); ++c) basis(free[c], static_cast<int>(c)) = 1.0;
  return basis;
}

Mat kernel_within(const Mat& free_basis, const std::function<Mat(const Mat&)>& op, int total) {
  Mat sys(total * total, free_basis.cols());
  for (int c = 0; c < free_basis.cols(); ++c)
    sys.col(c) = flatten(op(unflatten(free_basis.col(c), total, total)));
  if (free_basis.cols() == 0) return free_basis;
  return free_basis * null_space(sys);
}

}  // namespace

Mat ChainComplexInstance::kernel_alpha_basis() const {
  return kernel_within(masked_basis(complex.degree_mask(2)), [this](const Mat& b) { return alpha(b); },
                       complex.total);
}

Mat ChainComplexInstance::kernel_beta_basis() const {
  const Mat& D = complex.D;
  return kernel_within(masked_basis(complex.degree_mask(1)),
                       [&D](const Mat& s) -> Mat { return D * s + s * D; }, complex.total);
}

ChainComplexInstance make_chain_complex(const std::vector<int>& dims,
                                        const std::vector<Mat>& boundaries) {
  ChainComplexInstance I;
  I.complex = make_complex(dims, boundaries);
  const ChainComplex C = I.complex;
  const int T = C.total;
  const Mat D = C.D;
  const Mat mask0 = C.degree_mask(0), mask1 = C.degree_mask(1), mask2 = C.degree_mask(2);
  const Mat chain_basis = C.chain_map_basis();
  const Mat Id = Mat::Identity(T, T);
  auto beta = [D, Id](const Mat& s) -> Mat { return Id + D * s + s * D; };
  auto alpha = [D](const Mat& b) -> Mat { return -D * b + b * D; };
  auto random_chain_map = [chain_basis, T](Rng& rng) -> Mat {
    Vec c = rng.matrix(static_cast<int>(chain_basis.cols()), 1);
    return unflatten(chain_basis * c, T, T);
  };
  auto shape_ok = [T](const Mat& m, const Mat& mask) {
    return m.rows() == T && m.cols() == T && m.allFinite() &&
           m.cwiseProduct((Mat::Ones(T, T) - mask)).norm() <= 1e-12 * (1.0 + m.norm());
  };

  GroupSpec G;
  G.name = "GL1(A)";
  G.dim = G.rows = G.cols = T;
  G.identity = [Id] { return Id; };
  G.multiply = [](const Mat& a, const Mat& b) -> Mat { return a * b; };
  G.inverse = [](const Mat& a) { return inverse(a); };
  G.exp = [](const Mat& x) { return expm(x); };
  G.log = [](const Mat& g) { return logm(g); };
  G.contains = [shape_ok, mask0, D](const Mat& f) {
    return shape_ok(f, mask0) && (D * f - f * D).norm() <= 1e-10 * (1.0 + f.norm()) &&
           invertible(f);
  };
  G.random_algebra = random_chain_map;
  G.bracket = [](const Mat& x, const Mat& y) { return commutator(x, y); };
  G.translate = [](const Mat& g, const Mat& x) -> Mat { return g * x; };

  // s * t = s + t + s∂t + st∂
  auto star = [D](const Mat& s, const Mat& t) -> Mat { return s + t + s * D * t + s * t * D; };
  // *-inverse: solve t + s∂t + st∂ = −s on degree-one maps.
  const Mat free1 = masked_basis(mask1);
  auto star_inverse = [D, T, free1](const Mat& s) -> Mat {
    const int k = static_cast<int>(free1.cols());
    Mat sys(T * T, k);
    for (int c = 0; c < k; ++c) {
      const Mat t = unflatten(free1.col(c), T, T);
      sys.col(c) = flatten(t + s * D * t + s * t * D);
    }
    Eigen::ColPivHouseholderQR<Mat> qr(sys);
    if (qr.rank() < k) throw SingularMatrix("homotopy is not invertible under the * product");
    const Vec coeff = qr.solve(flatten(-s));
    const Mat t = unflatten(free1 * coeff, T, T);
    if ((t + s * D * t + s * t * D + s).norm() > 1e-9 * (1.0 + s.norm()))
      throw SingularMatrix("homotopy is not invertible under the * product");
    return t;
  };
  auto e_bracket = [D](const Mat& s, const Mat& t) -> Mat {
    return s * t * D + s * D * t - t * s * D - t * D * s;
  };
  const Mat free1_basis = free1;
  GroupSpec E;
  E.name = "GL2(A)";
  E.dim = E.rows = E.cols = T;
  E.identity = [T] { return Mat::Zero(T, T); };
  E.multiply = star;
  E.inverse = star_inverse;
  // exp of X solves s' = X + s(∂X + X∂), s(0) = 0, i.e. s = X φ1(∂X + X∂).
  E.exp = [D, T](const Mat& X) -> Mat {
    Mat big = Mat::Zero(2 * T, 2 * T);
    big.topRightCorner(T, T) = X;
    big.bottomRightCorner(T, T) = D * X + X * D;
    return expm(big).topRightCorner(T, T);
  };
  E.contains = [shape_ok, mask1, star_inverse](const Mat& s) {
    if (!shape_ok(s, mask1)) return false;
    try {
      star_inverse(s);
      return true;
    } catch (const SingularMatrix&) {
      return false;
    }
  };
  E.random_algebra = [free1_basis, T](Rng& rng) -> Mat {
    return unflatten(free1_basis * rng.matrix(static_cast<int>(free1_basis.cols()), 1), T, T);
  };
  E.bracket = e_bracket;
  E.translate = [D](const Mat& s, const Mat& X) -> Mat { return X + s * D * X + s * X * D; };

  const Mat free2 = masked_basis(mask2);
  GroupSpec L;
  L.name = "GL3(A)";
  L.dim = L.rows = L.cols = T;
  L.identity = [T] { return Mat::Zero(T, T); };
  L.multiply = [](const Mat& a, const Mat& b) -> Mat { return a + b; };
  L.inverse = [](const Mat& a) -> Mat { return -a; };
  L.exp = [](const Mat& x) { return x; };
  L.log = [](const Mat& x) { return x; };
  L.contains = [shape_ok, mask2](const Mat& b) { return shape_ok(b, mask2); };
  L.random_algebra = [free2, T](Rng& rng) -> Mat {
    return unflatten(free2 * rng.matrix(static_cast<int>(free2.cols()), 1), T, T);
  };
  L.bracket = [T](const Mat&, const Mat&) { return Mat::Zero(T, T); };
  L.translate = [](const Mat&, const Mat& x) { return x; };

  TwoCrossedModule& H = I.group;
  H.name = "chain complex GL(A)";
  H.G = G;
  H.E = E;
  H.L = L;
  H.delta = alpha;
  H.partial = beta;
  auto conj = [](const Mat& f, const Mat& x) -> Mat { return f * x * inverse(f); };
  H.act_E = conj;
  H.act_L = conj;
  // {s,t} = s t β(t)^{-1} β(s)^{-1}
  H.lifting = [beta](const Mat& s, const Mat& t) -> Mat {
    return s * t * inverse(beta(t)) * inverse(beta(s));
  };
  H.act_g_alg = conj;
  H.act_e_alg = conj;
  H.act_l_alg = conj;
  // e ▷' l = l + {α(−l), e} = l − l ∂ e β(e)^{-1}  (linear in l)
  H.derived_act_alg = [D, beta](const Mat& e, const Mat& l) -> Mat {
    return l - l * D * e * inverse(beta(e));
  };

  DifferentialTwoCrossedModule& h = I.diff;
  h.name = "differential chain complex gl(A)";
  h.g = {"gl1(A)", T, T, G.bracket, G.random_algebra};
  h.e = {"gl2(A)", T, T, e_bracket, E.random_algebra};
  h.l = {"gl3(A)", T, T, L.bracket, L.random_algebra};
  h.delta = alpha;
  h.partial = [D](const Mat& s) -> Mat { return D * s + s * D; };
  h.act_e = [](const Mat& X, const Mat& s) { return commutator(X, s); };
  h.act_l = [](const Mat& X, const Mat& b) { return commutator(X, b); };
  h.lifting = [](const Mat& s, const Mat& t) -> Mat { return s * t; };
  return I;
}

}  // namespace grayhol
