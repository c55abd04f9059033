#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grayhol/errors.hpp"
#include "grayhol/holonomy.hpp"

using namespace grayhol;

namespace {

Vec anchor(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

struct World {
  AdjointInstance A = make_adjoint(make_gl(2));
  const TwoCrossedModule& H = A.group;
  const DifferentialTwoCrossedModule& h = A.diff;
  Rng rng{41};
  Vec P0 = Vec::Zero(3), P1 = anchor(0.8, 0.3, -0.2);

  FormTriple zero_triple() const {
    return {"zero", FormField(3, 1, H.G.rows, H.G.cols), FormField(3, 2, H.E.rows, H.E.cols),
            FormField(3, 3, H.L.rows, H.L.cols)};
  }
  FormTriple generic_triple(std::uint64_t seed = 3) const { return recipe_r1(A, 3, 2, 0.5, seed); }
  CubePtr cube(int n, const Vec& a, const Vec& b) {
    return std::make_shared<SmoothedCube>(PolynomialBase::random(n, 3, 2, 0.6, rng, a, b));
  }
};

CubePtr half(const CubePtr& c, int axis, double lo) {
  return std::make_shared<Reparametrized>(c, [axis, lo](const Vec& u, Vec& v, Mat& dv) {
    v = u;
    v[axis] = lo + 0.5 * u[axis];
    dv = Mat::Identity(u.size(), u.size());
    dv(axis, axis) = 0.5;
  });
}

CubePtr t_line(const CubePtr& J, double s, double x) {
  return std::make_shared<Slice>(std::make_shared<Slice>(J, 2, x), 1, s);
}

// g ▷ m(∂_t, ∂_a) at the nodes t_i = i/n of the (s, x) line, with g built from
// products of path holonomies over the node intervals.
struct LineSamples {
  std::vector<Mat> a, b, theta;
};
LineSamples sample_line(const Connection& c, const CubePtr& J, double s, double x, int n) {
  const auto& H = *c.H;
  const CubePtr line = t_line(J, s, x);
  LineSamples out;
  Mat g = H.G.identity();
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    if (i > 0) g = g * path_holonomy(c, *line, (i - 1.0) / n, t, 8).value;
    Vec u(3);
    u << t, s, x;
    const Vec p = J->point(u);
    const Mat Jac = J->jacobian(u);
    out.a.push_back(H.act_e_alg(g, c.triple.m.evaluate(p, Jac.leftCols(2))));
    Mat V(3, 2);
    V << Jac.col(0), Jac.col(2);
    out.b.push_back(H.act_e_alg(g, c.triple.m.evaluate(p, V)));
    out.theta.push_back(H.act_l_alg(g, c.triple.theta.evaluate(p, Jac)));
  }
  return out;
}

Mat trapezoid(const std::vector<Mat>& f) {
  const int n = static_cast<int>(f.size()) - 1;
  Mat r = 0.5 * (f.front() + f.back());
  for (int i = 1; i < n; ++i) r += f[i];
  return r / n;
}

Mat theta_oracle(const Connection& c, const CubePtr& J, double s, double x, int n) {
  return trapezoid(sample_line(c, J, s, x, n).theta);
}

// Σ over the simplex t' < t by trapezoid weights on the diagonal and below.
Mat mm_oracle(const Connection& c, const CubePtr& J, double s, double x, int n) {
  const LineSamples L = sample_line(c, J, s, x, n);
  const double h = 1.0 / n;
  std::vector<Mat> f(n + 1);
  Mat P = Mat::Zero(L.a[0].rows(), L.a[0].cols()), Q = P;
  for (int i = 0; i <= n; ++i) {
    if (i > 0) {
      P += 0.5 * h * (L.a[i - 1] + L.a[i]);
      Q += 0.5 * h * (L.b[i - 1] + L.b[i]);
    }
    f[i] = c.h->lifting(P, L.b[i]) - c.h->lifting(Q, L.a[i]);
  }
  return trapezoid(f);
}

template <class F>
Mat richardson(F f, int n) {
  return (4.0 * f(2 * n) - f(n)) / 3.0;
}

}  // namespace

TEST_CASE_FIXTURE(World, "a vanishing connection has trivial holonomies") {
  const Connection c(H, h, zero_triple());
  const CubePtr path = cube(1, P0, P1), G = cube(2, P0, P1), J = cube(3, P0, P1);
  CHECK(frob_diff(path_holonomy(c, *path, 16).value, H.G.identity()) == 0.0);
  CHECK(frob_diff(surface_holonomy(c, *G, 8, 8).value, H.E.identity()) == 0.0);
  CHECK(frob_diff(volume_holonomy(c, *J, 4).value, H.L.identity()) == 0.0);
}

TEST_CASE_FIXTURE(World, "constant connection along a straight line gives exp(A)") {
  FormTriple t = zero_triple();
  const Mat A = 0.7 * H.G.random_algebra(rng);
  t.omega.add({0}, {0, 0, 0}, A);
  const Connection c(H, h, t);
  const PolynomialBase line(1, P0, Vec::Unit(3, 0), {});
  CHECK(frob_diff(path_holonomy(c, line, 64).value, H.G.exp(A)) < 1e-10);
  // orthogonal direction: ω(γ') = 0
  const PolynomialBase side(1, P0, Vec::Unit(3, 1), {});
  CHECK(frob_diff(path_holonomy(c, side, 4).value, H.G.identity()) < 1e-15);
}

TEST_CASE_FIXTURE(World, "path holonomy is multiplicative under concatenation") {
  const Connection c(H, h, generic_triple());
  const CubePtr a = cube(1, P0, P1), b = cube(1, P1, anchor(-0.3, 0.5, 0.4));
  const Concatenation ab(a, b, 0);
  const Mat lhs = path_holonomy(c, ab, 512).value;
  const Mat rhs = path_holonomy(c, *a, 256).value * path_holonomy(c, *b, 256).value;
  CHECK(frob_diff(lhs, rhs) < 1e-9);
  // and inverted under reversal
  const Reversed ra(a, 0);
  CHECK(frob_diff(path_holonomy(c, ra, 128).value * path_holonomy(c, *a, 128).value,
                  H.G.identity()) < 1e-9);
}

TEST_CASE_FIXTURE(World, "m = 0 gives e = 1 even for a nontrivial ω") {
  FormTriple t = generic_triple();
  t.m = FormField(3, 2, H.E.rows, H.E.cols);
  const Connection c(H, h, t);
  CHECK(frob_diff(surface_holonomy(c, *cube(2, P0, P1), 8, 8).value, H.E.identity()) == 0.0);
}

TEST_CASE_FIXTURE(World, "non-abelian Green theorem at N = 64") {
  const Connection c(H, h, generic_triple());
  CHECK(green_residual(c, *cube(2, P0, P1), 64, 64) <= 1e-6);
}

TEST_CASE_FIXTURE(World, "surface holonomy splits along s") {
  const Connection c(H, h, generic_triple());
  const CubePtr G = cube(2, P0, P1);
  const Mat e = surface_holonomy(c, *G, 64, 128).value;
  const Mat lo = surface_holonomy(c, *half(G, 1, 0.0), 64, 64).value;
  const Mat hi = surface_holonomy(c, *half(G, 1, 0.5), 64, 64).value;
  CHECK(frob_diff(e, H.E.multiply(lo, hi)) < 1e-9);
  const Reversed rev(G, 1);
  const Mat er = surface_holonomy(c, rev, 64, 128).value;
  CHECK(frob_diff(H.E.multiply(e, er), H.E.identity()) < 1e-9);
}

TEST_CASE_FIXTURE(World, "twisted θ integral against a trapezoid-Richardson oracle") {
  const Connection c(H, h, generic_triple());
  const CubePtr J = cube(3, P0, P1);
  for (auto [s, x] : {std::pair{0.3, 0.6}, std::pair{0.5, 0.6}}) {
    const Mat got = twisted_integral_theta(c, *J, s, x, 64);
    const Mat want = richardson([&](int n) { return theta_oracle(c, J, s, x, n); }, 128);
    CHECK(got.norm() > 1e-4);
    CHECK(frob_diff(got, want) <= 1e-10);
  }
}

TEST_CASE_FIXTURE(World, "twisted m–m integral against a simplex-sum oracle") {
  const Connection c(H, h, generic_triple());
  const CubePtr J = cube(3, P0, P1);
  for (auto [s, x] : {std::pair{0.3, 0.6}, std::pair{0.5, 0.6}}) {
    const Mat got = twisted_integral_mm(c, *J, s, x, 64);
    const Mat want = richardson([&](int n) { return mm_oracle(c, J, s, x, n); }, 128);
    CHECK(got.norm() > 1e-4);
    CHECK(frob_diff(got, want) <= 1e-8);
  }
}

TEST_CASE_FIXTURE(World, "degenerate volumes have l = 1") {
  const Connection c(H, h, generic_triple());
  const CubePtr G = cube(2, P0, P1);
  const Extend flat(G, 3, {0, 1});
  CHECK(twisted_integral_theta(c, flat, 0.4, 0.5, 16).norm() == 0.0);
  CHECK(twisted_integral_mm(c, flat, 0.4, 0.5, 16).norm() == 0.0);
  CHECK(frob_diff(volume_holonomy(c, flat, 6).value, H.L.identity()) == 0.0);

  FormTriple t = generic_triple();
  t.m = FormField(3, 2, H.E.rows, H.E.cols);
  t.theta = FormField(3, 3, H.L.rows, H.L.cols);
  const Connection flat_c(H, h, t);
  CHECK(frob_diff(volume_holonomy(flat_c, *cube(3, P0, P1), 4).value, H.L.identity()) == 0.0);
}

TEST_CASE_FIXTURE(World, "non-abelian Stokes theorem at N = 32") {
  const Connection c(H, h, generic_triple());
  CHECK(stokes_residual(c, *cube(3, P0, P1), 32) <= 1e-6);
}

TEST_CASE_FIXTURE(World, "Baez–Schreiber formula is linear in A") {
  const Connection c(H, h, generic_triple());
  const FormField zero(3, 2, h.e.rows, h.e.cols);
  const auto r = baez_schreiber_residual(c, zero, *cube(3, P0, P1), 16, 1e-3, {{0.4, 0.6}});
  CHECK(r.residual == 0.0);
  CHECK(r.lhs_norm == 0.0);
}

TEST_CASE_FIXTURE(World, "dimension and sphere checks") {
  const Connection c(H, h, generic_triple());
  CHECK_THROWS_AS(path_holonomy(c, *cube(2, P0, P1), 4), DimensionMismatch);
  CHECK_THROWS_AS(surface_holonomy(c, *cube(3, P0, P1), 4, 4), DimensionMismatch);
  CHECK_THROWS_AS(wilson_sphere(c, *cube(3, P0, P1), 4), NotASphereMap);
  FormTriple bad = generic_triple();
  bad.omega = FormField(3, 1, 3, 3);
  CHECK_THROWS_AS(Connection(H, h, bad), DimensionMismatch);
}
