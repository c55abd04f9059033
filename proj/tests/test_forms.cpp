#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "grayhol/cubes.hpp"
#include "grayhol/errors.hpp"
#include "grayhol/forms.hpp"
#include "grayhol/triples.hpp"

using namespace grayhol;

namespace {

const Binary product = [](const Mat& a, const Mat& b) -> Mat { return a * b; };

Vec random_vec(Rng& rng, int d) { return rng.matrix(d, 1); }

int sign_of(const std::vector<int>& p) {
  int s = 1;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) s = -s;
  return s;
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// (α ∧^B β)(v_1..v_{a+b}) = 1/(a! b!) Σ_σ sgn σ B(α(v_σ...), β(v_σ...)).
Mat wedge_oracle(const FormField& a, const FormField& b, const Binary& B, const Vec& x, const Mat& V) {
  const int n = a.k + b.k;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Mat sum;
  do {
    Mat Va(V.rows(), a.k), Vb(V.rows(), b.k);
    for (int i = 0; i < a.k; ++i) Va.col(i) = V.col(perm[i]);
    for (int i = 0; i < b.k; ++i) Vb.col(i) = V.col(perm[a.k + i]);
    const Mat term = sign_of(perm) * B(a.evaluate(x, Va), b.evaluate(x, Vb));
    sum = sum.size() ? Mat(sum + term) : term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum / (factorial(a.k) * factorial(b.k));
}

FormField random_matrix_form(int d, int k, int degree, Rng& rng) {
  return random_form(d, k, 2, 2, degree, rng, [](Rng& r) { return r.matrix(2, 2); });
}

}  // namespace

TEST_CASE("index sets") {
  CHECK(index_sets(4, 2).size() == 6);
  CHECK(index_sets(4, 0).size() == 1);
  CHECK(index_sets(3, 4).empty());
  CHECK(index_sets(5, 3).front() == std::vector<int>{0, 1, 2});
}

TEST_CASE("adding with unsorted or repeated indices") {
  FormField f(3, 2, 1, 1);
  f.add({1, 0}, {0, 0, 0}, Mat::Ones(1, 1));
  CHECK(f.component({0, 1}, Vec::Zero(3))(0, 0) == -1.0);
  f.add({2, 2}, {0, 0, 0}, Mat::Ones(1, 1));
  CHECK(f.terms.size() == 1);
}

TEST_CASE("1-forms with scalar pairing") {
  Rng rng(1);
  const auto scalar = [](Rng& r) { return r.matrix(1, 1); };
  const FormField a = random_form(3, 1, 1, 1, 2, rng, scalar), b = random_form(3, 1, 1, 1, 2, rng, scalar);
  const FormField w = wedge(a, b, product, 1, 1);
  const Vec x = random_vec(rng, 3), u = random_vec(rng, 3), v = random_vec(rng, 3);
  Mat V(3, 2);
  V << u, v;
  const double expected = a.evaluate(x, u)(0, 0) * b.evaluate(x, v)(0, 0) -
                          a.evaluate(x, v)(0, 0) * b.evaluate(x, u)(0, 0);
  CHECK(w.evaluate(x, V)(0, 0) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("wedge of a 2-form and a 1-form matches the permutation-sum oracle") {
  Rng rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    const FormField a = random_matrix_form(4, 2, 2, rng), b = random_matrix_form(4, 1, 2, rng);
    const FormField w = wedge(a, b, product, 2, 2);
    const Vec x = random_vec(rng, 4);
    const Mat V = rng.matrix(4, 3);
    CHECK(frob_diff(w.evaluate(x, V), wedge_oracle(a, b, product, x, V)) < 1e-12);
  }
}

TEST_CASE("graded symmetry and antisymmetry") {
  Rng rng(3);
  const FormField a = random_matrix_form(4, 2, 1, rng), b = random_matrix_form(4, 1, 2, rng);
  const Binary op = [](const Mat& x, const Mat& y) -> Mat { return y * x; };
  const FormField ab = wedge(a, b, product, 2, 2), ba = wedge(b, a, op, 2, 2);
  const Vec x = random_vec(rng, 4);
  Mat V = rng.matrix(4, 3);
  CHECK(frob_diff(ab.evaluate(x, V), ba.evaluate(x, V)) < 1e-12);  // (−1)^{2·1} = 1
  Mat W = V;
  W.col(0).swap(W.col(2));
  CHECK(frob_diff(ab.evaluate(x, W), -ab.evaluate(x, V)) < 1e-12);
  CHECK_THROWS_AS(wedge(a, random_matrix_form(3, 1, 1, rng), product, 2, 2), DimensionMismatch);
}

TEST_CASE("exterior derivative") {
  FormField c(3, 1, 1, 1);
  c.add({0}, {0, 0, 0}, Mat::Constant(1, 1, 2.0));
  CHECK(exterior_derivative(c).terms.empty());

  FormField f(3, 1, 1, 1);
  f.add({1}, {1, 0, 0}, Mat::Ones(1, 1));  // x₁ dx₂
  const FormField df = exterior_derivative(f);
  REQUIRE(df.terms.size() == 1);
  CHECK(df.terms[0].I == std::vector<int>{0, 1});
  CHECK(df.component({0, 1}, Vec::Random(3))(0, 0) == 1.0);

  Rng rng(4);
  const FormField g = random_matrix_form(4, 1, 3, rng);
  CHECK(exterior_derivative(exterior_derivative(g)).pruned(1e-14).terms.empty());
}

TEST_CASE("Leibniz rule on random pairs") {
  Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const FormField a = random_matrix_form(4, 1, 2, rng), b = random_matrix_form(4, 2, 2, rng);
    const FormField lhs = exterior_derivative(wedge(a, b, product, 2, 2));
    const FormField rhs = wedge(exterior_derivative(a), b, product, 2, 2) -
                          wedge(a, exterior_derivative(b), product, 2, 2);
    const Vec x = random_vec(rng, 4);
    const Mat V = rng.matrix(4, 4);
    CHECK(frob_diff(lhs.evaluate(x, V), rhs.evaluate(x, V)) < 1e-12);
  }
}

TEST_CASE("curvature conventions") {
  const AdjointInstance A = make_adjoint(make_gl(2));
  const auto& h = A.diff;
  FormField abelian(3, 1, 2, 2);
  abelian.add({0}, {0, 0, 0}, Mat(Eigen::Vector2d(1.0, 2.0).asDiagonal()));
  abelian.add({2}, {0, 0, 0}, Mat(Eigen::Vector2d(-0.5, 0.3).asDiagonal()));
  CHECK(curvature(h, abelian).pruned(1e-15).terms.empty());

  Rng rng(6);
  const FormField w = random_form(3, 1, 2, 2, 2, rng, h.g.random);
  const FormField W = curvature(h, w);
  const Vec x = random_vec(rng, 3);
  const Mat V = rng.matrix(3, 2);
  // Ω(u, v) = dω(u, v) + [ω(u), ω(v)]
  const Mat expected = exterior_derivative(w).evaluate(x, V) +
                       commutator(w.evaluate(x, V.col(0)), w.evaluate(x, V.col(1)));
  CHECK(frob_diff(W.evaluate(x, V), expected) < 1e-12);
}

TEST_CASE("Bianchi identity and ∂𝓜 = 0") {
  const AdjointInstance A = make_adjoint(make_gl(2));
  const auto& h = A.diff;
  const FormTriple t = recipe_r1(A, 4, 2, 0.4, 7);
  const FormField W = curvature(h, t.omega);
  const FormField bianchi = covariant_derivative(t.omega, W, h.g.bracket);
  CHECK(bianchi.pruned(1e-12).terms.empty());
  const FormField M = two_curvature(h, t.omega, t.m);
  CHECK(map_values(M, h.partial, 2, 2).pruned(1e-12).terms.empty());
}

TEST_CASE("m ∧^{,} m against the permutation oracle; Θ of a flat triple") {
  Rng rng(8);
  const ChainComplex cx = random_complex({2, 3, 2}, rng);
  const ChainComplexInstance C = make_chain_complex(cx.dims, cx.boundaries);
  const auto& h = C.diff;
  const Mat KB = C.kernel_beta_basis();
  const int d = 4;
  // Flat data: ω = 0, m constant with ∂m = 0, θ = 0.
  FormField omega(d, 1, h.g.rows, h.g.cols), m(d, 2, h.e.rows, h.e.cols), theta(d, 3, h.l.rows, h.l.cols);
  for (const auto& I : index_sets(d, 2)) {
    const Vec c = KB * rng.matrix(static_cast<int>(KB.cols()), 1);
    m.add(I, std::vector<int>(d, 0), unflatten(c, h.e.rows, h.e.cols));
  }
  const FormTriple t{"flat", omega, m, theta};
  CHECK(check_triple(h, t).pass);

  const FormField mm = lifting_square(h, m);
  const Vec x = random_vec(rng, d);
  const Mat V = rng.matrix(d, 4);
  const Mat oracle = wedge_oracle(m, m, h.lifting, x, V);
  CHECK(frob_diff(mm.evaluate(x, V), oracle) < 1e-12);
  CHECK(mm.evaluate(x, V).norm() > 1e-3);
  CHECK(frob_diff(three_curvature(h, omega, m, theta, 6.0).evaluate(x, V), -oracle) < 1e-12);
  CHECK(frob_diff(three_curvature(h, omega, m, theta, -6.0).evaluate(x, V), oracle) < 1e-12);
}

TEST_CASE("map_values is linear in the coefficients") {
  Rng rng(9);
  const FormField a = random_matrix_form(3, 2, 2, rng);
  const FormField twice = map_values(a, [](const Mat& v) -> Mat { return 2.0 * v.transpose(); }, 2, 2);
  const Vec x = random_vec(rng, 3);
  const Mat V = rng.matrix(3, 2);
  CHECK(frob_diff(twice.evaluate(x, V), 2.0 * a.evaluate(x, V).transpose()) < 1e-13);
  CHECK(frob_diff((a * 3.0 - a).evaluate(x, V), 2.0 * a.evaluate(x, V)) < 1e-13);
}

TEST_CASE("compiled evaluation agrees with direct evaluation") {
  Rng rng(10);
  const FormField a = random_matrix_form(4, 3, 3, rng);
  const CompiledForm c(a);
  const Vec x = random_vec(rng, 4);
  const Mat V = rng.matrix(4, 3);
  CHECK(frob_diff(c.evaluate(x, V), a.evaluate(x, V)) < 1e-13);
  CHECK(a.max_degree() <= 3);
}

TEST_CASE("pullback") {
  Rng rng(11);
  const FormField a = random_matrix_form(3, 2, 2, rng);
  Vec P(3);
  P << 0.2, -0.1, 0.4;
  const SampledForm z = pullback(a, *constant_cube(2, P), 5);
  for (const auto& row : z.values) CHECK(row[0].norm() == 0.0);

  FormField dx1(3, 1, 1, 1);
  dx1.add({0}, {0, 0, 0}, Mat::Ones(1, 1));
  Vec e0 = Vec::Zero(3);
  e0[0] = 1.0;
  const SmoothedCube line(std::make_shared<PolynomialBase>(1, Vec(Vec::Zero(3)), e0, std::vector<PolynomialTerm>{}));
  const SampledForm s = pullback(dx1, line, 33);
  const SmoothStep& phi = default_smooth_step();
  for (int i = 0; i < 33; ++i)
    CHECK(s.values[i][0](0, 0) == doctest::Approx(phi.derivative(s.nodes[i][0])).epsilon(1e-13));

  // A polynomial 2-form on a polynomial square against finite-difference Jacobians.
  const auto square = PolynomialBase::random(2, 3, 2, 0.5, rng, Vec(Vec::Zero(3)), P);
  const SampledForm q = pullback(a, *square, 4);
  double err_h = 0, err_h2 = 0;
  for (std::size_t n = 0; n < q.nodes.size(); ++n) {
    const Vec& u = q.nodes[n];
    for (double h : {1e-3, 5e-4}) {
      Mat J(3, 2);
      for (int j = 0; j < 2; ++j) {
        Vec up = u, um = u;
        up[j] += h;
        um[j] -= h;
        J.col(j) = (square->point(up) - square->point(um)) / (2 * h);
      }
      const double e = frob_diff(a.evaluate(square->point(u), J), q.values[n][0]);
      (h == 1e-3 ? err_h : err_h2) = std::max(h == 1e-3 ? err_h : err_h2, e);
    }
  }
  CHECK(err_h < 1e-5);
  CHECK(err_h / err_h2 == doctest::Approx(4.0).epsilon(0.05));
  CHECK_THROWS_AS(pullback(a, *square, 1), DimensionMismatch);
}
