#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grayhol/errors.hpp"
#include "grayhol/instances.hpp"

using namespace grayhol;

namespace {

ChainComplexInstance seeded_complex() {
  Rng rng(5);
  const ChainComplex cx = random_complex({2, 3, 2}, rng);
  return make_chain_complex(cx.dims, cx.boundaries);
}

}  // namespace

TEST_CASE("adjoint: ∂δ = 1, the action on E, and δ injective") {
  const AdjointInstance A = make_adjoint(make_gl(3));
  const auto& H = A.group;
  Rng rng(1);
  for (int i = 0; i < 10; ++i) {
    const Mat g = H.L.sample(rng), X = H.G.sample(rng), a = H.G.sample(rng), b = H.G.sample(rng);
    CHECK(frob_diff(H.partial(H.delta(g)), H.G.identity()) < 1e-12);
    const Mat acted = H.act_E(X, make_pair(a, b));
    CHECK(frob_diff(pair_first(acted), X * a * X.inverse()) < 1e-12);
    CHECK(frob_diff(pair_second(acted), X * b * X.inverse()) < 1e-12);
    CHECK(frob_diff(pair_second(H.delta(g)), g) == 0.0);
  }
  CHECK_THROWS_AS(make_adjoint(make_gl(0)), DimensionMismatch);
}

TEST_CASE("adjoint: the differential instance is the linearisation of the group instance") {
  const AdjointInstance A = make_adjoint(make_gl(2));
  const auto& H = A.group;
  const auto& h = A.diff;
  Rng rng(2);
  const double t = 1e-4;
  for (int i = 0; i < 5; ++i) {
    const Mat X = h.g.random(rng), u = h.e.random(rng), x = h.l.random(rng);
    // Mixed second difference of exp(tX) ▷ exp(su) at 0 against exp(t X ▷ u).
    const Mat lhs = (H.E.exp(t * h.act_e(X, u)) - H.E.exp(-t * h.act_e(X, u))) / (2 * t);
    const Mat rhs = (H.act_E(H.G.exp(t * X), H.E.exp(t * u)) - H.act_E(H.G.exp(-t * X), H.E.exp(t * u)) -
                     H.act_E(H.G.exp(t * X), H.E.exp(-t * u)) + H.act_E(H.G.exp(-t * X), H.E.exp(-t * u))) /
                    (4 * t * t);
    CHECK(frob_diff(lhs, rhs) < 1e-6);
    const Mat dd = (H.delta(H.L.exp(t * x)) - H.delta(H.L.exp(-t * x))) / (2 * t);
    CHECK(frob_diff(dd, h.delta(x)) < 1e-7);
  }
}

TEST_CASE("chain complex: null homotopy, β∘α and the kernel dimensions") {
  const ChainComplexInstance C = seeded_complex();
  const int n = C.complex.total;
  CHECK(frob_diff(C.beta(Mat::Zero(n, n)), Mat::Identity(n, n)) == 0.0);
  Rng rng(3);
  for (int i = 0; i < 5; ++i) {
    const Mat b = rng.matrix(n, n).cwiseProduct(C.complex.degree_mask(2));
    CHECK(frob_diff(C.beta(C.alpha(b)), Mat::Identity(n, n)) < 1e-12);
  }
  CHECK(C.kernel_alpha_basis().cols() == 1);
  CHECK(C.kernel_beta_basis().cols() == 5);
  CHECK((C.complex.D * C.complex.D).norm() < 1e-12);
}

TEST_CASE("chain complex: validation errors") {
  Mat d1 = Mat::Ones(1, 2), d2 = Mat::Ones(2, 1);
  CHECK_THROWS_AS(make_complex({1, 2, 1}, {d1, d2}), NotAComplex);
  d2 << 1, -1;
  CHECK_NOTHROW(make_complex({1, 2, 1}, {d1, d2}));
  CHECK_THROWS_AS(make_complex({1, 1, 1, 1}, {}), LengthUnsupported);
  CHECK_THROWS_AS(make_complex({1, 2, 1}, {Mat::Ones(2, 2), d2}), DimensionMismatch);
}

TEST_CASE("chain complex: full axiom suites at 1e-9") {
  const ChainComplexInstance C = seeded_complex();
  CHECK(check_two_crossed_axioms(C.group, 200, 4, 1e-9).pass());
  CHECK(check_differential_axioms(C.diff, 200, 4, 1e-9).pass());
}

TEST_CASE("automorphism of (id: g → g, ad) has the shape of the differential adjoint instance") {
  for (const auto& basis : {so3_basis(), gl_basis(2)}) {
    const XModData X = identity_xmod(basis);
    const AutomorphismInstance M = make_automorphism(X);
    const int dg = X.dg;
    CHECK(M.xmod.de == dg);
    CHECK(M.diff.l.rows == dg);
    CHECK(M.diff.e.rows == dg + static_cast<int>(M.der_basis.rows()));
    // δ = α′ is injective and β′∘α′ = 0, as for g → g ⋊ g → g.
    Mat img(M.diff.e.rows, dg);
    for (int i = 0; i < dg; ++i) img.col(i) = M.diff.delta(Vec::Unit(dg, i));
    CHECK(null_space(img).cols() == 0);
    Rng rng(5);
    const Mat e = M.diff.l.random(rng), f = M.diff.l.random(rng);
    CHECK(M.diff.partial(M.diff.delta(e)).norm() < 1e-12);
    // {α′(e), α′(f)} = [e, f]
    CHECK(frob_diff(M.diff.lifting(M.diff.delta(e), M.diff.delta(f)), M.diff.l.bracket(e, f)) < 1e-12);
  }
}

TEST_CASE("automorphism of an abelian crossed module with zero action") {
  XModData X;
  X.dg = 2;
  X.de = 2;
  X.g_ad.assign(2, Mat::Zero(2, 2));
  X.e_ad.assign(2, Mat::Zero(2, 2));
  X.act.assign(2, Mat::Zero(2, 2));
  X.D = Mat::Identity(2, 2);
  const AutomorphismInstance M = make_automorphism(X);
  CHECK(check_differential_axioms(M.diff, 100, 6, 1e-9).pass());
  Rng rng(6);
  const Mat e = M.diff.l.random(rng), f = M.diff.l.random(rng);
  // On α′-images the lifting is [e, f] = 0; it does not vanish on gl² in general,
  // since {(x, s), (y, t)} = −s(y) and every linear s is a derivation here.
  CHECK(M.diff.lifting(M.diff.delta(e), M.diff.delta(f)).norm() < 1e-14);
  const Mat u = M.make_gl2(Vec::Zero(2), Mat::Identity(2, 2)), v = M.make_gl2(Vec::Ones(2), Mat::Zero(2, 2));
  CHECK(M.diff.lifting(u, v).norm() > 0.5);
}

TEST_CASE("automorphism: inputs violating the crossed-module laws are rejected") {
  XModData X = identity_xmod(so3_basis());
  X.D = 2.0 * X.D;
  CHECK_THROWS_AS(make_automorphism(X), DegenerateCrossedModule);
}

TEST_CASE("trivial-L instance") {
  const TwoCrossedModule H = make_trivial_l_instance(make_gl(2));
  Rng rng(7);
  const Mat e = H.E.sample(rng), f = H.E.sample(rng);
  CHECK(frob_diff(H.lifting(e, f), H.L.identity()) == 0.0);
  CHECK(check_two_crossed_axioms(H, 50, 8, 1e-9).pass());
}
