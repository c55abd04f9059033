#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grayhol/errors.hpp"
#include "grayhol/instances.hpp"

using namespace grayhol;

namespace {

Mat m2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

bool passes(const AxiomReport& r, const std::string& identity) {
  const AxiomEntry* e = r.find(identity);
  REQUIRE(e != nullptr);
  return e->pass;
}

}  // namespace

TEST_CASE("GL(n): exp/log, translate and membership") {
  const GroupSpec G = make_gl(3);
  Rng rng(1);
  const Mat x = 0.3 * G.random_algebra(rng);
  CHECK(frob_diff(G.log(G.exp(x)), x) < 1e-12);
  const Mat y = G.sample(rng);
  CHECK(frob_diff(G.translate(y, x), y * x) < 1e-14);
  CHECK(G.contains(y));
  CHECK_FALSE(G.contains(Mat::Zero(3, 3)));
  CHECK(frob_diff(G.multiply(y, G.inverse(y)), G.identity()) < 1e-12);
}

TEST_CASE("SO(3): projection lands back in the group") {
  const GroupSpec G = make_so(3);
  Rng rng(2);
  const Mat g = G.sample(rng);
  CHECK(G.contains(g));
  const Mat noisy = g + 1e-6 * rng.matrix(3, 3);
  CHECK(G.contains(G.project(noisy)));
  CHECK(frob_diff(G.project(noisy), g) < 1e-5);
}

TEST_CASE("inverse rejects singular matrices") {
  CHECK_THROWS_AS(inverse(m2(1, 2, 2, 4)), SingularMatrix);
}

TEST_CASE("Peiffer commutator: identity cases") {
  const AdjointInstance A = make_adjoint(make_gl(2));
  const auto& H = A.group;
  Rng rng(3);
  const Mat e = H.E.sample(rng);
  CHECK(frob_diff(peiffer_commutator(H, H.E.identity(), e), H.E.identity()) < 1e-14);
  CHECK(frob_diff(peiffer_commutator(H, e, H.E.identity()), H.E.identity()) < 1e-14);
}

TEST_CASE("Peiffer commutator of concrete adjoint elements matches an independent word evaluation") {
  const AdjointInstance A = make_adjoint(make_gl(2));
  const auto& H = A.group;
  const Mat a = m2(1.2, 0.3, -0.1, 0.9), b = m2(0.8, -0.4, 0.2, 1.1);
  const Mat c = m2(1.0, 0.5, 0.25, 1.5), d = m2(1.3, 0.0, -0.6, 0.7);
  const Mat e = make_pair(a, b), f = make_pair(c, d);
  // (a,b) ↦ (ab, b) identifies G ⋊ G with G × G; there ∂e = ab and G acts
  // diagonally by conjugation, so ⟨e,f⟩ = (1, E2 F2 E2⁻¹ E1 F2⁻¹ E1⁻¹).
  const Mat E1 = a * b, E2 = b, F2 = d;
  const Mat Q = E2 * F2 * E2.inverse() * E1 * F2.inverse() * E1.inverse();
  const Mat expected = make_pair(Q.inverse(), Q);  // back via (P,Q) ↦ (P Q⁻¹, Q) with P = 1
  CHECK(frob_diff(peiffer_commutator(H, e, f), expected) < 1e-12);
  CHECK(frob_diff(H.delta(H.lifting(e, f)), expected) < 1e-12);
}

TEST_CASE("derived action") {
  const AdjointInstance A = make_adjoint(make_gl(2));
  const auto& H = A.group;
  Rng rng(4);
  const Mat e = H.E.sample(rng), l = H.L.sample(rng);
  CHECK(frob_diff(derived_action(H, e, H.L.identity()), H.L.identity()) < 1e-14);
  CHECK(frob_diff(derived_action(H, H.E.identity(), l), l) < 1e-14);
  const Mat b = pair_second(e);
  CHECK(frob_diff(derived_action(H, e, l), b * l * b.inverse()) < 1e-12);
}

TEST_CASE("two-crossed-module axioms hold for the adjoint and chain-complex instances") {
  for (int n : {2, 3}) {
    const AdjointInstance A = make_adjoint(make_gl(n));
    const AxiomReport r = check_two_crossed_axioms(A.group, 200, 11, 1e-9);
    CHECK(r.pass());
    CHECK(r.max_residual() <= 1e-9);
    CHECK(r.entries.size() >= 30);
  }
  Rng rng(5);
  const ChainComplex cx = random_complex({2, 3, 2}, rng);
  const ChainComplexInstance C = make_chain_complex(cx.dims, cx.boundaries);
  const AxiomReport r = check_two_crossed_axioms(C.group, 200, 12, 1e-9);
  CHECK(r.pass());
}

TEST_CASE("negative control: a constant lifting breaks axiom 2") {
  AdjointInstance A = make_adjoint(make_gl(2));
  TwoCrossedModule H = A.group;
  H.lifting = [G = H.L](const Mat&, const Mat&) { return G.identity(); };
  const AxiomReport r = check_two_crossed_axioms(H, 50, 13, 1e-9);
  CHECK_FALSE(r.pass());
  CHECK_FALSE(passes(r, "axiom 2: δ{e,f} = <e,f>"));
  CHECK(passes(r, "complex: ∂δ(l) = 1"));
}

TEST_CASE("a crossed module with trivial L passes every identity") {
  const TwoCrossedModule H = make_trivial_l_instance(make_gl(2));
  const AxiomReport r = check_two_crossed_axioms(H, 100, 14, 1e-9);
  CHECK(r.pass());
}

TEST_CASE("differential axioms hold for all three differential instances") {
  const AdjointInstance A = make_adjoint(make_gl(2));
  CHECK(check_differential_axioms(A.diff, 200, 21, 1e-9).pass());
  Rng rng(5);
  const ChainComplex cx = random_complex({2, 3, 2}, rng);
  const ChainComplexInstance C = make_chain_complex(cx.dims, cx.boundaries);
  CHECK(check_differential_axioms(C.diff, 200, 22, 1e-9).pass());
  for (const auto& basis : {so3_basis(), gl_basis(2)}) {
    const AutomorphismInstance M = make_automorphism(identity_xmod(basis));
    CHECK(check_differential_axioms(M.diff, 200, 23, 1e-9).pass());
  }
}

TEST_CASE("negative control: negating the differential lifting breaks condition 2") {
  const AdjointInstance A = make_adjoint(make_gl(2));
  DifferentialTwoCrossedModule h = A.diff;
  const Binary lift = h.lifting;
  h.lifting = [lift](const Mat& u, const Mat& v) -> Mat { return -lift(u, v); };
  const AxiomReport r = check_differential_axioms(h, 50, 24, 1e-9);
  CHECK_FALSE(passes(r, "condition 2: δ{u,v} = <u,v>"));
}

TEST_CASE("an abelian complex with zero brackets, actions and lifting passes") {
  DifferentialTwoCrossedModule h;
  auto zero2 = [](const Mat& a, const Mat&) -> Mat { return Mat::Zero(a.rows(), a.cols()); };
  auto rnd = [](Rng& r) { return r.matrix(2, 1); };
  h.g = {"R2", 2, 1, zero2, rnd};
  h.e = h.g;
  h.l = h.g;
  h.delta = [](const Mat& x) -> Mat { return 2.0 * x; };
  h.partial = [](const Mat& x) -> Mat { return Mat::Zero(x.rows(), x.cols()); };
  h.act_e = [](const Mat&, const Mat& v) -> Mat { return Mat::Zero(v.rows(), v.cols()); };
  h.act_l = h.act_e;
  h.lifting = zero2;
  CHECK(check_differential_axioms(h, 50, 25, 1e-12).pass());
}

TEST_CASE("differentiating the conjugation action gives the commutator") {
  const GroupSpec G = make_gl(2);
  const Binary conj = [&G](const Mat& X, const Mat& v) -> Mat { return X * v * G.inverse(X); };
  const Binary d = differentiate_group_action(conj, G.exp, 1e-4);
  Rng rng(6);
  const Mat X = G.random_algebra(rng), v = rng.matrix(2, 2);
  CHECK(frob_diff(d(X, v), commutator(X, v)) < 1e-7);
  CHECK(d(Mat::Zero(2, 2), v).norm() < 1e-12);
  const Binary trivial = [](const Mat&, const Mat& w) -> Mat { return w; };
  CHECK(differentiate_group_action(trivial, G.exp, 1e-4)(X, v).norm() < 1e-12);
  CHECK_THROWS_AS(differentiate_group_action(conj, G.exp, 1e-300)(X, v), StepTooSmall);
}

TEST_CASE("the differential adjoint lifting is the second differential of the group lifting") {
  const AdjointInstance A = make_adjoint(make_gl(2));
  const Binary d = differentiate_lifting(A.group.lifting, A.group.E.exp, 1e-3);
  Rng rng(7);
  for (int i = 0; i < 5; ++i) {
    const Mat u = A.diff.e.random(rng), v = A.diff.e.random(rng);
    CHECK(frob_diff(d(u, v), A.diff.lifting(u, v)) < 1e-5);
  }
}

TEST_CASE("adjoint instance: ∂δ = 1 and the G action on E") {
  const AdjointInstance A = make_adjoint(make_gl(2));
  const auto& H = A.group;
  Rng rng(8);
  const Mat g = H.L.sample(rng), X = H.G.sample(rng);
  CHECK(frob_diff(H.partial(H.delta(g)), H.G.identity()) < 1e-12);
  const Mat a = H.G.sample(rng), b = H.G.sample(rng);
  const Mat acted = H.act_E(X, make_pair(a, b));
  CHECK(frob_diff(pair_first(acted), X * a * X.inverse()) < 1e-12);
  CHECK(frob_diff(pair_second(acted), X * b * X.inverse()) < 1e-12);
}
