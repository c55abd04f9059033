#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grayhol/errors.hpp"
#include "grayhol/gray.hpp"
#include "grayhol/instances.hpp"

using namespace grayhol;

namespace {

struct Fixture {
  AdjointInstance A = make_adjoint(make_gl(2));
  const TwoCrossedModule& H = A.group;
  Rng rng{17};
  Mat X = H.G.sample(rng), Y = H.G.sample(rng);
  Mat e = H.E.sample(rng), e2 = H.E.sample(rng);
  Mat k = H.L.sample(rng), l = H.L.sample(rng);
};

double dist(const GrayCell& a, const GrayCell& b) {
  double r = frob_diff(a.X, b.X);
  if (a.rank >= 2) r = std::max(r, frob_diff(a.e, b.e));
  if (a.rank == 3) r = std::max(r, frob_diff(a.l, b.l));
  return r;
}

}  // namespace

TEST_CASE_FIXTURE(Fixture, "identity cells are units") {
  const GrayCell Xf = cell2(H, X, e2);
  CHECK(dist(compose(identity2(cell1(H, X)), Xf, 2), Xf) < 1e-14);
  const GrayCell c = cell3(H, X, e, k);
  CHECK(dist(compose(identity3(cell2(H, X, e)), c, 3), c) < 1e-14);
  CHECK(dist(compose(c, identity3(target3(c)), 3), c) < 1e-12);
}

TEST_CASE_FIXTURE(Fixture, "vertical composite of 3-cells has L-part (e ▷′ k) l") {
  const GrayCell a = cell3(H, X, e, l);
  const GrayCell b = cell3(H, target2(a).X, e2, k);
  const GrayCell c = compose(a, b, 2);
  // e ▷′ k = k {δ(k)⁻¹, e}, evaluated from the group operations directly.
  const Mat ek = k * H.lifting(H.E.inverse(H.delta(k)), e);
  CHECK(frob_diff(c.l, ek * l) < 1e-12);
  CHECK(frob_diff(c.e, H.E.multiply(e, e2)) < 1e-14);
  const GrayCell bad = cell3(H, X, e2, k);
  CHECK_THROWS_AS(compose(a, bad, 2), BoundaryMismatch);
}

TEST_CASE_FIXTURE(Fixture, "interchange cell: identity cases and boundaries") {
  const GrayCell one = cell2(H, X, H.E.identity()), b = cell2(H, Y, e2);
  CHECK(frob_diff(interchange_cell(one, b).l, H.L.identity()) < 1e-14);
  const GrayCell a = cell2(H, X, e), unit = cell2(H, Y, H.E.identity());
  CHECK(frob_diff(interchange_cell(a, unit).l, H.L.identity()) < 1e-14);

  const GrayCell bb = cell2(H, Y, e2);
  const GrayCell c = interchange_cell(a, bb);
  CHECK(dist(source3(c), horizontal_lower(a, bb)) < 1e-12);
  CHECK(dist(target3(c), horizontal_upper(a, bb)) < 1e-12);
  // δ(l)⁻¹ times the lower E-part is (X ▷ e2) e.
  const Mat upper_e = H.E.multiply(H.E.inverse(H.delta(c.l)), c.e);
  CHECK(frob_diff(upper_e, H.E.multiply(H.act_E(X, e2), e)) < 1e-12);
}

TEST_CASE_FIXTURE(Fixture, "whiskering and boundaries") {
  const GrayCell a = cell2(H, X, e);
  const GrayCell w = compose(cell1(H, Y), a, 1);
  CHECK(frob_diff(w.X, Y * X) < 1e-14);
  CHECK(frob_diff(w.e, H.act_E(Y, e)) < 1e-14);
  const GrayCell r = compose(a, cell1(H, Y), 1);
  CHECK(frob_diff(r.e, e) == 0.0);
  CHECK(frob_diff(target2(a).X, H.G.inverse(H.partial(e)) * X) < 1e-12);
  CHECK_THROWS_AS(compose(a, cell2(H, Y, e2), 1), UnsupportedKind);
  CHECK_THROWS_AS(compose(a, a, 4), UnsupportedKind);
}

TEST_CASE("Gray axioms 4–14 hold on C(H) for the adjoint instance") {
  for (int n : {2, 3}) {
    const AdjointInstance A = make_adjoint(make_gl(n));
    const AxiomReport r = verify_gray_axioms(A.group, 100, 31, 1e-9);
    CHECK(r.pass());
    CHECK(r.find("13: 2-functoriality (naturality of #)") != nullptr);
    CHECK(r.find("14: 1-functoriality ((Γ♮₂Γ')#Γ'')") != nullptr);
  }
}

TEST_CASE_FIXTURE(Fixture, "2-functoriality residual vanishes on samples") {
  CHECK(two_functoriality_residual(H, X, e, e2, k, l) < 1e-12);
}

TEST_CASE("negative control: an interchange cell with trivial L-part fails the boundary axiom") {
  const AdjointInstance A = make_adjoint(make_gl(2));
  const InterchangeFn trivial = [](const GrayCell& a, const GrayCell& b) {
    GrayCell c = interchange_cell(a, b);
    c.l = a.H->L.identity();
    return c;
  };
  const AxiomReport r = verify_gray_axioms(A.group, 30, 32, 1e-9, trivial);
  CHECK_FALSE(r.pass());
  const AxiomEntry* e = r.find("12: ∂₃⁺(Γ#Γ') = upper composite");
  REQUIRE(e != nullptr);
  CHECK_FALSE(e->pass);
  CHECK(r.find("12: ∂₃⁻(Γ#Γ') = lower composite")->pass);
}

TEST_CASE("all-identity cells satisfy every axiom exactly") {
  const AdjointInstance A = make_adjoint(make_gl(2));
  const auto& H = A.group;
  const GrayCell one = cell2(H, H.G.identity(), H.E.identity());
  const GrayCell c = interchange_cell(one, one);
  CHECK(frob_diff(c.l, H.L.identity()) == 0.0);
  CHECK(dist(horizontal_lower(one, one), horizontal_upper(one, one)) == 0.0);
  CHECK(two_functoriality_residual(H, H.G.identity(), H.E.identity(), H.E.identity(),
                                   H.L.identity(), H.L.identity()) == 0.0);
}
