#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grayhol/cubes.hpp"
#include "grayhol/errors.hpp"

using namespace grayhol;

namespace {

Vec anchor(double a, double b, double c, double d) {
  Vec v(4);
  v << a, b, c, d;
  return v;
}

// Max deviation of the analytic Jacobian from central differences over random
// interior points.
double jacobian_defect(const CubeMap& c, Rng& rng, int points = 20, double h = 1e-6) {
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    Vec u(c.n());
    for (int j = 0; j < c.n(); ++j) u[j] = rng.uniform(0.02, 0.98);
    const Mat J = c.jacobian(u);
    for (int j = 0; j < c.n(); ++j) {
      Vec up = u, um = u;
      up[j] += h;
      um[j] -= h;
      worst = std::max(worst, ((c.point(up) - c.point(um)) / (2 * h) - J.col(j)).norm());
    }
  }
  return worst;
}

CubePtr bigon(Rng& rng, const Vec& a, const Vec& b) {
  return std::make_shared<SmoothedCube>(PolynomialBase::random(2, 4, 2, 0.6, rng, a, b));
}

}  // namespace

TEST_CASE("smooth step: sitting instants, monotonicity and derivative") {
  const SmoothStep phi(0.1);
  CHECK(phi(0.0) == 0.0);
  CHECK(phi(0.1) == 0.0);
  CHECK(phi(0.9) == 1.0);
  CHECK(phi(1.0) == 1.0);
  CHECK(phi(0.5) == doctest::Approx(0.5).epsilon(1e-12));
  double prev = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    const double t = i / 1000.0;
    CHECK(phi(t) >= prev - 1e-15);
    prev = phi(t);
    if (t > 0.11 && t < 0.89) {
      const double fd = (phi(t + 1e-6) - phi(t - 1e-6)) / 2e-6;
      CHECK(phi.derivative(t) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
  CHECK(phi.derivative(0.05) == 0.0);
  CHECK(phi.derivative(0.95) == 0.0);
  CHECK(&smooth_step(0.1) == &smooth_step(0.1));
}

TEST_CASE("Jacobians of every cube map agree with finite differences") {
  Rng rng(1);
  const Vec P0 = Vec::Zero(4), P1 = anchor(0.8, 0.3, -0.2, 0.1), P2 = anchor(1.2, -0.4, 0.5, 0.2);
  const CubePtr G = bigon(rng, P0, P1), Gp = bigon(rng, P1, P2);
  const CubePtr path = std::make_shared<SmoothedCube>(PolynomialBase::random(1, 4, 3, 0.5, rng, P0, P1));
  const CubePtr vol = std::make_shared<SmoothedCube>(PolynomialBase::random(3, 4, 2, 0.6, rng, P0, P1));
  const CubePtr trig = std::make_shared<TrigBase>(
      3, P0, P1, std::vector<TrigTerm>{{1, 0.5, 0.2, 1, 0.3, anchor(0.2, -0.1, 0.3, 0.05)},
                                       {2, 1.0, -0.4, -1, 0.0, anchor(-0.1, 0.2, 0.0, 0.1)}});
  const CubePtr sphere = std::make_shared<SmoothedCube>(
      std::make_shared<SphereBase>(anchor(0.1, -0.2, 0.3, 0.0), 0.6), std::vector<double>{-1, -1, -1},
      std::vector<double>{1, 1, 1});
  const std::vector<std::pair<const char*, CubePtr>> maps{
      {"path", path},
      {"bigon", G},
      {"volume", vol},
      {"trig", trig},
      {"sphere", sphere},
      {"concatenation", std::make_shared<Concatenation>(G, std::make_shared<Extend>(
                                                               std::make_shared<Slice>(Gp, 1, 0.0), 2,
                                                               std::vector<int>{0}), 0)},
      {"reversed", std::make_shared<Reversed>(vol, 2)},
      {"interchange", std::make_shared<InterchangeCube>(
                          G, std::make_shared<SmoothedCube>(PolynomialBase::random(
                                 2, 4, 2, 0.6, rng, G->point(Vec::Ones(2)), P2)))}};
  for (const auto& [name, c] : maps) {
    CAPTURE(name);
    CHECK(jacobian_defect(*c, rng) < 1e-7);
  }
  for (auto kind : {ThinKind::rank1, ThinKind::laminated, ThinKind::rank3}) {
    const CubePtr base = kind == ThinKind::rank1 ? path : kind == ThinKind::laminated ? G : vol;
    for (const auto& p : thin_perturbations(base, kind, 5, 9)) CHECK(jacobian_defect(*p, rng) < 1e-7);
  }
}

TEST_CASE("polynomial 3-paths have good faces at the knots") {
  Rng rng(2);
  const auto base = PolynomialBase::random(3, 4, 2, 0.6, rng, Vec::Zero(4), anchor(0.8, 0.3, -0.2, 0.1),
                                           {0.0, 1.0, 2.0});
  const SmoothedCube J(base, {0, 0, 0}, {1, 2, 1});
  for (double s : {0.0, 0.5, 1.0})
    for (double t : {0.2, 0.7}) {
      Vec a(3), b(3);
      a << t, s, 0.1;
      b << t, s, 0.9;
      CHECK(frob_diff(J.point(a), J.point(b)) < 1e-15);
    }
  // the t-faces are the endpoints, independent of (s, x)
  Vec u(3);
  u << 0.0, 0.3, 0.7;
  CHECK(J.point(u).norm() < 1e-15);
}

TEST_CASE("the sphere map collapses the whole boundary to one point") {
  const Vec c = anchor(0.1, -0.2, 0.3, 0.0);
  const SmoothedCube S(std::make_shared<SphereBase>(c, 0.6), {-1, -1, -1}, {1, 1, 1});
  const Vec base = c + 0.6 * Vec::Unit(4, 3);
  Rng rng(3);
  for (int face = 0; face < 3; ++face)
    for (double side : {0.0, 0.04, 1.0}) {
      Vec u(3);
      for (int j = 0; j < 3; ++j) u[j] = rng.uniform(0, 1);
      u[face] = side;
      CHECK(frob_diff(S.point(u), base) == 0.0);
    }
  Vec mid = Vec::Constant(3, 0.5);
  CHECK((S.point(mid) - c).norm() == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(S.jacobian(mid).fullPivLu().rank() == 3);
}

TEST_CASE("interchange cube: faces are the two horizontal composites") {
  Rng rng(4);
  const Vec P0 = Vec::Zero(4), P1 = anchor(0.8, 0.3, -0.2, 0.1), P2 = anchor(1.2, -0.4, 0.5, 0.2);
  const CubePtr G = bigon(rng, P0, P1);
  const CubePtr Gp = bigon(rng, P1, P2);
  const InterchangeCube C(G, Gp);
  auto ext = [](const CubePtr& c, double s) -> CubePtr {
    return std::make_shared<Extend>(std::make_shared<Slice>(c, 1, s), 2, std::vector<int>{0});
  };
  const Concatenation lower(std::make_shared<Concatenation>(G, ext(Gp, 0.0), 0),
                            std::make_shared<Concatenation>(ext(G, 1.0), Gp, 0), 1);
  const Concatenation upper(std::make_shared<Concatenation>(ext(G, 0.0), Gp, 0),
                            std::make_shared<Concatenation>(G, ext(Gp, 1.0), 0), 1);
  for (int i = 0; i < 50; ++i) {
    Vec u(2), v0(3), v1(3);
    u << rng.uniform(0, 1), rng.uniform(0, 1);
    v0 << u[0], u[1], 0.0;
    v1 << u[0], u[1], 1.0;
    CHECK(frob_diff(C.point(v0), lower.point(u)) < 1e-14);
    CHECK(frob_diff(C.point(v1), upper.point(u)) < 1e-14);
  }
  const CubePtr far = bigon(rng, P2, P0);
  CHECK_THROWS_AS(InterchangeCube(G, far), BoundaryMismatch);
}

TEST_CASE("an identity 2-path in the interchange cube gives x-independent slices") {
  Rng rng(5);
  const Vec P0 = Vec::Zero(4), P1 = anchor(0.8, 0.3, -0.2, 0.1);
  const CubePtr G = bigon(rng, P0, P1);
  const CubePtr Id = constant_cube(2, P1);
  const InterchangeCube C(G, Id);
  for (int i = 0; i < 20; ++i) {
    Vec a(3), b(3);
    a << rng.uniform(0, 0.5), rng.uniform(0, 1), 0.0;
    b = a;
    b[2] = 1.0;
    // On the left half the slices differ only by a reparametrisation in s.
    CHECK(C.jacobian(a).col(0).allFinite());
  }
  Vec a(3);
  a << 0.75, 0.4, 0.3;
  CHECK(frob_diff(C.point(a), P1) == 0.0);
}

TEST_CASE("thin perturbations") {
  Rng rng(6);
  const Vec P0 = Vec::Zero(4), P1 = anchor(0.8, 0.3, -0.2, 0.1);
  const CubePtr path = std::make_shared<SmoothedCube>(PolynomialBase::random(1, 4, 3, 0.5, rng, P0, P1));

  const Reparametrized same(path, [](const Vec& u, Vec& v, Mat& dv) {
    v = u;
    dv = Mat::Identity(1, 1);
  });
  const auto fam = thin_perturbations(path, ThinKind::rank1, 5, 3);
  REQUIRE(fam.size() == 5);
  const SmoothStep& phi = default_smooth_step();
  for (double t : {0.0, 0.2, 0.5, 0.8, 1.0}) {
    const Vec u = Vec::Constant(1, t);
    CHECK(frob_diff(same.point(u), path->point(u)) == 0.0);
    // member 0 is t ↦ φ(t)²: same trace, different speed
    const Vec w = Vec::Constant(1, phi(t) * phi(t));
    CHECK(frob_diff(fam[0]->point(u), path->point(w)) < 1e-15);
  }
  for (const auto& p : fam) {
    CHECK(frob_diff(p->point(Vec::Zero(1)), P0) < 1e-15);
    CHECK(frob_diff(p->point(Vec::Ones(1)), P1) < 1e-15);
  }

  CHECK_THROWS_AS(thin_perturbations(path, ThinKind::laminated, 1, 1), UnsupportedKind);

  const CubePtr G = bigon(rng, P0, P1);
  const SlideHomotopy slide = laminated_slide(G, 0.7, 2);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    Vec u(3);
    u << rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 1);
    const Mat J = slide.homotopy->jacobian(u);
    const auto [a, b] = slide.coefficients(u[1], u[2]);
    worst = std::max(worst, (a * J.col(1) + b * J.col(2)).norm());
    CHECK(std::abs(b) > 0.1);
  }
  CHECK(worst <= 1e-10);
  // the slide starts at Γ and ends at its s-reparametrisation
  Vec u0(3), u1(3), v(2);
  u0 << 0.3, 0.4, 0.0;
  u1 << 0.3, 0.4, 1.0;
  v << 0.3, 0.4;
  CHECK(frob_diff(slide.homotopy->point(u0), G->point(v)) < 1e-15);
  CHECK(frob_diff(slide.homotopy->point(u1), slide.end->point(v)) < 1e-15);
}

TEST_CASE("rank-3 perturbations keep the t-faces and move the other faces laminarly") {
  Rng rng(7);
  const Vec P0 = Vec::Zero(4), P1 = anchor(0.8, 0.3, -0.2, 0.1);
  const CubePtr J = std::make_shared<SmoothedCube>(PolynomialBase::random(3, 4, 2, 0.6, rng, P0, P1));
  for (const auto& p : thin_perturbations(J, ThinKind::rank3, 5, 4)) {
    for (int i = 0; i < 10; ++i) {
      Vec u(3);
      u << 0.0, rng.uniform(0, 1), rng.uniform(0, 1);
      CHECK(frob_diff(p->point(u), P0) < 1e-15);
      u[0] = 1.0;
      CHECK(frob_diff(p->point(u), P1) < 1e-15);
    }
  }
}
