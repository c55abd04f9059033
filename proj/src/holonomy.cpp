#include "grayhol/holonomy.hpp"

#include "grayhol/errors.hpp"

namespace grayhol {

Connection::Connection(const TwoCrossedModule& H_, const DifferentialTwoCrossedModule& h_,
                       FormTriple t)
    : H(&H_), h(&h_), triple(std::move(t)), omega(triple.omega), m(triple.m),
      theta(triple.theta) {
  if (triple.omega.rows != H_.G.rows || triple.m.rows != H_.E.rows ||
      triple.theta.rows != H_.L.rows)
    throw DimensionMismatch("triple values do not match the group-level module");
}

namespace {

double drift_of(const GroupSpec& G, const Mat& v) {
  return G.project ? frob_diff(G.project(v), v) : 0.0;
}

Mat form_value(const CompiledForm& f, const Mat& comps, const Mat& V) {
  return f.contract(comps, V);
}

// One RK4 step of y' = translate(y, K(τ)) given K at the start, midpoint and end.
Mat rk4_step(const Binary& translate, const Mat& y, const Mat& K0, const Mat& Km, const Mat& K1,
             double h) {
  const Mat k1 = translate(y, K0);
  const Mat k2 = translate(y + 0.5 * h * k1, Km);
  const Mat k3 = translate(y + 0.5 * h * k2, Km);
  const Mat k4 = translate(y + h * k3, K1);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Integrates y' = translate(y, K) over [0,1] from the identity, K sampled at
// 2n + 1 equally spaced values (n RK4 steps); returns y at the n + 1 step ends.
std::vector<Mat> rk4_nodes(const GroupSpec& G, const std::vector<Mat>& K) {
  const int n = (static_cast<int>(K.size()) - 1) / 2;
  std::vector<Mat> y(n + 1);
  y[0] = G.identity();
  const double h = 1.0 / n;
  for (int i = 0; i < n; ++i) y[i + 1] = rk4_step(G.translate, y[i], K[2 * i], K[2 * i + 1], K[2 * i + 2], h);
  return y;
}

// Composite Simpson on 2n + 1 nodes over [0,1].
Mat simpson(const std::vector<Mat>& f) {
  const int last = static_cast<int>(f.size()) - 1;
  const double h = 1.0 / last;
  Mat acc = f[0] + f[last];
  for (int k = 1; k < last; ++k) acc += (k % 2 ? 4.0 : 2.0) * f[k];
  return (h / 3.0) * acc;
}

// Running Simpson integrals ∫₀^{t_k} f at every node; odd nodes use the
// half-panel rule h/12 (5f₀ + 8f₁ − f₂).
std::vector<Mat> cumulative_simpson(const std::vector<Mat>& f) {
  const int last = static_cast<int>(f.size()) - 1;
  const double h = 1.0 / last;
  std::vector<Mat> P(f.size());
  P[0] = Mat::Zero(f[0].rows(), f[0].cols());
  for (int k = 0; k + 2 <= last; k += 2) {
    P[k + 1] = P[k] + (h / 12.0) * (5.0 * f[k] + 8.0 * f[k + 1] - f[k + 2]);
    P[k + 2] = P[k] + (h / 3.0) * (f[k] + 4.0 * f[k + 1] + f[k + 2]);
  }
  return P;
}

// The t-line of a cube at fixed trailing coordinates: g(0,t) on the 2N + 1
// Simpson nodes (RK4 with 2N steps on 4N + 1 samples), with point and Jacobian.
struct LineNodes {
  std::vector<Mat> g;
  std::vector<Vec> p;
  std::vector<Mat> jac;
};

LineNodes walk_line(const Connection& c, const CubeMap& cube, const Vec& tail, int N) {
  const int samples = 4 * N + 1;
  Vec u(1 + tail.size());
  u.tail(tail.size()) = tail;
  std::vector<Mat> A(samples);
  LineNodes out;
  out.p.resize(2 * N + 1);
  out.jac.resize(2 * N + 1);
  Vec p;
  Mat jac, comps;
  const int r = c.H->G.rows, cl = c.H->G.cols;
  for (int j = 0; j < samples; ++j) {
    u[0] = static_cast<double>(j) / (samples - 1);
    cube.eval(u, p, jac);
    if (c.omega.zero()) {
      A[j] = Mat::Zero(r, cl);
    } else {
      c.omega.components(p, comps);
      A[j] = unflatten(comps * jac.col(0), r, cl);
    }
    if (j % 2 == 0) {
      out.p[j / 2] = p;
      out.jac[j / 2] = jac;
    }
  }
  out.g = rk4_nodes(c.H->G, A);
  return out;
}

// Per-slice quantities of the surface and volume integrands.
struct LineIntegrals {
  Mat K;     // ∫ g ▷ m(∂_t, ∂_s)
  Mat Lint;  // ∮θ − ∮m ∗ m (volume slices only)
};

LineIntegrals line_integrals(const Connection& c, const CubeMap& cube, const Vec& tail, int N,
                             bool volume, Mat* theta_part = nullptr, Mat* mm_part = nullptr) {
  const LineNodes L = walk_line(c, cube, tail, N);
  const int nodes = 2 * N + 1;
  const auto& H = *c.H;
  LineIntegrals out;
  std::vector<Mat> a(nodes), b, th;
  if (volume) b.resize(nodes), th.resize(nodes);
  Mat comps;
  Mat V2(cube.d(), 2), V3;
  for (int k = 0; k < nodes; ++k) {
    const Mat& J = L.jac[k];
    if (c.m.zero()) {
      a[k] = H.E.algebra_zero();
      if (volume) b[k] = H.E.algebra_zero();
    } else {
      c.m.components(L.p[k], comps);
      V2.col(0) = J.col(0);
      V2.col(1) = J.col(1);
      a[k] = H.act_e_alg(L.g[k], form_value(c.m, comps, V2));
      if (volume) {
        V2.col(1) = J.col(2);
        b[k] = H.act_e_alg(L.g[k], form_value(c.m, comps, V2));
      }
    }
    if (volume) {
      if (c.theta.zero()) {
        th[k] = H.L.algebra_zero();
      } else {
        c.theta.components(L.p[k], comps);
        th[k] = H.act_l_alg(L.g[k], form_value(c.theta, comps, J));
      }
    }
  }
  out.K = simpson(a);
  if (volume) {
    const Mat I_theta = simpson(th);
    const std::vector<Mat> P = cumulative_simpson(a), Q = cumulative_simpson(b);
    std::vector<Mat> f(nodes);
    for (int k = 0; k < nodes; ++k) f[k] = c.h->lifting(P[k], b[k]) - c.h->lifting(Q[k], a[k]);
    const Mat I_mm = simpson(f);
    out.Lint = I_theta - I_mm;
    if (theta_part) *theta_part = I_theta;
    if (mm_part) *mm_part = I_mm;
  }
  return out;
}

void require_dim(const CubeMap& c, int n, const char* what) {
  if (c.n() != n) throw DimensionMismatch(std::string(what) + ": wrong cube dimension");
}

}  // namespace

HolonomyResult path_holonomy(const Connection& c, const CubeMap& gamma, double t0, double t1,
                             int N) {
  require_dim(gamma, 1, "path_holonomy");
  if (N < 1) throw Error("path_holonomy needs N ≥ 1");
  const auto& G = c.H->G;
  std::vector<Mat> A(2 * N + 1);
  Vec u(1), p;
  Mat jac, comps;
  for (int j = 0; j <= 2 * N; ++j) {
    u[0] = t0 + (t1 - t0) * j / (2.0 * N);
    gamma.eval(u, p, jac);
    if (c.omega.zero()) {
      A[j] = G.algebra_zero();
    } else {
      c.omega.components(p, comps);
      A[j] = (t1 - t0) * unflatten(comps * jac.col(0), G.rows, G.cols);
    }
  }
  const std::vector<Mat> g = rk4_nodes(G, A);
  return {g.back(), N, drift_of(G, g.back())};
}

HolonomyResult path_holonomy(const Connection& c, const CubeMap& gamma, int N) {
  return path_holonomy(c, gamma, 0.0, 1.0, N);
}

HolonomyResult surface_holonomy(const Connection& c, const CubeMap& Gamma, int N_t, int N_s) {
  require_dim(Gamma, 2, "surface_holonomy");
  std::vector<Mat> K(2 * N_s + 1);
  Vec tail(1);
  for (int j = 0; j <= 2 * N_s; ++j) {
    tail[0] = j / (2.0 * N_s);
    K[j] = line_integrals(c, Gamma, tail, N_t, false).K;
  }
  const Mat e = rk4_nodes(c.H->E, K).back();
  return {e, N_s, drift_of(c.H->E, e)};
}

HolonomyResult volume_holonomy(const Connection& c, const CubeMap& J, int N_t, int N_s, int N_x) {
  require_dim(J, 3, "volume_holonomy");
  const auto& H = *c.H;
  std::vector<Mat> KL(2 * N_x + 1);
  Vec tail(2);
  const int s_samples = 4 * N_s + 1;
  for (int i = 0; i <= 2 * N_x; ++i) {
    tail[1] = i / (2.0 * N_x);
    std::vector<Mat> KE(s_samples), Lint(2 * N_s + 1);
    for (int j = 0; j < s_samples; ++j) {
      tail[0] = static_cast<double>(j) / (s_samples - 1);
      LineIntegrals li = line_integrals(c, J, tail, N_t, j % 2 == 0);
      KE[j] = std::move(li.K);
      if (j % 2 == 0) Lint[j / 2] = std::move(li.Lint);
    }
    const std::vector<Mat> e = rk4_nodes(H.E, KE);
    std::vector<Mat> f(e.size());
    for (std::size_t k = 0; k < e.size(); ++k) f[k] = H.derived_act_alg(e[k], Lint[k]);
    KL[i] = -simpson(f);
  }
  const Mat l = rk4_nodes(H.L, KL).back();
  return {l, N_x, drift_of(H.L, l)};
}

Mat twisted_integral_theta(const Connection& c, const CubeMap& J, double s, double x, int N_t) {
  require_dim(J, 3, "twisted_integral_theta");
  Vec tail(2);
  tail << s, x;
  Mat th, mm;
  line_integrals(c, J, tail, N_t, true, &th, &mm);
  return th;
}

Mat twisted_integral_mm(const Connection& c, const CubeMap& J, double s, double x, int N_t) {
  require_dim(J, 3, "twisted_integral_mm");
  Vec tail(2);
  tail << s, x;
  Mat th, mm;
  line_integrals(c, J, tail, N_t, true, &th, &mm);
  return mm;
}

double green_residual(const Connection& c, const CubeMap& Gamma, int N_t, int N_s) {
  const auto& G = c.H->G;
  const CubePtr view(&Gamma, [](const CubeMap*) {});
  const Mat e = surface_holonomy(c, Gamma, N_t, N_s).value;
  const Mat g0 = path_holonomy(c, Slice(view, 1, 0.0), 2 * N_t).value;
  const Mat g1 = path_holonomy(c, Slice(view, 1, 1.0), 2 * N_t).value;
  return frob_diff(G.multiply(G.inverse(c.H->partial(e)), g0), g1);
}

double stokes_residual(const Connection& c, const CubeMap& J, int N) {
  const auto& E = c.H->E;
  const CubePtr view(&J, [](const CubeMap*) {});
  const Mat l = volume_holonomy(c, J, N).value;
  const Mat e0 = surface_holonomy(c, Slice(view, 2, 0.0), N, 2 * N).value;
  const Mat e1 = surface_holonomy(c, Slice(view, 2, 1.0), N, 2 * N).value;
  return frob_diff(E.multiply(E.inverse(c.H->delta(l)), e0), e1);
}

InterchangeResult interchange_holonomy(const Connection& c, const CubePtr& Gamma,
                                       const CubePtr& GammaPrime, int N) {
  const auto& H = *c.H;
  InterchangeCube cube(Gamma, GammaPrime);
  InterchangeResult r;
  r.l_cube = volume_holonomy(c, cube, N).value;
  const Mat X = path_holonomy(c, Slice(Gamma, 1, 0.0), 4 * N).value;
  const Mat e = surface_holonomy(c, *Gamma, 2 * N, 2 * N).value;
  const Mat f = surface_holonomy(c, *GammaPrime, 2 * N, 2 * N).value;
  r.l_formula =
      derived_action(H, e, H.L.inverse(H.lifting(H.E.inverse(e), H.act_E(X, f))));
  r.residual = frob_diff(r.l_cube, r.l_formula);
  return r;
}

BaezSchreiberResult baez_schreiber_residual(const Connection& c, const FormField& A,
                                            const CubeMap& plot, int N, double h_fd,
                                            const std::vector<std::pair<double, double>>& points) {
  require_dim(plot, 3, "baez_schreiber_residual");
  const auto& H = *c.H;
  const auto& h = *c.h;
  if (A.k != 2 || A.rows != h.e.rows || A.cols != h.e.cols)
    throw DimensionMismatch("Baez–Schreiber check needs an 𝔢-valued 2-form");
  const CompiledForm cA(A);
  const CompiledForm cDA(covariant_derivative(c.triple.omega, A, h.act_e));
  const CompiledForm cOm(curvature(h, c.triple.omega));

  // ∫ g ▷ A(∂_t, ∂_axis) dt on the line through (s, x).
  auto alpha = [&](double s, double x, int axis) {
    Vec tail(2);
    tail << s, x;
    const LineNodes L = walk_line(c, plot, tail, N);
    std::vector<Mat> f(L.g.size());
    Mat comps, V(plot.d(), 2);
    for (std::size_t k = 0; k < f.size(); ++k) {
      cA.components(L.p[k], comps);
      V.col(0) = L.jac[k].col(0);
      V.col(1) = L.jac[k].col(axis);
      f[k] = H.act_e_alg(L.g[k], cA.contract(comps, V));
    }
    return simpson(f);
  };

  BaezSchreiberResult out;
  for (const auto& [s, x] : points) {
    const Mat lhs = (alpha(s + h_fd, x, 2) - alpha(s - h_fd, x, 2)) / (2 * h_fd) -
                    (alpha(s, x + h_fd, 1) - alpha(s, x - h_fd, 1)) / (2 * h_fd);
    Vec tail(2);
    tail << s, x;
    const LineNodes L = walk_line(c, plot, tail, N);
    const std::size_t n = L.g.size();
    std::vector<Mat> as(n), ax(n), da(n), os(n), ox(n);
    Mat comps, V(plot.d(), 2);
    for (std::size_t k = 0; k < n; ++k) {
      const Mat& J = L.jac[k];
      const Mat& g = L.g[k];
      cA.components(L.p[k], comps);
      V.col(0) = J.col(0);
      V.col(1) = J.col(1);
      as[k] = H.act_e_alg(g, cA.contract(comps, V));
      Mat Om_s = cOm.zero() ? Mat(h.g.zero()) : Mat(cOm.evaluate(L.p[k], V));
      V.col(1) = J.col(2);
      ax[k] = H.act_e_alg(g, cA.contract(comps, V));
      Mat Om_x = cOm.zero() ? Mat(h.g.zero()) : Mat(cOm.evaluate(L.p[k], V));
      os[k] = H.act_g_alg(g, Om_s);
      ox[k] = H.act_g_alg(g, Om_x);
      da[k] = cDA.zero() ? Mat(h.e.zero()) : Mat(H.act_e_alg(g, cDA.evaluate(L.p[k], J)));
    }
    const std::vector<Mat> P = cumulative_simpson(os), Q = cumulative_simpson(ox);
    std::vector<Mat> chen(n);
    for (std::size_t k = 0; k < n; ++k) chen[k] = h.act_e(P[k], ax[k]) - h.act_e(Q[k], as[k]);
    const Mat rhs = -simpson(da) - simpson(chen);
    out.residual = std::max(out.residual, frob_diff(lhs, rhs));
    out.lhs_norm = std::max(out.lhs_norm, frob(lhs));
  }
  return out;
}

WilsonResult wilson_sphere(const Connection& c, const CubeMap& S, int N) {
  require_dim(S, 3, "wilson_sphere");
  const Vec base = S.point(Vec::Zero(3));
  double worst = 0.0;
  Vec u(3);
  for (int face = 0; face < 6; ++face)
    for (int i = 0; i <= 4; ++i)
      for (int j = 0; j <= 4; ++j) {
        const int axis = face / 2;
        const double a = i / 4.0, b = j / 4.0;
        u[axis] = face % 2;
        u[(axis + 1) % 3] = a;
        u[(axis + 2) % 3] = b;
        worst = std::max(worst, (S.point(u) - base).norm());
      }
  if (worst > 1e-9)
    throw NotASphereMap("the cube map is not constant on the boundary (defect " +
                        std::to_string(worst) + ")");
  const auto& H = *c.H;
  WilsonResult r;
  r.W = volume_holonomy(c, S, N).value;
  r.delta_defect = frob_diff(H.delta(r.W), H.E.identity());
  r.identity_defect = frob_diff(r.W, H.L.identity());
  return r;
}

}  // namespace grayhol
