#include "grayhol/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "grayhol/errors.hpp"
#include "grayhol/holonomy.hpp"

namespace grayhol {

const std::vector<std::string>& valid_checks() {
  static const std::vector<std::string> names{
      "axioms", "differential", "gray",       "holonomy",       "green",      "stokes",
      "interchange", "wilson",  "invariance", "baez_schreiber", "convergence"};
  return names;
}

double fitted_order(const std::vector<int>& N, const std::vector<double>& err) {
  const int n = static_cast<int>(N.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(N[i]), y = std::log(std::max(err[i], 1e-300));
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
  static const std::set<std::string> keys{"instance", "triple", "cube",      "resolution",
                                          "checks",   "seed",   "tol",       "n_samples",
                                          "lifting_factor",     "levels",    "op",
                                          "family"};
  Scenario sc;
  try {
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!keys.count(it.key())) throw ConfigError("unknown scenario key '" + it.key() + "'");
    if (j.contains("instance")) {
      if (j["instance"].is_string()) sc.instance = {{"instance", j["instance"]}};
      else sc.instance = j["instance"];
      if (!sc.instance.is_object() || !sc.instance.contains("instance"))
        throw ConfigError("instance descriptor needs an \"instance\" name");
    }
    if (j.contains("triple")) sc.triple = j["triple"];
    if (j.contains("cube")) sc.cube = j["cube"];
    if (j.contains("resolution")) {
      const json& r = j["resolution"];
      sc.resolution = {r.value("N_t", 0), r.value("N_s", 0), r.value("N_x", 0)};
      for (int v : {sc.resolution.N_t, sc.resolution.N_s, sc.resolution.N_x})
        if (v < 0 || v > 4096) throw ConfigError("resolutions must lie in 0..4096");
    }
    if (j.contains("checks")) {
      sc.checks = j["checks"].get<std::vector<std::string>>();
      for (const auto& c : sc.checks) {
        bool known = false;
        for (const auto& v : valid_checks()) known |= v == c;
        if (!known) {
          std::string list;
          for (const auto& v : valid_checks()) list += (list.empty() ? "" : ", ") + v;
          throw ConfigError("unknown check '" + c + "'; valid checks: " + list);
        }
      }
    }
    if (j.contains("seed")) sc.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("tol")) sc.tol = j["tol"].get<double>();
    if (j.contains("n_samples")) sc.n_samples = j["n_samples"].get<int>();
    if (j.contains("lifting_factor")) sc.lifting_factor = j["lifting_factor"].get<double>();
    if (j.contains("levels")) sc.levels = j["levels"].get<std::vector<int>>();
    if (j.contains("op")) sc.op = j["op"].get<std::string>();
    if (j.contains("family")) sc.family = j["family"].get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed scenario: ") + e.what());
  }
  return sc;
}

namespace {

double pick_tol(const Scenario& sc, double fallback) { return sc.tol ? *sc.tol : fallback; }
int pick(int v, int fallback) { return v > 0 ? v : fallback; }

Vec anchor(int which, int d) {
  static const double table[4][4] = {{0.0, 0.0, 0.0, 0.0},
                                     {0.8, 0.3, -0.2, 0.1},
                                     {1.2, -0.4, 0.5, 0.2},
                                     {-0.5, 0.4, 0.3, -0.1}};
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = i < 4 ? table[which][i] : 0.0;
  return v;
}

// The module, triple and connection for one scenario.
struct Setup {
  ModuleBundle mod;
  FormTriple triple;
  std::unique_ptr<Connection> conn;
  const TwoCrossedModule& H() const { return *mod.group(); }
  int d() const { return triple.d(); }
};

Setup make_setup(const json& instance, const json& triple, std::uint64_t seed, int default_d = 0,
                 double default_amplitude = 0.0) {
  Setup s;
  s.mod = load_instance(instance, seed);
  if (!s.mod.group() || !s.mod.diff())
    throw ConfigError("holonomy checks need an instance with group and differential levels "
                      "(adjoint or chain)");
  json t = triple;
  if (t.value("recipe", "") != "user") {
    if (default_d > 0 && !t.contains("d")) t["d"] = default_d;
    if (default_amplitude > 0 && !t.contains("amplitude")) t["amplitude"] = default_amplitude;
  }
  s.triple = load_triple(t, s.mod, seed + 10);
  s.conn = std::make_unique<Connection>(*s.mod.group(), *s.mod.diff(), s.triple);
  return s;
}

Setup make_setup(const Scenario& sc, int default_d = 0, double default_amplitude = 0.0) {
  return make_setup(sc.instance, sc.triple, sc.seed, default_d, default_amplitude);
}

int role_dim(const std::string& role) {
  if (role == "path") return 1;
  if (role == "bigon" || role == "bigon2") return 2;
  return 3;
}

CubePtr default_cube(const std::string& role, int d, std::uint64_t seed) {
  Rng rng(seed * 7919 + static_cast<std::uint64_t>(role.size()) * 131 + role[0]);
  if (role == "sphere") {
    if (d != 4) throw ConfigError("Wilson spheres live in R^4: use a triple with d = 4");
    Vec c(4);
    c << 0.1, -0.2, 0.3, 0.0;
    return std::make_shared<SmoothedCube>(std::make_shared<SphereBase>(c, 0.6),
                                          std::vector<double>{-1, -1, -1},
                                          std::vector<double>{1, 1, 1});
  }
  const Vec a = role == "bigon2" ? anchor(1, d) : anchor(0, d);
  const Vec b = role == "bigon2" ? anchor(2, d) : anchor(1, d);
  return std::make_shared<SmoothedCube>(
      PolynomialBase::random(role_dim(role), d, 2, 0.6, rng, a, b));
}

CubePtr cube_for(const Scenario& sc, const std::string& role, int d) {
  CubePtr c;
  if (sc.cube.is_object() && sc.cube.contains(role)) c = load_cube(sc.cube[role]);
  else if (sc.cube.is_object() && sc.cube.contains("n") && sc.cube["n"] == role_dim(role) &&
           role != "bigon2")
    c = load_cube(sc.cube);
  else
    c = default_cube(role, d, sc.seed);
  if (c->n() != role_dim(role)) throw ConfigError("cube for '" + role + "' has the wrong dimension");
  if (c->d() != d) throw ConfigError("cube for '" + role + "' does not live in R^" + std::to_string(d));
  return c;
}

std::vector<double> pairwise_orders(const std::vector<double>& r) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) out.push_back(std::log2(r[i] / r[i + 1]));
  return out;
}

// ---- algebraic suites ---------------------------------------------------------

json check_axioms(const Scenario& sc) {
  const ModuleBundle mod = load_instance(sc.instance, sc.seed);
  if (!mod.group()) throw ConfigError("the automorphism instance has no group level; use check-differential");
  const AxiomReport r = check_two_crossed_axioms(*mod.group(), pick(sc.n_samples, 200), sc.seed,
                                                 pick_tol(sc, 1e-9));
  return {{"check", "axioms"}, {"pass", r.pass()}, {"report", to_json(r)}};
}

json check_differential(const Scenario& sc) {
  const ModuleBundle mod = load_instance(sc.instance, sc.seed);
  if (!mod.diff()) throw ConfigError("this instance has no differential level");
  const AxiomReport r = check_differential_axioms(*mod.diff(), pick(sc.n_samples, 200), sc.seed,
                                                  pick_tol(sc, 1e-9));
  return {{"check", "differential"}, {"pass", r.pass()}, {"report", to_json(r)}};
}

json check_gray(const Scenario& sc) {
  const ModuleBundle mod = load_instance(sc.instance, sc.seed);
  if (!mod.group()) throw ConfigError("the automorphism instance has no group level");
  const AxiomReport r = verify_gray_axioms(*mod.group(), pick(sc.n_samples, 100), sc.seed,
                                           pick_tol(sc, 1e-9));
  return {{"check", "gray"}, {"pass", r.pass()}, {"report", to_json(r)}};
}

// ---- holonomy -----------------------------------------------------------------

json check_holonomy(const Scenario& sc) {
  Setup s = make_setup(sc);
  const auto& h = *s.mod.diff();
  const int Nt = pick(sc.resolution.N_t, 32), Ns = pick(sc.resolution.N_s, 32),
            Nx = pick(sc.resolution.N_x, 16);
  const TripleResiduals tr = check_triple(h, s.triple);
  const FormField Theta = three_curvature(h, s.triple.omega, s.triple.m, s.triple.theta, sc.lifting_factor);
  const auto g = path_holonomy(*s.conn, *cube_for(sc, "path", s.d()), 2 * Nt);
  const auto e = surface_holonomy(*s.conn, *cube_for(sc, "bigon", s.d()), Nt, Ns);
  const auto l = volume_holonomy(*s.conn, *cube_for(sc, "volume", s.d()), Nx, Nx, Nx);
  const bool finite = g.value.allFinite() && e.value.allFinite() && l.value.allFinite();
  const double drift = std::max({g.drift, e.drift, l.drift});
  return {{"check", "holonomy"},
          {"pass", finite && tr.pass && drift <= 1e-6},
          {"recipe", s.triple.recipe},
          {"triple_residuals", {{"curvature", tr.curvature}, {"two_curvature", tr.two_curvature}}},
          {"three_curvature_max_coefficient", Theta.max_coefficient()},
          {"g", to_json(g.value)},
          {"e", to_json(e.value)},
          {"l", to_json(l.value)},
          {"drift", drift},
          {"resolution", {{"N_t", Nt}, {"N_s", Ns}, {"N_x", Nx}}}};
}

json check_green(const Scenario& sc) {
  Setup s = make_setup(sc);
  const CubePtr G = cube_for(sc, "bigon", s.d());
  const int Nt = pick(sc.resolution.N_t, 64), Ns = pick(sc.resolution.N_s, Nt);
  const double tol = pick_tol(sc, 1e-6);
  std::vector<int> Ns_list;
  std::vector<double> res;
  for (int k : {4, 2, 1}) {
    if (Nt / k < 2 || Ns / k < 2) continue;
    Ns_list.push_back(Ns / k);
    res.push_back(green_residual(*s.conn, *G, Nt / k, Ns / k));
  }
  const double order = res.size() >= 2 ? fitted_order(Ns_list, res) : 0.0;
  const Mat e = surface_holonomy(*s.conn, *G, Nt, Ns).value;
  return {{"check", "green"},
          {"pass", res.back() <= tol && order >= 2.0},
          {"residual", res.back()},
          {"tol", tol},
          {"resolution", {{"N_t", Nt}, {"N_s", Ns}}},
          {"study", {{"N", Ns_list}, {"residual", res}, {"pairwise_order", pairwise_orders(res)},
                     {"fitted_order", order}}},
          {"e_distance_from_identity", frob_diff(e, s.H().E.identity())}};
}

json check_stokes(const Scenario& sc) {
  Setup s = make_setup(sc);
  const CubePtr J = cube_for(sc, "volume", s.d());
  const int N = pick(sc.resolution.N_x, pick(sc.resolution.N_t, 32));
  const double tol = pick_tol(sc, 1e-6);
  std::vector<int> Ns;
  std::vector<double> res;
  for (int k : {4, 2, 1}) {
    if (N / k < 2) continue;
    Ns.push_back(N / k);
    res.push_back(stokes_residual(*s.conn, *J, N / k));
  }
  const double order = res.size() >= 2 ? fitted_order(Ns, res) : 0.0;
  const Mat l = volume_holonomy(*s.conn, *J, N).value;
  return {{"check", "stokes"},
          {"pass", res.back() <= tol && order >= 2.0},
          {"residual", res.back()},
          {"tol", tol},
          {"resolution", N},
          {"study", {{"N", Ns}, {"residual", res}, {"pairwise_order", pairwise_orders(res)},
                     {"fitted_order", order}}},
          {"l_distance_from_identity", frob_diff(l, s.H().L.identity())}};
}

// The 4-form Θ(c) = D_ωθ − (c/6) m∧^{,}m must satisfy δΘ = 0 (δ is injective
// for the adjoint module).  Fits c on three independent scenarios.
json lifting_normalization(const Scenario& sc) {
  struct Case {
    int n, d;
    std::uint64_t seed;
  };
  const Case cases[3] = {{2, 4, sc.seed + 1}, {2, 5, sc.seed + 2}, {3, 4, sc.seed + 3}};
  json rows = json::array();
  bool literal_passes = true, configured_passes = true;
  for (const auto& cs : cases) {
    const AdjointInstance inst = make_adjoint(make_gl(cs.n));
    const auto& h = inst.diff;
    const FormTriple t = recipe_r1(inst, cs.d, 2, 0.4, cs.seed);
    const FormField Dtheta = three_curvature(h, t.omega, t.m, t.theta, 0.0);
    const FormField mm = lifting_square(h, t.m);
    const FormField dD = map_values(Dtheta, h.delta, h.e.rows, h.e.cols);
    const FormField dM = map_values(mm, h.delta, h.e.rows, h.e.cols);
    const auto sets = index_sets(cs.d, 4);
    // Stack every component on a 3^d grid of [−1,1]^d into one vector per form.
    std::vector<double> va, vb;
    std::vector<int> idx(cs.d, 0);
    while (true) {
      Vec x(cs.d);
      for (int i = 0; i < cs.d; ++i) x[i] = -1.0 + idx[i];
      for (const auto& I : sets) {
        const Mat a = dD.component(I, x), b = dM.component(I, x);
        va.insert(va.end(), a.data(), a.data() + a.size());
        vb.insert(vb.end(), b.data(), b.data() + b.size());
      }
      int i = 0;
      while (i < cs.d && ++idx[i] == 3) idx[i++] = 0;
      if (i == cs.d) break;
    }
    const Eigen::Map<const Vec> A(va.data(), va.size()), B(vb.data(), vb.size());
    const double dm = A.dot(B), mmn = B.squaredNorm();
    const double fitted = mmn > 0 ? 6.0 * dm / mmn : 0.0;
    auto defect = [&](double c) { return (A - (c / 6.0) * B).cwiseAbs().maxCoeff(); };
    const double lit = defect(6.0), conf = defect(sc.lifting_factor), fit = defect(-6.0);
    literal_passes &= lit <= 1e-9;
    configured_passes &= conf <= 1e-9;
    rows.push_back({{"group", "GL(" + std::to_string(cs.n) + ")"},
                    {"d", cs.d},
                    {"seed", cs.seed},
                    {"fitted_factor", fitted},
                    {"delta_theta_literal", lit},
                    {"delta_theta_minus6", fit},
                    {"delta_theta_configured", conf}});
  }
  return {{"literal_factor", 6.0},
          {"literal_passes", literal_passes},
          {"passing_factor", -6.0},
          {"configured_factor", sc.lifting_factor},
          {"configured_passes", configured_passes},
          {"scenarios", rows}};
}

json check_interchange(const Scenario& sc) {
  Setup s = make_setup(sc);
  const CubePtr G = cube_for(sc, "bigon", s.d()), Gp = cube_for(sc, "bigon2", s.d());
  const int N = pick(sc.resolution.N_t, 64);
  const double tol = pick_tol(sc, 1e-5);
  const InterchangeResult r = interchange_holonomy(*s.conn, G, Gp, N);
  const json norm = lifting_normalization(sc);
  return {{"check", "interchange"},
          {"pass", r.residual <= tol && norm["configured_passes"].get<bool>()},
          {"residual", r.residual},
          {"tol", tol},
          {"resolution", N},
          {"l_cube", to_json(r.l_cube)},
          {"l_formula", to_json(r.l_formula)},
          {"l_distance_from_identity", frob_diff(r.l_formula, s.H().L.identity())},
          {"lifting_normalization", norm}};
}

json check_wilson(const Scenario& sc) {
  Setup s = make_setup(sc, 4, 0.25);
  const auto& H = s.H();
  const CubePtr S = cube_for(sc, "sphere", s.d());
  const bool chain = static_cast<bool>(s.mod.chain);
  const int N = pick(sc.resolution.N_t, chain ? 32 : 64);
  const double tol = pick_tol(sc, 1e-5);
  const WilsonResult w = wilson_sphere(*s.conn, *S, N);
  const WilsonResult wr = wilson_sphere(*s.conn, Reversed(S, 2), N);
  const double reversal = frob_diff(H.L.multiply(wr.W, w.W), H.L.identity());
  json out = {{"check", "wilson"},
              {"instance", s.mod.kind},
              {"recipe", s.triple.recipe},
              {"resolution", N},
              {"tol", tol},
              {"W", to_json(w.W)},
              {"W_distance_from_identity", w.identity_defect},
              {"delta_W_defect", w.delta_defect},
              {"reversal_defect", reversal}};
  bool pass = reversal <= tol && w.delta_defect <= tol;
  if (!chain) pass &= w.identity_defect <= tol;
  if (chain) {
    // Complete whiskering: l_{γ ♮₁ S} = g_γ ▷ W for a path γ ending at the base point.
    Rng rng(sc.seed + 17);
    const Vec base = S->point(Vec::Zero(3));
    CubePtr gamma = std::make_shared<SmoothedCube>(
        PolynomialBase::random(1, 4, 2, 0.5, rng, anchor(3, 4), base));
    Concatenation whiskered(std::make_shared<Extend>(gamma, 3, std::vector<int>{0}), S, 0);
    const Mat lw = volume_holonomy(*s.conn, whiskered, 2 * N, N, N).value;
    const Mat g = path_holonomy(*s.conn, *gamma, 4 * N).value;
    const double whisker = frob_diff(lw, H.act_L(g, w.W));
    out["whisker_defect"] = whisker;
    out["whisker_action_size"] = frob_diff(H.act_L(g, w.W), w.W);
    pass &= whisker <= tol;
  }
  out["pass"] = pass;
  return out;
}

json check_baez_schreiber(const Scenario& sc) {
  Setup s = make_setup(sc);
  const auto& h = *s.mod.diff();
  const CubePtr plot = cube_for(sc, "plot", s.d());
  Rng rng(sc.seed + 29);
  const FormField A = random_form(s.d(), 2, h.e.rows, h.e.cols, 2, rng,
                                  [&h](Rng& r) -> Mat { return 0.5 * h.e.random(r); });
  const int N = pick(sc.resolution.N_t, 128);
  const double tol = pick_tol(sc, 1e-4);
  const std::vector<std::pair<double, double>> pts{{0.4, 0.6}, {0.3, 0.35}, {0.7, 0.5}};
  const auto r1 = baez_schreiber_residual(*s.conn, A, *plot, N, 1e-3, pts);
  const auto r2 = baez_schreiber_residual(*s.conn, A, *plot, N, 5e-4, pts);
  return {{"check", "baez_schreiber"},
          {"pass", r1.residual <= tol && r2.residual <= tol / 4.0},
          {"residual_h1e-3", r1.residual},
          {"residual_h5e-4", r2.residual},
          {"ratio", r2.residual > 0 ? r1.residual / r2.residual : 0.0},
          {"lhs_norm", r1.lhs_norm},
          {"tol", tol},
          {"resolution", N}};
}

// ---- invariance and functor laws -----------------------------------------------

json functor_laws(const Setup& s, const Scenario& sc, int N2, int N3) {
  const auto& H = s.H();
  const Connection& c = *s.conn;
  const int d = s.d();
  Rng rng(sc.seed + 41);
  const Vec P0 = anchor(0, d), P1 = anchor(1, d), Q = anchor(3, d);
  json out;
  bool pass = true;
  CubePtr gamma = std::make_shared<SmoothedCube>(PolynomialBase::random(1, d, 2, 0.4, rng, Q, P0));
  const Mat g = path_holonomy(c, *gamma, 4 * std::max(N2, N3)).value;

  auto b2 = PolynomialBase::random(2, d, 2, 0.4, rng, P0, P1);
  CubePtr G1 = std::make_shared<SmoothedCube>(b2, std::vector<double>{0, 0}, std::vector<double>{1, 1});
  CubePtr G2 = std::make_shared<SmoothedCube>(b2, std::vector<double>{0, 1}, std::vector<double>{1, 2});
  const double green = std::max(green_residual(c, *G1, N2, N2), green_residual(c, *G2, N2, N2));
  const Mat e1 = surface_holonomy(c, *G1, N2, N2).value, e2 = surface_holonomy(c, *G2, N2, N2).value;
  const Mat e12 = surface_holonomy(c, Concatenation(G1, G2, 1), N2, 2 * N2).value;
  Concatenation wG(std::make_shared<Extend>(gamma, 2, std::vector<int>{0}), G1, 0);
  const Mat ew = surface_holonomy(c, wG, 2 * N2, N2).value;
  const double vert2 = frob_diff(e12, H.E.multiply(e1, e2));
  const double whisk2 = frob_diff(ew, H.act_E(g, e1));
  const double thr2 = 10.0 * green;
  pass &= vert2 <= thr2 && whisk2 <= thr2;
  out["level2"] = {{"resolution", N2},
                   {"green_residual", green},
                   {"threshold", thr2},
                   {"vertical", vert2},
                   {"whisker", whisk2}};

  auto b3 = PolynomialBase::random(3, d, 2, 0.4, rng, P0, P1, {0.0, 1.0, 2.0});
  auto piece = [&](double s0, double x0) -> CubePtr {
    return std::make_shared<SmoothedCube>(b3, std::vector<double>{0, s0, x0},
                                          std::vector<double>{1, s0 + 1, x0 + 1});
  };
  CubePtr J = piece(0, 0), Jx = piece(0, 1), Js = piece(1, 0);
  const double stokes = std::max({stokes_residual(c, *J, N3), stokes_residual(c, *Jx, N3),
                                  stokes_residual(c, *Js, N3)});
  const Mat l = volume_holonomy(c, *J, N3).value, lx = volume_holonomy(c, *Jx, N3).value,
            ls = volume_holonomy(c, *Js, N3).value;
  const Mat lup = volume_holonomy(c, Concatenation(J, Jx, 2), N3, N3, 2 * N3).value;
  const Mat lvert = volume_holonomy(c, Concatenation(J, Js, 1), N3, 2 * N3, N3).value;
  const Mat e0 = surface_holonomy(c, Slice(J, 2, 0.0), N3, 2 * N3).value;
  Concatenation wJ(std::make_shared<Extend>(gamma, 3, std::vector<int>{0}), J, 0);
  const Mat lw = volume_holonomy(c, wJ, 2 * N3, N3, N3).value;
  const double up3 = frob_diff(lup, H.L.multiply(l, lx));
  const double vert3 = frob_diff(lvert, H.L.multiply(derived_action(H, e0, ls), l));
  const double whisk3 = frob_diff(lw, H.act_L(g, l));
  const double thr3 = 10.0 * stokes;
  pass &= up3 <= thr3 && vert3 <= thr3 && whisk3 <= thr3;
  out["level3"] = {{"resolution", N3},
                   {"stokes_residual", stokes},
                   {"threshold", thr3},
                   {"upward", up3},
                   {"vertical", vert3},
                   {"whisker", whisk3},
                   {"l_distance_from_identity", frob_diff(l, H.L.identity())}};
  out["pass"] = pass;
  return out;
}

json check_invariance(const Scenario& sc) {
  Setup s = make_setup(sc);
  const Connection& c = *s.conn;
  const double tol = pick_tol(sc, 1e-6);
  const int N2 = pick(sc.resolution.N_t, 64), N3 = pick(sc.resolution.N_x, 32), N1 = 2 * N2;
  const int count = 5;
  json out = {{"check", "invariance"}, {"tol", tol}};
  bool pass = true;
  auto has = [&](int lv) { return std::find(sc.levels.begin(), sc.levels.end(), lv) != sc.levels.end(); };
  if (has(1)) {
    const CubePtr gamma = cube_for(sc, "path", s.d());
    const Mat base = path_holonomy(c, *gamma, N1).value;
    std::vector<double> dev;
    for (const auto& p : thin_perturbations(gamma, ThinKind::rank1, count, sc.seed + 1))
      dev.push_back(frob_diff(path_holonomy(c, *p, N1).value, base));
    const double worst = *std::max_element(dev.begin(), dev.end());
    pass &= worst <= tol;
    out["rank1"] = {{"resolution", N1}, {"deviations", dev}, {"max_deviation", worst}};
  }
  if (has(2)) {
    const CubePtr G = cube_for(sc, "bigon", s.d());
    const Mat base = surface_holonomy(c, *G, N2, N2).value;
    std::vector<double> dev;
    for (const auto& p : thin_perturbations(G, ThinKind::laminated, count, sc.seed + 2))
      dev.push_back(frob_diff(surface_holonomy(c, *p, N2, N2).value, base));
    const SlideHomotopy slide = laminated_slide(G, 0.7, 2);
    const double slide_dev = frob_diff(surface_holonomy(c, *slide.end, N2, N2).value, base);
    double clause_b = 0.0;
    Rng rng(sc.seed + 3);
    for (int i = 0; i < 50; ++i) {
      Vec u(3);
      u << rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 1);
      const Mat Jac = slide.homotopy->jacobian(u);
      const auto [a, b] = slide.coefficients(u[1], u[2]);
      clause_b = std::max(clause_b, (a * Jac.col(1) + b * Jac.col(2)).norm());
    }
    const double worst = std::max(*std::max_element(dev.begin(), dev.end()), slide_dev);
    pass &= worst <= tol && clause_b <= 1e-10;
    out["laminated"] = {{"resolution", N2},
                        {"deviations", dev},
                        {"slide_deviation", slide_dev},
                        {"slide_clause_b_residual", clause_b},
                        {"max_deviation", worst}};
  }
  if (has(3)) {
    const CubePtr J = cube_for(sc, "volume", s.d());
    const Mat base = volume_holonomy(c, *J, N3).value;
    std::vector<double> dev;
    for (const auto& p : thin_perturbations(J, ThinKind::rank3, count, sc.seed + 4))
      dev.push_back(frob_diff(volume_holonomy(c, *p, N3).value, base));
    const double worst = *std::max_element(dev.begin(), dev.end());
    pass &= worst <= tol;
    out["rank3"] = {{"resolution", N3}, {"deviations", dev}, {"max_deviation", worst},
                    {"l_distance_from_identity", frob_diff(base, s.H().L.identity())}};
  }
  if (has(2) && has(3)) {
    out["functor_laws"] = functor_laws(s, sc, N2, N3);
    pass &= out["functor_laws"]["pass"].get<bool>();
  }
  out["pass"] = pass;
  return out;
}

// ---- convergence studies ---------------------------------------------------------

json check_convergence(const Scenario& sc) {
  json out = {{"check", "convergence"}, {"op", sc.op}, {"family", sc.family}};
  std::vector<int> Ns;
  std::vector<double> err;
  bool pass = false;
  if (sc.op == "path" && sc.family == "const-exp") {
    const ModuleBundle mod = load_instance(sc.instance, sc.seed);
    if (!mod.group() || !mod.diff()) throw ConfigError("convergence needs a group-level instance");
    const auto& H = *mod.group();
    const auto& h = *mod.diff();
    Rng rng(sc.seed + 5);
    const Mat A = 0.5 * h.g.random(rng);
    const int d = 3;
    FormTriple t{"const", FormField(d, 1, h.g.rows, h.g.cols), FormField(d, 2, h.e.rows, h.e.cols),
                 FormField(d, 3, h.l.rows, h.l.cols)};
    t.omega.add({0}, std::vector<int>(d, 0), A);
    const Connection c(H, h, t);
    Vec e0 = Vec::Zero(d);
    e0[0] = 1.0;
    auto line = std::make_shared<PolynomialBase>(1, Vec(Vec::Zero(d)), e0, std::vector<PolynomialTerm>{});
    SmoothedCube gamma(line);
    const Mat exact = H.G.exp(A);
    for (int N = 8; N <= 256; N *= 2) {
      Ns.push_back(N);
      err.push_back(frob_diff(path_holonomy(c, gamma, N).value, exact));
    }
    const double order = fitted_order(Ns, err);
    const double tol = pick_tol(sc, 1e-10);
    pass = order >= 3.5 && err.back() <= tol;
    out["fitted_order"] = order;
    out["final_error"] = err.back();
    out["tol"] = tol;
    out["min_order"] = 3.5;
  } else if (sc.op == "surface" && sc.family == "green") {
    Setup s = make_setup(sc);
    const CubePtr G = cube_for(sc, "bigon", s.d());
    for (int N = 8; N <= 64; N *= 2) {
      Ns.push_back(N);
      err.push_back(green_residual(*s.conn, *G, N, N));
    }
    const double order = fitted_order(Ns, err);
    pass = order >= 2.0;
    out["fitted_order"] = order;
    out["min_order"] = 2.0;
  } else if (sc.op == "volume" && sc.family == "stokes") {
    Setup s = make_setup(sc);
    const CubePtr J = cube_for(sc, "volume", s.d());
    for (int N = 4; N <= pick(sc.resolution.N_x, 32); N *= 2) {
      Ns.push_back(N);
      err.push_back(stokes_residual(*s.conn, *J, N));
    }
    const double order = fitted_order(Ns, err);
    pass = order >= 2.0;
    out["fitted_order"] = order;
    out["min_order"] = 2.0;
  } else {
    throw ConfigError("unknown convergence study '" + sc.op + "/" + sc.family +
                      "' (valid: path/const-exp, surface/green, volume/stokes)");
  }
  out["N"] = Ns;
  out["error"] = err;
  out["pairwise_order"] = pairwise_orders(err);
  out["pass"] = pass;
  return out;
}

}  // namespace

json run_check(const std::string& name, const Scenario& sc) {
  static const std::map<std::string, std::function<json(const Scenario&)>> table{
      {"axioms", check_axioms},
      {"differential", check_differential},
      {"gray", check_gray},
      {"holonomy", check_holonomy},
      {"green", check_green},
      {"stokes", check_stokes},
      {"interchange", check_interchange},
      {"wilson", check_wilson},
      {"invariance", check_invariance},
      {"baez_schreiber", check_baez_schreiber},
      {"convergence", check_convergence}};
  const auto it = table.find(name);
  if (it == table.end()) {
    std::string list;
    for (const auto& v : valid_checks()) list += (list.empty() ? "" : ", ") + v;
    throw ConfigError("unknown check '" + name + "'; valid checks: " + list);
  }
  return it->second(sc);
}

json run_scenario(const Scenario& sc) {
  json checks = json::array();
  bool pass = true;
  for (const auto& name : sc.checks) {
    json r = run_check(name, sc);
    pass &= r["pass"].get<bool>();
    checks.push_back(std::move(r));
  }
  return {{"schema", "gray-holonomy/1"},
          {"seed", sc.seed},
          {"instance", sc.instance},
          {"lifting_factor", sc.lifting_factor},
          {"checks", checks},
          {"pass", pass}};
}

}  // namespace grayhol
