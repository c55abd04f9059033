#include "grayhol/triples.hpp"

#include "grayhol/errors.hpp"

namespace grayhol {

namespace {

double grid_max(const FormField& f, int grid, double lo, double hi) {
  CompiledForm c(f);
  if (c.zero()) return 0.0;
  const int d = f.d;
  Vec x(d);
  Mat comps;
  std::vector<int> idx(d, 0);
  double worst = 0.0;
  while (true) {
    for (int i = 0; i < d; ++i) x[i] = grid == 1 ? lo : lo + (hi - lo) * idx[i] / (grid - 1);
    c.components(x, comps);
    for (int j = 0; j < comps.cols(); ++j) worst = std::max(worst, comps.col(j).norm());
    int i = 0;
    while (i < d && ++idx[i] == grid) idx[i++] = 0;
    if (i == d) break;
  }
  return worst;
}

Mat combination(const Mat& basis, Rng& rng, int T, double amplitude) {
  if (basis.cols() == 0) return Mat::Zero(T, T);
  return unflatten(basis * (amplitude * rng.matrix(static_cast<int>(basis.cols()), 1)), T, T);
}

}  // namespace

TripleResiduals check_triple(const DifferentialTwoCrossedModule& h, const FormTriple& t,
                             double ctol, int grid, double lo, double hi) {
  if (t.omega.k != 1 || t.m.k != 2 || t.theta.k != 3)
    throw DimensionMismatch("a triple consists of a 1-form, a 2-form and a 3-form");
  if (t.m.d != t.omega.d || t.theta.d != t.omega.d)
    throw DimensionMismatch("triple forms live on different spaces");
  if (t.omega.rows != h.g.rows || t.omega.cols != h.g.cols || t.m.rows != h.e.rows ||
      t.m.cols != h.e.cols || t.theta.rows != h.l.rows || t.theta.cols != h.l.cols)
    throw DimensionMismatch("triple values do not match the module");
  TripleResiduals r;
  r.curvature = grid_max(map_values(t.m, h.partial, h.g.rows, h.g.cols) - curvature(h, t.omega),
                         grid, lo, hi);
  r.two_curvature = grid_max(
      map_values(t.theta, h.delta, h.e.rows, h.e.cols) - two_curvature(h, t.omega, t.m), grid, lo, hi);
  r.pass = r.curvature <= ctol && r.two_curvature <= ctol;
  return r;
}

FormTriple recipe_r1(const AdjointInstance& inst, int d, int degree, double amplitude,
                     std::uint64_t seed, int mu_degree) {
  const auto& h = inst.diff;
  const int n = h.g.rows;
  Rng rng(seed);
  auto value = [&h, amplitude](Rng& r) -> Mat { return amplitude * h.g.random(r); };
  FormTriple t;
  t.recipe = "R1";
  t.omega = random_form(d, 1, n, n, degree, rng, value);
  const FormField Om = curvature(h, t.omega);
  t.m = map_values(Om, [n](const Mat& x) { return make_pair(x, Mat::Zero(n, n)); }, 2 * n, n);
  t.theta = FormField(d, 3, n, n);
  if (mu_degree >= 0) {
    const FormField mu = random_form(d, 2, n, n, mu_degree, rng, value);
    t.m = t.m + map_values(mu, h.delta, 2 * n, n);
    t.theta = covariant_derivative(t.omega, mu, h.act_l);
  }
  t.m = t.m.pruned();
  t.theta = t.theta.pruned();
  return t;
}

FormTriple recipe_r2(const ChainComplexInstance& inst, int d, double amplitude, std::uint64_t seed,
                     bool nontrivial_A) {
  const auto& h = inst.diff;
  const int T = inst.complex.total;
  Rng rng(seed);
  const Mat A = nontrivial_A ? h.g.random(rng) : Mat(Mat::Identity(T, T));

  FormTriple t;
  t.recipe = "R2";
  t.omega = FormField(d, 1, T, T);
  t.omega.add({0}, std::vector<int>(d, 0), amplitude * A);

  // Constant m₀ in ker ∂; off dx_1 it must also commute with A so that ω ∧ m₀ = 0.
  const Mat KB = inst.kernel_beta_basis();
  Mat commute(T * T, KB.cols());
  for (int c = 0; c < KB.cols(); ++c)
    commute.col(c) = flatten(commutator(A, unflatten(KB.col(c), T, T)));
  const Mat KC = KB.cols() ? Mat(KB * null_space(commute)) : KB;
  FormField m0(d, 2, T, T);
  for (const auto& I : index_sets(d, 2))
    m0.add(I, std::vector<int>(d, 0), combination(I[0] == 0 ? KB : KC, rng, T, amplitude));

  auto l_value = [&h, amplitude](Rng& r) -> Mat { return amplitude * h.l.random(r); };
  const FormField eta = random_form(d, 2, T, T, 1, rng, l_value);
  t.m = (m0 + map_values(eta, h.delta, T, T)).pruned();

  const Mat KA = inst.kernel_alpha_basis();
  auto ker_value = [&KA, T, amplitude](Rng& r) { return combination(KA, r, T, amplitude); };
  const FormField theta0 = random_form(d, 3, T, T, 2, rng, ker_value);
  t.theta = (theta0 + covariant_derivative(t.omega, eta, h.act_l)).pruned();
  return t;
}

FormTriple user_triple(const DifferentialTwoCrossedModule& h, FormField omega, FormField m,
                       FormField theta, double ctol) {
  FormTriple t{"user", std::move(omega), std::move(m), std::move(theta)};
  const TripleResiduals r = check_triple(h, t, ctol);
  if (!r.pass)
    throw ConfigError("user triple violates the constraints: |∂m − Ω| = " +
                      std::to_string(r.curvature) + ", |δθ − 𝓜| = " +
                      std::to_string(r.two_curvature));
  return t;
}

}  // namespace grayhol
