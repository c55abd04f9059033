#include "grayhol/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "grayhol/errors.hpp"

namespace grayhol {

Mat peiffer_commutator(const TwoCrossedModule& H, const Mat& e, const Mat& f) {
  const auto& E = H.E;
  const Mat einv = E.inverse(e);
  const Mat tail = H.act_E(H.partial(e), E.inverse(f));
  return E.multiply(E.multiply(E.multiply(e, f), einv), tail);
}

Mat derived_action(const TwoCrossedModule& H, const Mat& e, const Mat& l) {
  return H.L.multiply(l, H.lifting(H.E.inverse(H.delta(l)), e));
}

Mat peiffer_commutator(const DifferentialTwoCrossedModule& h, const Mat& u, const Mat& v) {
  return h.e.bracket(u, v) - h.act_e(h.partial(u), v);
}

Mat derived_action(const DifferentialTwoCrossedModule& h, const Mat& u, const Mat& x) {
  return -h.lifting(h.delta(x), u);
}

bool AxiomReport::pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const AxiomEntry& e) { return e.pass; });
}

double AxiomReport::max_residual() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.max_residual);
  return m;
}

const AxiomEntry* AxiomReport::find(const std::string& identity) const {
  for (const auto& e : entries)
    if (e.identity == identity) return &e;
  return nullptr;
}

void ResidualTable::record(const std::string& identity, double residual, int sample) {
  if (!std::isfinite(residual)) residual = std::numeric_limits<double>::infinity();
  for (auto& e : entries_) {
    if (e.identity == identity) {
      if (residual > e.max_residual) {
        e.max_residual = residual;
        e.worst_seed_index = sample;
      }
      return;
    }
  }
  entries_.push_back({identity, residual, sample, true});
}

AxiomReport ResidualTable::finish(std::string subject, std::uint64_t seed, int n_samples,
                                  double tol) const {
  AxiomReport r;
  r.subject = std::move(subject);
  r.seed = seed;
  r.n_samples = n_samples;
  r.tol = tol;
  r.entries = entries_;
  for (auto& e : r.entries) e.pass = e.max_residual <= tol;
  return r;
}

AxiomReport check_two_crossed_axioms(const TwoCrossedModule& H, int n_samples, std::uint64_t seed,
                                     double tol) {
  const GroupSpec& G = H.G;
  const GroupSpec& E = H.E;
  const GroupSpec& L = H.L;
  auto gm = [&](const Mat& x, const Mat& y) { return G.multiply(x, y); };
  auto em = [&](const Mat& x, const Mat& y) { return E.multiply(x, y); };
  auto lm = [&](const Mat& x, const Mat& y) { return L.multiply(x, y); };
  auto ei = [&](const Mat& x) { return E.inverse(x); };
  auto li = [&](const Mat& x) { return L.inverse(x); };
  auto gi = [&](const Mat& x) { return G.inverse(x); };
  auto lift = [&](const Mat& x, const Mat& y) { return H.lifting(x, y); };
  auto dact = [&](const Mat& e, const Mat& l) { return derived_action(H, e, l); };
  auto pc = [&](const Mat& e, const Mat& f) { return peiffer_commutator(H, e, f); };

  ResidualTable table;
  Rng rng(seed);
  const Mat oneE = E.identity(), oneL = L.identity(), oneG = G.identity();

  for (int i = 0; i < n_samples; ++i) {
    const Mat a = G.sample(rng), b = G.sample(rng);
    const Mat e = E.sample(rng), f = E.sample(rng), g = E.sample(rng);
    const Mat l = L.sample(rng), k = L.sample(rng);
    const Mat de = H.partial(e), df = H.partial(f);
    auto rec = [&](const char* name, const Mat& lhs, const Mat& rhs) {
      table.record(name, frob_diff(lhs, rhs), i);
    };

    // Structure: complex of G-modules, homomorphisms, actions.
    rec("complex: ∂δ(l) = 1", H.partial(H.delta(l)), oneG);
    rec("∂ is a homomorphism", H.partial(em(e, f)), gm(de, df));
    rec("δ is a homomorphism", H.delta(lm(l, k)), em(H.delta(l), H.delta(k)));
    rec("∂ is G-equivariant", H.partial(H.act_E(a, e)), gm(gm(a, de), gi(a)));
    rec("δ is G-equivariant", H.delta(H.act_L(a, l)), H.act_E(a, H.delta(l)));
    rec("G acts on E by automorphisms", H.act_E(a, em(e, f)), em(H.act_E(a, e), H.act_E(a, f)));
    rec("G acts on L by automorphisms", H.act_L(a, lm(l, k)), lm(H.act_L(a, l), H.act_L(a, k)));
    rec("G action on E is an action", H.act_E(gm(a, b), e), H.act_E(a, H.act_E(b, e)));
    rec("G action on L is an action", H.act_L(gm(a, b), l), H.act_L(a, H.act_L(b, l)));
    rec("lifting is G-equivariant", H.act_L(a, lift(e, f)), lift(H.act_E(a, e), H.act_E(a, f)));

    // The six defining conditions.
    rec("axiom 2: δ{e,f} = <e,f>", H.delta(lift(e, f)), pc(e, f));
    rec("axiom 3: [l,k] = {δl,δk}", lm(lm(lm(l, k), li(l)), li(k)), lift(H.delta(l), H.delta(k)));
    rec("axiom 4: {ef,g} = {e,fgf^-1} ∂e▷{f,g}", lift(em(e, f), g),
        lm(lift(e, em(em(f, g), ei(f))), H.act_L(de, lift(f, g))));
    rec("axiom 5: {e,fg} = {e,f}{e,g}{<e,g>^-1, ∂e▷f}", lift(e, em(f, g)),
        lm(lm(lift(e, f), lift(e, g)), lift(ei(pc(e, g)), H.act_E(de, f))));
    rec("axiom 6: {δl,e}{e,δl} = l (∂e▷l^-1)", lm(lift(H.delta(l), e), lift(e, H.delta(l))),
        lm(l, H.act_L(de, li(l))));

    // Derived identities.
    rec("{1,e} = 1", lift(oneE, e), oneL);
    rec("{e,1} = 1", lift(e, oneE), oneL);
    const Mat inv_ef = li(lift(e, f));
    rec("inverses (i): {e,f}^-1 = ∂e▷{e^-1, efe^-1}", inv_ef,
        H.act_L(de, lift(ei(e), em(em(e, f), ei(e)))));
    rec("inverses (ii): {e,f}^-1 = (efe^-1)▷'{e,f^-1}", inv_ef,
        dact(em(em(e, f), ei(e)), lift(e, ei(f))));
    rec("inverses (iii): {e,f}^-1 = (∂e▷f)▷'{e,f^-1}", inv_ef, dact(H.act_E(de, f), lift(e, ei(f))));
    rec("jkl: ∂e▷l = (e▷'l){e,δ(l)^-1}", H.act_L(de, l), lm(dact(e, l), lift(e, ei(H.delta(l)))));
    rec("wso: (∂e▷f)▷'(∂e▷l) = ∂e▷(f▷'l)", dact(H.act_E(de, f), H.act_L(de, l)),
        H.act_L(de, dact(f, l)));
    rec("imppp: {ef,g} = (e▷'{f,g}){e,∂f▷g}", lift(em(e, f), g),
        lm(dact(e, lift(f, g)), lift(e, H.act_E(df, g))));
    rec("condunche: {ef,g} = {e,fgf^-1} ∂e▷{f,g}", lift(em(e, f), g),
        lm(lift(e, em(em(f, g), ei(f))), H.act_L(de, lift(f, g))));
    rec("{e,fg} = {e,f} (∂e▷f)▷'{e,g}", lift(e, em(f, g)),
        lm(lift(e, f), dact(H.act_E(de, f), lift(e, g))));
    rec("Porter: {e,fg} = ((efe^-1)▷'{e,g}){e,f}", lift(e, em(f, g)),
        lm(dact(em(em(e, f), ei(e)), lift(e, g)), lift(e, f)));
    rec("invv: {e,f}^-1 = e▷'{e^-1, ∂e▷f}", inv_ef, dact(e, lift(ei(e), H.act_E(de, f))));

    // (δ: L -> E, ▷') is a crossed module.
    rec("▷' is an action: (ef)▷'l = e▷'(f▷'l)", dact(em(e, f), l), dact(e, dact(f, l)));
    rec("▷' unit: 1▷'l = l", dact(oneE, l), l);
    rec("▷' by automorphisms", dact(e, lm(l, k)), lm(dact(e, l), dact(e, k)));
    rec("crossed module: δ(e▷'l) = e δ(l) e^-1", H.delta(dact(e, l)),
        em(em(e, H.delta(l)), ei(e)));
    rec("crossed module: δ(l)▷'k = l k l^-1", dact(H.delta(l), k), lm(lm(l, k), li(l)));
  }
  return table.finish(H.name, seed, n_samples, tol);
}

AxiomReport check_differential_axioms(const DifferentialTwoCrossedModule& h, int n_samples,
                                      std::uint64_t seed, double tol) {
  ResidualTable table;
  Rng rng(seed);
  auto gb = [&](const Mat& x, const Mat& y) { return h.g.bracket(x, y); };
  auto eb = [&](const Mat& x, const Mat& y) { return h.e.bracket(x, y); };
  auto lb = [&](const Mat& x, const Mat& y) { return h.l.bracket(x, y); };
  auto lift = [&](const Mat& x, const Mat& y) { return h.lifting(x, y); };
  auto dact = [&](const Mat& u, const Mat& x) { return derived_action(h, u, x); };

  for (int i = 0; i < n_samples; ++i) {
    const Mat X = h.g.random(rng), Y = h.g.random(rng), Z = h.g.random(rng);
    const Mat u = h.e.random(rng), v = h.e.random(rng), w = h.e.random(rng);
    const Mat x = h.l.random(rng), y = h.l.random(rng);
    const double p = rng.uniform(), q = rng.uniform();
    auto rec = [&](const char* name, const Mat& lhs, const Mat& rhs) {
      table.record(name, frob_diff(lhs, rhs), i);
    };

    // Linearity of every structure map.
    rec("δ is linear", h.delta(p * x + q * y), p * h.delta(x) + q * h.delta(y));
    rec("∂ is linear", h.partial(p * u + q * v), p * h.partial(u) + q * h.partial(v));
    rec("lifting is bilinear", lift(p * u + q * v, w), p * lift(u, w) + q * lift(v, w));
    rec("lifting is bilinear (second slot)", lift(w, p * u + q * v),
        p * lift(w, u) + q * lift(w, v));
    rec("▷ on e is bilinear", h.act_e(p * X + q * Y, u), p * h.act_e(X, u) + q * h.act_e(Y, u));
    rec("▷ on l is bilinear", h.act_l(X, p * x + q * y), p * h.act_l(X, x) + q * h.act_l(X, y));

    // Lie algebra and module structure.
    rec("Jacobi in g", gb(X, gb(Y, Z)) + gb(Y, gb(Z, X)) + gb(Z, gb(X, Y)), h.g.zero());
    rec("Jacobi in e", eb(u, eb(v, w)) + eb(v, eb(w, u)) + eb(w, eb(u, v)), h.e.zero());
    rec("▷ on e is a representation", h.act_e(gb(X, Y), u),
        h.act_e(X, h.act_e(Y, u)) - h.act_e(Y, h.act_e(X, u)));
    rec("▷ on l is a representation", h.act_l(gb(X, Y), x),
        h.act_l(X, h.act_l(Y, x)) - h.act_l(Y, h.act_l(X, x)));
    rec("▷ on e by derivations", h.act_e(X, eb(u, v)), eb(h.act_e(X, u), v) + eb(u, h.act_e(X, v)));
    rec("▷ on l by derivations", h.act_l(X, lb(x, y)), lb(h.act_l(X, x), y) + lb(x, h.act_l(X, y)));

    // Condition 1: complex of g-modules.
    rec("condition 1: ∂δ = 0", h.partial(h.delta(x)), h.g.zero());
    rec("condition 1: ∂ is a Lie map", h.partial(eb(u, v)), gb(h.partial(u), h.partial(v)));
    rec("condition 1: δ is a Lie map", h.delta(lb(x, y)), eb(h.delta(x), h.delta(y)));
    rec("condition 1: ∂ is g-equivariant", h.partial(h.act_e(X, u)), gb(X, h.partial(u)));
    rec("condition 1: δ is g-equivariant", h.delta(h.act_l(X, x)), h.act_e(X, h.delta(x)));
    rec("lifting is g-equivariant", h.act_l(X, lift(u, v)),
        lift(h.act_e(X, u), v) + lift(u, h.act_e(X, v)));

    // Conditions 2-6.
    rec("condition 2: δ{u,v} = <u,v>", h.delta(lift(u, v)), peiffer_commutator(h, u, v));
    rec("condition 3: [x,y] = {δx,δy}", lb(x, y), lift(h.delta(x), h.delta(y)));
    rec("condition 4: {[u,v],w}", lift(eb(u, v), w),
        h.act_l(h.partial(u), lift(v, w)) + lift(u, eb(v, w)) - h.act_l(h.partial(v), lift(u, w)) -
            lift(v, eb(u, w)));
    // Expanding condition 4 with ∂(u)▷w = [u,w] − δ{u,w}; note the signs of the δ-terms.
    rec("condition 4 (expanded form)", lift(eb(u, v), w),
        lift(h.act_e(h.partial(u), v), w) - lift(h.act_e(h.partial(v), u), w) +
            lift(u, h.delta(lift(v, w))) - lift(v, h.delta(lift(u, w))));
    rec("condition 5: {u,[v,w]}", lift(u, eb(v, w)),
        lift(h.delta(lift(u, v)), w) - lift(h.delta(lift(u, w)), v));
    rec("condition 6: {δx,v} + {v,δx} = −∂v▷x", lift(h.delta(x), v) + lift(v, h.delta(x)),
        -h.act_l(h.partial(v), x));

    // The four claims about u ▷' x = −{δ(x), u}.
    rec("claim 1: ▷' is an action", dact(eb(u, v), x), dact(u, dact(v, x)) - dact(v, dact(u, x)));
    rec("claim 2: ▷' acts by derivations", dact(u, lb(x, y)), lb(dact(u, x), y) + lb(x, dact(u, y)));
    rec("claim 3: δ(x)▷'y = [x,y]", dact(h.delta(x), y), lb(x, y));
    rec("claim 4: δ(u▷'x) = [u,δx]", h.delta(dact(u, x)), eb(u, h.delta(x)));
  }
  return table.finish(h.name, seed, n_samples, tol);
}

Binary differentiate_group_action(const Binary& act, const Unary& exp, double step) {
  if (!(step > 0.0)) throw StepTooSmall("finite-difference step must be positive");
  return [act, exp, step](const Mat& X, const Mat& v) -> Mat {
    auto central = [&](double s) -> Mat {
      return (act(exp(s * X), v) - act(exp(-s * X), v)) / (2.0 * s);
    };
    const Mat d1 = central(step);
    const Mat d2 = central(0.5 * step);
    const Mat d4 = central(0.25 * step);
    const double scale = std::max({act(exp(step * X), v).norm(), v.norm(), 1e-300});
    const double eps = std::numeric_limits<double>::epsilon();
    const double rounding = eps * scale / (0.25 * step);
    const double r0 = (d1 - d2).norm(), r1 = (d2 - d4).norm();
    const double size = 1.0 + d1.norm();
    if (rounding > 1e-8 * size || (r1 > 2.0 * r0 && r1 > 1e-12 * size))
      throw StepTooSmall("central difference dominated by rounding (step " + std::to_string(step) +
                         ")");
    return d1;
  };
}

Binary differentiate_lifting(const Binary& lifting, const Unary& exp_e, double step) {
  if (!(step > 0.0)) throw StepTooSmall("finite-difference step must be positive");
  return [lifting, exp_e, step](const Mat& u, const Mat& v) -> Mat {
    const double s = step;
    const Mat ep = exp_e(s * u), em = exp_e(-s * u), fp = exp_e(s * v), fm = exp_e(-s * v);
    return (lifting(ep, fp) - lifting(ep, fm) - lifting(em, fp) + lifting(em, fm)) / (4.0 * s * s);
  };
}

}  // namespace grayhol
