#pragma once
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "grayhol/matrix.hpp"

namespace grayhol {

using Unary = std::function<Mat(const Mat&)>;
using Binary = std::function<Mat(const Mat&, const Mat&)>;

// A matrix-represented Lie group together with its Lie algebra.  Elements of
// both are stored as `rows x cols` matrices (pairs are stacked vertically).
struct GroupSpec {
  std::string name;
  int dim = 0;  // size of the underlying square matrices
  int rows = 0, cols = 0;
  std::function<Mat()> identity;
  Binary multiply;
  Unary inverse;
  Unary exp;                     // algebra -> group
  Unary log;                     // optional, near the identity
  std::function<bool(const Mat&)> contains;
  Unary project;                 // optional
  std::function<Mat(Rng&)> random_algebra;
  Binary bracket;                // Lie bracket of the algebra
  // d/dt (y * exp(t x)) at t = 0: the left-invariant vector field of x at y.
  Binary translate;

  Mat sample(Rng& rng) const { return exp(0.3 * random_algebra(rng)); }
  Mat algebra_zero() const { return Mat::Zero(rows, cols); }
};

struct TwoCrossedModule {
  std::string name;
  GroupSpec G, E, L;
  Unary delta;    // L -> E
  Unary partial;  // E -> G
  Binary act_E;   // (G, E) -> E
  Binary act_L;   // (G, L) -> L
  Binary lifting; // (E, E) -> L

  // Group elements acting on Lie algebra elements; used inside the holonomy
  // integrands.  act_g_alg is the adjoint action of G on its own algebra.
  Binary act_g_alg;
  Binary act_e_alg;
  Binary act_l_alg;
  Binary derived_act_alg;  // E acting on the algebra of L through the derived action
};

struct LieAlgebraSpec {
  std::string name;
  int rows = 0, cols = 0;
  Binary bracket;
  std::function<Mat(Rng&)> random;
  Mat zero() const { return Mat::Zero(rows, cols); }
};

struct DifferentialTwoCrossedModule {
  std::string name;
  LieAlgebraSpec g, e, l;
  Unary delta;    // l -> e
  Unary partial;  // e -> g
  Binary act_e;   // g x e -> e
  Binary act_l;   // g x l -> l
  Binary lifting; // e x e -> l
};

// <e,f> = e f e^{-1} (∂(e) ▷ f^{-1})
Mat peiffer_commutator(const TwoCrossedModule& H, const Mat& e, const Mat& f);
// e ▷' l = l {δ(l)^{-1}, e}
Mat derived_action(const TwoCrossedModule& H, const Mat& e, const Mat& l);

// <u,v> = [u,v] − ∂(u) ▷ v
Mat peiffer_commutator(const DifferentialTwoCrossedModule& h, const Mat& u, const Mat& v);
// u ▷' x = −{δ(x), u}
Mat derived_action(const DifferentialTwoCrossedModule& h, const Mat& u, const Mat& x);

struct AxiomEntry {
  std::string identity;
  double max_residual = 0.0;
  int worst_seed_index = -1;
  bool pass = true;
};

struct AxiomReport {
  std::string subject;
  std::uint64_t seed = 0;
  int n_samples = 0;
  double tol = 0.0;
  std::vector<AxiomEntry> entries;

  bool pass() const;
  double max_residual() const;
  const AxiomEntry* find(const std::string& identity) const;
};

// Collects per-identity residual maxima while sampling.
class ResidualTable {
 public:
  void record(const std::string& identity, double residual, int sample);
  AxiomReport finish(std::string subject, std::uint64_t seed, int n_samples, double tol) const;

 private:
  std::vector<AxiomEntry> entries_;
};

AxiomReport check_two_crossed_axioms(const TwoCrossedModule& H, int n_samples, std::uint64_t seed,
                                     double tol);
AxiomReport check_differential_axioms(const DifferentialTwoCrossedModule& h, int n_samples,
                                      std::uint64_t seed, double tol);

// Central-difference derivative of a group action through exp:
//   (X ▷ v) ≈ [act(exp(sX), v) − act(exp(−sX), v)] / (2s).
// The returned evaluator throws StepTooSmall when rounding dominates.
Binary differentiate_group_action(const Binary& act, const Unary& exp, double step);

// Mixed second differential of a Peiffer lifting, {exp(a u), exp(b v)} ≈ 1 + ab{u,v}:
// four-point difference in (a, b).  Used to cross-check closed-form liftings.
Binary differentiate_lifting(const Binary& lifting, const Unary& exp_e, double step);

}  // namespace grayhol
