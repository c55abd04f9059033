#pragma once
#include <string>

#include "grayhol/forms.hpp"
#include "grayhol/instances.hpp"

namespace grayhol {

// A connection (ω, m, θ): a 𝔤-valued 1-form, an 𝔢-valued 2-form and an
// 𝔩-valued 3-form on R^d.
struct FormTriple {
  std::string recipe;
  FormField omega, m, theta;
  int d() const { return omega.d; }
};

struct TripleResiduals {
  double curvature = 0.0;      // max |∂(m) − Ω|
  double two_curvature = 0.0;  // max |δ(θ) − 𝓜|
  bool pass = false;
};

constexpr double kTripleTol = 1e-10;

// Residuals of ∂(m) = Ω and δ(θ) = 𝓜 on a grid^d lattice of [lo, hi]^d.
TripleResiduals check_triple(const DifferentialTwoCrossedModule& h, const FormTriple& t,
                             double ctol = kTripleTol, int grid = 5, double lo = -1.0,
                             double hi = 1.0);

// Adjoint recipe: ω random of the given degree, m = (Ω, 0) + δ(μ), θ = D_ω μ for
// a random 𝔤-valued 2-form μ (μ = 0 when mu_degree < 0, giving θ = 0).
FormTriple recipe_r1(const AdjointInstance& inst, int d, int degree, double amplitude,
                     std::uint64_t seed, int mu_degree = 1);

// Flat recipe for chain complexes: ω = c dx_1 ⊗ A with A a chain map (the identity
// when nontrivial_A is false), m = m₀ + δ(η) with m₀ constant in ker ∂ and
// commuting with A off dx_1, θ = θ₀ + D_ω η with θ₀ a ker δ-valued polynomial.
FormTriple recipe_r2(const ChainComplexInstance& inst, int d, double amplitude,
                     std::uint64_t seed, bool nontrivial_A = true);

// Accepts an explicit triple only if its constraint residuals pass; throws ConfigError.
FormTriple user_triple(const DifferentialTwoCrossedModule& h, FormField omega, FormField m,
                       FormField theta, double ctol = kTripleTol);

}  // namespace grayhol
