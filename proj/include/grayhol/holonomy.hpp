#pragma once
#include <string>
#include <vector>

#include "grayhol/cubes.hpp"
#include "grayhol/triples.hpp"

namespace grayhol {

// A triple bound to its module, with forms compiled for fast evaluation.
struct Connection {
  const TwoCrossedModule* H = nullptr;
  const DifferentialTwoCrossedModule* h = nullptr;
  FormTriple triple;
  CompiledForm omega, m, theta;

  Connection(const TwoCrossedModule& H, const DifferentialTwoCrossedModule& h, FormTriple t);
};

struct HolonomyResult {
  Mat value;
  int N = 0;
  double drift = 0.0;  // distance to the group after projection, when a projector exists
};

// g_γ: F' = F ω(γ'), F(t0) = 1, integrated by N classical RK4 steps.
HolonomyResult path_holonomy(const Connection& c, const CubeMap& gamma, int N);
HolonomyResult path_holonomy(const Connection& c, const CubeMap& gamma, double t0, double t1,
                             int N);

// e_Γ: ∂_s e = e ∫₀¹ g(0,t) ▷ m(∂_t, ∂_s) dt.  N_s RK4 steps in s; every
// t-integral uses 2N_t RK4 steps for g and Simpson on the 2N_t + 1 nodes.
HolonomyResult surface_holonomy(const Connection& c, const CubeMap& Gamma, int N_t, int N_s);

// l_J: ∂_x l = −l ∫₀¹ e(0,s) ▷′ (∮θ − ∮m ∗^{,} m)(∂_s, ∂_x) ds.  N_x RK4 steps in
// x; e(0,s) by 2N_s RK4 steps, Simpson over s and t.
HolonomyResult volume_holonomy(const Connection& c, const CubeMap& J, int N_t, int N_s, int N_x);
inline HolonomyResult volume_holonomy(const Connection& c, const CubeMap& J, int N) {
  return volume_holonomy(c, J, N, N, N);
}

// ∫₀¹ g(0,t) ▷ θ(∂_t, ∂_s, ∂_x) dt on the slice (s, x) of J.
Mat twisted_integral_theta(const Connection& c, const CubeMap& J, double s, double x, int N_t);
// ∫₀¹ [P(t) {,} b(t) − Q(t) {,} a(t)] dt with a = g ▷ m(∂_t, ∂_s), b = g ▷ m(∂_t, ∂_x),
// P = ∫₀ᵗ a, Q = ∫₀ᵗ b.
Mat twisted_integral_mm(const Connection& c, const CubeMap& J, double s, double x, int N_t);

// ---- theorem checks ------------------------------------------------------------

// ‖∂(e_Γ)⁻¹ g_{∂₂⁻Γ} − g_{∂₂⁺Γ}‖
double green_residual(const Connection& c, const CubeMap& Gamma, int N_t, int N_s);
// ‖δ(l_J)⁻¹ e_{∂₃⁻J} − e_{∂₃⁺J}‖
double stokes_residual(const Connection& c, const CubeMap& J, int N);

struct InterchangeResult {
  Mat l_cube;     // holonomy of Γ#Γ′
  Mat l_formula;  // e_Γ ▷′ {e_Γ⁻¹, g_{∂₂⁻Γ} ▷ e_Γ′}⁻¹
  double residual = 0.0;
};
InterchangeResult interchange_holonomy(const Connection& c, const CubePtr& Gamma,
                                       const CubePtr& GammaPrime, int N);

// Left side d∮_ω A by central differences (step h_fd) of the pulled-back
// 1-form in the plot parameters (s, x); right side −∮_ω D_ωA − ∮_ω Ω ∗^▷ A by
// quadrature.  A is an 𝔢-valued 2-form.  Returns the max over the sample points.
struct BaezSchreiberResult {
  double residual = 0.0;
  double lhs_norm = 0.0;
};
BaezSchreiberResult baez_schreiber_residual(const Connection& c, const FormField& A,
                                            const CubeMap& plot, int N, double h_fd,
                                            const std::vector<std::pair<double, double>>& points);

struct WilsonResult {
  Mat W;
  double delta_defect = 0.0;  // ‖δ(W) − 1_E‖
  double identity_defect = 0.0;  // ‖W − 1_L‖
};
// Throws NotASphereMap when S is not constant on ∂D³.
WilsonResult wilson_sphere(const Connection& c, const CubeMap& S, int N);

}  // namespace grayhol
