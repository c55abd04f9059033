#pragma once
#include <memory>
#include <vector>

#include "grayhol/algebra.hpp"

namespace grayhol {

GroupSpec make_gl(int n);
// Special orthogonal group; `project` re-orthonormalises via the polar factor.
GroupSpec make_so(int n);

// G -> G ⋊ G -> G.  E elements are stacked pairs [a; b] (2n x n).
struct AdjointInstance {
  GroupSpec base;
  TwoCrossedModule group;
  DifferentialTwoCrossedModule diff;
};
AdjointInstance make_adjoint(const GroupSpec& base);

// Helpers for the stacked-pair representation.
Mat pair_first(const Mat& p);
Mat pair_second(const Mat& p);
Mat make_pair(const Mat& a, const Mat& b);

// A chain complex A_2 -> A_1 -> A_0 stored as one graded matrix ∂ acting on
// A_0 ⊕ A_1 ⊕ A_2.  Maps of degree k send A_n to A_{n+k}.
struct ChainComplex {
  std::vector<int> dims;        // d_0, d_1, d_2 (shorter lists are padded with zeros)
  std::vector<Mat> boundaries;  // ∂_1: A_1 -> A_0, ∂_2: A_2 -> A_1
  Mat D;                        // full graded boundary
  int total = 0;
  std::vector<int> offset;

  // Masks selecting the blocks of a graded map of the given degree.
  Mat degree_mask(int degree) const;
  // Basis (flattened columns) of degree-0 chain maps.
  Mat chain_map_basis() const;
};

// Builds and validates a complex.  Throws NotAComplex if ∂∂ ≠ 0 and
// LengthUnsupported for more than three nonzero degrees.
ChainComplex make_complex(const std::vector<int>& dims, const std::vector<Mat>& boundaries);
// Random complex with rank-one boundaries, so that ker α is nontrivial.
ChainComplex random_complex(const std::vector<int>& dims, Rng& rng);

struct ChainComplexInstance {
  ChainComplex complex;
  TwoCrossedModule group;
  DifferentialTwoCrossedModule diff;
  // β(s) = 1 + ∂s + s∂ and α(b) = −∂b + b∂ on full graded matrices
  Mat beta(const Mat& s) const;
  Mat alpha(const Mat& b) const;
  // Basis of ker α on degree-2 maps (flattened columns).
  Mat kernel_alpha_basis() const;
  // Basis of ker β' on degree-1 maps (flattened columns).
  Mat kernel_beta_basis() const;
};
ChainComplexInstance make_chain_complex(const std::vector<int>& dims,
                                        const std::vector<Mat>& boundaries);

// A differential crossed module (∂: e -> g, ▷) given by structure constants in
// chosen bases: [x_i, x_j] = Σ_k g_ad[i](k, j) x_k, similarly for e, and
// x_i ▷ v = act[i] v.
struct XModData {
  int dg = 0, de = 0;
  std::vector<Mat> g_ad;  // dg matrices of size dg x dg
  std::vector<Mat> e_ad;  // de matrices of size de x de
  Mat D;                  // dg x de
  std::vector<Mat> act;   // dg matrices of size de x de

  Vec g_bracket(const Vec& x, const Vec& y) const;
  Vec e_bracket(const Vec& u, const Vec& v) const;
  Mat ad_g(const Vec& x) const;   // y -> [x, y]
  Mat act_of(const Vec& x) const; // v -> x ▷ v
  Mat F(const Vec& e) const;      // x -> x ▷ e  (de x dg)
};

// Structure constants of a matrix Lie algebra spanned by `basis`.
std::vector<Mat> structure_constants(const std::vector<Mat>& basis);
// (id: g -> g, ad) for the algebra spanned by `basis`.
XModData identity_xmod(const std::vector<Mat>& basis);
std::vector<Mat> so3_basis();
std::vector<Mat> gl_basis(int n);

struct AutomorphismInstance {
  XModData xmod;
  Mat gl1_basis;  // columns: flattened block-diagonal diag(f1, f2)
  Mat der_basis;  // columns: flattened s (de x dg)
  DifferentialTwoCrossedModule diff;

  // gl² elements are column vectors [a (dg); vec(s) (de*dg)];
  // gl¹ elements are block-diagonal (dg+de) square matrices diag(f1, f2);
  // gl³ elements are column vectors in e.
  Mat make_gl2(const Vec& a, const Mat& s) const;
  Vec gl2_a(const Mat& v) const;
  Mat gl2_s(const Mat& v) const;
};
// Throws DegenerateCrossedModule if the input fails the crossed-module laws.
AutomorphismInstance make_automorphism(const XModData& xmod);

// Crossed module (id: G -> G, conjugation) seen as a 2-crossed module with L = 1.
TwoCrossedModule make_trivial_l_instance(const GroupSpec& base);

}  // namespace grayhol
