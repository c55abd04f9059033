#pragma once
#include <functional>

#include "grayhol/algebra.hpp"

namespace grayhol {

// A cell of the single-object Gray 3-groupoid C(H):
//   rank 1: X,  rank 2: (X, e),  rank 3: (X, e, l).
struct GrayCell {
  int rank = 1;
  Mat X, e, l;
  const TwoCrossedModule* H = nullptr;
};

GrayCell cell1(const TwoCrossedModule& H, const Mat& X);
GrayCell cell2(const TwoCrossedModule& H, const Mat& X, const Mat& e);
GrayCell cell3(const TwoCrossedModule& H, const Mat& X, const Mat& e, const Mat& l);

// ∂₂⁻ / ∂₂⁺ of a 2- or 3-cell (a 1-cell); ∂₃⁻ / ∂₃⁺ of a 3-cell (a 2-cell).
GrayCell source2(const GrayCell& c);
GrayCell target2(const GrayCell& c);
GrayCell source3(const GrayCell& c);
GrayCell target3(const GrayCell& c);

GrayCell identity2(const GrayCell& one_cell);  // (X, 1)
GrayCell identity3(const GrayCell& two_cell);  // (X, e, 1)
GrayCell inverse2(const GrayCell& c);          // ♮₂-inverse of a 2-cell
GrayCell inverse3(const GrayCell& c);          // ♮₃-inverse of a 3-cell

constexpr double kBoundaryTol = 1e-8;

// direction 1: product of 1-cells, or whiskering when one side is a 1-cell;
// direction 2: vertical composition of 2- or 3-cells;
// direction 3: upward composition of 3-cells.
// Throws BoundaryMismatch when the boundaries differ by more than btol.
GrayCell compose(const GrayCell& a, const GrayCell& b, int direction, double btol = kBoundaryTol);

// The two horizontal composites of 2- or 3-cells:
//   lower = (a ♮₁ ∂₂⁻b) ♮₂ (∂₂⁺a ♮₁ b),  upper = (∂₂⁻a ♮₁ b) ♮₂ (a ♮₁ ∂₂⁺b).
GrayCell horizontal_lower(const GrayCell& a, const GrayCell& b);
GrayCell horizontal_upper(const GrayCell& a, const GrayCell& b);

// (X,e) # (Y,f), a 3-cell from horizontal_lower to horizontal_upper.
GrayCell interchange_cell(const GrayCell& a, const GrayCell& b);

using InterchangeFn = std::function<GrayCell(const GrayCell&, const GrayCell&)>;

// Samples boundary-compatible tuples and checks the Gray 3-groupoid axioms.
// `interchange` replaces the interchange cell (negative controls).
AxiomReport verify_gray_axioms(const TwoCrossedModule& H, int n_samples, std::uint64_t seed,
                               double tol, const InterchangeFn& interchange = {});

// Residual of the 2-functoriality identity written directly in H:
//   e▷'{e⁻¹,X▷f}⁻¹ ((X▷f)▷'k) X▷l
//     = (e▷'∂(e)⁻¹X▷l) e▷'{e⁻¹δ(k), X▷(δ(l)⁻¹f)}⁻¹ k.
double two_functoriality_residual(const TwoCrossedModule& H, const Mat& X, const Mat& e,
                                  const Mat& f, const Mat& k, const Mat& l);

}  // namespace grayhol
