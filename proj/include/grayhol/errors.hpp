#pragma once
#include <stdexcept>
#include <string>

namespace grayhol {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularMatrix : Error { using Error::Error; };
struct BoundaryMismatch : Error {
  double residual;
  BoundaryMismatch(const std::string& what, double r) : Error(what), residual(r) {}
};
struct StepTooSmall : Error { using Error::Error; };
struct NotAComplex : Error { using Error::Error; };
struct LengthUnsupported : Error { using Error::Error; };
struct DegenerateCrossedModule : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct UnsupportedKind : Error { using Error::Error; };
struct NotASphereMap : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace grayhol
