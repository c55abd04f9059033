#pragma once
#include <memory>
#include <string>

#include <json.hpp>

#include "grayhol/cubes.hpp"
#include "grayhol/gray.hpp"
#include "grayhol/triples.hpp"

namespace grayhol {

using json = nlohmann::json;

// Matrices are serialised row-major as nested arrays.
json to_json(const Mat& a);
Mat matrix_from_json(const json& j);
Vec vector_from_json(const json& j);

json to_json(const AxiomReport& r);
json to_json(const GrayCell& c);
json to_json(const FormField& f);
FormField form_from_json(const json& j, int rows, int cols);

// The modules behind an instance descriptor.  `group` is null for the
// automorphism instance (differential level only).
struct ModuleBundle {
  std::string kind;  // adjoint | chain | automorphism | trivial-l
  std::shared_ptr<AdjointInstance> adjoint;
  std::shared_ptr<ChainComplexInstance> chain;
  std::shared_ptr<AutomorphismInstance> automorphism;
  std::shared_ptr<TwoCrossedModule> trivial;

  const TwoCrossedModule* group() const;
  const DifferentialTwoCrossedModule* diff() const;
};

// {"instance": "adjoint", "group": {"type": "GL"|"SO", "n": 2}}
// {"instance": "chain", "dims": [2,3,2], "boundaries": [[[..]], [[..]]]}  (random if absent)
// {"instance": "automorphism", "algebra": "so3" | "gl2"}
// {"instance": "trivial-l", "group": {...}}
ModuleBundle load_instance(const json& j, std::uint64_t seed);

// {"recipe": "R1", "d": 3, "degree": 2, "amplitude": 0.4, "seed": 11, "mu_degree": 1}
// {"recipe": "R2", "d": 4, "amplitude": 0.25, "seed": 3, "nontrivial_A": true}
// {"recipe": "user", "omega": form, "m": form, "theta": form}
FormTriple load_triple(const json& j, const ModuleBundle& mod, std::uint64_t seed);

// {"n": 2, "base": {"type": "polynomial", "P0": [..], "P1": [..], "degree": 2,
//  "amplitude": 0.6, "seed": 1} | {"type": "polynomial", ..., "terms": [{"alpha", "v"}]}
//  | {"type": "trig", "P0", "P1", "terms": [{"a","b","c","k","q","v"}]}
//  | {"type": "sphere", "centre": [..], "radius": r}, "epsilon": 0.1}
CubePtr load_cube(const json& j);

}  // namespace grayhol
