#pragma once
#include <optional>
#include <string>
#include <vector>

#include "grayhol/json_io.hpp"

namespace grayhol {

// Zero means "use the check's default".
struct Resolution {
  int N_t = 0, N_s = 0, N_x = 0;
};

struct Scenario {
  json instance = {{"instance", "adjoint"}, {"group", {{"type", "GL"}, {"n", 2}}}};
  json triple = json::object();
  json cube = json::object();  // a single cube or {"path"|"bigon"|"bigon2"|"volume"|"sphere"|"plot": cube}
  Resolution resolution;
  std::vector<std::string> checks;
  std::uint64_t seed = 1;
  std::optional<double> tol;
  int n_samples = 0;
  double lifting_factor = -6.0;  // Θ = dθ + ω∧θ − (factor/6) m∧^{,}m
  std::vector<int> levels{1, 2, 3};
  std::string op = "path", family = "const-exp";
};

const std::vector<std::string>& valid_checks();

// Throws ConfigError on schema violations (unknown keys or checks, bad types).
Scenario scenario_from_json(const json& j);

// Each check returns {"check": name, "pass": bool, ...residuals...}.
json run_check(const std::string& name, const Scenario& sc);

// {"schema": "gray-holonomy/1", "seed", "lifting_factor", "checks": [...], "pass"}
json run_scenario(const Scenario& sc);

// Least-squares slope of −log(err) against log(N).
double fitted_order(const std::vector<int>& N, const std::vector<double>& err);

}  // namespace grayhol
