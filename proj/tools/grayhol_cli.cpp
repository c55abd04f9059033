#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "grayhol/checks.hpp"
#include "grayhol/errors.hpp"

using namespace grayhol;

namespace {

struct Options {
  std::string config, out, resolution, instance, group = "GL", op, family;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double tol = 0.0;
  int n = 0, samples = 0;
  std::vector<int> levels;
};

Resolution parse_resolution(const std::string& text) {
  std::vector<int> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("--resolution expects N or N_t,N_s,N_x");
    }
  }
  for (int x : v)
    if (x < 1 || x > 4096) throw ConfigError("--resolution values must lie in 1..4096");
  if (v.size() == 1) return {v[0], v[0], v[0]};
  if (v.size() == 3) return {v[0], v[1], v[2]};
  throw ConfigError("--resolution expects N or N_t,N_s,N_x");
}

Scenario build_scenario(const Options& o, const std::string& check) {
  json cfg = json::object();
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw ConfigError("cannot read config '" + o.config + "'");
    try {
      in >> cfg;
    } catch (const json::exception& e) {
      throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
  }
  Scenario sc = scenario_from_json(cfg);
  if (!check.empty()) sc.checks = {check};
  if (sc.checks.empty()) throw ConfigError("no checks requested");
  if (!o.instance.empty()) {
    sc.instance = {{"instance", o.instance}};
    if (o.instance == "adjoint" || o.instance == "trivial-l")
      sc.instance["group"] = {{"type", o.group}, {"n", o.n > 0 ? o.n : 2}};
    if (o.instance == "automorphism") sc.instance["algebra"] = o.n == 3 ? "so3" : "gl2";
  } else if (o.n > 0) {
    sc.instance["group"] = {{"type", o.group}, {"n", o.n}};
  }
  if (o.seed_set) sc.seed = o.seed;
  if (o.tol > 0) sc.tol = o.tol;
  if (o.samples > 0) sc.n_samples = o.samples;
  if (!o.resolution.empty()) sc.resolution = parse_resolution(o.resolution);
  if (!o.op.empty()) sc.op = o.op;
  if (!o.family.empty()) sc.family = o.family;
  if (!o.levels.empty()) sc.levels = o.levels;
  return sc;
}

// Every numeric leaf whose key names a residual-like quantity.
void collect(const json& j, const std::string& path, std::vector<std::pair<std::string, double>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      const std::string p = path.empty() ? k : path + "." + k;
      if (it->is_number_float() &&
          (k == "residual" || k.find("residual_") == 0 || k.find("deviation") != std::string::npos ||
           k.find("defect") != std::string::npos || k.find("distance") != std::string::npos ||
           k == "final_error" || k == "vertical" || k == "whisker" || k == "upward"))
        out.emplace_back(p, it->get<double>());
      else if (it->is_object())
        collect(*it, p, out);
    }
  }
}

void print_summary(const json& r) {
  const std::string name = r["check"];
  const bool pass = r["pass"];
  std::printf("%-16s %s\n", name.c_str(), pass ? "PASS" : "FAIL");
  if (r.contains("report")) {
    const json& rep = r["report"];
    std::printf("  %-52s %12s  %s\n", "identity", "max residual", "worst sample");
    for (const auto& e : rep["entries"])
      std::printf("  %-52s %12.3e  %d%s\n", e["identity"].get<std::string>().c_str(),
                  e["max_residual"].get<double>(), e["worst_seed_index"].get<int>(),
                  e["pass"].get<bool>() ? "" : "  <-- FAIL");
    if (!pass)
      for (const auto& e : rep["entries"])
        if (!e["pass"].get<bool>())
          std::fprintf(stderr, "%s: identity '%s' fails (residual %.3e > %.1e, worst sample %d)\n",
                       name.c_str(), e["identity"].get<std::string>().c_str(),
                       e["max_residual"].get<double>(), rep["tol"].get<double>(),
                       e["worst_seed_index"].get<int>());
    return;
  }
  if (r.contains("N") && r.contains("error")) {
    std::printf("  %6s %14s %8s\n", "N", "error", "order");
    const auto& Ns = r["N"];
    const auto& err = r["error"];
    const auto& ord = r["pairwise_order"];
    for (std::size_t i = 0; i < Ns.size(); ++i) {
      if (i == 0) std::printf("  %6d %14.6e %8s\n", Ns[i].get<int>(), err[i].get<double>(), "");
      else std::printf("  %6d %14.6e %8.3f\n", Ns[i].get<int>(), err[i].get<double>(), ord[i - 1].get<double>());
    }
    std::printf("  fitted order %.3f (minimum %.1f)\n", r["fitted_order"].get<double>(),
                r["min_order"].get<double>());
  }
  if (r.contains("study")) {
    const auto& st = r["study"];
    for (std::size_t i = 0; i < st["N"].size(); ++i)
      std::printf("  N = %-5d residual %.3e\n", st["N"][i].get<int>(), st["residual"][i].get<double>());
    std::printf("  fitted order %.3f\n", st["fitted_order"].get<double>());
  }
  std::vector<std::pair<std::string, double>> vals;
  collect(r, "", vals);
  for (const auto& [k, v] : vals) std::printf("  %-44s %12.3e\n", k.c_str(), v);
  if (r.contains("lifting_normalization")) {
    const auto& n = r["lifting_normalization"];
    std::printf("  lifting factor: configured %.1f (%s), literal 6 %s\n",
                n["configured_factor"].get<double>(), n["configured_passes"].get<bool>() ? "passes" : "fails",
                n["literal_passes"].get<bool>() ? "passes" : "fails");
  }
  // Sizes such as e_distance_from_identity are informational; W's is a criterion.
  auto judged = [](const std::string& k) {
    return k.find("_from_identity") == std::string::npos || k.rfind("W_", 0) == 0;
  };
  const std::pair<std::string, double>* worst = nullptr;
  for (const auto& kv : vals)
    if (judged(kv.first) && (!worst || kv.second > worst->second)) worst = &kv;
  if (!pass && worst)
    std::fprintf(stderr, "%s failed; worst quantity %s = %.3e\n", name.c_str(), worst->first.c_str(),
                 worst->second);
}

int run(const Options& o, const std::string& check) {
  try {
    const Scenario sc = build_scenario(o, check);
    const json report = run_scenario(sc);
    for (const auto& r : report["checks"]) print_summary(r);
    if (!o.out.empty()) {
      std::ofstream out(o.out);
      if (!out) throw ConfigError("cannot write report to '" + o.out + "'");
      out << report.dump(2) << "\n";
    }
    std::printf("overall %s\n", report["pass"].get<bool>() ? "PASS" : "FAIL");
    return report["pass"].get<bool>() ? 0 : 1;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lie 2-crossed modules, Gray 3-groupoids and higher holonomy"};
  app.require_subcommand(1);
  Options o;
  int code = 0;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"run", ""},
      {"check-axioms", "axioms"},
      {"check-gray", "gray"},
      {"check-differential", "differential"},
      {"holonomy", "holonomy"},
      {"green", "green"},
      {"stokes", "stokes"},
      {"interchange", "interchange"},
      {"wilson", "wilson"},
      {"invariance", "invariance"},
      {"baez-schreiber", "baez_schreiber"},
      {"convergence", "convergence"}};
  for (const auto& [cmd, check] : commands) {
    auto* sub = app.add_subcommand(cmd, cmd == "run" ? "run the checks listed in --config"
                                                     : "run the " + check + " check");
    sub->add_option("--config", o.config, "scenario JSON");
    sub->add_option("--out", o.out, "write the JSON report here");
    sub->add_option_function<std::uint64_t>("--seed", [&o](std::uint64_t s) { o.seed = s, o.seed_set = true; },
                                            "random seed");
    sub->add_option("--tol", o.tol, "tolerance override");
    sub->add_option("--resolution", o.resolution, "N or N_t,N_s,N_x");
    sub->add_option("--instance", o.instance, "adjoint | chain | automorphism | trivial-l");
    sub->add_option("--group", o.group, "GL | SO (adjoint and trivial-l)");
    sub->add_option("--n", o.n, "matrix size (automorphism: 2 = gl2, 3 = so3)");
    sub->add_option("--samples", o.samples, "number of random samples for axiom suites");
    sub->add_option("--op", o.op, "convergence: path | surface | volume");
    sub->add_option("--family", o.family, "convergence: const-exp | green | stokes");
    sub->add_option("--levels", o.levels, "invariance levels (1 2 3)");
    const std::string c = check;
    sub->callback([&o, &code, c] { code = run(o, c); });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int r = app.exit(e);
    return r == 0 ? 0 : 2;
  }
  return code;
}
