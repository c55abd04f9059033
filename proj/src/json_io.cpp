#include "grayhol/json_io.hpp"

#include "grayhol/errors.hpp"

namespace grayhol {

json to_json(const Mat& a) {
  json rows = json::array();
  for (int i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(row);
  }
  return rows;
}

Mat matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw ConfigError("a matrix must be a non-empty array of rows");
  const int r = static_cast<int>(j.size()), c = static_cast<int>(j[0].size());
  Mat a(r, c);
  for (int i = 0; i < r; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != c)
      throw ConfigError("matrix rows have different lengths");
    for (int k = 0; k < c; ++k) {
      if (!j[i][k].is_number()) throw ConfigError("matrix entries must be numbers");
      a(i, k) = j[i][k].get<double>();
    }
  }
  if (!a.allFinite()) throw ConfigError("matrix entries must be finite");
  return a;
}

Vec vector_from_json(const json& j) {
  if (!j.is_array()) throw ConfigError("a vector must be an array of numbers");
  Vec v(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError("vector entries must be numbers");
    v[static_cast<int>(i)] = j[i].get<double>();
  }
  return v;
}

json to_json(const AxiomReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries)
    entries.push_back({{"identity", e.identity},
                       {"max_residual", e.max_residual},
                       {"worst_seed_index", e.worst_seed_index},
                       {"pass", e.pass}});
  return {{"subject", r.subject}, {"seed", r.seed},       {"n_samples", r.n_samples},
          {"tol", r.tol},         {"pass", r.pass()},     {"max_residual", r.max_residual()},
          {"entries", entries}};
}

json to_json(const GrayCell& c) {
  json j = {{"rank", c.rank}, {"X", to_json(c.X)}};
  if (c.rank >= 2) j["e"] = to_json(c.e);
  if (c.rank == 3) j["l"] = to_json(c.l);
  return j;
}

json to_json(const FormField& f) {
  json terms = json::array();
  for (const auto& t : f.terms) {
    json monos = json::array();
    for (const auto& m : t.monomials) monos.push_back({{"alpha", m.alpha}, {"matrix", to_json(m.coeff)}});
    terms.push_back({{"I", t.I}, {"monomials", monos}});
  }
  return {{"d", f.d}, {"k", f.k}, {"terms", terms}};
}

FormField form_from_json(const json& j, int rows, int cols) {
  try {
    const int d = j.at("d").get<int>(), k = j.at("k").get<int>();
    if (d < 1 || k < 0 || k > d) throw ConfigError("form degree out of range");
    FormField f(d, k, rows, cols);
    for (const auto& t : j.at("terms")) {
      auto I = t.at("I").get<std::vector<int>>();
      if (static_cast<int>(I.size()) != k) throw ConfigError("form term index has the wrong length");
      for (int i : I)
        if (i < 0 || i >= d) throw ConfigError("form term index out of range");
      for (const auto& m : t.at("monomials")) {
        auto alpha = m.at("alpha").get<std::vector<int>>();
        if (static_cast<int>(alpha.size()) != d) throw ConfigError("monomial exponent has the wrong length");
        Mat c = matrix_from_json(m.at("matrix"));
        if (c.rows() != rows || c.cols() != cols) throw ConfigError("form coefficient has the wrong shape");
        f.add(I, alpha, c);
      }
    }
    return f;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed form: ") + e.what());
  }
}

const TwoCrossedModule* ModuleBundle::group() const {
  if (adjoint) return &adjoint->group;
  if (chain) return &chain->group;
  if (trivial) return trivial.get();
  return nullptr;
}

const DifferentialTwoCrossedModule* ModuleBundle::diff() const {
  if (adjoint) return &adjoint->diff;
  if (chain) return &chain->diff;
  if (automorphism) return &automorphism->diff;
  return nullptr;
}

namespace {

GroupSpec load_group(const json& j) {
  const std::string type = j.value("type", "GL");
  const int n = j.value("n", 2);
  if (n < 1 || n > 6) throw ConfigError("group size n must lie in 1..6");
  if (type == "GL") return make_gl(n);
  if (type == "SO") return make_so(n);
  throw ConfigError("unknown group type '" + type + "' (valid: GL, SO)");
}

}  // namespace

ModuleBundle load_instance(const json& j, std::uint64_t seed) {
  try {
    ModuleBundle b;
    b.kind = j.at("instance").get<std::string>();
    if (b.kind == "adjoint") {
      b.adjoint = std::make_shared<AdjointInstance>(make_adjoint(load_group(j.value("group", json::object()))));
    } else if (b.kind == "trivial-l") {
      b.trivial = std::make_shared<TwoCrossedModule>(
          make_trivial_l_instance(load_group(j.value("group", json::object()))));
    } else if (b.kind == "chain") {
      const auto dims = j.value("dims", std::vector<int>{2, 3, 2});
      ChainComplex cx;
      if (j.contains("boundaries")) {
        std::vector<Mat> bd;
        for (const auto& m : j.at("boundaries")) bd.push_back(matrix_from_json(m));
        cx = make_complex(dims, bd);
      } else {
        Rng rng(seed);
        cx = random_complex(dims, rng);
      }
      b.chain = std::make_shared<ChainComplexInstance>(make_chain_complex(cx.dims, cx.boundaries));
    } else if (b.kind == "automorphism") {
      const std::string alg = j.value("algebra", "so3");
      std::vector<Mat> basis;
      if (alg == "so3") basis = so3_basis();
      else if (alg == "gl2") basis = gl_basis(2);
      else throw ConfigError("unknown algebra '" + alg + "' (valid: so3, gl2)");
      b.automorphism = std::make_shared<AutomorphismInstance>(make_automorphism(identity_xmod(basis)));
    } else {
      throw ConfigError("unknown instance '" + b.kind +
                        "' (valid: adjoint, chain, automorphism, trivial-l)");
    }
    return b;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed instance descriptor: ") + e.what());
  } catch (const NotAComplex& e) {
    throw ConfigError(e.what());
  } catch (const LengthUnsupported& e) {
    throw ConfigError(e.what());
  }
}

FormTriple load_triple(const json& j, const ModuleBundle& mod, std::uint64_t seed) {
  try {
    const std::string recipe = j.value("recipe", mod.chain ? "R2" : "R1");
    const std::uint64_t s = j.value("seed", seed);
    if (recipe == "R1") {
      if (!mod.adjoint) throw ConfigError("recipe R1 needs the adjoint instance");
      return recipe_r1(*mod.adjoint, j.value("d", 3), j.value("degree", 2), j.value("amplitude", 0.4),
                       s, j.value("mu_degree", 1));
    }
    if (recipe == "R2") {
      if (!mod.chain) throw ConfigError("recipe R2 needs the chain-complex instance");
      return recipe_r2(*mod.chain, j.value("d", 4), j.value("amplitude", 0.25), s,
                       j.value("nontrivial_A", true));
    }
    if (recipe == "user") {
      const auto* h = mod.diff();
      if (!h) throw ConfigError("user triples need a differential module");
      return user_triple(*h, form_from_json(j.at("omega"), h->g.rows, h->g.cols),
                         form_from_json(j.at("m"), h->e.rows, h->e.cols),
                         form_from_json(j.at("theta"), h->l.rows, h->l.cols));
    }
    throw ConfigError("unknown recipe '" + recipe + "' (valid: R1, R2, user)");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed triple descriptor: ") + e.what());
  } catch (const DimensionMismatch& e) {
    throw ConfigError(e.what());
  }
}

CubePtr load_cube(const json& j) {
  try {
    const int n = j.at("n").get<int>();
    const json& base = j.at("base");
    const std::string type = base.at("type").get<std::string>();
    const SmoothStep& phi = smooth_step(j.value("epsilon", 0.1));
    CubePtr raw;
    std::vector<double> lo(n, 0.0), hi(n, 1.0);
    if (type == "polynomial") {
      const Vec P0 = vector_from_json(base.at("P0")), P1 = vector_from_json(base.at("P1"));
      const auto knots = base.value("knots", std::vector<double>{0.0, 1.0});
      if (base.contains("terms")) {
        std::vector<PolynomialTerm> terms;
        for (const auto& t : base.at("terms"))
          terms.push_back({t.at("alpha").get<std::vector<int>>(), vector_from_json(t.at("v"))});
        raw = std::make_shared<PolynomialBase>(n, P0, P1, terms, knots);
      } else {
        Rng rng(base.value("seed", 1));
        raw = PolynomialBase::random(n, static_cast<int>(P0.size()), base.value("degree", 2),
                                     base.value("amplitude", 0.5), rng, P0, P1, knots);
      }
    } else if (type == "trig") {
      std::vector<TrigTerm> terms;
      for (const auto& t : base.at("terms"))
        terms.push_back({t.value("a", 1), t.value("b", 0.0), t.value("c", 0.0), t.value("k", -1),
                         t.value("q", 0.0), vector_from_json(t.at("v"))});
      raw = std::make_shared<TrigBase>(n, vector_from_json(base.at("P0")),
                                       vector_from_json(base.at("P1")), terms);
    } else if (type == "sphere") {
      if (n != 3) throw ConfigError("sphere cubes have n = 3");
      raw = std::make_shared<SphereBase>(vector_from_json(base.at("centre")), base.value("radius", 1.0));
      lo.assign(3, -1.0);
    } else {
      throw ConfigError("unknown cube base '" + type + "' (valid: polynomial, trig, sphere)");
    }
    if (raw->n() != n) throw ConfigError("cube dimension does not match its base");
    if (j.contains("lo")) lo = j.at("lo").get<std::vector<double>>();
    if (j.contains("hi")) hi = j.at("hi").get<std::vector<double>>();
    return std::make_shared<SmoothedCube>(raw, lo, hi, phi);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed cube descriptor: ") + e.what());
  } catch (const DimensionMismatch& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace grayhol
