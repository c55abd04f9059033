#include "grayhol/gray.hpp"

#include <cmath>
#include <limits>

#include "grayhol/errors.hpp"

namespace grayhol {

namespace {

const TwoCrossedModule& module_of(const GrayCell& c) {
  if (!c.H) throw ConfigError("cell has no owning 2-crossed module");
  return *c.H;
}

const TwoCrossedModule& common_module(const GrayCell& a, const GrayCell& b) {
  if (a.H != b.H) throw ConfigError("cells belong to different 2-crossed modules");
  return module_of(a);
}

void require_rank(const GrayCell& c, int lo, int hi, const char* what) {
  if (c.rank < lo || c.rank > hi)
    throw DimensionMismatch(std::string(what) + ": cell of rank " + std::to_string(c.rank));
}

void require_match(double residual, double btol, const char* what) {
  if (!(residual <= btol))
    throw BoundaryMismatch(std::string(what) + " (residual " + std::to_string(residual) + ")",
                           residual);
}

double cell_distance(const GrayCell& a, const GrayCell& b) {
  if (a.rank != b.rank) return std::numeric_limits<double>::infinity();
  double r = frob_diff(a.X, b.X);
  if (a.rank >= 2) r = std::max(r, frob_diff(a.e, b.e));
  if (a.rank == 3) r = std::max(r, frob_diff(a.l, b.l));
  return r;
}

}  // namespace

GrayCell cell1(const TwoCrossedModule& H, const Mat& X) { return {1, X, Mat(), Mat(), &H}; }
GrayCell cell2(const TwoCrossedModule& H, const Mat& X, const Mat& e) { return {2, X, e, Mat(), &H}; }
GrayCell cell3(const TwoCrossedModule& H, const Mat& X, const Mat& e, const Mat& l) {
  return {3, X, e, l, &H};
}

GrayCell source2(const GrayCell& c) {
  require_rank(c, 2, 3, "∂₂⁻");
  return cell1(module_of(c), c.X);
}

GrayCell target2(const GrayCell& c) {
  require_rank(c, 2, 3, "∂₂⁺");
  const auto& H = module_of(c);
  return cell1(H, H.G.multiply(H.G.inverse(H.partial(c.e)), c.X));
}

GrayCell source3(const GrayCell& c) {
  require_rank(c, 3, 3, "∂₃⁻");
  return cell2(module_of(c), c.X, c.e);
}

GrayCell target3(const GrayCell& c) {
  require_rank(c, 3, 3, "∂₃⁺");
  const auto& H = module_of(c);
  return cell2(H, c.X, H.E.multiply(H.E.inverse(H.delta(c.l)), c.e));
}

GrayCell identity2(const GrayCell& c) {
  require_rank(c, 1, 1, "identity 2-cell");
  return cell2(module_of(c), c.X, c.H->E.identity());
}

GrayCell identity3(const GrayCell& c) {
  require_rank(c, 2, 2, "identity 3-cell");
  return cell3(module_of(c), c.X, c.e, c.H->L.identity());
}

GrayCell inverse2(const GrayCell& c) {
  require_rank(c, 2, 2, "♮₂-inverse");
  const auto& H = module_of(c);
  return cell2(H, target2(c).X, H.E.inverse(c.e));
}

GrayCell inverse3(const GrayCell& c) {
  require_rank(c, 3, 3, "♮₃-inverse");
  const auto& H = module_of(c);
  return cell3(H, c.X, target3(c).e, H.L.inverse(c.l));
}

GrayCell compose(const GrayCell& a, const GrayCell& b, int direction, double btol) {
  const auto& H = common_module(a, b);
  switch (direction) {
    case 1: {
      if (a.rank == 1 && b.rank == 1) return cell1(H, H.G.multiply(a.X, b.X));
      if (a.rank == 1) {
        GrayCell c = b;
        c.X = H.G.multiply(a.X, b.X);
        c.e = H.act_E(a.X, b.e);
        if (b.rank == 3) c.l = H.act_L(a.X, b.l);
        return c;
      }
      if (b.rank == 1) {
        GrayCell c = a;
        c.X = H.G.multiply(a.X, b.X);
        return c;
      }
      throw UnsupportedKind(
          "♮₁ of two higher cells is not defined; use horizontal_lower or horizontal_upper");
    }
    case 2: {
      require_rank(a, 2, 3, "♮₂");
      if (a.rank != b.rank) throw DimensionMismatch("♮₂ needs cells of equal rank");
      require_match(frob_diff(target2(a).X, b.X), btol, "♮₂: ∂₂⁺(a) ≠ ∂₂⁻(b)");
      GrayCell c = a;
      c.e = H.E.multiply(a.e, b.e);
      if (a.rank == 3) c.l = H.L.multiply(derived_action(H, a.e, b.l), a.l);
      return c;
    }
    case 3: {
      require_rank(a, 3, 3, "♮₃");
      require_rank(b, 3, 3, "♮₃");
      const GrayCell t = target3(a);
      require_match(std::max(frob_diff(t.X, b.X), frob_diff(t.e, b.e)), btol,
                    "♮₃: ∂₃⁺(a) ≠ ∂₃⁻(b)");
      GrayCell c = a;
      c.l = H.L.multiply(a.l, b.l);
      return c;
    }
    default:
      throw UnsupportedKind("composition direction must be 1, 2 or 3");
  }
}

namespace {

// Extends a 1-cell boundary to a whiskerable cell of the right rank.
GrayCell whisker(const GrayCell& one, const GrayCell& c, bool left) {
  return left ? compose(one, c, 1) : compose(c, one, 1);
}

}  // namespace

GrayCell horizontal_lower(const GrayCell& a, const GrayCell& b) {
  require_rank(a, 2, 3, "horizontal composite");
  if (a.rank != b.rank) throw DimensionMismatch("horizontal composite needs equal ranks");
  return compose(whisker(source2(b), a, false), whisker(target2(a), b, true), 2);
}

GrayCell horizontal_upper(const GrayCell& a, const GrayCell& b) {
  require_rank(a, 2, 3, "horizontal composite");
  if (a.rank != b.rank) throw DimensionMismatch("horizontal composite needs equal ranks");
  return compose(whisker(source2(a), b, true), whisker(target2(b), a, false), 2);
}

GrayCell interchange_cell(const GrayCell& a, const GrayCell& b) {
  require_rank(a, 2, 2, "#");
  require_rank(b, 2, 2, "#");
  const auto& H = common_module(a, b);
  const auto& E = H.E;
  const Mat Xf = H.act_E(a.X, b.e);
  const Mat lower_e = horizontal_lower(a, b).e;
  const Mat lift = H.lifting(E.inverse(a.e), Xf);
  return cell3(H, H.G.multiply(a.X, b.X), lower_e, derived_action(H, a.e, H.L.inverse(lift)));
}

double two_functoriality_residual(const TwoCrossedModule& H, const Mat& X, const Mat& e,
                                  const Mat& f, const Mat& k, const Mat& l) {
  const auto &G = H.G, &E = H.E, &L = H.L;
  auto dact = [&](const Mat& u, const Mat& m) { return derived_action(H, u, m); };
  const Mat Xf = H.act_E(X, f);
  const Mat lhs = L.multiply(
      L.multiply(dact(e, L.inverse(H.lifting(E.inverse(e), Xf))), dact(Xf, k)), H.act_L(X, l));
  const Mat Y = G.multiply(G.inverse(H.partial(e)), X);
  const Mat shifted_f = H.act_E(X, E.multiply(E.inverse(H.delta(l)), f));
  const Mat lift = H.lifting(E.multiply(E.inverse(e), H.delta(k)), shifted_f);
  const Mat rhs =
      L.multiply(L.multiply(dact(e, H.act_L(Y, l)), dact(e, L.inverse(lift))), k);
  return frob_diff(lhs, rhs);
}

AxiomReport verify_gray_axioms(const TwoCrossedModule& H, int n_samples, std::uint64_t seed,
                               double tol, const InterchangeFn& interchange) {
  const InterchangeFn hash = interchange ? interchange : InterchangeFn(interchange_cell);
  const auto &G = H.G, &E = H.E, &L = H.L;
  ResidualTable table;
  Rng rng(seed);
  int sample = 0;

  // Evaluates a check; a boundary mismatch inside counts as its residual.
  auto check = [&](const std::string& name, const std::function<double()>& fn) {
    double r;
    try {
      r = fn();
    } catch (const BoundaryMismatch& m) {
      r = m.residual;
    } catch (const SingularMatrix&) {
      r = std::numeric_limits<double>::infinity();
    }
    table.record(name, r, sample);
  };
  auto c1 = [&](const Mat& X) { return cell1(H, X); };
  auto c2 = [&](const Mat& X, const Mat& e) { return cell2(H, X, e); };
  auto c3 = [&](const Mat& X, const Mat& e, const Mat& l) { return cell3(H, X, e, l); };
  auto v = [](const GrayCell& a, const GrayCell& b) { return compose(a, b, 2); };
  auto up = [](const GrayCell& a, const GrayCell& b) { return compose(a, b, 3); };
  auto wh = [](const GrayCell& a, const GrayCell& b) { return compose(a, b, 1); };
  auto dist = cell_distance;

  for (sample = 0; sample < n_samples; ++sample) {
    const Mat X = G.sample(rng), Y = G.sample(rng), Z = G.sample(rng);
    const Mat e = E.sample(rng), f = E.sample(rng), g = E.sample(rng);
    const Mat k = L.sample(rng), l = L.sample(rng), m = L.sample(rng);
    const Mat k1 = L.sample(rng), l1 = L.sample(rng);

    // 2-cells Γ: X -> X1 -> X2 -> X3 stacked vertically.
    const GrayCell G1 = c2(X, e);
    const GrayCell G2 = c2(target2(G1).X, f);
    const GrayCell G3 = c2(target2(G2).X, g);
    // 3-cells over the same 2-cell, stacked upwards.
    const GrayCell J1 = c3(X, e, l);
    const GrayCell J2 = c3(X, target3(J1).e, k);
    const GrayCell J3 = c3(X, target3(J2).e, m);
    // 3-cells stacked vertically.
    const GrayCell V1 = J1;
    const GrayCell V2 = c3(target2(V1).X, f, k);
    const GrayCell V3 = c3(target2(V2).X, g, m);

    check("1: ∂₂⁺∂₃⁺ = ∂₂⁺", [&] { return dist(target2(target3(J1)), target2(J1)); });
    check("1: ∂₂⁻∂₃⁻ = ∂₂⁻", [&] { return dist(source2(source3(J1)), source2(J1)); });

    check("4: ♮₃ associativity", [&] { return dist(up(up(J1, J2), J3), up(J1, up(J2, J3))); });
    check("4: ♮₃ identities", [&] {
      return std::max(dist(up(identity3(source3(J1)), J1), J1),
                      dist(up(J1, identity3(target3(J1))), J1));
    });
    check("4: ♮₃ inverses", [&] {
      return std::max(dist(up(J1, inverse3(J1)), identity3(source3(J1))),
                      dist(up(inverse3(J1), J1), identity3(target3(J1))));
    });

    check("5: ♮₂ associativity (2-cells)", [&] { return dist(v(v(G1, G2), G3), v(G1, v(G2, G3))); });
    check("5: ♮₂ identities (2-cells)", [&] {
      return std::max(dist(v(identity2(source2(G1)), G1), G1),
                      dist(v(G1, identity2(target2(G1))), G1));
    });
    check("5: ♮₂ inverses (2-cells)", [&] {
      return std::max(dist(v(G1, inverse2(G1)), identity2(source2(G1))),
                      dist(v(inverse2(G1), G1), identity2(target2(G1))));
    });

    check("6: ♮₂ associativity (3-cells)", [&] { return dist(v(v(V1, V2), V3), v(V1, v(V2, V3))); });
    check("6: ♮₂ identities (3-cells)", [&] {
      const GrayCell i0 = identity3(identity2(source2(V1)));
      const GrayCell i1 = identity3(identity2(target2(V1)));
      return std::max(dist(v(i0, V1), V1), dist(v(V1, i1), V1));
    });
    check("6: ♮₂ inverses (3-cells)", [&] {
      // (X,e,l)^{-1} = (∂(e)⁻¹X, e⁻¹, e⁻¹▷'l⁻¹)
      const GrayCell inv = c3(target2(V1).X, E.inverse(V1.e),
                              derived_action(H, E.inverse(V1.e), L.inverse(V1.l)));
      return std::max(dist(v(V1, inv), identity3(identity2(source2(V1)))),
                      dist(v(inv, V1), identity3(identity2(target2(V1)))));
    });
    check("6: ∂₃± are ♮₂-functors", [&] {
      const GrayCell c = v(V1, V2);
      return std::max(dist(source3(c), v(source3(V1), source3(V2))),
                      dist(target3(c), v(target3(V1), target3(V2))));
    });

    check("7: interchange of ♮₂ and ♮₃", [&] {
      const GrayCell J = J1, Jp = J2;
      const GrayCell K = c3(target2(J).X, f, l1);
      const GrayCell Kp = c3(K.X, target3(K).e, k1);
      return dist(v(up(J, Jp), up(K, Kp)), up(v(J, K), v(Jp, Kp)));
    });

    const GrayCell W = c1(Z);
    check("8: whiskering preserves ♮₂", [&] {
      return std::max({dist(wh(W, v(G1, G2)), v(wh(W, G1), wh(W, G2))),
                       dist(wh(v(G1, G2), W), v(wh(G1, W), wh(G2, W))),
                       dist(wh(W, v(V1, V2)), v(wh(W, V1), wh(W, V2))),
                       dist(wh(v(V1, V2), W), v(wh(V1, W), wh(V2, W)))});
    });
    check("8: whiskering preserves ♮₃", [&] {
      return std::max(dist(wh(W, up(J1, J2)), up(wh(W, J1), wh(W, J2))),
                      dist(wh(up(J1, J2), W), up(wh(J1, W), wh(J2, W))));
    });
    check("8: whiskering preserves boundaries", [&] {
      return std::max({dist(target2(wh(W, G1)), wh(W, target2(G1))),
                       dist(target2(wh(G1, W)), wh(target2(G1), W)),
                       dist(target3(wh(W, J1)), wh(W, target3(J1))),
                       dist(target3(wh(J1, W)), wh(target3(J1), W)),
                       dist(source3(wh(W, J1)), wh(W, source3(J1)))});
    });
    check("8: whiskering preserves identities", [&] {
      return std::max(dist(wh(W, identity3(G1)), identity3(wh(W, G1))),
                      dist(wh(W, identity2(c1(X))), identity2(wh(W, c1(X)))));
    });

    check("9: ♮₁ associativity", [&] {
      return dist(wh(wh(c1(X), c1(Y)), c1(Z)), wh(c1(X), wh(c1(Y), c1(Z))));
    });
    check("9: ♮₁ identities and inverses", [&] {
      const GrayCell one = c1(G.identity());
      return std::max({dist(wh(one, c1(X)), c1(X)), dist(wh(c1(X), one), c1(X)),
                       dist(wh(c1(X), c1(G.inverse(X))), one)});
    });

    check("10: ♮₁γ ∘ ♮₁γ' = ♮₁(γ'γ)", [&] {
      return std::max(dist(wh(wh(J1, c1(Y)), c1(Z)), wh(J1, c1(G.multiply(Y, Z)))),
                      dist(wh(wh(G1, c1(Y)), c1(Z)), wh(G1, c1(G.multiply(Y, Z)))));
    });
    check("10: γ♮₁ ∘ γ'♮₁ = (γγ')♮₁", [&] {
      return std::max(dist(wh(c1(Y), wh(c1(Z), J1)), wh(c1(G.multiply(Y, Z)), J1)),
                      dist(wh(c1(Y), wh(c1(Z), G1)), wh(c1(G.multiply(Y, Z)), G1)));
    });
    check("10: γ♮₁ ∘ ♮₁γ' = ♮₁γ' ∘ γ♮₁", [&] {
      return std::max(dist(wh(c1(Y), wh(J1, c1(Z))), wh(wh(c1(Y), J1), c1(Z))),
                      dist(wh(c1(Y), wh(G1, c1(Z))), wh(wh(c1(Y), G1), c1(Z))));
    });

    const GrayCell Ga = G1, Gb = c2(Y, f), Gc = c2(Z, g);
    const GrayCell Ja = J1, Jb = c3(Y, f, k), Jc = c3(Z, g, m);
    check("11: horizontal composites are associative", [&] {
      return std::max({dist(horizontal_lower(horizontal_lower(Ga, Gb), Gc),
                            horizontal_lower(Ga, horizontal_lower(Gb, Gc))),
                       dist(horizontal_upper(horizontal_upper(Ga, Gb), Gc),
                            horizontal_upper(Ga, horizontal_upper(Gb, Gc))),
                       dist(horizontal_lower(horizontal_lower(Ja, Jb), Jc),
                            horizontal_lower(Ja, horizontal_lower(Jb, Jc))),
                       dist(horizontal_upper(horizontal_upper(Ja, Jb), Jc),
                            horizontal_upper(Ja, horizontal_upper(Jb, Jc)))});
    });
    check("11: horizontal composites are ♮₃-functors", [&] {
      const GrayCell Jb2 = c3(Y, target3(Jb).e, k1);
      return std::max(dist(horizontal_lower(up(J1, J2), up(Jb, Jb2)),
                           up(horizontal_lower(J1, Jb), horizontal_lower(J2, Jb2))),
                      dist(horizontal_upper(up(J1, J2), up(Jb, Jb2)),
                           up(horizontal_upper(J1, Jb), horizontal_upper(J2, Jb2))));
    });

    check("12: ∂₃⁻(Γ#Γ') = lower composite", [&] {
      return dist(source3(hash(Ga, Gb)), horizontal_lower(Ga, Gb));
    });
    check("12: ∂₃⁺(Γ#Γ') = upper composite", [&] {
      return dist(target3(hash(Ga, Gb)), horizontal_upper(Ga, Gb));
    });
    check("12: ∂₂±(Γ#Γ')", [&] {
      const GrayCell h = hash(Ga, Gb);
      return std::max(dist(source2(h), source2(horizontal_lower(Ga, Gb))),
                      dist(target2(h), target2(horizontal_upper(Ga, Gb))));
    });

    check("13: 2-functoriality (naturality of #)", [&] {
      const GrayCell J = c3(X, e, k), Jp = c3(Y, f, l);
      const GrayCell A1 = source3(J), B1 = source3(Jp), A2 = target3(J), B2 = target3(Jp);
      return dist(up(hash(A1, B1), horizontal_upper(J, Jp)),
                  up(horizontal_lower(J, Jp), hash(A2, B2)));
    });
    check("13: 2-functoriality identity in H", [&] {
      return two_functoriality_residual(H, X, e, f, k, l);
    });

    check("14: 1-functoriality ((Γ♮₂Γ')#Γ'')", [&] {
      const GrayCell Gm = G1, Gn = G2, Go = c2(Y, g);
      const GrayCell gamma2 = source2(Go), phi2 = target2(Go);
      const GrayCell lhs = hash(v(Gm, Gn), Go);
      const GrayCell rhs = up(v(identity3(wh(Gm, gamma2)), hash(Gn, Go)),
                              v(hash(Gm, Go), identity3(wh(Gn, phi2))));
      return dist(lhs, rhs);
    });
    check("14: 1-functoriality mirrored (Γ''#(Γ♮₂Γ'))", [&] {
      const GrayCell Gm = G1, Gn = G2, Go = c2(Y, g);
      const GrayCell gamma2 = source2(Go), phi2 = target2(Go);
      const GrayCell lhs = hash(Go, v(Gm, Gn));
      const GrayCell rhs = up(v(hash(Go, Gm), identity3(wh(phi2, Gn))),
                              v(identity3(wh(gamma2, Gm)), hash(Go, Gn)));
      return dist(lhs, rhs);
    });
  }
  return table.finish("Gray 3-groupoid C(" + H.name + ")", seed, n_samples, tol);
}

}  // namespace grayhol
