#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace cyclift;

namespace {

const FieldContext K21 = FieldContext::valued(2, 1);
const FieldContext K22 = FieldContext::valued(2, 2);
const FieldContext K32 = FieldContext::valued(3, 2);
const FieldContext K24 = FieldContext::valued(2, 4);

RationalFunction P(const std::string& s, const FieldContext& c) { return parse_expression(s, c); }

ElementSampler::Shape coeff_shape() {
  ElementSampler::Shape s;
  s.max_terms = 2;
  s.max_degree = 1;
  s.max_pole = 2;
  return s;
}

TowerPtr one_layer(const FieldContext& K, const std::string& r) {
  return artin_schreier_layer(make_base_tower(K), P(r, K));
}

TowerPtr albert_two_layer(const FieldContext& K, const std::string& r, const RationalFunction& c) {
  return albert_ascend(one_layer(K, r), c).extended;
}

std::vector<TowerPtr> sample_towers() {
  return {one_layer(K22, "u1/t^2"), one_layer(K32, "u2/t^3+u1"), albert_two_layer(K21, "u1/t^2", K21.zero()),
          cyclic_lift_inseparable(K22, {K22.u(1), K22.u(2)}).field};
}

}  // namespace

TEST(Tower, ArtinSchreierLayerExample) {
  auto t = one_layer(K21, "u1/t^2");
  EXPECT_EQ(t->degree(), 2u);
  EXPECT_TRUE(t->is_cyclic());
  auto g = TowerElement::generator(t, 1);
  auto r = TowerElement::from_base(t, P("u1/t^2", K21));
  auto one = TowerElement::constant(t, 1);
  EXPECT_EQ(g.sigma(), g + one);
  EXPECT_EQ(g * g, g + r);
  EXPECT_EQ((g + one).pow(2), g + r + one);
  EXPECT_EQ(print(g * g), "((u1)/(t^2))+x1");
}

TEST(Tower, ShiftConditionIsEnforced) {
  auto t = one_layer(K21, "u1/t^2");
  auto g = TowerElement::generator(t, 1);
  // sigma(g) - g = 1, and 0^p - 0 = 0, so s = 0 is not a valid shift for r = g.
  EXPECT_THROW(adjoin_as_layer(t, g, TowerElement::constant(t, 0)), ShiftConditionFailed);
  // shift 1 over a base-valued rhs is always admissible
  EXPECT_NO_THROW(adjoin_as_layer(t, TowerElement::from_base(t, K21.u(1)), TowerElement::constant(t, 1)));
}

TEST(Tower, SigmaOrder) {
  EXPECT_EQ(one_layer(K32, "u1/t^3")->sigma_order(), 3u);
  EXPECT_EQ(albert_two_layer(K21, "u1/t^2", K21.zero())->sigma_order(), 4u);
  // two independent layers with shift 1 give (Z/2)^2, not a cyclic group
  auto t = one_layer(K22, "u1/t^2");
  auto bicyclic = adjoin_as_layer(t, TowerElement::from_base(t, P("u2/t^2", K22)), TowerElement::constant(t, 1));
  EXPECT_EQ(bicyclic->sigma_order(), 2u);
  EXPECT_FALSE(bicyclic->is_cyclic());
  EXPECT_THROW(trace(TowerElement::generator(bicyclic, 1)), NotCyclic);
}

TEST(Tower, SigmaIsAnAutomorphismFixingTheBase) {
  ElementSampler s(101);
  for (const auto& t : sample_towers()) {
    for (int i = 0; i < 12; ++i) {
      auto x = s.tower_element(t, coeff_shape()), y = s.tower_element(t, coeff_shape());
      EXPECT_EQ((x * y).sigma(), x.sigma() * y.sigma());
      EXPECT_EQ((x + y).sigma(), x.sigma() + y.sigma());
      auto c = TowerElement::from_base(t, s.base_element(t->base(), coeff_shape()));
      EXPECT_EQ(c.sigma(), c);
      EXPECT_EQ(x.sigma_pow(t->degree()), x);
    }
  }
}

TEST(Tower, FieldArithmetic) {
  ElementSampler s(103);
  for (const auto& t : sample_towers()) {
    for (int i = 0; i < 10; ++i) {
      auto x = s.tower_element(t, coeff_shape()), y = s.tower_element(t, coeff_shape()),
           z = s.tower_element(t, coeff_shape());
      EXPECT_EQ((x * y) * z, x * (y * z));
      EXPECT_EQ(x * (y + z), x * y + x * z);
      EXPECT_EQ(x * x.inv(), TowerElement::constant(t, 1));
    }
    EXPECT_THROW(TowerElement::constant(t, 0).inv(), DivisionByZero);
  }
}

TEST(Tower, TraceAndNormExamples) {
  auto t = one_layer(K21, "u1/t^2");
  auto g = TowerElement::generator(t, 1);
  EXPECT_TRUE(trace(g).is_one());
  EXPECT_TRUE(trace(TowerElement::from_base(t, K21.u(1))).is_zero());
  EXPECT_EQ(norm(g), P("u1/t^2", K21));
  auto t3 = albert_two_layer(K21, "u1/t^2", K21.zero());
  EXPECT_TRUE(trace(TowerElement::from_base(t3, K21.u(1))).is_zero());
}

TEST(Tower, TraceAndNormMatchMatrixOracle) {
  ElementSampler s(107);
  for (const auto& t : sample_towers())
    for (int i = 0; i < 6; ++i) {
      auto x = s.tower_element(t, coeff_shape());
      EXPECT_EQ(trace(x), oracle::trace_by_matrix(x));
      EXPECT_EQ(norm(x), oracle::norm_by_matrix(x));
    }
}

TEST(Tower, TraceAndNormAreTransitive) {
  ElementSampler s(109);
  auto t = albert_two_layer(K21, "u1/t^2", K21.u(1));
  auto lower = t->parent();
  for (int i = 0; i < 10; ++i) {
    auto x = s.tower_element(t, coeff_shape());
    auto tr1 = relative_trace(x, 1), nm1 = relative_norm(x, 1);
    ASSERT_LE(tr1.level(), 1u);
    ASSERT_LE(nm1.level(), 1u);
    EXPECT_EQ(trace(x), trace(restrict_to(tr1, lower)));
    EXPECT_EQ(norm(x), norm(restrict_to(nm1, lower)));
  }
}

TEST(Tower, FindTraceOne) {
  auto t = one_layer(K21, "u1/t^2");
  EXPECT_EQ(find_trace_one(t), TowerElement::generator(t, 1));
  for (const auto& u : sample_towers()) EXPECT_TRUE(trace(find_trace_one(u)).is_one());
  auto t3 = one_layer(K32, "u1/t^3");
  auto beta = find_trace_one(t3);
  EXPECT_TRUE(trace(beta).is_one());
  EXPECT_TRUE(oracle::trace_by_matrix(beta).is_one());
}

TEST(Tower, Hilbert90) {
  ElementSampler s(113);
  for (const auto& t : sample_towers()) {
    EXPECT_TRUE(hilbert90_solve(TowerElement::constant(t, 0)).is_zero());
    for (int i = 0; i < 5; ++i) {
      auto z = s.tower_element(t, coeff_shape());
      auto c = z.sigma() - z;
      auto a = hilbert90_solve(c);
      EXPECT_EQ(a.sigma() - a, c);
      EXPECT_TRUE((a - z).in_base());
      auto lin = oracle::hilbert90_linear(c);
      ASSERT_TRUE(lin.has_value());
      EXPECT_TRUE((a - *lin).in_base());
    }
  }
  auto t = one_layer(K21, "u1/t^2");
  auto g = TowerElement::generator(t, 1);
  EXPECT_THROW(hilbert90_solve(g), TraceNotZero);
  auto c = g.artin_schreier();  // = r in the base, trace 0
  auto a = hilbert90_solve(c);
  EXPECT_EQ(a.sigma() - a, c);
}

TEST(Tower, AlbertAscentStaysCyclicForAnyShift) {
  ElementSampler s(127);
  for (int i = 0; i < 5; ++i) {
    auto c = s.base_element(K21, coeff_shape());
    auto a = albert_ascend(one_layer(K21, "u1/t^2"), c);
    EXPECT_EQ(a.extended->sigma_order(), 4u);
    EXPECT_EQ(a.step.alpha.sigma() - a.step.alpha, a.step.beta.artin_schreier());
    EXPECT_EQ(fixed_subspace_dimension(a.extended), 1u);
  }
  auto three = albert_ascend(albert_two_layer(K21, "u1/t^2", K21.zero()), K21.zero());
  EXPECT_EQ(three.extended->sigma_order(), 8u);
  auto p3 = albert_ascend(one_layer(K32, "u1/t^3"), K32.u(2));
  EXPECT_EQ(p3.extended->sigma_order(), 9u);
  EXPECT_THROW(albert_ascend(make_base_tower(K21), K21.zero()), AlgebraError);
}

TEST(Lift, SingleLayerExample) {
  auto lt = cyclic_lift_inseparable(K21, {K21.u(1)});
  ASSERT_TRUE(lt.certified());
  const auto& t = lt.field;
  EXPECT_EQ(print_level(t, t->layers()[0].rhs), "(u1)/(t^2)");
  auto y = integral_witness(t, lt.valuation, 1);
  EXPECT_EQ(y, TowerElement::generator(t, 1).scale(K21.t()));
  EXPECT_EQ(gauss_valuation(lt.valuation, y), Valuation(0));
  auto ybar = tower_residue(lt.valuation, y);
  EXPECT_EQ(ybar, TowerElement::generator(lt.valuation.residue_field, 1));
  EXPECT_EQ(ybar.pow(2), TowerElement::from_base(lt.valuation.residue_field, K21.u(1)));
}

TEST(Lift, CertifiesForConfiguredPrimesAndHeights) {
  const std::vector<std::pair<std::uint32_t, std::size_t>> cases{{2, 1}, {2, 2}, {3, 1}, {3, 2}, {2, 3}, {5, 2}};
  for (auto [p, m] : cases) {
    const FieldContext K = FieldContext::valued(p, m);
    std::vector<RationalFunction> a;
    for (std::size_t i = 1; i <= m; ++i) a.push_back(K.u(i) + K.t());
    auto lt = cyclic_lift_inseparable(K, a);
    for (const auto& c : lt.checks) EXPECT_TRUE(c.passed) << p << " " << m << " " << c.name << " " << c.value;
    EXPECT_EQ(lt.field->degree(), ipow(p, m));
    EXPECT_EQ(lt.field->sigma_order(), ipow(p, m));
    EXPECT_EQ(lt.n[0], 1u);
    for (std::size_t i = 1; i < m; ++i) EXPECT_GE(lt.n[i], 1u);
  }
}

TEST(Lift, RejectsBadInputs) {
  EXPECT_THROW(cyclic_lift_inseparable(K22, {K22.u(1), K22.u(1)}), PIndependenceFailed);
  EXPECT_THROW(cyclic_lift_inseparable(K22, {K22.u(1).pow(2)}), PIndependenceFailed);
  EXPECT_THROW(cyclic_lift_inseparable(K22, {K22.u(1) / K22.t()}), AlgebraError);
  EXPECT_THROW(cyclic_lift_inseparable(K22, {}), AlgebraError);
  EXPECT_THROW(cyclic_lift_inseparable(FieldContext::residue(2, 2), {K22.u(1)}), AlgebraError);
}

TEST(Lift, RecertificationDetectsTamperedData) {
  auto lt = cyclic_lift_inseparable(K22, {K22.u(1), K22.u(2)});
  auto bad = lt;
  bad.n[1] += 1;
  bad.valuation.exponents[1] *= 2;
  EXPECT_FALSE(all_passed(certify(bad)));
  auto bad2 = lt;
  bad2.lifts[1] = K22.u(2) + K22.one();
  EXPECT_FALSE(all_passed(certify(bad2)));
  EXPECT_TRUE(all_passed(certify(lt)));
}

TEST(GaussValuation, Examples) {
  auto lt = cyclic_lift_inseparable(K22, {K22.u(1), K22.u(2)});
  const auto& t = lt.field;
  for (std::size_t i = 1; i <= 2; ++i) {
    auto y = integral_witness(t, lt.valuation, i);
    EXPECT_EQ(gauss_valuation(lt.valuation, y), Valuation(0));
    EXPECT_EQ(tower_residue(lt.valuation, y), TowerElement::generator(lt.valuation.residue_field, i));
  }
  auto y1 = integral_witness(t, lt.valuation, 1);
  auto tt = TowerElement::from_base(t, K22.t());
  EXPECT_EQ(gauss_valuation(lt.valuation, tt * y1 + tt * tt), Valuation(1));
  EXPECT_THROW(tower_residue(lt.valuation, TowerElement::generator(t, 1)), NegativeValuation);
}

TEST(GaussValuation, IsAValuation) {
  ElementSampler s(131);
  for (auto lt : {cyclic_lift_inseparable(K22, {K22.u(1), K22.u(2)}), cyclic_lift_inseparable(K32, {K32.u(1)}),
                  inertial_lift(K21, WittVector<RationalFunction>{2, {K21.u(1), K21.zero()}})}) {
    const auto& t = lt.field;
    for (int i = 0; i < 15; ++i) {
      auto x = s.tower_element(t, coeff_shape()), y = s.tower_element(t, coeff_shape());
      auto vx = gauss_valuation(lt.valuation, x), vy = gauss_valuation(lt.valuation, y);
      EXPECT_EQ(gauss_valuation(lt.valuation, x * y), vx + vy);
      EXPECT_GE(gauss_valuation(lt.valuation, x + y), std::min(vx, vy));
      auto c = s.base_element(t->base(), coeff_shape());
      EXPECT_EQ(gauss_valuation(lt.valuation, TowerElement::from_base(t, c)), valuation(c, t->base().t_index()));
    }
  }
}

TEST(GaussValuation, ResidueIsMultiplicative) {
  ElementSampler s(137);
  auto lt = cyclic_lift_inseparable(K22, {K22.u(1), K22.u(2)});
  const auto& t = lt.field;
  auto shape = coeff_shape();
  shape.max_pole = 0;
  int tested = 0;
  for (int i = 0; i < 200 && tested < 15; ++i) {
    auto x = s.tower_element(t, shape), y = s.tower_element(t, shape);
    // move into the valuation ring through the integral basis
    auto xi = x, yi = y;
    for (auto* z : {&xi, &yi}) {
      auto v = gauss_valuation(lt.valuation, *z);
      *z = z->scale(K22.t().pow(-v.value()));
    }
    ++tested;
    EXPECT_EQ(tower_residue(lt.valuation, xi * yi), tower_residue(lt.valuation, xi) * tower_residue(lt.valuation, yi));
    EXPECT_EQ(tower_residue(lt.valuation, xi + yi.scale(K22.t())), tower_residue(lt.valuation, xi));
  }
  EXPECT_EQ(tested, 15);
}

TEST(Inertial, Examples) {
  auto a = inertial_lift(K21, WittVector<RationalFunction>{2, {K21.u(1)}});
  ASSERT_TRUE(a.certified());
  EXPECT_EQ(print_level(a.field, a.field->layers()[0].rhs), "u1");
  EXPECT_EQ(a.valuation.kind, ResidueKind::Separable);
  EXPECT_EQ(a.valuation.residue_field->degree(), 2u);

  EXPECT_THROW(inertial_lift(K21, WittVector<RationalFunction>{2, {K21.zero()}}), DegenerateSymbol);

  auto b = inertial_lift(K21, WittVector<RationalFunction>{2, {K21.u(1), K21.zero()}});
  ASSERT_TRUE(b.certified());
  EXPECT_EQ(b.field->degree(), 4u);
  EXPECT_EQ(b.field->sigma_order(), 4u);
  EXPECT_EQ(b.valuation.residue_field->sigma_order(), 4u);

  // x^2 - x = g^2 - g has a root in k: the tower is not a field
  auto g = K21.u(1) * K21.u(1) + K21.u(1);
  EXPECT_THROW(inertial_lift(K21, WittVector<RationalFunction>{2, {g.pow(2) - g}}), DegenerateSymbol);
  EXPECT_THROW(inertial_lift(K21, WittVector<RationalFunction>{2, {K21.u(1) / (K21.u(1) + K21.one())}}),
               Undecided);
  EXPECT_THROW(inertial_lift(K21, WittVector<RationalFunction>{2, {K21.t()}}), AlgebraError);
}

TEST(Inertial, ResiduesOfGeneratorsAreTheResidueGenerators) {
  auto lt = inertial_lift(K21, WittVector<RationalFunction>{2, {K21.u(1), K21.u(1)}});
  const auto& l = lt.valuation.residue_field;
  for (std::size_t i = 1; i <= 2; ++i) {
    auto x = TowerElement::generator(lt.field, i);
    EXPECT_EQ(gauss_valuation(lt.valuation, x), Valuation(0));
    EXPECT_EQ(tower_residue(lt.valuation, x), TowerElement::generator(l, i));
  }
}

TEST(DisjointPair, Rank2m) {
  auto d = disjoint_pair(K22, 1, PairCase::Rank2m, {K22.u(1), K22.u(2)});
  EXPECT_TRUE(d.intersection.trivial);
  ASSERT_TRUE(d.intersection.linear_algebra);
  EXPECT_EQ(d.intersection.linear_algebra->dim_intersection, 1u);
  EXPECT_EQ(d.first.residues, std::vector<RationalFunction>{K22.u(1)});
  EXPECT_EQ(d.second.residues, std::vector<RationalFunction>{K22.u(2)});

  auto d2 = disjoint_pair(K24, 2, PairCase::Rank2m, {K24.u(1), K24.u(2), K24.u(3), K24.u(4)});
  EXPECT_TRUE(d2.intersection.trivial);
  EXPECT_EQ(d2.intersection.linear_algebra->dim_ambient, 16u);
  EXPECT_TRUE(d2.first.certified());
  EXPECT_TRUE(d2.second.certified());
  EXPECT_EQ(d2.first.field->degree(), 4u);

  EXPECT_THROW(disjoint_pair(K22, 1, PairCase::Rank2m, {K22.u(1), K22.u(1) * K22.u(2).pow(2)}),
               PIndependenceFailed);
  EXPECT_THROW(disjoint_pair(K22, 2, PairCase::Rank2m, {K22.u(1), K22.u(2)}), AlgebraError);
}

TEST(DisjointPair, RankMPlusArtinSchreier) {
  auto d = disjoint_pair(K21, 1, PairCase::RankMPlusAS, {K21.u(1)}, K21.u(1));
  EXPECT_TRUE(d.intersection.trivial);
  EXPECT_TRUE(d.intersection.type_disjoint);
  EXPECT_EQ(d.first.valuation.kind, ResidueKind::PurelyInseparable);
  EXPECT_EQ(d.second.valuation.kind, ResidueKind::Separable);

  auto d2 = disjoint_pair(K22, 2, PairCase::RankMPlusAS, {K22.u(1), K22.u(2)}, K22.u(1));
  EXPECT_EQ(d2.second.field->degree(), 4u);
  EXPECT_TRUE(d2.second.certified());

  EXPECT_THROW(disjoint_pair(K21, 1, PairCase::RankMPlusAS, {K21.u(1)}), AlgebraError);
  EXPECT_THROW(disjoint_pair(K21, 1, PairCase::RankMPlusAS, {K21.u(1)}, K21.u(1).pow(2) + K21.u(1)), AlgebraError);
}

TEST(FixedField, DimensionOneForBuiltTowers) {
  for (const auto& t : sample_towers()) EXPECT_EQ(fixed_subspace_dimension(t), 1u);
}
