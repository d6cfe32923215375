#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace cyclift;

namespace {

const FieldContext k2 = FieldContext::residue(2, 2);
const FieldContext k3 = FieldContext::residue(3, 2);
const FieldContext k24 = FieldContext::residue(2, 4);

RationalFunction P(const std::string& s, const FieldContext& c = k2) { return parse_expression(s, c); }

std::vector<RationalFunction> Ps(std::initializer_list<const char*> xs, const FieldContext& c = k2) {
  std::vector<RationalFunction> out;
  for (auto x : xs) out.push_back(P(x, c));
  return out;
}

RationalFunction monomial_of(const std::vector<std::int64_t>& e, const FieldContext& c) {
  RationalFunction x = c.one();
  for (std::size_t i = 0; i < e.size(); ++i) x *= c.u(i + 1).pow(e[i]);
  return x;
}

}  // namespace

TEST(PthPower, Examples) {
  EXPECT_EQ(is_pth_power(P("u1^2"), k2), P("u1"));
  EXPECT_FALSE(is_pth_power(P("u1"), k2));
  EXPECT_EQ(is_pth_power(P("(u1+u2)^3/u1^3", k3), k3), P("(u1+u2)/u1", k3));
  EXPECT_FALSE(is_pth_power(P("u1^3+u2", k3), k3));
}

TEST(PthPower, InvertsFrobenius) {
  ElementSampler s(41);
  ElementSampler::Shape shape;
  shape.rational = true;
  for (const auto* ctx : {&k2, &k3})
    for (int i = 0; i < 100; ++i) {
      auto x = s.residue_element(*ctx, shape);
      auto y = x / s.residue_element(*ctx, shape);
      EXPECT_EQ(is_pth_power(frobenius(y), *ctx), y);
    }
}

TEST(PIndependence, Examples) {
  auto a = p_independent(Ps({"u1", "u2"}), k2);
  EXPECT_TRUE(a.independent);
  EXPECT_TRUE(verify_p_independence(a, k2));

  auto b = p_independent(Ps({"u1", "u1^2*(u2^2+1)"}), k2);
  EXPECT_FALSE(b.independent);
  EXPECT_TRUE(verify_p_independence(b, k2));

  auto c = p_independent(Ps({"u1*u2", "u1"}), k2);
  EXPECT_TRUE(c.independent);
  EXPECT_EQ(c.jacobian_rank, 2u);
  EXPECT_TRUE(verify_p_independence(c, k2));

  EXPECT_THROW(p_independent({}, k2), AlgebraError);
}

TEST(PIndependence, MonomialsAgreeWithExponentOracle) {
  ElementSampler s(43);
  const FieldContext k33 = FieldContext::residue(3, 3);
  for (const auto* ctx : {&k24, &k33}) {
    for (int i = 0; i < 40; ++i) {
      const std::size_t n = 1 + s.below(3);
      std::vector<std::vector<std::int64_t>> exps;
      std::vector<RationalFunction> els;
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::int64_t> e(ctx->r);
        for (auto& x : e) x = std::int64_t(s.below(4));
        if (std::all_of(e.begin(), e.end(), [](auto v) { return v == 0; })) e[0] = 1;
        exps.push_back(e);
        els.push_back(monomial_of(e, *ctx));
      }
      auto cert = p_independent(els, *ctx);
      EXPECT_EQ(cert.independent, oracle::monomials_p_independent(exps, ctx->p)) << i;
      EXPECT_TRUE(verify_p_independence(cert, *ctx));
    }
  }
}

TEST(PIndependence, JacobianAndMonomialVerdictsAgree) {
  ElementSampler s(47);
  ElementSampler::Shape shape;
  for (int i = 0; i < 40; ++i) {
    std::vector<RationalFunction> els;
    const std::size_t n = 1 + s.below(2);
    for (std::size_t j = 0; j < n; ++j) els.push_back(s.residue_element(k3, shape));
    auto cert = p_independent(els, k3);
    EXPECT_EQ(cert.monomial_rank == p_power(3, n), cert.jacobian_rank == n);
    EXPECT_TRUE(verify_p_independence(cert, k3));
  }
}

TEST(PIndependence, SublistsOfIndependentListsAreIndependent) {
  auto full = Ps({"u1", "u2*u3+u1", "u4^3+u2"}, k24);
  ASSERT_TRUE(p_independent(full, k24).independent);
  for (unsigned mask = 1; mask < 8; ++mask) {
    std::vector<RationalFunction> sub;
    for (unsigned j = 0; j < 3; ++j)
      if (mask & (1u << j)) sub.push_back(full[j]);
    EXPECT_TRUE(p_independent(sub, k24).independent) << mask;
  }
}

TEST(PIndependence, TamperedWitnessRejected) {
  auto a = p_independent(Ps({"u1", "u2"}), k2);
  a.minor_determinant = a.minor_determinant + k2.one();
  EXPECT_FALSE(verify_p_independence(a, k2));
  auto b = p_independent(Ps({"u1", "u1^2*u2^2"}), k2);
  ASSERT_FALSE(b.dependency.empty());
  b.dependency[0] = b.dependency[0] + k2.one();
  EXPECT_FALSE(verify_p_independence(b, k2));
}

TEST(Intersection, Examples) {
  auto a = subfield_intersection_trivial(Ps({"u1"}), Ps({"u2"}), k2);
  EXPECT_TRUE(a.trivial);
  EXPECT_EQ(a.dim_intersection, 1u);
  EXPECT_EQ(a.dim_ambient, 4u);

  auto b = subfield_intersection_trivial(Ps({"u1"}), Ps({"u1"}), k2);
  EXPECT_FALSE(b.trivial);
  EXPECT_EQ(b.dim_intersection, 2u);
  EXPECT_THROW(subfield_intersection_trivial(Ps({"u1"}), Ps({"u1^2*u2^2"}), k2), PIndependenceFailed);

  auto c = subfield_intersection_trivial(Ps({"u1", "u2"}, k24), Ps({"u3", "u4"}, k24), k24);
  EXPECT_TRUE(c.trivial);
  EXPECT_EQ(c.dim_ambient, 16u);
  EXPECT_EQ(c.dim_first, 4u);
  EXPECT_EQ(c.dim_second, 4u);
}

TEST(ASImage, Examples) {
  auto a = not_in_AS_image(P("u1"), k2);
  EXPECT_EQ(a.verdict, ASVerdict::NotInImage);
  EXPECT_TRUE(verify_as_class(a, k2));
  EXPECT_FALSE(oracle::exhaustive_as_root(P("u1").num(), 2, 2, 2));

  auto b = not_in_AS_image(P("u1^2-u1"), k2);
  ASSERT_EQ(b.verdict, ASVerdict::InImage);
  EXPECT_EQ(*b.witness, P("u1"));
  EXPECT_TRUE(verify_as_class(b, k2));

  auto c = not_in_AS_image(k2.zero(), k2);
  EXPECT_EQ(c.verdict, ASVerdict::InImage);
  EXPECT_TRUE(c.witness->is_zero());

  auto d = not_in_AS_image(P("1/u1"), k2);
  EXPECT_EQ(d.verdict, ASVerdict::Undecided);
  EXPECT_TRUE(verify_as_class(d, k2));
}

TEST(ASImage, AgreesWithExhaustiveSearch) {
  // Every polynomial of degree <= 2 in two variables over F_2.
  std::vector<Monomial> monos;
  for (Exponent i = 0; i <= 2; ++i)
    for (Exponent j = 0; i + j <= 2; ++j) {
      Monomial m{};
      m[0] = i;
      m[1] = j;
      monos.push_back(m);
    }
  const Fp one(1, 2);
  for (std::size_t code = 0; code < (1u << monos.size()); ++code) {
    PolyFp f;
    for (std::size_t b = 0; b < monos.size(); ++b)
      if (code & (1u << b)) f += PolyFp::term(monos[b], one);
    auto cert = not_in_AS_image(RationalFunction(f, 2), k2);
    ASSERT_NE(cert.verdict, ASVerdict::Undecided);
    const bool found = oracle::exhaustive_as_root(f, 2, 2, 1).has_value();
    EXPECT_EQ(cert.verdict == ASVerdict::InImage, found) << print_poly(f, k2.names());
    EXPECT_TRUE(verify_as_class(cert, k2));
  }
}

TEST(ASImage, CosetInvariance) {
  ElementSampler s(53);
  ElementSampler::Shape shape;
  for (const auto* ctx : {&k2, &k3})
    for (const char* base : {"u1", "u1*u2+u2", "u2^2+1"}) {
      auto f = P(base, *ctx);
      auto v0 = not_in_AS_image(f, *ctx).verdict;
      for (int i = 0; i < 10; ++i) {
        auto g = s.residue_element(*ctx, shape);
        auto shifted = f + g.pow(ctx->p) - g;
        auto v = not_in_AS_image(shifted, *ctx);
        EXPECT_TRUE(verify_as_class(v, *ctx));
        if (v.verdict != ASVerdict::Undecided && v0 != ASVerdict::Undecided) EXPECT_EQ(v.verdict, v0) << base;
      }
    }
}

TEST(ASImage, TamperedCertificatesRejected) {
  auto a = not_in_AS_image(P("u1^2-u1"), k2);
  a.witness = P("u2");
  EXPECT_FALSE(verify_as_class(a, k2));
  auto b = not_in_AS_image(P("u1^2+u1"), k2);
  b.verdict = ASVerdict::NotInImage;
  b.witness.reset();
  b.obstruction = "integrality";
  EXPECT_FALSE(verify_as_class(b, k2));
  auto c = not_in_AS_image(P("u1"), k2);
  c.degree = 2;
  EXPECT_FALSE(verify_as_class(c, k2));
}
