#include <gtest/gtest.h>

#include <random>

#include "cyclift/serialize.hpp"
#include "oracles.hpp"

using namespace cyclift;

namespace {

const FieldContext K22 = FieldContext::valued(2, 2);
const EmitOptions kRepro{true, ""};

DemoConfig small_demo() {
  DemoConfig c;
  c.p = 2;
  c.m = 1;
  c.which = PairCase::Rank2m;
  c.gens = {"u1", "u2"};
  c.probes = 5;
  return c;
}

json demo_doc(const DemoConfig& c) { return demo_json(run_demo(c), c, kRepro); }

/// JSON pointers of every scalar under a "certification" object.
void certification_leaves(const json& doc, const json::json_pointer& at, bool inside, std::vector<json::json_pointer>& out) {
  if (doc.is_object()) {
    for (const auto& [k, v] : doc.items()) certification_leaves(v, at / k, inside || k == "certification", out);
  } else if (doc.is_array()) {
    for (std::size_t i = 0; i < doc.size(); ++i) certification_leaves(doc[i], at / i, inside, out);
  } else if (inside) {
    out.push_back(at);
  }
}

void mutate(json& v) {
  if (v.is_boolean()) v = !v.get<bool>();
  else if (v.is_number_unsigned()) v = v.get<std::uint64_t>() + 1;
  else if (v.is_number_integer()) v = v.get<std::int64_t>() + 1;
  else if (v.is_string()) v = v.get<std::string>() + "0";
  else v = "x";
}

}  // namespace

TEST(Serialize, TowerRoundTrip) {
  for (const auto& lt : {cyclic_lift_inseparable(K22, {K22.u(1), K22.u(2)}),
                         inertial_lift(FieldContext::valued(2, 1),
                                       WittVector<RationalFunction>{2, {FieldContext::valued(2, 1).u(1), FieldContext::valued(2, 1).zero()}})}) {
    json doc = to_json(lt, kRepro);
    LiftedTower back = lifted_tower_from_json(doc);
    EXPECT_TRUE(back.certified());
    EXPECT_EQ(to_json(back, kRepro), doc);
    auto v = verify(doc);
    EXPECT_TRUE(v.ok) << (v.problems.empty() ? "" : v.problems[0]);
    EXPECT_EQ(v.schema, kTowerSchema);
  }
}

TEST(Serialize, SmallCertificatesRoundTrip) {
  const FieldContext k = K22.residue_context();
  auto as = not_in_AS_image(k.u(1) * k.u(1) + k.u(1) + k.u(2), k);
  json a = to_json(as, k);
  EXPECT_EQ(to_json(as_class_from_json(a), k), a);
  EXPECT_TRUE(verify(a).ok);

  auto pi = p_independent({k.u(1), k.u(1) * k.u(2)}, k);
  json b = to_json(pi, k);
  EXPECT_EQ(to_json(p_independence_from_json(b), k), b);
  EXPECT_TRUE(verify(b).ok);

  WittVector<RationalFunction> w{2, {k.u(1), k.u(2) / (k.u(1) + k.one())}};
  json c = witt_json(w, k.names());
  EXPECT_EQ(witt_from_json(c), w);
  EXPECT_TRUE(verify(c).ok);

  b["independent"] = false;
  EXPECT_FALSE(verify(b).ok);
  a["witness"] = "u2";
  EXPECT_FALSE(verify(a).ok);
}

TEST(Serialize, AlgebraDocumentVerifies) {
  auto lt = cyclic_lift_inseparable(K22, {K22.u(1), K22.u(2)});
  auto d = demo_algebra(lt, K22.t(), kDefaultSeed, 5);
  json doc = to_json(d, kRepro);
  auto v = verify(doc);
  EXPECT_TRUE(v.ok) << (v.problems.empty() ? "" : v.problems[0]);
  doc["division"]["probes"][0]["nonzero"] = false;
  EXPECT_FALSE(verify(doc).ok);
}

TEST(Serialize, DemoReportsVerify) {
  auto c = small_demo();
  EXPECT_TRUE(verify(demo_doc(c)).ok);
  DemoConfig as;
  as.p = 2;
  as.m = 1;
  as.which = PairCase::RankMPlusAS;
  as.gens = {"u1"};
  as.as_witness = "u1";
  as.probes = 5;
  json doc = demo_doc(as);
  EXPECT_TRUE(verify(doc).ok);
  EXPECT_EQ(config_from_json(doc.at("config")).as_witness, "u1");
}

TEST(Serialize, ReproducibleOutputIsDeterministic) {
  auto c = small_demo();
  EXPECT_EQ(demo_doc(c).dump(2), demo_doc(c).dump(2));
  auto stamped = demo_json(run_demo(c), c, EmitOptions{false, "2000-01-01T00:00:00Z", 1.5});
  EXPECT_EQ(stamped["certification"]["elapsed_s"], 1.5);
  EXPECT_TRUE(verify(stamped).ok);
  EXPECT_NE(stamped.dump(), demo_doc(c).dump());
}

TEST(Serialize, CertificationMutationsAreRejected) {
  const json doc = demo_doc(small_demo());
  std::vector<json::json_pointer> leaves;
  certification_leaves(doc, json::json_pointer(), false, leaves);
  ASSERT_GT(leaves.size(), 20u);
  std::mt19937_64 rng(97);
  int resealed = 0;
  for (int i = 0; i < 100; ++i) {
    const auto& at = leaves[rng() % leaves.size()];
    json bad = doc;
    mutate(bad[at]);
    EXPECT_FALSE(verify(bad).ok) << at.to_string();
    // With digests recomputed, the rebuild comparison must still disagree.
    const std::string key = at.back();
    if (key != "timestamp" && key != "digest") {
      detail::reseal(bad);
      EXPECT_FALSE(verify(bad).ok) << "resealed " << at.to_string();
      ++resealed;
    }
  }
  EXPECT_GT(resealed, 50);
}

TEST(Serialize, StructuralTamperingIsRejected) {
  json tower = to_json(cyclic_lift_inseparable(K22, {K22.u(1), K22.u(2)}), kRepro);
  json bad = tower;
  bad["degree"] = 8;
  detail::reseal(bad);
  EXPECT_FALSE(verify(bad).ok);
  bad = tower;
  bad["schema"] = "cyclift.unknown/1";
  EXPECT_FALSE(verify(bad).ok);
  bad = tower;
  bad.erase("layers");
  EXPECT_FALSE(verify(bad).ok);
}
