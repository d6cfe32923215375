// Acceptance run: one PASS/FAIL line per criterion; nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "cyclift/serialize.hpp"
#include "oracles.hpp"

using namespace cyclift;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;
  void expect(bool c, const std::string& what) {
    if (!c && ok) note = what;
    ok = ok && c;
  }
};

using Clock = std::chrono::steady_clock;

ElementSampler::Shape witt_shape() {
  ElementSampler::Shape s;
  s.max_terms = 2;
  s.max_degree = 2;
  s.rational = true;
  return s;
}

ElementSampler::Shape tower_shape() {
  ElementSampler::Shape s;
  s.max_terms = 2;
  s.max_degree = 1;
  s.max_pole = 2;
  return s;
}

LiftedTower lifted_tower(std::uint32_t p, std::size_t m) {
  const FieldContext K = FieldContext::valued(p, m);
  std::vector<RationalFunction> a;
  for (std::size_t i = 1; i <= m; ++i) a.push_back(K.u(i));
  return cyclic_lift_inseparable(K, a);
}

const std::vector<std::pair<std::uint32_t, std::size_t>> kConfigs{{2, 1}, {2, 2}, {3, 1}};

Outcome witt_group_laws() {
  Outcome o;
  ElementSampler s(1);
  for (std::uint32_t p : {2u, 3u}) {
    const FieldContext k = FieldContext::residue(p, 2);
    for (std::size_t n = 1; n <= 3; ++n) {
      auto draw = [&] {
        WittVector<RationalFunction> w{p, {}};
        for (std::size_t i = 0; i < n; ++i) w.x.push_back(s.base_element(k, witt_shape()));
        return w;
      };
      const auto zero = witt_zero(p, n, k.one());
      for (int i = 0; i < 67; ++i) {  // 200 vectors as triples
        auto a = draw(), b = draw(), c = draw();
        o.expect(witt_add(witt_add(a, b), c) == witt_add(a, witt_add(b, c)), "associativity");
        o.expect(witt_add(a, b) == witt_add(b, a), "commutativity");
        o.expect(witt_add(a, witt_neg(a)) == zero, "inverse");
        o.expect(witt_add(a, zero) == a, "neutral element");
      }
      auto g = ghost_calculus(p, n);
      auto sum = oracle::ghost_vector(g->sum_integer(), p);
      for (std::size_t i = 1; i <= n; ++i)
        o.expect(sum[i - 1] == g->ghost(i, 0) + g->ghost(i, n), "ghost homomorphism");
      std::vector<PolyFp> x, y;
      for (std::size_t i = 0; i < n; ++i) {
        x.push_back(PolyFp::variable(i, Fp(1, p)));
        y.push_back(PolyFp::variable(n + i, Fp(1, p)));
      }
      o.expect(g->sum() == oracle::ghost_witt(oracle::WittOp::Add, x, y, p), "sum polynomials vs ghost oracle");
    }
  }
  o.note = o.ok ? "p in {2,3}, n <= 3, 200 vectors each" : o.note;
  return o;
}

Outcome albert_ascent() {
  Outcome o;
  for (std::uint32_t p : {2u, 3u}) {
    const FieldContext K = FieldContext::valued(p, 2);
    TowerPtr t = artin_schreier_layer(make_base_tower(K), K.u(1) / K.t().pow(std::int64_t(p)));
    std::uint64_t order = p;
    const int steps = p == 2 ? 2 : 1;
    for (int i = 0; i < steps; ++i) {
      auto a = albert_ascend(t, K.zero());
      o.expect(trace(a.step.beta).is_one(), "Tr(beta) = 1");
      o.expect(a.step.alpha.sigma() - a.step.alpha == a.step.beta.artin_schreier(), "sigma(alpha) - alpha = P(beta)");
      order *= p;
      o.expect(a.extended->sigma_order() == order, "sigma order " + std::to_string(order));
      t = a.extended;
    }
  }
  o.note = o.ok ? "orders 4, 8 (p=2) and 9 (p=3)" : o.note;
  return o;
}

Outcome cyclic_lift_construction() {
  Outcome o;
  for (auto [p, m] : kConfigs) {
    const std::string tag = " (" + std::to_string(p) + "," + std::to_string(m) + ")";
    auto lt = lifted_tower(p, m);
    const TowerPtr& t = lt.field;
    o.expect(t->degree() == ipow(p, m), "degree" + tag);
    o.expect(t->sigma_order() == ipow(p, m), "sigma order" + tag);
    o.expect(fixed_subspace_dimension(t) == 1, "fixed subspace" + tag);
    o.expect(lt.residue_certificate && lt.residue_certificate->independent &&
                 verify_p_independence(*lt.residue_certificate, t->base()),
             "residue p-independence" + tag);
    const auto& l = lt.valuation.residue_field;
    for (std::size_t i = 1; i <= m; ++i) {
      auto Y = tower_residue(lt.valuation, integral_witness(t, lt.valuation, i));
      o.expect(Y.pow(p) == TowerElement::from_base(l, lt.residues[i - 1]), "Y^p = residue" + tag);
    }
    for (const auto& c : lt.checks)
      if (c.name.rfind("beta_valuation", 0) == 0) o.expect(c.passed, c.name + tag);
    o.expect(lt.certified(), "certificate" + tag);
  }
  return o;
}

Outcome gauss_valuation_laws() {
  Outcome o;
  ElementSampler s(4);
  for (auto [p, m] : kConfigs) {
    auto lt = lifted_tower(p, m);
    const TowerPtr& t = lt.field;
    for (int i = 0; i < 100; ++i) {
      auto z = s.tower_element(t, tower_shape()), w = s.tower_element(t, tower_shape());
      auto vz = gauss_valuation(lt.valuation, z), vw = gauss_valuation(lt.valuation, w);
      o.expect(gauss_valuation(lt.valuation, z * w) == vz + vw, "multiplicativity");
      o.expect(gauss_valuation(lt.valuation, z + w) >= std::min(vz, vw), "ultrametric inequality");
      auto c = s.base_element(t->base(), tower_shape());
      o.expect(gauss_valuation(lt.valuation, TowerElement::from_base(t, c)) == valuation(c, t->base().t_index()),
               "restriction to K");
    }
  }
  return o;
}

Outcome disjoint_pairs() {
  Outcome o;
  const FieldContext K2 = FieldContext::valued(2, 2), K4 = FieldContext::valued(2, 4);
  auto a = disjoint_pair(K2, 1, PairCase::Rank2m, {K2.u(1), K2.u(2)});
  o.expect(a.intersection.trivial && a.intersection.linear_algebra->dim_intersection == 1, "rank2m (2,1)");
  auto b = disjoint_pair(K4, 2, PairCase::Rank2m, {K4.u(1), K4.u(2), K4.u(3), K4.u(4)});
  o.expect(b.intersection.trivial && b.intersection.linear_algebra->dim_intersection == 1, "rank2m (2,2)");
  const FieldContext K1 = FieldContext::valued(2, 1);
  auto c = disjoint_pair(K1, 1, PairCase::RankMPlusAS, {K1.u(1)}, K1.u(1));
  const auto& seed = c.second.seed_certificate;
  o.expect(seed && seed->verdict == ASVerdict::NotInImage && verify_as_class(*seed, K1.residue_context()),
           "Artin-Schreier witness u1");
  o.expect(c.intersection.type_disjoint && c.intersection.trivial, "type disjointness");
  return o;
}

Outcome division_criterion() {
  Outcome o;
  for (auto [p, m] : kConfigs) {
    const std::string tag = " (" + std::to_string(p) + "," + std::to_string(m) + ")";
    auto lt = lifted_tower(p, m);
    const FieldContext& K = lt.field->base();
    auto a = build_algebra(lt, K.t());
    auto d = division_certificate(a);
    o.expect(d.verdict && d.weakly_unramified && d.slot_gcd == 1, "hypotheses" + tag);
    o.expect(d.probes.size() == 100 && !d.refuted, "Nrd probes" + tag);
    o.expect(center_dimension(a) == 1, "center" + tag);
    auto v = semiramified_residue(a, inseparable_subfield_certificate(a));
    const std::size_t pm = ipow(p, m);
    o.expect(v.algebra_dimension == pm * pm && v.value_group_index == pm && v.residue_degree == pm,
             "fundamental equality" + tag);
  }
  return o;
}

Outcome presentation_fidelity() {
  Outcome o;
  const FieldContext K = FieldContext::valued(2, 1);
  auto lt = inertial_lift(K, WittVector<RationalFunction>{2, {K.u(1), K.zero()}});
  auto a = build_algebra(lt, K.t());
  auto y = AlgebraElement::y(a), yi = y.inv();
  WittVector<TowerElement> x{2, {TowerElement::generator(a->L, 1), TowerElement::generator(a->L, 2)}};
  WittVector<TowerElement> e{2, {TowerElement::constant(a->L, 1), TowerElement::constant(a->L, 0)}};
  auto shifted = witt_add(x, e);
  for (std::size_t i = 0; i < 2; ++i)
    o.expect(y * AlgebraElement::embed(a, x.x[i]) * yi == AlgebraElement::embed(a, shifted.x[i]),
             "conjugation of x" + std::to_string(i + 1));
  return o;
}

Outcome end_to_end() {
  Outcome o;
  std::vector<DemoConfig> cfgs(3);
  cfgs[0].p = 2, cfgs[0].m = 1, cfgs[0].which = PairCase::Rank2m, cfgs[0].gens = {"u1", "u2"};
  cfgs[1].p = 2, cfgs[1].m = 2, cfgs[1].which = PairCase::RankMPlusAS, cfgs[1].gens = {"u1", "u2"};
  cfgs[1].as_witness = "u1";
  cfgs[2].p = 3, cfgs[2].m = 1, cfgs[2].which = PairCase::Rank2m, cfgs[2].gens = {"u1", "u2"};
  for (const auto& c : cfgs) {
    const std::string tag = " (" + std::to_string(c.p) + "," + std::to_string(c.m) + ")";
    auto r = run_demo(c);
    o.expect(r.passed(), "demo" + tag);
    auto doc = demo_json(r, c);
    auto v = verify(json::parse(doc.dump()));
    o.expect(v.ok, "offline verify" + tag + (v.problems.empty() ? "" : ": " + v.problems[0]));
  }
  return o;
}

struct Criterion {
  int id;
  const char* what;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> all{
      {1, "Witt group laws and ghost homomorphism", 30, witt_group_laws},
      {2, "Albert ascent", 120, albert_ascent},
      {3, "cyclic lift of purely inseparable residue extensions", 300, cyclic_lift_construction},
      {4, "Gauss valuation on lifted towers", 300, gauss_valuation_laws},
      {5, "disjoint residue pairs", 300, disjoint_pairs},
      {6, "division criterion and fundamental equality", 300, division_criterion},
      {7, "conjugation by y realizes the Witt shift", 300, presentation_fidelity},
      {8, "end-to-end demo with offline verification", 600, end_to_end},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.note = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (o.ok && secs > c.limit_s) {
      o.ok = false;
      o.note = "over time limit";
    }
    std::printf("%s criterion %d: %s (%.2f s)%s%s\n", o.ok ? "PASS" : "FAIL", c.id, c.what, secs,
                o.note.empty() ? "" : " - ", o.note.c_str());
    failed += !o.ok;
  }
  return failed ? 1 : 0;
}
