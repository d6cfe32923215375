#pragma once

// Cyclic extensions of K = k(t) with prescribed residue field.
//
// cyclic_lift_inseparable builds L/K cyclic of degree p^m whose residue field
// is k(ā_1^{1/p}, ..., ā_m^{1/p}):
//   layer 1:  x_1^p - x_1 = a_1 / t^p,                         y_1 = t x_1
//   layer i:  x_i^p - x_i = a_i / t^{p^{n_i}} + α_{i-1},       y_i = t^{p^{n_i - 1}} x_i
// where α_{i-1} comes from the cyclic ascent over L_{i-1} and n_i >= 1 is the
// least integer with p^{n_i} > -v(α_{i-1}). Then
//   y_i^p - t^{p^{n_i} - p^{n_i - 1}} y_i = a_i + β_{i-1},   β_{i-1} = t^{p^{n_i}} α_{i-1},
// with v(β_{i-1}) > 0, so ȳ_i^p = ā_i.
//
// inertial_lift carries a cyclic Artin-Schreier-Witt tower over k to K with
// the same equations; its residue field is the k-tower itself.

#include <numeric>
#include <string>
#include <vector>

#include "cyclift/albert.hpp"
#include "cyclift/p_structure.hpp"
#include "cyclift/valued.hpp"

namespace cyclift {

struct Check {
  std::string name;
  bool passed = false;
  std::string value;
  bool operator==(const Check&) const = default;
};

inline bool all_passed(const std::vector<Check>& cs) {
  for (const auto& c : cs)
    if (!c.passed) return false;
  return !cs.empty();
}

class DegenerateSymbol : public AlgebraError {
 public:
  using AlgebraError::AlgebraError;
};

class Undecided : public AlgebraError {
 public:
  using AlgebraError::AlgebraError;
};

enum class ResidueKind { PurelyInseparable, Separable };

struct ValuationData {
  std::vector<std::uint32_t> exponents;  // y_i = t^{e_i} x_i
  ResidueKind kind = ResidueKind::PurelyInseparable;
  TowerPtr residue_field;                // presentation of l over k
};

/// Gauss valuation with respect to the basis ∏ y_i^{d_i}:
/// v(Σ c_d x^d) = min_d (v(c_d) - Σ e_i d_i).
inline Valuation gauss_valuation(const TowerElement& x, const std::vector<std::uint32_t>& exponents) {
  const auto& t = *x.tower();
  const std::size_t tv = t.base().t_index();
  Valuation best = Valuation::infinity();
  for (std::size_t idx = 0; idx < x.coeffs().size(); ++idx) {
    const auto& c = x.coeffs()[idx];
    if (c.is_zero()) continue;
    std::int64_t shift = 0;
    std::size_t e = idx;
    for (std::size_t i = 0; i < t.height(); ++i) {
      shift += std::int64_t(e % t.p()) * exponents.at(i);
      e /= t.p();
    }
    Valuation v = valuation(c, tv) + Valuation(-shift);
    if (v < best) best = v;
  }
  return best;
}

inline Valuation gauss_valuation(const ValuationData& data, const TowerElement& x) {
  return gauss_valuation(x, data.exponents);
}

/// Residue of an integral element, as an element of the residue presentation.
inline TowerElement tower_residue(const ValuationData& data, const TowerElement& x) {
  const auto& t = *x.tower();
  const std::size_t tv = t.base().t_index();
  Valuation v = gauss_valuation(data, x);
  if (v < 0) throw NegativeValuation(v);
  const TowerPtr& l = data.residue_field;
  Coeffs out = l->zero(l->height());
  const RationalFunction tt = t.base().t();
  for (std::size_t idx = 0; idx < x.coeffs().size(); ++idx) {
    const auto& c = x.coeffs()[idx];
    if (c.is_zero()) continue;
    std::int64_t shift = 0;
    std::size_t e = idx;
    for (std::size_t i = 0; i < t.height(); ++i) {
      shift += std::int64_t(e % t.p()) * data.exponents.at(i);
      e /= t.p();
    }
    out[idx] = residue(c * tt.pow(-shift), tv);
  }
  return {l, std::move(out)};
}

/// The integral witness y_i = t^{e_i} x_i.
inline TowerElement integral_witness(const TowerPtr& t, const ValuationData& data, std::size_t i) {
  return TowerElement::generator(t, i).scale(t->base().t().pow(data.exponents.at(i - 1)));
}

inline std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

/// Least n >= 1 with p^n > -v.
inline std::uint32_t minimal_exponent(std::uint32_t p, const Valuation& v) {
  std::uint32_t n = 1;
  if (v.is_infinite()) return n;
  while (std::int64_t(ipow(p, n)) <= -v.value()) ++n;
  return n;
}

struct LiftedTower {
  enum class Kind { InseparableResidue, Inertial };
  Kind kind = Kind::InseparableResidue;
  TowerPtr field;  // over K
  ValuationData valuation;
  // InseparableResidue
  std::vector<RationalFunction> lifts;     // a_i ∈ O_K^×
  std::vector<RationalFunction> residues;  // ā_i ∈ k
  std::vector<std::uint32_t> n;            // n_i
  std::optional<PIndependenceCertificate> residue_certificate;
  // Inertial
  std::optional<ASClassCertificate> seed_certificate;
  std::optional<WittVector<RationalFunction>> symbol;

  std::vector<Check> checks;
  bool certified() const { return all_passed(checks); }
  std::size_t m() const { return field->height(); }
};

inline Check make_check(std::string name, bool ok, std::string value = "") {
  return {std::move(name), ok, std::move(value)};
}

/// Recomputes every certificate of an inseparable-residue lift from its defining
/// data (tower, lifts, n_i). Used both at construction and for offline checks.
inline std::vector<Check> certify_inseparable_lift(const LiftedTower& lt) {
  std::vector<Check> out;
  const TowerPtr& t = lt.field;
  const FieldContext& K = t->base();
  const std::uint32_t p = K.p;
  const std::size_t m = t->height();
  const std::size_t tv = K.t_index();
  const RationalFunction tt = K.t();

  bool units = lt.lifts.size() == m && lt.n.size() == m;
  for (const auto& a : lt.lifts) units = units && valuation(a, tv) == 0 && K.in_residue_field(residue(a, tv));
  out.push_back(make_check("lifts_are_units", units));
  if (!units) return out;

  bool res_ok = lt.residue_certificate.has_value() &&
                lt.residue_certificate->elements == lt.residues &&
                verify_p_independence(*lt.residue_certificate, K) && lt.residue_certificate->independent;
  for (std::size_t i = 0; i < m && res_ok; ++i) res_ok = residue(lt.lifts[i], tv) == lt.residues[i];
  out.push_back(make_check("residue_p_independence", res_ok, std::to_string(m)));

  out.push_back(make_check("sigma_order", t->has_sigma() && t->sigma_order() == t->degree(),
                           std::to_string(t->sigma_order())));
  out.push_back(make_check("degree", res_ok && t->degree() == ipow(p, m) &&
                                         lt.valuation.residue_field->degree() == t->degree(),
                           std::to_string(t->degree())));

  // Layer shapes: r_i = a_i / t^{p^{n_i}} + α_{i-1}, e_i = p^{n_i - 1}.
  bool exps = lt.valuation.exponents.size() == m;
  for (std::size_t i = 0; i < m && exps; ++i) exps = lt.valuation.exponents[i] == ipow(p, lt.n[i] - 1) && lt.n[i] >= 1;
  out.push_back(make_check("witness_exponents", exps));
  if (!exps) return out;

  for (std::size_t i = 1; i <= m; ++i) {
    const std::uint64_t pn = ipow(p, lt.n[i - 1]);
    const auto& L = t->layers()[i - 1];
    TowerElement r(t, t->pad(L.rhs));
    TowerElement a = TowerElement::from_base(t, lt.lifts[i - 1]);
    TowerElement tpn = TowerElement::from_base(t, tt.pow(pn));
    TowerElement alpha = r - a * TowerElement::from_base(t, tt.pow(-std::int64_t(pn)));
    TowerElement beta = alpha * tpn;
    auto sub = lt.valuation.exponents;
    Valuation va = gauss_valuation(alpha, sub);
    Valuation vb = gauss_valuation(beta, sub);
    const std::string tag = "_" + std::to_string(i);
    if (i == 1) {
      out.push_back(make_check("first_layer" + tag, alpha.is_zero() && lt.n[0] == 1));
    } else {
      bool minimal = lt.n[i - 1] == minimal_exponent(p, va);
      out.push_back(make_check("n_minimal" + tag, minimal, std::to_string(lt.n[i - 1])));
      out.push_back(make_check("beta_valuation" + tag, vb > 0, vb.str()));
    }
    TowerElement y = integral_witness(t, lt.valuation, i);
    TowerElement lhs = y.pow(p) - y * TowerElement::from_base(t, tt.pow(pn - pn / p));
    out.push_back(make_check("integral_witness_relation" + tag, lhs == a + beta));
    bool resid = false;
    std::string vs;
    try {
      Valuation vy = gauss_valuation(lt.valuation, y);
      vs = vy.str();
      TowerElement ybar = tower_residue(lt.valuation, y);
      resid = vy == 0 && ybar.pow(p) == TowerElement::from_base(lt.valuation.residue_field, lt.residues[i - 1]);
    } catch (const AlgebraError&) {
      resid = false;
    }
    out.push_back(make_check("residue_relation" + tag, resid, vs));
  }
  out.push_back(make_check("fixed_subspace_dimension", t->has_sigma() && fixed_subspace_dimension(t) == 1,
                           t->has_sigma() ? std::to_string(fixed_subspace_dimension(t)) : "n/a"));
  return out;
}

inline TowerPtr inseparable_residue_field(const FieldContext& k, const std::vector<RationalFunction>& residues) {
  TowerPtr l = make_base_tower(k);
  for (std::size_t i = 0; i < residues.size(); ++i)
    l = adjoin_inseparable_layer(l, TowerElement::from_base(l, residues[i]), "Y" + std::to_string(i + 1));
  return l;
}

inline LiftedTower cyclic_lift_inseparable(const FieldContext& K, const std::vector<RationalFunction>& a) {
  if (!K.has_uniformizer) throw AlgebraError("cyclic_lift_inseparable: base needs a uniformizer");
  if (a.empty()) throw AlgebraError("cyclic_lift_inseparable: empty generator list");
  const std::size_t tv = K.t_index();
  const std::uint32_t p = K.p;
  LiftedTower lt;
  lt.kind = LiftedTower::Kind::InseparableResidue;
  lt.lifts = a;
  for (const auto& x : a) {
    if (valuation(x, tv) != 0) throw AlgebraError("cyclic_lift_inseparable: lifts must be units");
    lt.residues.push_back(residue(x, tv));
  }
  auto cert = p_independent(lt.residues, K);
  if (!cert.independent) throw PIndependenceFailed("cyclic_lift_inseparable: residues are not p-independent");
  lt.residue_certificate = cert;

  const RationalFunction t = K.t();
  TowerPtr tower = make_base_tower(K);
  tower = artin_schreier_layer(tower, a[0] * t.pow(-std::int64_t(p)));
  lt.n.push_back(1);
  lt.valuation.exponents.push_back(1);
  for (std::size_t i = 1; i < a.size(); ++i) {
    AlbertStep step = albert_prepare(tower);
    Valuation va = gauss_valuation(step.alpha, lt.valuation.exponents);
    const std::uint32_t n = minimal_exponent(p, va);
    const std::int64_t pn = std::int64_t(ipow(p, n));
    TowerElement shift = TowerElement::from_base(tower, a[i] * t.pow(-pn));
    tower = albert_adjoin(tower, step, shift + step.alpha);
    lt.n.push_back(n);
    lt.valuation.exponents.push_back(static_cast<std::uint32_t>(pn / p));
  }
  lt.field = tower;
  lt.valuation.kind = ResidueKind::PurelyInseparable;
  lt.valuation.residue_field = inseparable_residue_field(K.residue_context(), lt.residues);
  lt.checks = certify_inseparable_lift(lt);
  if (!lt.certified()) {
    std::string failed;
    for (const auto& c : lt.checks)
      if (!c.passed) failed += " " + c.name;
    throw AlgebraError("cyclic_lift_inseparable: certification failed:" + failed);
  }
  return lt;
}

// ---------------------------------------------------------------------------
// Inertial lifts.

/// Copies the layers of a tower over k onto K.
inline TowerPtr base_change_to_valued(const TowerPtr& kt, const FieldContext& K) {
  TowerPtr t = make_base_tower(K);
  for (const auto& l : kt->layers())
    t = adjoin_as_layer(t, TowerElement(t, l.rhs), TowerElement(t, l.shift), l.name);
  return t;
}

/// Builds the Artin-Schreier-Witt tower of ω over its coefficient field.
inline TowerPtr asw_tower(const FieldContext& ctx, const WittVector<RationalFunction>& omega) {
  auto sys = asw_layer_equations(omega);
  TowerPtr t = make_base_tower(ctx);
  for (std::size_t i = 0; i < omega.length(); ++i) {
    std::vector<TowerElement> gens;
    for (std::size_t j = 1; j <= t->height(); ++j) gens.push_back(TowerElement::generator(t, j));
    const TowerElement one = TowerElement::constant(t, 1);
    WittVector<TowerElement> om{omega.p, {}};
    for (const auto& w : omega.x) om.x.push_back(TowerElement::from_base(t, w));
    ASWSymbolSystem<TowerElement> lifted{om, sys.universal};
    t = adjoin_as_layer(t, lifted.rhs(i, gens, one), lifted.shift(i, gens, one));
  }
  return t;
}

inline std::vector<Check> certify_inertial_lift(const LiftedTower& lt) {
  std::vector<Check> out;
  const TowerPtr& t = lt.field;
  const TowerPtr& l = lt.valuation.residue_field;
  const FieldContext k = t->base().residue_context();
  bool seed = lt.seed_certificate && verify_as_class(*lt.seed_certificate, k) &&
              lt.seed_certificate->verdict == ASVerdict::NotInImage && l->height() >= 1 &&
              TowerElement(l, l->pad(l->layers()[0].rhs)).base_part() == lt.seed_certificate->f;
  out.push_back(make_check("seed_not_in_AS_image", seed, seed ? lt.seed_certificate->obstruction : ""));
  out.push_back(make_check("residue_sigma_order", l->is_cyclic(), std::to_string(l->sigma_order())));
  bool same = l->height() == t->height();
  for (std::size_t i = 0; same && i < t->height(); ++i) {
    same = t->layers()[i].rhs == l->layers()[i].rhs && t->layers()[i].shift == l->layers()[i].shift;
    for (const auto& c : t->layers()[i].rhs) same = same && k.in_residue_field(c);
  }
  out.push_back(make_check("layers_defined_over_k", same));
  out.push_back(make_check("sigma_order", t->is_cyclic(), std::to_string(t->sigma_order())));
  bool exps = lt.valuation.exponents == std::vector<std::uint32_t>(t->height(), 0);
  out.push_back(make_check("witness_exponents", exps));
  out.push_back(make_check("degree", same && t->degree() == l->degree(), std::to_string(t->degree())));
  if (lt.symbol) {
    bool sym = false;
    try {
      sym = asw_tower(k, *lt.symbol)->layers().size() == l->height();
      auto rebuilt = asw_tower(k, *lt.symbol);
      for (std::size_t i = 0; sym && i < l->height(); ++i)
        sym = rebuilt->layers()[i].rhs == l->layers()[i].rhs && rebuilt->layers()[i].shift == l->layers()[i].shift;
    } catch (const AlgebraError&) {
      sym = false;
    }
    out.push_back(make_check("symbol_layers", sym));
  }
  out.push_back(make_check("fixed_subspace_dimension", t->has_sigma() && fixed_subspace_dimension(t) == 1));
  return out;
}

inline LiftedTower inertial_from_residue_tower(const TowerPtr& kt, const FieldContext& K) {
  const FieldContext k = K.residue_context();
  if (kt->height() == 0) throw DegenerateSymbol("inertial_lift: empty tower");
  LiftedTower lt;
  lt.kind = LiftedTower::Kind::Inertial;
  const RationalFunction seed = TowerElement(kt, kt->pad(kt->layers()[0].rhs)).base_part();
  auto cert = not_in_AS_image(seed, k);
  if (cert.verdict == ASVerdict::InImage) throw DegenerateSymbol("inertial_lift: first layer has a root over k");
  if (cert.verdict == ASVerdict::Undecided) throw Undecided("inertial_lift: Artin-Schreier class undecided");
  if (!kt->is_cyclic()) throw NotCyclic("inertial_lift: residue tower is not cyclic");
  lt.seed_certificate = cert;
  lt.field = base_change_to_valued(kt, K);
  lt.valuation.exponents.assign(kt->height(), 0);
  lt.valuation.kind = ResidueKind::Separable;
  lt.valuation.residue_field = kt;
  return lt;
}

/// Inertial lift of the cyclic extension of k attached to ω ∈ W_m(k).
inline LiftedTower inertial_lift(const FieldContext& K, const WittVector<RationalFunction>& omega) {
  const FieldContext k = K.residue_context();
  if (omega.length() == 0) throw DegenerateSymbol("inertial_lift: empty symbol");
  for (const auto& w : omega.x)
    if (!k.in_residue_field(w)) throw AlgebraError("inertial_lift: symbol must lie in k");
  if (omega.x[0].is_zero()) throw DegenerateSymbol("inertial_lift: first component is zero");
  auto first = not_in_AS_image(omega.x[0], k);
  if (first.verdict == ASVerdict::InImage) throw DegenerateSymbol("inertial_lift: first layer has a root over k");
  if (first.verdict == ASVerdict::Undecided) throw Undecided("inertial_lift: Artin-Schreier class undecided");
  LiftedTower lt = inertial_from_residue_tower(asw_tower(k, omega), K);
  lt.symbol = omega;
  lt.checks = certify_inertial_lift(lt);
  if (!lt.certified()) throw AlgebraError("inertial_lift: certification failed");
  return lt;
}

/// Inertial lift of a cyclic tower over k (e.g. from repeated cyclic ascent).
inline LiftedTower inertial_lift(const FieldContext& K, const TowerPtr& kt) {
  LiftedTower lt = inertial_from_residue_tower(kt, K);
  lt.checks = certify_inertial_lift(lt);
  if (!lt.certified()) throw AlgebraError("inertial_lift: certification failed");
  return lt;
}

inline std::vector<Check> certify(const LiftedTower& lt) {
  return lt.kind == LiftedTower::Kind::InseparableResidue ? certify_inseparable_lift(lt)
                                                          : certify_inertial_lift(lt);
}

// ---------------------------------------------------------------------------
// Pairs of weakly unramified cyclic extensions with l_1 ∩ l_2 = k.

enum class PairCase { Rank2m, RankMPlusAS };

inline const char* to_string(PairCase c) { return c == PairCase::Rank2m ? "rank2m" : "rank-m-as"; }

struct IntersectionCertificate {
  PairCase which = PairCase::Rank2m;
  std::optional<IntersectionReport> linear_algebra;  // Rank2m
  bool type_disjoint = false;                        // RankMPlusAS
  bool trivial = false;
};

struct DisjointPair {
  LiftedTower first, second;
  IntersectionCertificate intersection;
};

inline IntersectionCertificate certify_intersection(PairCase which, const LiftedTower& a, const LiftedTower& b) {
  IntersectionCertificate c;
  c.which = which;
  const FieldContext& K = a.field->base();
  if (which == PairCase::Rank2m) {
    if (a.kind != LiftedTower::Kind::InseparableResidue || b.kind != LiftedTower::Kind::InseparableResidue)
      return c;
    c.linear_algebra = subfield_intersection_trivial(a.residues, b.residues, K);
    c.trivial = c.linear_algebra->trivial;
  } else {
    // l_1 purely inseparable over k, l_2 separable over k.
    c.type_disjoint = a.kind == LiftedTower::Kind::InseparableResidue && b.kind == LiftedTower::Kind::Inertial &&
                      a.valuation.kind == ResidueKind::PurelyInseparable &&
                      b.valuation.kind == ResidueKind::Separable && b.valuation.residue_field->is_cyclic();
    c.trivial = c.type_disjoint;
  }
  return c;
}

/// Cyclic tower of degree p^m over k seeded by x^p - x = f and extended by ascent.
inline TowerPtr ascended_residue_tower(const FieldContext& k, const RationalFunction& f, std::size_t m) {
  TowerPtr t = artin_schreier_layer(make_base_tower(k), f);
  for (std::size_t i = 1; i < m; ++i) t = albert_ascend(t, k.zero()).extended;
  return t;
}

inline DisjointPair disjoint_pair(const FieldContext& K, std::size_t m, PairCase which,
                                  const std::vector<RationalFunction>& gens,
                                  const std::optional<RationalFunction>& as_witness = std::nullopt) {
  DisjointPair out;
  if (which == PairCase::Rank2m) {
    if (gens.size() != 2 * m) throw AlgebraError("disjoint_pair: rank2m needs 2m generators");
    auto all = p_independent(std::vector<RationalFunction>(gens.begin(), gens.end()), K);
    if (!all.independent) throw PIndependenceFailed("disjoint_pair: generators are not p-independent");
    out.first = cyclic_lift_inseparable(K, {gens.begin(), gens.begin() + m});
    out.second = cyclic_lift_inseparable(K, {gens.begin() + m, gens.end()});
  } else {
    if (gens.size() != m) throw AlgebraError("disjoint_pair: rank-m-as needs m generators");
    if (!as_witness) throw AlgebraError("disjoint_pair: rank-m-as needs an Artin-Schreier witness");
    const FieldContext k = K.residue_context();
    auto cls = not_in_AS_image(*as_witness, k);
    if (cls.verdict != ASVerdict::NotInImage)
      throw AlgebraError(std::string("disjoint_pair: witness is ") + to_string(cls.verdict));
    out.first = cyclic_lift_inseparable(K, gens);
    out.second = inertial_lift(K, ascended_residue_tower(k, *as_witness, m));
  }
  out.intersection = certify_intersection(which, out.first, out.second);
  if (!out.intersection.trivial) throw AlgebraError("disjoint_pair: residue fields intersect nontrivially");
  return out;
}

}  // namespace cyclift
