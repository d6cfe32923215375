#pragma once

// Cyclic algebras (L/K, σ, b) of degree n = [L:K]: elements Σ_j z_j y^j with
// z_j ∈ L, y z = σ(z) y and y^n = b.

#include <cstdlib>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "cyclift/lift.hpp"
#include "cyclift/linear_algebra.hpp"
#include "cyclift/random.hpp"

namespace cyclift {

class ZeroSlot : public AlgebraError {
 public:
  ZeroSlot() : AlgebraError("cyclic algebra slot b must be nonzero") {}
};
class MissingCertificate : public AlgebraError {
 public:
  using AlgebraError::AlgebraError;
};
class MissingWitness : public AlgebraError {
 public:
  using AlgebraError::AlgebraError;
};
class SlotValuationDivisible : public AlgebraError {
 public:
  using AlgebraError::AlgebraError;
};

struct CyclicAlgebra {
  TowerPtr L;
  RationalFunction b;
  std::optional<LiftedTower> lift;  // weakly unramified witness for L, when known

  std::size_t degree() const { return L->degree(); }
  std::uint32_t p() const { return L->p(); }
  const FieldContext& base() const { return L->base(); }
};

using AlgebraPtr = std::shared_ptr<const CyclicAlgebra>;

class AlgebraElement {
 public:
  AlgebraElement() = default;
  AlgebraElement(AlgebraPtr a, std::vector<TowerElement> z) : a_(std::move(a)), z_(std::move(z)) {
    if (z_.size() != a_->degree()) throw AlgebraError("algebra element has wrong length");
  }

  static AlgebraElement zero(const AlgebraPtr& a) {
    return {a, std::vector<TowerElement>(a->degree(), TowerElement::constant(a->L, 0))};
  }
  /// z ∈ L embedded as z·y^0.
  static AlgebraElement embed(const AlgebraPtr& a, const TowerElement& z) {
    auto r = zero(a);
    r.z_[0] = z;
    return r;
  }
  static AlgebraElement embed(const AlgebraPtr& a, const RationalFunction& c) {
    return embed(a, TowerElement::from_base(a->L, c));
  }
  /// z·y^j.
  static AlgebraElement monomial(const AlgebraPtr& a, const TowerElement& z, std::size_t j) {
    auto r = zero(a);
    r.z_.at(j) = z;
    return r;
  }
  static AlgebraElement y(const AlgebraPtr& a) {
    if (a->degree() == 1) return embed(a, a->b);
    return monomial(a, TowerElement::constant(a->L, 1), 1);
  }

  const AlgebraPtr& algebra() const { return a_; }
  const std::vector<TowerElement>& coeffs() const { return z_; }
  bool is_zero() const {
    for (const auto& z : z_)
      if (!z.is_zero()) return false;
    return true;
  }
  bool operator==(const AlgebraElement& o) const { return z_ == o.z_; }

  AlgebraElement operator+(const AlgebraElement& o) const {
    auto r = *this;
    for (std::size_t j = 0; j < z_.size(); ++j) r.z_[j] += o.z_[j];
    return r;
  }
  AlgebraElement operator-(const AlgebraElement& o) const {
    auto r = *this;
    for (std::size_t j = 0; j < z_.size(); ++j) r.z_[j] -= o.z_[j];
    return r;
  }
  AlgebraElement operator*(const AlgebraElement& o) const;
  AlgebraElement pow(std::uint64_t e) const {
    AlgebraElement acc = embed(a_, a_->base().one()), b = *this;
    for (; e; e >>= 1) {
      if (e & 1) acc = acc * b;
      if (e > 1) b = b * b;
    }
    return acc;
  }
  AlgebraElement inv() const;

 private:
  AlgebraPtr a_;
  std::vector<TowerElement> z_;
};

/// (Σ z_i y^i)(Σ w_j y^j) = Σ z_i σ^i(w_j) y^{i+j}, wrapping y^n = b.
inline AlgebraElement alg_mul(const AlgebraElement& u, const AlgebraElement& w) {
  const auto& a = u.algebra();
  const std::size_t n = a->degree();
  auto r = AlgebraElement::zero(a);
  std::vector<TowerElement> out = r.coeffs();
  for (std::size_t j = 0; j < n; ++j) {
    TowerElement wj = w.coeffs()[j];
    if (wj.is_zero()) continue;
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) wj = wj.sigma();
      const auto& zi = u.coeffs()[i];
      if (zi.is_zero()) continue;
      TowerElement prod = zi * wj;
      std::size_t k = i + j;
      if (k >= n) {
        k -= n;
        prod = prod.scale(a->b);
      }
      out[k] += prod;
    }
  }
  return {a, std::move(out)};
}

inline AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const { return alg_mul(*this, o); }

inline AlgebraPtr build_algebra(const TowerPtr& L, const RationalFunction& b) {
  if (b.is_zero()) throw ZeroSlot();
  if (!L->is_cyclic()) throw NotCyclic("build_algebra: maximal subfield is not cyclic");
  auto a = std::make_shared<CyclicAlgebra>();
  a->L = L;
  a->b = b;
  return a;
}

inline AlgebraPtr build_algebra(const LiftedTower& lt, const RationalFunction& b) {
  if (b.is_zero()) throw ZeroSlot();
  if (!lt.field->is_cyclic()) throw NotCyclic("build_algebra: maximal subfield is not cyclic");
  auto a = std::make_shared<CyclicAlgebra>();
  a->L = lt.field;
  a->b = b;
  a->lift = lt;
  return a;
}

/// Matrix over L of left multiplication by u on A = ⊕ y^k L (right L-space):
/// M[k][j] = σ^{-k}(z_{(k-j) mod n}) · (b if k < j).
inline Matrix<TowerElement> left_multiplication_matrix(const AlgebraElement& u) {
  const auto& a = u.algebra();
  const std::size_t n = a->degree();
  std::vector<std::vector<TowerElement>> twisted(n);  // twisted[k][i] = σ^{-k}(z_i)
  for (std::size_t i = 0; i < n; ++i) {
    TowerElement s = u.coeffs()[i];
    twisted[0].push_back(s);
    for (std::size_t k = n - 1; k >= 1; --k) {
      s = s.sigma();  // σ^{n-k} = σ^{-k}
      if (twisted[k].empty()) twisted[k].resize(n);
      twisted[k][i] = s;
    }
  }
  Matrix<TowerElement> m(n, std::vector<TowerElement>(n));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j) {
      TowerElement e = twisted[k][(k + n - j) % n];
      m[k][j] = k < j ? e.scale(a->b) : e;
    }
  return m;
}

/// Reduced norm; throws if the determinant leaves K.
inline RationalFunction reduced_norm(const AlgebraElement& u) {
  const auto& a = u.algebra();
  if (u.is_zero()) return a->base().zero();
  TowerElement d = determinant_expansion(left_multiplication_matrix(u), TowerElement::constant(a->L, 1));
  if (!d.in_base()) throw AlgebraError("reduced_norm: determinant is not in the base field");
  return d.base_part();
}

/// Inverse by Cramer's rule on M w = e_0, so only Nrd(u) ∈ K is inverted.
inline AlgebraElement AlgebraElement::inv() const {
  if (is_zero()) throw DivisionByZero();
  const std::size_t n = a_->degree();
  const TowerElement one = TowerElement::constant(a_->L, 1);
  const Matrix<TowerElement> m = left_multiplication_matrix(*this);
  const TowerElement det = determinant_expansion(m, one);
  if (det.is_zero()) throw DivisionByZero();
  if (!det.in_base()) throw AlgebraError("alg_inv: determinant is not in the base field");
  const RationalFunction det_inv = det.base_part().inv();
  std::vector<TowerElement> z(n);
  for (std::size_t j = 0; j < n; ++j) {
    Matrix<TowerElement> mj = m;
    for (std::size_t k = 0; k < n; ++k) mj[k][j] = k == 0 ? one : zero_like(one);
    z[j] = determinant_expansion(mj, one).scale(det_inv).sigma_pow(j);  // y^j w_j = σ^j(w_j) y^j
  }
  AlgebraElement r(a_, std::move(z));
  if (!(*this * r == embed(a_, a_->base().one()))) throw AlgebraError("alg_inv: postcondition failed");
  return r;
}

inline AlgebraElement alg_inv(const AlgebraElement& u) { return u.inv(); }

/// Generators of A over K: x_1, ..., x_m and y.
inline std::vector<AlgebraElement> algebra_generators(const AlgebraPtr& a) {
  std::vector<AlgebraElement> g;
  for (std::size_t i = 1; i <= a->L->height(); ++i)
    g.push_back(AlgebraElement::embed(a, TowerElement::generator(a->L, i)));
  g.push_back(AlgebraElement::y(a));
  return g;
}

/// dim_K {z : z g = g z for every generator g}.
inline std::size_t center_dimension(const AlgebraPtr& a) {
  const std::size_t n = a->degree();
  const TowerPtr& L = a->L;
  const RationalFunction one = a->base().one();
  // z = Σ z_j y^j commutes with x_i iff z_j (σ^j(x_i) - x_i) = 0, and with y iff σ(z_j) = z_j.
  std::size_t total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<TowerElement> factors;
    for (std::size_t i = 1; i <= L->height(); ++i) {
      TowerElement x = TowerElement::generator(L, i);
      factors.push_back(x.sigma_pow(j) - x);
    }
    Matrix<RationalFunction> m;
    auto append = [&](auto&& op) {
      std::vector<Coeffs> cols;
      for (std::size_t c = 0; c < n; ++c) cols.push_back(op(TowerElement::basis(L, c)).coeffs());
      for (std::size_t row = 0; row < n; ++row) {
        std::vector<RationalFunction> r;
        for (std::size_t c = 0; c < n; ++c) r.push_back(cols[c][row]);
        m.push_back(std::move(r));
      }
    };
    for (const auto& f : factors) append([&](const TowerElement& e) { return e * f; });
    append([](const TowerElement& e) { return e.sigma() - e; });
    total += n - rank(m, n, one);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Relation checks.

inline bool associative(const AlgebraElement& a, const AlgebraElement& b, const AlgebraElement& c) {
  return (a * b) * c == a * (b * c);
}

inline bool generator_triples_associative(const AlgebraPtr& a) {
  auto g = algebra_generators(a);
  for (const auto& x : g)
    for (const auto& y : g)
      for (const auto& z : g)
        if (!associative(x, y, z)) return false;
  return true;
}

inline AlgebraElement random_algebra_element(const AlgebraPtr& a, ElementSampler& s,
                                             const ElementSampler::Shape& shape = {}) {
  for (;;) {
    std::vector<TowerElement> z;
    for (std::size_t j = 0; j < a->degree(); ++j)
      z.push_back(s.below(2) ? s.tower_element(a->L, shape, 0.4) : TowerElement::constant(a->L, 0));
    AlgebraElement e(a, std::move(z));
    if (!e.is_zero()) return e;
  }
}

// ---------------------------------------------------------------------------
// Division criterion: L/K weakly unramified of degree n and gcd(v(b), p) = 1.

inline constexpr std::size_t kDefaultProbes = 100;
inline constexpr std::uint64_t kDefaultSeed = 20240601;

struct NormProbe {
  std::size_t index = 0;
  std::string nrd_valuation;  // v(Nrd(z)), "inf" for a zero norm
  bool nonzero = false;
  bool operator==(const NormProbe&) const = default;
};

struct DivisionCertificate {
  bool verdict = false;
  bool refuted = false;  // some probe hit Nrd = 0
  std::int64_t slot_valuation = 0;
  std::uint64_t slot_gcd = 0;
  bool weakly_unramified = false;
  std::string weakly_unramified_kind;  // "inseparable-residue" | "inertial"
  std::size_t residue_degree = 0;
  std::uint64_t seed = kDefaultSeed;
  std::vector<NormProbe> probes;
  bool operator==(const DivisionCertificate&) const = default;
};

inline std::vector<NormProbe> norm_probes(const AlgebraPtr& a, std::uint64_t seed, std::size_t count) {
  ElementSampler s(seed);
  ElementSampler::Shape shape;
  shape.max_terms = 2;
  shape.max_degree = 1;
  shape.max_pole = 1;
  std::vector<NormProbe> out;
  for (std::size_t i = 0; i < count; ++i) {
    AlgebraElement z = random_algebra_element(a, s, shape);
    RationalFunction n = reduced_norm(z);
    out.push_back({i, valuation(n, a->base().t_index()).str(), !n.is_zero()});
  }
  return out;
}

inline DivisionCertificate division_certificate(const AlgebraPtr& a, std::uint64_t seed = kDefaultSeed,
                                                std::size_t probes = kDefaultProbes) {
  if (!a->lift) throw MissingCertificate("division_certificate: maximal subfield lacks a weakly unramified certificate");
  DivisionCertificate c;
  const LiftedTower& lt = *a->lift;
  Valuation vb = valuation(a->b, a->base().t_index());
  c.slot_valuation = vb.value();
  c.slot_gcd = std::gcd(static_cast<std::uint64_t>(std::llabs(c.slot_valuation)), std::uint64_t(a->p()));
  c.weakly_unramified_kind = lt.kind == LiftedTower::Kind::Inertial ? "inertial" : "inseparable-residue";
  c.residue_degree = lt.valuation.residue_field->degree();
  c.weakly_unramified = lt.field == a->L && all_passed(certify(lt)) && c.residue_degree == a->degree();
  c.seed = seed;
  c.probes = norm_probes(a, seed, probes);
  for (const auto& pr : c.probes) c.refuted = c.refuted || !pr.nonzero;
  c.verdict = c.slot_gcd == 1 && c.weakly_unramified && !c.refuted;
  return c;
}

// ---------------------------------------------------------------------------
// Totally ramified subfield K(y), y^n = b, and the residue bookkeeping.

struct InseparableSubfieldCertificate {
  std::size_t degree = 0;           // n
  std::int64_t slot_valuation = 0;  // v(b)
  bool power_relation = false;      // y^n = b in A
  bool no_root_in_K = false;        // n ∤ v(b), hence x^n - b has no root in K
  std::size_t value_group_index = 0;
  bool certified() const { return power_relation && no_root_in_K && value_group_index == degree; }
  bool operator==(const InseparableSubfieldCertificate&) const = default;
};

inline InseparableSubfieldCertificate inseparable_subfield_certificate(const AlgebraPtr& a) {
  Valuation vb = valuation(a->b, a->base().t_index());
  const std::int64_t v = vb.value();
  if (v % std::int64_t(a->p()) == 0)
    throw SlotValuationDivisible("inseparable_subfield_certificate: p divides v(b) = " + std::to_string(v));
  InseparableSubfieldCertificate c;
  c.degree = a->degree();
  c.slot_valuation = v;
  AlgebraElement y = AlgebraElement::y(a);
  c.power_relation = y.pow(a->degree()) == AlgebraElement::embed(a, a->b);
  c.no_root_in_K = v % std::int64_t(c.degree) != 0;
  // v(y) = v(b)/n with gcd(v(b), n) = 1 generates (1/n)ℤ.
  const auto g = std::gcd(static_cast<std::uint64_t>(std::llabs(v)), std::uint64_t(c.degree));
  c.value_group_index = c.degree / g;
  return c;
}

struct ValueGroupData {
  std::size_t value_group_index = 0;  // [Γ_D : Γ_K]
  std::size_t residue_degree = 0;     // [D̄ : k]
  std::size_t algebra_dimension = 0;  // [D : K]
  bool fundamental_equality() const { return algebra_dimension == value_group_index * residue_degree; }
  bool operator==(const ValueGroupData&) const = default;
};

/// With a totally ramified maximal subfield of index n and a weakly unramified
/// one of residue degree n, [Γ_D:Γ_K] ≥ n and [D̄:k] ≥ n; the fundamental
/// equality [D:K] = n^2 forces both to be n and D̄ = l.
inline ValueGroupData semiramified_residue(const AlgebraPtr& a,
                                           const std::optional<InseparableSubfieldCertificate>& witness) {
  if (!witness || !witness->certified()) throw MissingWitness("semiramified_residue: no totally ramified witness");
  if (!a->lift) throw MissingCertificate("semiramified_residue: no weakly unramified certificate");
  ValueGroupData d;
  d.value_group_index = witness->value_group_index;
  d.residue_degree = a->lift->valuation.residue_field->degree();
  d.algebra_dimension = a->degree() * a->degree();
  if (!d.fundamental_equality()) throw AlgebraError("semiramified_residue: fundamental equality fails");
  return d;
}

// ---------------------------------------------------------------------------
// End-to-end pipeline: two division algebras sharing K(b^{1/n}) whose residue
// division algebras l_1, l_2 meet in k.

inline constexpr const char* kAssumedLinkage =
    "linkage of two p-algebras of degree n sharing a purely inseparable maximal subfield, "
    "yielding a common cyclic maximal subfield; not computed";

struct DemoAlgebra {
  AlgebraPtr algebra;
  DivisionCertificate division;
  InseparableSubfieldCertificate subfield;
  ValueGroupData value_groups;
  std::size_t center_dimension = 0;
  bool associative = false;
};

struct DemoReport {
  std::uint32_t p = 2;
  std::size_t m = 1;
  PairCase which = PairCase::Rank2m;
  RationalFunction b;
  DisjointPair pair;
  DemoAlgebra first, second;
  std::vector<Check> checks;
  std::string conclusion;
  std::string assumed = kAssumedLinkage;
  bool passed() const { return all_passed(checks); }
};

inline DemoAlgebra demo_algebra(const LiftedTower& lt, const RationalFunction& b, std::uint64_t seed,
                                std::size_t probes) {
  DemoAlgebra d;
  d.algebra = build_algebra(lt, b);
  d.division = division_certificate(d.algebra, seed, probes);
  d.subfield = inseparable_subfield_certificate(d.algebra);
  d.value_groups = semiramified_residue(d.algebra, d.subfield);
  d.center_dimension = center_dimension(d.algebra);
  d.associative = generator_triples_associative(d.algebra);
  return d;
}

inline std::vector<Check> demo_checks(const DemoReport& r) {
  std::vector<Check> c;
  const auto& d1 = r.first;
  const auto& d2 = r.second;
  c.push_back(make_check("first_tower_certified", all_passed(certify(r.pair.first))));
  c.push_back(make_check("second_tower_certified", all_passed(certify(r.pair.second))));
  c.push_back(make_check("residue_intersection_trivial",
                         certify_intersection(r.which, r.pair.first, r.pair.second).trivial));
  for (const auto* d : {&d1, &d2}) {
    const std::string tag = d == &d1 ? "_1" : "_2";
    c.push_back(make_check("division" + tag, d->division.verdict, std::to_string(d->division.probes.size())));
    c.push_back(make_check("center_dimension" + tag, d->center_dimension == 1, std::to_string(d->center_dimension)));
    c.push_back(make_check("associative" + tag, d->associative));
    c.push_back(make_check("totally_ramified_subfield" + tag, d->subfield.certified(),
                           std::to_string(d->subfield.value_group_index)));
    c.push_back(make_check("fundamental_equality" + tag, d->value_groups.fundamental_equality(),
                           std::to_string(d->value_groups.algebra_dimension) + "=" +
                               std::to_string(d->value_groups.value_group_index) + "*" +
                               std::to_string(d->value_groups.residue_degree)));
  }
  c.push_back(make_check("shared_slot", d1.algebra->b == d2.algebra->b));
  return c;
}

inline std::string demo_conclusion(bool passed) {
  if (!passed) return "not established";
  return "D_1 and D_2 are division algebras containing K(y) with y^n = b; their residue algebras l_1, l_2 "
         "meet in k, so a common cyclic maximal subfield has residue field k and is totally ramified";
}

inline DemoReport theorem2_demo(const FieldContext& K, std::size_t m, PairCase which,
                                const std::vector<RationalFunction>& gens,
                                const std::optional<RationalFunction>& as_witness, const RationalFunction& b,
                                std::uint64_t seed = kDefaultSeed, std::size_t probes = kDefaultProbes) {
  DemoReport r;
  r.p = K.p;
  r.m = m;
  r.which = which;
  r.b = b;
  r.pair = disjoint_pair(K, m, which, gens, as_witness);
  r.first = demo_algebra(r.pair.first, b, seed, probes);
  r.second = demo_algebra(r.pair.second, b, seed + 1, probes);
  r.checks = demo_checks(r);
  r.conclusion = demo_conclusion(r.passed());
  return r;
}

}  // namespace cyclift
