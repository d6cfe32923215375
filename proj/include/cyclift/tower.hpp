#pragma once

// Towers of degree-p extensions over a rational function field:
//
//   Artin-Schreier layer:        x_i^p - x_i = r_i,   sigma(x_i) = x_i + s_i
//   purely inseparable layer:    y_i^p = a_i,         (no automorphism)
//
// with r_i, s_i, a_i in the previous layer. An element of an n-layer tower is
// a flat vector of p^n base coefficients; coefficient index
// d_1 + d_2 p + ... + d_n p^{n-1} belongs to x_1^{d_1} ... x_n^{d_n}.
// Level L of the tower is the prefix subfield spanned by the first p^L
// coefficients.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cyclift/expression.hpp"
#include "cyclift/linear_algebra.hpp"
#include "cyclift/witt.hpp"

namespace cyclift {

enum class LayerKind { ArtinSchreier, PurelyInseparable };

class ShiftConditionFailed : public AlgebraError {
 public:
  using AlgebraError::AlgebraError;
};

class NotCyclic : public AlgebraError {
 public:
  using AlgebraError::AlgebraError;
};

class Tower;
using TowerPtr = std::shared_ptr<const Tower>;
using Coeffs = std::vector<RationalFunction>;
using CoeffSpan = std::span<const RationalFunction>;

struct Layer {
  std::string name;
  LayerKind kind = LayerKind::ArtinSchreier;
  Coeffs rhs;    // r_i or a_i, at level i-1
  Coeffs shift;  // s_i at level i-1 (Artin-Schreier only)
};

class TowerElement;

class Tower : public std::enable_shared_from_this<Tower> {
 public:
  const FieldContext& base() const { return base_; }
  std::uint32_t p() const { return base_.p; }
  std::size_t height() const { return layers_.size(); }
  std::size_t degree() const { return dim(height()); }
  const std::vector<Layer>& layers() const { return layers_; }
  const TowerPtr& parent() const { return parent_; }

  /// True when every layer is Artin-Schreier, so sigma is defined.
  bool has_sigma() const {
    for (const auto& l : layers_)
      if (l.kind != LayerKind::ArtinSchreier) return false;
    return true;
  }

  /// Least e >= 1 with sigma^e = id on all generators, or 0 if none <= degree.
  std::size_t sigma_order() const { return sigma_order_; }
  bool is_cyclic() const { return has_sigma() && sigma_order_ == degree(); }

  std::size_t dim(std::size_t level) const {
    std::size_t d = 1;
    for (std::size_t i = 0; i < level; ++i) d *= base_.p;
    return d;
  }

  std::vector<std::string> generator_names() const {
    std::vector<std::string> n;
    for (const auto& l : layers_) n.push_back(l.name);
    return n;
  }

  /// All identifiers usable in expressions over this tower.
  std::vector<std::string> names() const {
    auto n = base_.names();
    for (const auto& l : layers_) n.push_back(l.name);
    return n;
  }

  // Level arithmetic on coefficient prefixes.

  Coeffs zero(std::size_t level) const { return Coeffs(dim(level), base_.zero()); }
  Coeffs one(std::size_t level) const {
    Coeffs c = zero(level);
    c[0] = base_.one();
    return c;
  }

  static bool is_zero(CoeffSpan a) {
    for (const auto& c : a)
      if (!c.is_zero()) return false;
    return true;
  }

  Coeffs add(CoeffSpan a, CoeffSpan b) const {
    Coeffs r(a.begin(), a.end());
    for (std::size_t i = 0; i < r.size(); ++i)
      if (!b[i].is_zero()) r[i] += b[i];
    return r;
  }
  Coeffs sub(CoeffSpan a, CoeffSpan b) const {
    Coeffs r(a.begin(), a.end());
    for (std::size_t i = 0; i < r.size(); ++i)
      if (!b[i].is_zero()) r[i] -= b[i];
    return r;
  }
  Coeffs scale(CoeffSpan a, const RationalFunction& c) const {
    Coeffs r(a.begin(), a.end());
    for (auto& x : r)
      if (!x.is_zero()) x *= c;
    return r;
  }

  Coeffs mul(std::size_t level, CoeffSpan a, CoeffSpan b) const {
    if (level == 0) return {a[0] * b[0]};
    const std::size_t blk = dim(level - 1);
    const std::uint32_t p = base_.p;
    if (is_zero(a.subspan(blk)) ) {
      Coeffs r;
      r.reserve(a.size());
      for (std::uint32_t j = 0; j < p; ++j) {
        auto part = mul(level - 1, a.first(blk), b.subspan(j * blk, blk));
        r.insert(r.end(), part.begin(), part.end());
      }
      return r;
    }
    if (is_zero(b.subspan(blk))) return mul(level, b, a);
    std::vector<Coeffs> prod(2 * p - 1, zero(level - 1));
    std::vector<bool> az(p), bz(p);
    for (std::uint32_t i = 0; i < p; ++i) {
      az[i] = is_zero(a.subspan(i * blk, blk));
      bz[i] = is_zero(b.subspan(i * blk, blk));
    }
    for (std::uint32_t i = 0; i < p; ++i) {
      if (az[i]) continue;
      for (std::uint32_t j = 0; j < p; ++j) {
        if (bz[j]) continue;
        auto t = mul(level - 1, a.subspan(i * blk, blk), b.subspan(j * blk, blk));
        prod[i + j] = add(prod[i + j], t);
      }
    }
    reduce_top(level, prod);
    Coeffs r;
    r.reserve(a.size());
    for (std::uint32_t j = 0; j < p; ++j) r.insert(r.end(), prod[j].begin(), prod[j].end());
    return r;
  }

  Coeffs inv(std::size_t level, CoeffSpan a) const {
    if (is_zero(a)) throw DivisionByZero();
    if (level == 0) return {a[0].inv()};
    const std::size_t blk = dim(level - 1);
    if (is_zero(a.subspan(blk))) {
      auto c = inv(level - 1, a.first(blk));
      c.resize(dim(level), base_.zero());
      return c;
    }
    if (std::all_of(layers_.begin(), layers_.begin() + std::ptrdiff_t(level),
                    [](const Layer& l) { return l.kind == LayerKind::ArtinSchreier; }))
      return inv_by_norm(level, a);
    return inv_euclid(level, a);
  }

  /// sigma restricted to level `level` (requires Artin-Schreier layers).
  Coeffs sigma(std::size_t level, CoeffSpan a) const {
    if (level == 0) return Coeffs(a.begin(), a.end());
    const Layer& layer = layers_[level - 1];
    if (layer.kind != LayerKind::ArtinSchreier) throw NotCyclic("sigma undefined on inseparable layer");
    const std::size_t blk = dim(level - 1);
    const std::uint32_t p = base_.p;
    Coeffs r = zero(level);
    for (std::uint32_t j = 0; j < p; ++j) {
      auto aj = a.subspan(j * blk, blk);
      if (is_zero(aj)) continue;
      auto sj = sigma(level - 1, aj);
      const Coeffs& pw = sigma_powers_[level - 1][j];
      for (std::uint32_t b = 0; b < p; ++b) {
        auto pb = CoeffSpan(pw).subspan(b * blk, blk);
        if (is_zero(pb)) continue;
        auto t = mul(level - 1, sj, pb);
        for (std::size_t i = 0; i < blk; ++i)
          if (!t[i].is_zero()) r[b * blk + i] += t[i];
      }
    }
    return r;
  }

  /// Zero-pads a level-L coefficient vector to the full tower.
  Coeffs pad(CoeffSpan a) const {
    Coeffs r(a.begin(), a.end());
    r.resize(degree(), base_.zero());
    return r;
  }

  /// Smallest level containing the element.
  std::size_t level_of(CoeffSpan a) const {
    for (std::size_t L = 0; L <= height(); ++L)
      if (is_zero(a.subspan(std::min(a.size(), dim(L))))) return L;
    return height();
  }

 private:
  friend TowerPtr make_base_tower(const FieldContext&);
  friend TowerPtr adjoin_layer_unchecked(const TowerPtr&, Layer);

  Tower() = default;

  // prod holds coefficients of x_L^0 .. x_L^{2p-2}; rewrite with
  // x_L^p = lambda x_L + rhs, lambda = 1 (Artin-Schreier) or 0 (inseparable).
  void reduce_top(std::size_t level, std::vector<Coeffs>& prod) const {
    const Layer& layer = layers_[level - 1];
    const std::uint32_t p = base_.p;
    for (std::size_t d = prod.size() - 1; d >= p; --d) {
      if (is_zero(prod[d])) continue;
      Coeffs c = std::move(prod[d]);
      prod[d] = zero(level - 1);
      if (layer.kind == LayerKind::ArtinSchreier) prod[d - p + 1] = add(prod[d - p + 1], c);
      prod[d - p] = add(prod[d - p], mul(level - 1, c, layer.rhs));
    }
  }

  // x_L -> x_L + i fixes level L-1 and generates Gal(level L / level L-1).
  Coeffs translate_top(std::size_t level, CoeffSpan a, std::uint32_t i) const {
    const std::size_t blk = dim(level - 1);
    const std::uint32_t p = base_.p;
    Coeffs r = zero(level);
    for (std::uint32_t j = 0; j < p; ++j) {
      auto aj = a.subspan(j * blk, blk);
      if (is_zero(aj)) continue;
      // (x + i)^j = sum_k C(j, k) i^(j-k) x^k
      std::uint64_t binom = 1;
      for (std::uint32_t k = 0; k <= j; ++k) {
        if (k > 0) binom = binom * (j - k + 1) / k;
        const Fp c = Fp(std::int64_t(binom % p), p) * Fp(i, p).pow(j - k);
        if (c.is_zero()) continue;
        const RationalFunction cf = base_.constant(c.value());
        for (std::size_t x = 0; x < blk; ++x)
          if (!aj[x].is_zero()) r[k * blk + x] += aj[x] * cf;
      }
    }
    return r;
  }

  // a^{-1} = c / d with d in the base: c = prod of the conjugates of a under
  // x_L -> x_L + i, times the same data for the relative norm one level down.
  // Dividing by d only once keeps the large norm out of the intermediate gcds.
  std::pair<Coeffs, RationalFunction> inv_fraction(std::size_t level, CoeffSpan a) const {
    if (level == 0) return {one(0), a[0]};
    const std::size_t blk = dim(level - 1);
    if (is_zero(a.subspan(blk))) {
      auto [c, d] = inv_fraction(level - 1, a.first(blk));
      c.resize(dim(level), base_.zero());
      return {std::move(c), std::move(d)};
    }
    Coeffs conj = one(level);
    for (std::uint32_t i = 1; i < base_.p; ++i) conj = mul(level, conj, translate_top(level, a, i));
    Coeffs n = mul(level, conj, a);
    if (!is_zero(CoeffSpan(n).subspan(blk))) throw AlgebraError("relative norm left the lower level");
    if (is_zero(CoeffSpan(n).first(blk))) throw AlgebraError("element is a zero divisor: tower is not a field");
    auto [c, d] = inv_fraction(level - 1, CoeffSpan(n).first(blk));
    c.resize(dim(level), base_.zero());
    return {mul(level, conj, c), std::move(d)};
  }

  Coeffs inv_by_norm(std::size_t level, CoeffSpan a) const {
    auto [c, d] = inv_fraction(level, a);
    if (d.is_zero()) throw AlgebraError("element is a zero divisor: tower is not a field");
    return scale(c, d.inv());
  }

  // Polynomials in x_L over level L-1, lowest coefficient first.
  using UPoly = std::vector<Coeffs>;

  void trim(UPoly& f) const {
    while (!f.empty() && is_zero(f.back())) f.pop_back();
  }

  Coeffs inv_euclid(std::size_t level, CoeffSpan a) const {
    const std::size_t lv = level - 1, blk = dim(lv);
    const std::uint32_t p = base_.p;
    const Layer& layer = layers_[lv];
    UPoly f(p + 1, zero(lv));
    f[p] = one(lv);
    if (layer.kind == LayerKind::ArtinSchreier) f[1] = sub(f[1], one(lv));
    f[0] = sub(f[0], layer.rhs);
    UPoly g;
    for (std::uint32_t j = 0; j < p; ++j) g.emplace_back(a.begin() + j * blk, a.begin() + (j + 1) * blk);
    trim(g);
    UPoly s0, s1{one(lv)};
    UPoly r0 = f, r1 = g;
    while (r1.size() > 1) {
      // r0 = q r1 + rem
      UPoly q(r0.size() - r1.size() + 1, zero(lv));
      const Coeffs lead_inv = inv(lv, r1.back());
      while (r0.size() >= r1.size()) {
        const std::size_t shift = r0.size() - r1.size();
        Coeffs c = mul(lv, r0.back(), lead_inv);
        q[shift] = c;
        for (std::size_t i = 0; i < r1.size(); ++i) r0[i + shift] = sub(r0[i + shift], mul(lv, c, r1[i]));
        r0.pop_back();
        trim(r0);
      }
      // s_new = s0 - q s1
      UPoly qs(q.size() + s1.size(), zero(lv));
      for (std::size_t i = 0; i < q.size(); ++i)
        for (std::size_t j = 0; j < s1.size(); ++j) qs[i + j] = add(qs[i + j], mul(lv, q[i], s1[j]));
      UPoly sn(std::max(s0.size(), qs.size()), zero(lv));
      for (std::size_t i = 0; i < s0.size(); ++i) sn[i] = add(sn[i], s0[i]);
      for (std::size_t i = 0; i < qs.size(); ++i) sn[i] = sub(sn[i], qs[i]);
      trim(sn);
      s0 = std::move(s1);
      s1 = std::move(sn);
      std::swap(r0, r1);  // (r0, r1) <- (r1, remainder)
    }
    if (r1.empty()) throw AlgebraError("element is a zero divisor: tower is not a field");
    const Coeffs c_inv = inv(lv, r1[0]);
    // Reduce s1 * c_inv modulo f into a level-L vector.
    std::vector<Coeffs> prod(std::max<std::size_t>(s1.size(), 2 * p - 1), zero(lv));
    for (std::size_t i = 0; i < s1.size(); ++i) prod[i] = mul(lv, s1[i], c_inv);
    for (std::size_t d = prod.size() - 1; d >= p; --d) {
      if (is_zero(prod[d])) continue;
      Coeffs c = std::move(prod[d]);
      prod[d] = zero(lv);
      if (layer.kind == LayerKind::ArtinSchreier) prod[d - p + 1] = add(prod[d - p + 1], c);
      prod[d - p] = add(prod[d - p], mul(lv, c, layer.rhs));
    }
    Coeffs out;
    for (std::uint32_t j = 0; j < p; ++j) out.insert(out.end(), prod[j].begin(), prod[j].end());
    return out;
  }

  void compute_sigma_data();

  FieldContext base_;
  std::vector<Layer> layers_;
  TowerPtr parent_;
  // sigma_powers_[L][j] = (x_{L+1} + s_{L+1})^j at level L+1
  std::vector<std::vector<Coeffs>> sigma_powers_;
  std::size_t sigma_order_ = 1;
};

/// Element of a tower; carries its tower so that arithmetic composes freely.
class TowerElement {
 public:
  TowerElement() = default;
  TowerElement(TowerPtr t, Coeffs c) : t_(std::move(t)), c_(std::move(c)) {
    if (c_.size() != t_->degree()) throw AlgebraError("tower element has wrong dimension");
  }

  static TowerElement from_base(const TowerPtr& t, const RationalFunction& c) {
    Coeffs v = t->zero(t->height());
    v[0] = c;
    return {t, std::move(v)};
  }
  static TowerElement constant(const TowerPtr& t, std::int64_t c) {
    return from_base(t, t->base().constant(c));
  }
  /// Generator x_i (1-based).
  static TowerElement generator(const TowerPtr& t, std::size_t i) {
    if (i < 1 || i > t->height()) throw AlgebraError("generator index out of range");
    Coeffs v = t->zero(t->height());
    v[t->dim(i - 1)] = t->base().one();
    return {t, std::move(v)};
  }
  /// Basis monomial with coefficient index `index`.
  static TowerElement basis(const TowerPtr& t, std::size_t index) {
    Coeffs v = t->zero(t->height());
    v.at(index) = t->base().one();
    return {t, std::move(v)};
  }

  const TowerPtr& tower() const { return t_; }
  const Coeffs& coeffs() const { return c_; }
  std::size_t level() const { return t_->level_of(c_); }
  bool in_base() const { return level() == 0; }
  const RationalFunction& base_part() const { return c_[0]; }

  bool is_zero() const { return Tower::is_zero(c_); }
  bool operator==(const TowerElement& o) const { return c_ == o.c_; }

  TowerElement operator+(const TowerElement& o) const { return {t_, t_->add(c_, o.c_)}; }
  TowerElement operator-(const TowerElement& o) const { return {t_, t_->sub(c_, o.c_)}; }
  TowerElement operator-() const { return {t_, t_->sub(t_->zero(t_->height()), c_)}; }
  TowerElement operator*(const TowerElement& o) const {
    return {t_, t_->mul(t_->height(), c_, o.c_)};
  }
  TowerElement& operator+=(const TowerElement& o) { return *this = *this + o; }
  TowerElement& operator-=(const TowerElement& o) { return *this = *this - o; }
  TowerElement& operator*=(const TowerElement& o) { return *this = *this * o; }

  TowerElement scale(std::int64_t k) const { return {t_, t_->scale(c_, t_->base().constant(k))}; }
  TowerElement scale(const RationalFunction& k) const { return {t_, t_->scale(c_, k)}; }
  TowerElement inv() const { return {t_, t_->inv(t_->height(), c_)}; }
  TowerElement operator/(const TowerElement& o) const { return *this * o.inv(); }
  TowerElement pow(std::int64_t e) const { return power(*this, e, constant(t_, 1)); }

  TowerElement sigma() const { return {t_, t_->sigma(t_->height(), c_)}; }
  TowerElement sigma_pow(std::size_t e) const {
    TowerElement r = *this;
    for (std::size_t i = 0; i < e; ++i) r = r.sigma();
    return r;
  }

  /// x^p - x.
  TowerElement artin_schreier() const { return pow(t_->p()) - *this; }

 private:
  TowerPtr t_;
  Coeffs c_;
};

inline TowerElement one_like(const TowerElement& x) { return TowerElement::constant(x.tower(), 1); }
inline TowerElement zero_like(const TowerElement& x) { return TowerElement::constant(x.tower(), 0); }

template <>
struct PivotCost<TowerElement> {
  static std::size_t cost(const TowerElement& x) {
    std::size_t c = 0;
    for (const auto& r : x.coeffs())
      if (!r.is_zero()) c += 4 + r.num().size() + r.den().size();
    return c;
  }
};

// ---------------------------------------------------------------------------
// Construction.

inline TowerPtr make_base_tower(const FieldContext& base) {
  std::shared_ptr<Tower> t(new Tower());
  t->base_ = base;
  return t;
}

inline void Tower::compute_sigma_data() {
  sigma_powers_.clear();
  sigma_order_ = 1;
  if (!has_sigma() || layers_.empty()) return;
  for (std::size_t L = 1; L <= height(); ++L) {
    Coeffs step = zero(L);
    auto shift = layers_[L - 1].shift;
    for (std::size_t i = 0; i < shift.size(); ++i) step[i] = shift[i];
    step[dim(L - 1)] += base_.one();
    std::vector<Coeffs> pw{one(L)};
    for (std::uint32_t j = 1; j < base_.p; ++j) pw.push_back(mul(L, pw.back(), step));
    sigma_powers_.push_back(std::move(pw));
  }
  std::vector<Coeffs> gens, imgs;
  for (std::size_t i = 1; i <= height(); ++i) {
    Coeffs g = zero(height());
    g[dim(i - 1)] = base_.one();
    gens.push_back(g);
  }
  imgs = gens;
  sigma_order_ = 0;
  for (std::size_t e = 1; e <= degree(); ++e) {
    for (auto& g : imgs) g = sigma(height(), g);
    if (imgs == gens) {
      sigma_order_ = e;
      break;
    }
  }
}

inline TowerPtr adjoin_layer_unchecked(const TowerPtr& t, Layer layer) {
  const std::size_t lower = t->degree();
  if (layer.rhs.size() != lower) throw AlgebraError("layer right-hand side has wrong level");
  if (layer.kind == LayerKind::ArtinSchreier && layer.shift.size() != lower)
    throw AlgebraError("sigma shift has wrong level");
  std::shared_ptr<Tower> n(new Tower());
  n->base_ = t->base_;
  n->layers_ = t->layers_;
  if (layer.name.empty()) layer.name = "x" + std::to_string(t->height() + 1);
  n->layers_.push_back(std::move(layer));
  n->parent_ = t;
  n->compute_sigma_data();
  return n;
}

/// Moves an element of `from` (a prefix of `to`) into `to`.
inline TowerElement promote(const TowerElement& x, const TowerPtr& to) {
  const auto& from = x.tower();
  if (from->height() > to->height()) throw AlgebraError("cannot promote into a lower tower");
  for (std::size_t i = 0; i < from->height(); ++i)
    if (from->layers()[i].rhs != to->layers()[i].rhs) throw AlgebraError("towers do not share a prefix");
  return {to, to->pad(x.coeffs())};
}

/// Elements of `x` restricted to the first `level` layers, as an element of `to`.
inline TowerElement restrict_to(const TowerElement& x, const TowerPtr& to) {
  if (x.level() > to->height()) throw AlgebraError("element does not lie in the subtower");
  Coeffs c(x.coeffs().begin(), x.coeffs().begin() + to->degree());
  return {to, std::move(c)};
}

/// Adjoins x^p - x = r with sigma(x) = x + s; requires s^p - s = sigma(r) - r.
inline TowerPtr adjoin_as_layer(const TowerPtr& t, const TowerElement& r, const TowerElement& s,
                                std::string name = "") {
  if (r.tower()->degree() != t->degree() || s.tower()->degree() != t->degree())
    throw AlgebraError("layer data must live in the tower being extended");
  if (!t->has_sigma()) throw NotCyclic("cannot extend sigma over an inseparable layer");
  if (s.artin_schreier() != r.sigma() - r)
    throw ShiftConditionFailed("sigma shift does not satisfy s^p - s = sigma(r) - r");
  Layer l;
  l.name = std::move(name);
  l.kind = LayerKind::ArtinSchreier;
  l.rhs = r.coeffs();
  l.shift = s.coeffs();
  return adjoin_layer_unchecked(t, std::move(l));
}

/// Adjoins y with y^p = a.
inline TowerPtr adjoin_inseparable_layer(const TowerPtr& t, const TowerElement& a, std::string name = "") {
  if (a.tower()->degree() != t->degree()) throw AlgebraError("layer data must live in the tower being extended");
  Layer l;
  l.name = std::move(name);
  l.kind = LayerKind::PurelyInseparable;
  l.rhs = a.coeffs();
  return adjoin_layer_unchecked(t, std::move(l));
}

// ---------------------------------------------------------------------------
// Galois data.

inline void require_cyclic(const Tower& t) {
  if (!t.is_cyclic())
    throw NotCyclic("sigma has order " + std::to_string(t.sigma_order()) + ", tower degree " +
                    std::to_string(t.degree()));
}

/// Sum of the conjugates of x over the subfield at `level`.
inline TowerElement relative_trace(const TowerElement& x, std::size_t level) {
  const auto& t = *x.tower();
  require_cyclic(t);
  const std::size_t step = t.dim(level), count = t.degree() / step;
  TowerElement acc = zero_like(x), cur = x;
  for (std::size_t i = 0; i < count; ++i) {
    acc += cur;
    cur = cur.sigma_pow(step);
  }
  return acc;
}

inline TowerElement relative_norm(const TowerElement& x, std::size_t level) {
  const auto& t = *x.tower();
  require_cyclic(t);
  const std::size_t step = t.dim(level), count = t.degree() / step;
  TowerElement acc = one_like(x), cur = x;
  for (std::size_t i = 0; i < count; ++i) {
    acc *= cur;
    cur = cur.sigma_pow(step);
  }
  return acc;
}

/// Tr_{T/base}(x) as a base element.
inline RationalFunction trace(const TowerElement& x) {
  TowerElement s = relative_trace(x, 0);
  if (!s.in_base()) throw AlgebraError("trace is not sigma-invariant");
  return s.base_part();
}

inline RationalFunction norm(const TowerElement& x) {
  TowerElement s = relative_norm(x, 0);
  if (!s.in_base()) throw AlgebraError("norm is not sigma-invariant");
  return s.base_part();
}

/// Dimension over the base of the sigma-fixed subspace {x : sigma(x) = x}.
inline std::size_t fixed_subspace_dimension(const TowerPtr& t) {
  const std::size_t n = t->degree();
  Matrix<RationalFunction> m(n, std::vector<RationalFunction>(n, t->base().zero()));
  for (std::size_t j = 0; j < n; ++j) {
    TowerElement e = TowerElement::basis(t, j);
    TowerElement d = e.sigma() - e;
    for (std::size_t i = 0; i < n; ++i) m[i][j] = d.coeffs()[i];
  }
  return n - rank(m, n, t->base().one());
}

// ---------------------------------------------------------------------------
// Expressions over a tower.

inline Resolver<TowerElement> tower_resolver(const TowerPtr& t) {
  Resolver<TowerElement> r;
  r.constant = [t](std::int64_t c) { return TowerElement::constant(t, c); };
  r.variable = [t](std::string_view n) -> std::optional<TowerElement> {
    auto base = t->base().names();
    for (std::size_t i = 0; i < base.size(); ++i)
      if (base[i] == n) return TowerElement::from_base(t, RationalFunction::variable(i, t->p()));
    for (std::size_t i = 0; i < t->height(); ++i)
      if (t->layers()[i].name == n) return TowerElement::generator(t, i + 1);
    return std::nullopt;
  };
  return r;
}

inline TowerElement parse_tower_element(std::string_view text, const TowerPtr& t) {
  return parse_with(text, tower_resolver(t));
}

inline std::string print(const TowerElement& x) {
  const auto& t = *x.tower();
  const auto base = t.base().names();
  const auto gens = t.generator_names();
  if (x.in_base()) return print_rational(x.base_part(), base);
  std::string s;
  for (std::size_t idx = 0; idx < x.coeffs().size(); ++idx) {
    const auto& c = x.coeffs()[idx];
    if (c.is_zero()) continue;
    std::string mono;
    std::size_t e = idx;
    for (std::size_t i = 0; i < t.height(); ++i) {
      std::size_t d = e % t.p();
      e /= t.p();
      if (!d) continue;
      if (!mono.empty()) mono += '*';
      mono += gens[i];
      if (d > 1) mono += '^' + std::to_string(d);
    }
    std::string cs = print_rational(c, base);
    std::string term;
    if (mono.empty()) term = prints_atomic(c) ? cs : "(" + cs + ")";
    else if (c.is_one()) term = mono;
    else term = (prints_atomic(c) ? cs : "(" + cs + ")") + "*" + mono;
    if (!s.empty()) s += '+';
    s += term;
  }
  return s.empty() ? "0" : s;
}

/// Prints an element of level < height as an expression over the lower layers.
inline std::string print_level(const TowerPtr& t, CoeffSpan c) {
  return print(TowerElement(t, t->pad(c)));
}

}  // namespace cyclift
