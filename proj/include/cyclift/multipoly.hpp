#pragma once

// Sparse multivariate polynomials over an exact coefficient field or ring.
//
// Terms are kept sorted by descending lexicographic order on exponent vectors,
// variable 0 being the most significant. Zero coefficients are never stored, so
// structural equality is polynomial equality.

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cyclift/extension_field.hpp"
#include "cyclift/prime_field.hpp"

namespace cyclift {

inline constexpr std::size_t kMaxVars = 16;
using Exponent = std::uint16_t;
using Monomial = std::array<Exponent, kMaxVars>;

inline Monomial unit_monomial(std::size_t var, Exponent e = 1) {
  Monomial m{};
  m[var] = e;
  return m;
}

inline Monomial monomial_mul(const Monomial& a, const Monomial& b) {
  Monomial r{};
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    std::uint32_t s = std::uint32_t(a[i]) + b[i];
    if (s > 0xFFFF) throw AlgebraError("monomial exponent overflow");
    r[i] = static_cast<Exponent>(s);
  }
  return r;
}

inline bool monomial_divides(const Monomial& d, const Monomial& m) {
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (d[i] > m[i]) return false;
  return true;
}

inline Monomial monomial_div(const Monomial& m, const Monomial& d) {
  Monomial r{};
  for (std::size_t i = 0; i < kMaxVars; ++i) r[i] = m[i] - d[i];
  return r;
}

inline std::uint32_t monomial_degree(const Monomial& m) {
  std::uint32_t s = 0;
  for (auto e : m) s += e;
  return s;
}

inline bool monomial_is_one(const Monomial& m) {
  return std::all_of(m.begin(), m.end(), [](Exponent e) { return e == 0; });
}

/// Coefficient operations. Specialized per coefficient type; `like` supplies
/// runtime data (the modulus for F_p).
template <class C>
struct CoeffOps;

template <>
struct CoeffOps<Fp> {
  static bool is_zero(const Fp& c) { return c.is_zero(); }
  static Fp one(const Fp& like) { return one_like(like); }
  static Fp scale(const Fp& c, std::int64_t k) { return c.scale(k); }
};

template <class C>
class MultiPoly {
 public:
  using Term = std::pair<Monomial, C>;
  using Ops = CoeffOps<C>;

  MultiPoly() = default;

  static MultiPoly constant(const C& c) {
    MultiPoly r;
    if (!Ops::is_zero(c)) r.terms_.push_back({Monomial{}, c});
    return r;
  }
  static MultiPoly term(const Monomial& m, const C& c) {
    MultiPoly r;
    if (!Ops::is_zero(c)) r.terms_.push_back({m, c});
    return r;
  }
  static MultiPoly variable(std::size_t var, const C& one) {
    return term(unit_monomial(var), one);
  }
  /// Builds from arbitrary (possibly repeated, unsorted) terms.
  static MultiPoly from_terms(std::vector<Term> terms) {
    MultiPoly r;
    r.terms_ = std::move(terms);
    r.normalize();
    return r;
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() ||
           (terms_.size() == 1 && monomial_is_one(terms_[0].first));
  }
  bool is_monomial() const { return terms_.size() == 1; }
  std::size_t size() const { return terms_.size(); }

  const Term& leading() const { return terms_.front(); }
  const C& leading_coeff() const { return terms_.front().second; }

  /// Coefficient of the constant monomial, or zero.
  C constant_coeff(const C& like) const {
    if (!terms_.empty() && monomial_is_one(terms_.back().first))
      return terms_.back().second;
    return Ops::scale(like, 0);
  }

  /// A nonzero coefficient (for constructing constants with runtime data).
  const C& sample_coeff() const { return terms_.front().second; }

  bool operator==(const MultiPoly& o) const { return terms_ == o.terms_; }

  MultiPoly operator-() const {
    MultiPoly r = *this;
    for (auto& t : r.terms_) t.second = Ops::scale(t.second, -1);
    return r;
  }

  MultiPoly operator+(const MultiPoly& o) const { return merge(o, false); }
  MultiPoly operator-(const MultiPoly& o) const { return merge(o, true); }
  MultiPoly& operator+=(const MultiPoly& o) { return *this = *this + o; }
  MultiPoly& operator-=(const MultiPoly& o) { return *this = *this - o; }

  MultiPoly operator*(const MultiPoly& o) const {
    if (is_zero() || o.is_zero()) return {};
    if (o.is_monomial()) return mul_term(o.terms_[0].first, o.terms_[0].second);
    if (is_monomial()) return o.mul_term(terms_[0].first, terms_[0].second);
    std::vector<Term> acc;
    acc.reserve(terms_.size() * o.terms_.size());
    for (const auto& [ma, ca] : terms_)
      for (const auto& [mb, cb] : o.terms_)
        acc.push_back({monomial_mul(ma, mb), ca * cb});
    return from_terms(std::move(acc));
  }
  MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

  MultiPoly mul_term(const Monomial& m, const C& c) const {
    MultiPoly r;
    if (Ops::is_zero(c)) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& [mt, ct] : terms_) {
      C v = ct * c;
      if (!Ops::is_zero(v)) r.terms_.push_back({monomial_mul(mt, m), v});
    }
    return r;
  }
  MultiPoly scale(const C& c) const { return mul_term(Monomial{}, c); }
  MultiPoly scale_int(std::int64_t k) const {
    std::vector<Term> out;
    for (const auto& [m, c] : terms_) {
      C v = Ops::scale(c, k);
      if (!Ops::is_zero(v)) out.push_back({m, v});
    }
    MultiPoly r;
    r.terms_ = std::move(out);
    return r;
  }

  MultiPoly pow(std::uint64_t e, const C& one) const {
    MultiPoly acc = constant(one), base = *this;
    while (e) {
      if (e & 1) acc *= base;
      e >>= 1;
      if (e) base *= base;
    }
    return acc;
  }

  std::uint32_t degree(std::size_t var) const {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max<std::uint32_t>(d, t.first[var]);
    return d;
  }
  /// Lowest exponent of `var` among the terms (the var-adic order); 0 for zero.
  std::uint32_t order(std::size_t var) const {
    if (terms_.empty()) return 0;
    std::uint32_t d = 0xFFFFFFFF;
    for (const auto& t : terms_) d = std::min<std::uint32_t>(d, t.first[var]);
    return d;
  }
  std::uint32_t total_degree() const {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, monomial_degree(t.first));
    return d;
  }
  bool involves(std::size_t var) const { return degree(var) > 0; }

  /// Componentwise minimum of exponents over all terms.
  Monomial monomial_content() const {
    Monomial m{};
    if (terms_.empty()) return m;
    m = terms_[0].first;
    for (const auto& t : terms_)
      for (std::size_t i = 0; i < kMaxVars; ++i) m[i] = std::min(m[i], t.first[i]);
    return m;
  }

  MultiPoly div_monomial(const Monomial& d) const {
    MultiPoly r = *this;
    for (auto& t : r.terms_) {
      if (!monomial_divides(d, t.first))
        throw AlgebraError("monomial does not divide polynomial");
      t.first = monomial_div(t.first, d);
    }
    return r;
  }

  MultiPoly derivative(std::size_t var) const {
    std::vector<Term> out;
    for (const auto& [m, c] : terms_) {
      if (m[var] == 0) continue;
      C v = Ops::scale(c, m[var]);
      if (Ops::is_zero(v)) continue;
      Monomial mm = m;
      --mm[var];
      out.push_back({mm, v});
    }
    return from_terms(std::move(out));
  }

  /// Specializes `var` to zero.
  MultiPoly at_zero(std::size_t var) const {
    MultiPoly r;
    for (const auto& t : terms_)
      if (t.first[var] == 0) r.terms_.push_back(t);
    return r;
  }

  /// Coefficients with respect to `var`, index = exponent of var.
  std::vector<MultiPoly> coefficients_in(std::size_t var) const {
    std::vector<MultiPoly> out(degree(var) + 1);
    for (const auto& [m, c] : terms_) {
      Monomial mm = m;
      mm[var] = 0;
      out[m[var]].terms_.push_back({mm, c});
    }
    for (auto& p : out) p.normalize();
    return out;
  }

  /// Leading coefficient with respect to `var` (a polynomial free of var).
  MultiPoly lead_in(std::size_t var) const {
    std::uint32_t d = degree(var);
    MultiPoly r;
    for (const auto& [m, c] : terms_)
      if (m[var] == d) {
        Monomial mm = m;
        mm[var] = 0;
        r.terms_.push_back({mm, c});
      }
    r.normalize();
    return r;
  }

  /// Applies `f` to each exponent vector; result renormalized.
  template <class F>
  MultiPoly map_monomials(F&& f) const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& [m, c] : terms_) out.push_back({f(m), c});
    return from_terms(std::move(out));
  }

  /// Exact division; throws if `d` does not divide *this.
  MultiPoly exact_div(const MultiPoly& d) const {
    if (d.is_zero()) throw DivisionByZero();
    if (d.is_monomial()) {
      const auto& [dm, dc] = d.terms_[0];
      C inv = Ops::one(dc) / dc;
      return div_monomial(dm).scale(inv);
    }
    const auto& [lm, lc] = d.leading();
    C lc_inv = Ops::one(lc) / lc;
    MultiPoly q, r = *this;
    std::vector<Term> qterms;
    while (!r.is_zero()) {
      const auto& [rm, rc] = r.leading();
      if (!monomial_divides(lm, rm)) throw AlgebraError("inexact polynomial division");
      Monomial qm = monomial_div(rm, lm);
      C qc = rc * lc_inv;
      qterms.push_back({qm, qc});
      r -= d.mul_term(qm, qc);
    }
    q.terms_ = std::move(qterms);
    return q;
  }

  /// Generic evaluation: variable i ↦ values[i], coefficient c ↦ embed(c).
  template <class R, class Embed>
  R evaluate(std::span<const R> values, const R& zero, Embed&& embed) const {
    R acc = zero;
    std::vector<std::vector<R>> powers(values.size());
    for (const auto& [m, c] : terms_) {
      R term = embed(c);
      for (std::size_t i = 0; i < kMaxVars; ++i) {
        if (m[i] == 0) continue;
        if (i >= values.size()) throw AlgebraError("evaluation: missing variable value");
        auto& pw = powers[i];
        if (pw.empty()) pw.push_back(values[i]);
        while (pw.size() < m[i]) pw.push_back(pw.back() * values[i]);
        term = term * pw[m[i] - 1];
      }
      acc = acc + term;
    }
    return acc;
  }

 private:
  void normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return a.first > b.first; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!out.empty() && out.back().first == t.first)
        out.back().second = out.back().second + t.second;
      else
        out.push_back(std::move(t));
    }
    std::erase_if(out, [](const Term& t) { return Ops::is_zero(t.second); });
    terms_ = std::move(out);
  }

  MultiPoly merge(const MultiPoly& o, bool subtract) const {
    MultiPoly r;
    r.terms_.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
      if (j == o.terms_.size() ||
          (i < terms_.size() && terms_[i].first > o.terms_[j].first)) {
        r.terms_.push_back(terms_[i++]);
      } else if (i == terms_.size() || o.terms_[j].first > terms_[i].first) {
        r.terms_.push_back(
            subtract ? Term{o.terms_[j].first, Ops::scale(o.terms_[j].second, -1)}
                     : o.terms_[j]);
        ++j;
      } else {
        C v = terms_[i].second;
        if (subtract)
          v -= o.terms_[j].second;
        else
          v += o.terms_[j].second;
        if (!Ops::is_zero(v)) r.terms_.push_back({terms_[i].first, v});
        ++i;
        ++j;
      }
    }
    return r;
  }

  std::vector<Term> terms_;
};

using PolyFp = MultiPoly<Fp>;

// ---------------------------------------------------------------------------
// GCD over F_p[x_1..x_n]: content / primitive-part recursion, one variable at a
// time, with a primitive pseudo-remainder sequence in the chosen variable.

namespace detail {

inline std::vector<std::size_t> vars_of(const PolyFp& a) {
  std::vector<std::size_t> vs;
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (a.involves(i)) vs.push_back(i);
  return vs;
}

inline PolyFp make_monic(const PolyFp& a) {
  if (a.is_zero()) return a;
  return a.scale(a.leading_coeff().inv());
}

inline PolyFp gcd_rec(PolyFp a, PolyFp b);

inline PolyFp content_in(const PolyFp& a, std::size_t var) {
  auto cs = a.coefficients_in(var);
  PolyFp g;
  for (auto& c : cs) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? c : gcd_rec(g, c);
    if (g.is_constant()) return PolyFp::constant(one_like(a.sample_coeff()));
  }
  return make_monic(g);
}

inline PolyFp prem(PolyFp a, const PolyFp& b, std::size_t var) {
  const std::uint32_t db = b.degree(var);
  const PolyFp lb = b.lead_in(var);
  const Fp one = one_like(b.sample_coeff());
  while (!a.is_zero() && a.degree(var) >= db) {
    const std::uint32_t da = a.degree(var);
    PolyFp la = a.lead_in(var);
    PolyFp shift = PolyFp::term(unit_monomial(var, static_cast<Exponent>(da - db)), one);
    a = lb * a - la * shift * b;
  }
  return a;
}

/// True when gcd(a, b) provably has degree 0 in `var`: both are evaluated at a
/// point of F_q in the other variables, keeping their leading coefficients in
/// `var`, and the images are coprime. A false answer proves nothing.
inline bool image_coprime_in(const PolyFp& a, const PolyFp& b, std::size_t var) {
  const std::uint32_t p = a.sample_coeff().modulus();
  const auto F = ExtensionField::get(p);
  using E = ExtensionField::Elem;
  std::array<std::vector<E>, kMaxVars> powers;
  auto power = [&](std::size_t u, std::size_t e) -> const E& {
    auto& tab = powers[u];
    if (tab.empty()) tab = {F->constant(1), F->sample(0x5EEDull * (u + 1))};
    while (tab.size() <= e) tab.push_back(F->mul(tab.back(), tab[1]));
    return tab[e];
  };
  auto image = [&](const PolyFp& f) {
    std::vector<E> out(f.degree(var) + 1, F->zero());
    for (const auto& [m, c] : f.terms()) {
      E x = F->constant(c.value());
      for (std::size_t u = 0; u < kMaxVars; ++u)
        if (u != var && m[u]) x = F->mul(x, power(u, m[u]));
      out[m[var]] = F->add(out[m[var]], x);
    }
    return out;
  };
  std::vector<E> fa = image(a), fb = image(b);
  if (F->is_zero(fa.back()) || F->is_zero(fb.back())) return false;
  auto trim = [&](std::vector<E>& f) {
    while (!f.empty() && F->is_zero(f.back())) f.pop_back();
  };
  while (!fb.empty()) {
    const E li = F->inv(fb.back());
    while (fa.size() >= fb.size()) {
      const E c = F->mul(fa.back(), li);
      const std::size_t s = fa.size() - fb.size();
      for (std::size_t i = 0; i < fb.size(); ++i) fa[s + i] = F->sub(fa[s + i], F->mul(c, fb[i]));
      trim(fa);
    }
    std::swap(fa, fb);
  }
  return fa.size() == 1;
}

inline PolyFp gcd_rec(PolyFp a, PolyFp b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const Fp one = one_like(a.sample_coeff());
  if (a.is_constant() || b.is_constant()) return PolyFp::constant(one);

  Monomial ma = a.monomial_content(), mb = b.monomial_content(), mg{};
  for (std::size_t i = 0; i < kMaxVars; ++i) mg[i] = std::min(ma[i], mb[i]);
  a = a.div_monomial(ma);
  b = b.div_monomial(mb);
  const PolyFp mono = PolyFp::term(mg, one);
  if (a.is_constant() || b.is_constant()) return mono;

  // Variables private to one side only contribute through contents.
  for (;;) {
    auto va = vars_of(a), vb = vars_of(b);
    bool changed = false;
    for (auto v : va)
      if (!b.involves(v)) {
        a = content_in(a, v);
        changed = true;
        break;
      }
    if (!changed)
      for (auto v : vb)
        if (!a.involves(v)) {
          b = content_in(b, v);
          changed = true;
          break;
        }
    if (a.is_constant() || b.is_constant()) return mono;
    if (!changed) break;
  }

  {
    bool coprime = true;
    for (auto u : vars_of(a))
      if (!image_coprime_in(a, b, u)) {
        coprime = false;
        break;
      }
    if (coprime) return mono;
  }

  // Main variable: the one keeping both degrees smallest.
  std::size_t v = 0, best = SIZE_MAX;
  for (auto u : vars_of(a)) {
    const std::size_t d = std::max(a.degree(u), b.degree(u));
    if (d < best) {
      best = d;
      v = u;
    }
  }
  PolyFp ca = content_in(a, v), cb = content_in(b, v);
  PolyFp c = gcd_rec(ca, cb);
  PolyFp pa = a.exact_div(ca), pb = b.exact_div(cb);
  if (pa.degree(v) < pb.degree(v)) std::swap(pa, pb);
  PolyFp g;
  for (;;) {
    PolyFp r = prem(pa, pb, v);
    if (r.is_zero()) {
      g = pb;
      break;
    }
    if (r.degree(v) == 0) {
      g = PolyFp::constant(one);
      break;
    }
    pa = std::move(pb);
    pb = r.exact_div(content_in(r, v));
  }
  return make_monic(c * g * mono);
}

}  // namespace detail

/// Monic greatest common divisor (leading coefficient 1 in lex order).
inline PolyFp gcd(const PolyFp& a, const PolyFp& b) {
  if (a.is_zero() && b.is_zero()) return {};
  return detail::make_monic(detail::gcd_rec(a, b));
}

}  // namespace cyclift
