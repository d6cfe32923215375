#pragma once

// The t-adic valuation on K = k(t), its residue map onto k, and truncated
// Laurent expansions inside k((t)).

#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "cyclift/field_context.hpp"

namespace cyclift {

/// Integer valuation or +∞.
class Valuation {
 public:
  constexpr Valuation() = default;
  constexpr explicit Valuation(std::int64_t v) : v_(v), inf_(false) {}
  static constexpr Valuation infinity() {
    Valuation r;
    r.inf_ = true;
    return r;
  }

  constexpr bool is_infinite() const { return inf_; }
  constexpr std::int64_t value() const {
    if (inf_) throw AlgebraError("valuation is infinite");
    return v_;
  }

  constexpr Valuation operator+(const Valuation& o) const {
    if (inf_ || o.inf_) return infinity();
    return Valuation(v_ + o.v_);
  }
  constexpr Valuation operator-() const {
    if (inf_) throw AlgebraError("negating infinite valuation");
    return Valuation(-v_);
  }

  constexpr bool operator==(const Valuation& o) const {
    return inf_ == o.inf_ && (inf_ || v_ == o.v_);
  }
  constexpr std::strong_ordering operator<=>(const Valuation& o) const {
    if (inf_ && o.inf_) return std::strong_ordering::equal;
    if (inf_) return std::strong_ordering::greater;
    if (o.inf_) return std::strong_ordering::less;
    return v_ <=> o.v_;
  }
  constexpr bool operator==(std::int64_t o) const { return !inf_ && v_ == o; }
  constexpr std::strong_ordering operator<=>(std::int64_t o) const {
    return *this <=> Valuation(o);
  }

  std::string str() const { return inf_ ? std::string("inf") : std::to_string(v_); }

 private:
  std::int64_t v_ = 0;
  bool inf_ = true;
};

inline Valuation valuation(const RationalFunction& x, std::size_t t_var) {
  if (x.is_zero()) return Valuation::infinity();
  return Valuation(std::int64_t(x.num().order(t_var)) - std::int64_t(x.den().order(t_var)));
}

class NegativeValuation : public AlgebraError {
 public:
  explicit NegativeValuation(const Valuation& v)
      : AlgebraError("residue of element with negative valuation " + v.str()) {}
};

/// Image in k under the residue map of O_K.
inline RationalFunction residue(const RationalFunction& x, std::size_t t_var) {
  const Valuation v = valuation(x, t_var);
  if (v < 0) throw NegativeValuation(v);
  if (v > 0) return zero_like(x);
  // v = 0 and the fraction is reduced, so neither side is divisible by t.
  return RationalFunction(x.num().at_zero(t_var), x.den().at_zero(t_var), x.characteristic());
}

/// Element of K carrying its cached t-adic valuation.
class ValuedElement {
 public:
  ValuedElement(RationalFunction value, const FieldContext& ctx)
      : value_(std::move(value)), t_(ctx.t_index()), v_(cyclift::valuation(value_, t_)) {
    if (!ctx.has_uniformizer) throw AlgebraError("valued element needs a uniformizer");
  }

  const RationalFunction& value() const { return value_; }
  Valuation valuation() const { return v_; }
  bool is_integral() const { return v_ >= 0; }
  bool is_unit() const { return v_ == 0; }
  RationalFunction residue() const { return cyclift::residue(value_, t_); }

 private:
  RationalFunction value_;
  std::size_t t_;
  Valuation v_;
};

struct LaurentExpansion {
  std::int64_t start = 0;                 // exponent of the first coefficient
  std::vector<RationalFunction> coeffs;   // coefficients of t^start, t^(start+1), ...
  std::size_t precision = 0;              // number of known terms
  bool zero = false;                      // element is exactly zero
};

/// First n_terms coefficients of the t-adic expansion of x; start = v(x).
inline LaurentExpansion laurent_expand(const RationalFunction& x, std::size_t t_var,
                                       std::size_t n_terms) {
  LaurentExpansion out;
  out.precision = n_terms;
  if (x.is_zero()) {
    out.zero = true;
    return out;
  }
  const std::uint32_t p = x.characteristic();
  out.start = valuation(x, t_var).value();
  const auto n = x.num().div_monomial(unit_monomial(t_var, x.num().order(t_var)))
                     .coefficients_in(t_var);
  const auto d = x.den().div_monomial(unit_monomial(t_var, x.den().order(t_var)))
                     .coefficients_in(t_var);
  auto coeff = [p](const std::vector<PolyFp>& v, std::size_t j) {
    return j < v.size() ? RationalFunction(v[j], p) : RationalFunction(p);
  };
  const RationalFunction d0_inv = coeff(d, 0).inv();
  for (std::size_t j = 0; j < n_terms; ++j) {
    RationalFunction c = coeff(n, j);
    for (std::size_t i = 1; i <= j && i < d.size(); ++i) c -= coeff(d, i) * out.coeffs[j - i];
    out.coeffs.push_back(c * d0_inv);
  }
  return out;
}

/// Re-sums a truncated expansion as an element of K.
inline RationalFunction laurent_sum(const LaurentExpansion& e, std::size_t t_var,
                                    std::uint32_t p) {
  RationalFunction acc(p);
  const RationalFunction t = RationalFunction::variable(t_var, p);
  for (std::size_t j = 0; j < e.coeffs.size(); ++j)
    acc += e.coeffs[j] * t.pow(e.start + static_cast<std::int64_t>(j));
  return acc;
}

inline RationalFunction frobenius(const RationalFunction& x) { return x.frobenius(); }

}  // namespace cyclift
