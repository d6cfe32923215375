#pragma once

#include <cstdint>

#include "cyclift/multipoly.hpp"

namespace cyclift {

/// Element of F_p(x_1, ..., x_n) in canonical form: gcd(num, den) = 1 and the
/// lex-leading coefficient of the denominator is 1. Canonical form makes
/// structural equality coincide with field equality.
class RationalFunction {
 public:
  RationalFunction() = default;
  explicit RationalFunction(std::uint32_t p) : p_(p), den_(PolyFp::constant(Fp(1, p))) {}
  RationalFunction(std::int64_t c, std::uint32_t p)
      : p_(p), num_(PolyFp::constant(Fp(c, p))), den_(PolyFp::constant(Fp(1, p))) {}
  explicit RationalFunction(PolyFp num, std::uint32_t p)
      : p_(p), num_(std::move(num)), den_(PolyFp::constant(Fp(1, p))) {}

  /// Reduces num/den to canonical form.
  RationalFunction(PolyFp num, PolyFp den, std::uint32_t p) : p_(p) {
    if (den.is_zero()) throw DivisionByZero();
    if (num.is_zero()) {
      den_ = PolyFp::constant(Fp(1, p));
      return;
    }
    PolyFp g = gcd(num, den);
    if (!g.is_constant()) {
      num = num.exact_div(g);
      den = den.exact_div(g);
    }
    Fp lc_inv = den.leading_coeff().inv();
    num_ = num.scale(lc_inv);
    den_ = den.scale(lc_inv);
  }

  static RationalFunction variable(std::size_t var, std::uint32_t p) {
    return RationalFunction(PolyFp::variable(var, Fp(1, p)), p);
  }

  std::uint32_t characteristic() const { return p_; }
  const PolyFp& num() const { return num_; }
  const PolyFp& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_constant() && !num_.is_zero() &&
                               num_.leading_coeff().is_one() && den_.is_constant(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool involves(std::size_t var) const { return num_.involves(var) || den_.involves(var); }

  bool operator==(const RationalFunction& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }

  RationalFunction operator-() const { return raw(-num_, den_); }

  RationalFunction operator+(const RationalFunction& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (den_ == o.den_) return RationalFunction(num_ + o.num_, den_, p_);
    if (den_.is_constant()) return raw(num_ * o.den_ + o.num_, o.den_);
    if (o.den_.is_constant()) return raw(num_ + o.num_ * den_, den_);
    PolyFp g = gcd(den_, o.den_);
    if (g.is_constant()) {
      // Coprime denominators: gcd(num, den_ * o.den_) = 1 automatically.
      return raw(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    PolyFp d1 = den_.exact_div(g), d2 = o.den_.exact_div(g);
    return RationalFunction(num_ * d2 + o.num_ * d1, d1 * o.den_, p_);
  }
  RationalFunction operator-(const RationalFunction& o) const { return *this + (-o); }

  RationalFunction operator*(const RationalFunction& o) const {
    if (is_zero() || o.is_zero()) return RationalFunction(p_);
    if (is_constant()) return raw(o.num_.scale(num_.leading_coeff()), o.den_);
    if (o.is_constant()) return raw(num_.scale(o.num_.leading_coeff()), den_);
    // Cross-cancel: gcd(n1 n2, d1 d2) from gcd(n1, d2) and gcd(n2, d1).
    PolyFp g1 = gcd(num_, o.den_), g2 = gcd(o.num_, den_);
    PolyFp n1 = g1.is_constant() ? num_ : num_.exact_div(g1);
    PolyFp d2 = g1.is_constant() ? o.den_ : o.den_.exact_div(g1);
    PolyFp n2 = g2.is_constant() ? o.num_ : o.num_.exact_div(g2);
    PolyFp d1 = g2.is_constant() ? den_ : den_.exact_div(g2);
    return raw(n1 * n2, d1 * d2);
  }

  RationalFunction inv() const {
    if (is_zero()) throw DivisionByZero();
    return raw(den_, num_);
  }
  RationalFunction operator/(const RationalFunction& o) const { return *this * o.inv(); }

  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }

  RationalFunction scale(std::int64_t c) const {
    Fp f(c, p_);
    if (f.is_zero()) return RationalFunction(p_);
    return raw(num_.scale(f), den_);
  }

  RationalFunction pow(std::int64_t e) const {
    if (e < 0) return inv().pow(-e);
    return raw(num_.pow(e, Fp(1, p_)), den_.pow(e, Fp(1, p_)));
  }

  /// x^p, using additivity of the p-th power: each monomial exponent scales by p.
  RationalFunction frobenius() const {
    auto f = [this](const Monomial& m) {
      Monomial r{};
      for (std::size_t i = 0; i < kMaxVars; ++i) {
        std::uint32_t e = std::uint32_t(m[i]) * p_;
        if (e > 0xFFFF) throw AlgebraError("monomial exponent overflow");
        r[i] = static_cast<Exponent>(e);
      }
      return r;
    };
    return raw(num_.map_monomials(f), den_.map_monomials(f));
  }

  /// Partial derivative with respect to `var`.
  RationalFunction derivative(std::size_t var) const {
    PolyFp n = num_.derivative(var) * den_ - num_ * den_.derivative(var);
    return RationalFunction(n, den_ * den_, p_);
  }

 private:
  // Caller guarantees gcd(n, d) = 1.
  RationalFunction raw(PolyFp n, PolyFp d) const {
    RationalFunction r(p_);
    if (d.is_zero()) throw DivisionByZero();
    if (n.is_zero()) return r;
    Fp lc = d.leading_coeff();
    if (!lc.is_one()) {
      Fp li = lc.inv();
      n = n.scale(li);
      d = d.scale(li);
    }
    r.num_ = std::move(n);
    r.den_ = std::move(d);
    return r;
  }

  std::uint32_t p_ = 2;
  PolyFp num_;
  PolyFp den_ = PolyFp::constant(Fp(1, 2));
};

inline RationalFunction one_like(const RationalFunction& x) {
  return RationalFunction(1, x.characteristic());
}
inline RationalFunction zero_like(const RationalFunction& x) {
  return RationalFunction(x.characteristic());
}

}  // namespace cyclift
