#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace cyclift {

/// Raised for violations of field preconditions (division by zero, mismatched moduli).
class AlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public AlgebraError {
 public:
  DivisionByZero() : AlgebraError("division by zero") {}
};

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Element of F_p with a runtime modulus. The modulus travels with the value so
/// that containers of coefficients stay self-describing.
class Fp {
 public:
  Fp() = default;
  Fp(std::int64_t v, std::uint32_t p) : p_(p) {
    std::int64_t r = v % static_cast<std::int64_t>(p);
    if (r < 0) r += p;
    v_ = static_cast<std::uint32_t>(r);
  }

  std::uint32_t value() const { return v_; }
  std::uint32_t modulus() const { return p_; }
  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }

  Fp operator+(const Fp& o) const { return from_raw((v_ + o.v_) % p_); }
  Fp operator-(const Fp& o) const { return from_raw((v_ + p_ - o.v_) % p_); }
  Fp operator-() const { return from_raw((p_ - v_) % p_); }
  Fp operator*(const Fp& o) const {
    return from_raw(static_cast<std::uint32_t>(
        (static_cast<std::uint64_t>(v_) * o.v_) % p_));
  }
  Fp& operator+=(const Fp& o) { return *this = *this + o; }
  Fp& operator-=(const Fp& o) { return *this = *this - o; }
  Fp& operator*=(const Fp& o) { return *this = *this * o; }

  Fp pow(std::uint64_t e) const {
    Fp base = *this, acc = from_raw(1 % p_);
    while (e) {
      if (e & 1) acc *= base;
      base *= base;
      e >>= 1;
    }
    return acc;
  }

  Fp inv() const {
    if (v_ == 0) throw DivisionByZero();
    return pow(p_ - 2);
  }
  Fp operator/(const Fp& o) const { return *this * o.inv(); }

  Fp scale(std::int64_t c) const { return *this * Fp(c, p_); }

  bool operator==(const Fp& o) const { return v_ == o.v_; }

  friend std::ostream& operator<<(std::ostream& os, const Fp& x) {
    return os << x.v_;
  }

 private:
  Fp from_raw(std::uint32_t v) const {
    Fp r;
    r.v_ = v;
    r.p_ = p_;
    return r;
  }
  std::uint32_t v_ = 0;
  std::uint32_t p_ = 2;
};

inline Fp one_like(const Fp& x) { return Fp(1, x.modulus()); }
inline Fp zero_like(const Fp& x) { return Fp(0, x.modulus()); }

}  // namespace cyclift
