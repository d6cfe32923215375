#pragma once

// Arithmetic in a finite extension F_q = F_p[x]/(f) with q >= 2^20, used to
// evaluate polynomials at points where a small prime field has too few.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace cyclift::detail {

class ExtensionField {
 public:
  static constexpr std::size_t kMaxDegree = 24;
  using Elem = std::array<std::uint32_t, kMaxDegree>;

  explicit ExtensionField(std::uint32_t p) : p_(p) {
    std::uint64_t q = 1;
    k_ = 0;
    while (q < (1u << 20)) {
      q *= p;
      ++k_;
    }
    f_ = find_irreducible();
  }

  static std::shared_ptr<const ExtensionField> get(std::uint32_t p) {
    static std::mutex mu;
    static std::map<std::uint32_t, std::shared_ptr<const ExtensionField>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[p];
    if (!slot) slot = std::make_shared<const ExtensionField>(p);
    return slot;
  }

  std::uint32_t p() const { return p_; }
  std::size_t degree() const { return k_; }

  Elem zero() const { return Elem{}; }
  Elem constant(std::uint32_t c) const {
    Elem e{};
    e[0] = c % p_;
    return e;
  }
  bool is_zero(const Elem& a) const {
    for (std::size_t i = 0; i < k_; ++i)
      if (a[i]) return false;
    return true;
  }

  Elem add(const Elem& a, const Elem& b) const {
    Elem r{};
    for (std::size_t i = 0; i < k_; ++i) r[i] = (a[i] + b[i]) % p_;
    return r;
  }
  Elem sub(const Elem& a, const Elem& b) const {
    Elem r{};
    for (std::size_t i = 0; i < k_; ++i) r[i] = (a[i] + p_ - b[i]) % p_;
    return r;
  }
  Elem mul(const Elem& a, const Elem& b) const {
    std::array<std::uint64_t, 2 * kMaxDegree> t{};
    for (std::size_t i = 0; i < k_; ++i) {
      if (!a[i]) continue;
      for (std::size_t j = 0; j < k_; ++j) t[i + j] = (t[i + j] + std::uint64_t(a[i]) * b[j]) % p_;
    }
    reduce(t);
    Elem r{};
    for (std::size_t i = 0; i < k_; ++i) r[i] = std::uint32_t(t[i]);
    return r;
  }
  Elem pow(Elem a, std::uint64_t e) const {
    Elem r = constant(1);
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  Elem inv(const Elem& a) const {
    std::uint64_t q = 1;
    for (std::size_t i = 0; i < k_; ++i) q *= p_;
    return pow(a, q - 2);
  }

  /// Deterministic pseudo-random element.
  Elem sample(std::uint64_t seed) const {
    Elem e{};
    for (std::size_t i = 0; i < k_; ++i) {
      seed += 0x9E3779B97F4A7C15ull;
      std::uint64_t z = seed;
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
      e[i] = std::uint32_t((z ^ (z >> 31)) % p_);
    }
    return e;
  }

 private:
  using Poly = std::vector<std::uint32_t>;  // over F_p, lowest degree first

  void reduce(std::array<std::uint64_t, 2 * kMaxDegree>& t) const {
    for (std::size_t d = 2 * k_ - 2; d >= k_ && d < 2 * kMaxDegree; --d) {
      const std::uint64_t c = t[d] % p_;
      if (!c) continue;
      t[d] = 0;
      for (std::size_t i = 0; i < k_; ++i) t[d - k_ + i] = (t[d - k_ + i] + (p_ - c) * f_[i]) % p_;
    }
  }

  std::uint32_t inv_p(std::uint32_t a) const {
    std::uint64_t r = 1, b = a, e = p_ - 2;
    while (e) {
      if (e & 1) r = r * b % p_;
      b = b * b % p_;
      e >>= 1;
    }
    return std::uint32_t(r);
  }

  void trim(Poly& a) const {
    while (!a.empty() && a.back() == 0) a.pop_back();
  }

  Poly poly_mod(Poly a, const Poly& b) const {
    trim(a);
    const std::uint32_t li = inv_p(b.back());
    while (a.size() >= b.size()) {
      const std::uint64_t c = std::uint64_t(a.back()) * li % p_;
      const std::size_t s = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[s + i] = std::uint32_t((a[s + i] + (p_ - c) * b[i]) % p_);
      trim(a);
    }
    return a;
  }

  bool coprime(Poly a, Poly b) const {
    trim(a);
    trim(b);
    while (!b.empty()) {
      a = poly_mod(a, b);
      std::swap(a, b);
    }
    return a.size() == 1;
  }

  /// Rabin's test on the monic f = x^k + low.
  bool irreducible(const Poly& low) const {
    ExtensionField probe(*this, low);
    Elem x{};
    if (k_ == 1) return true;
    x[1] = 1;
    std::vector<Elem> frob{x};  // x^{p^j}
    for (std::size_t j = 1; j <= k_; ++j) frob.push_back(probe.pow(frob.back(), p_));
    if (frob[k_] != x) return false;
    Poly f(low.begin(), low.end());
    f.push_back(1);
    for (std::size_t r = 2; r <= k_; ++r) {
      bool prime = true;
      for (std::size_t d = 2; d * d <= r; ++d) prime = prime && r % d;
      if (!prime || k_ % r) continue;
      Elem h = probe.sub(frob[k_ / r], x);
      Poly hp(h.begin(), h.begin() + std::ptrdiff_t(k_));
      if (!coprime(f, hp)) return false;
    }
    return true;
  }

  ExtensionField(const ExtensionField& o, const Poly& low) : p_(o.p_), k_(o.k_) {
    for (std::size_t i = 0; i < k_; ++i) f_[i] = low[i];
  }

  Elem find_irreducible() const {
    Poly low(k_, 0);
    for (std::uint64_t code = 1;; ++code) {
      std::uint64_t c = code;
      for (std::size_t i = 0; i < k_; ++i) {
        low[i] = std::uint32_t(c % p_);
        c /= p_;
      }
      if (c || low[0] == 0) continue;
      if (k_ == 1 || irreducible(low)) {
        Elem f{};
        for (std::size_t i = 0; i < k_; ++i) f[i] = low[i];
        return f;
      }
    }
  }

  std::uint32_t p_;
  std::size_t k_;
  Elem f_{};  // low coefficients of the monic modulus
};

}  // namespace cyclift::detail
