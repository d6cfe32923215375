#pragma once

// Truncated Witt vectors W_n over a field of characteristic p.
//
// Addition, negation and subtraction are evaluated through universal
// polynomials with integer coefficients. Those are obtained by solving the
// ghost equations w_i(S) = w_i(X) + w_i(Y), where
//
//   w_i(X) = sum_{j=1..i} p^{j-1} X_j^{p^{i-j}},
//
// over the integers (every division by p^{i-1} is exact) and then reduced
// mod p. Variables X_1..X_n are indices 0..n-1, Y_1..Y_n are n..2n-1.

#include <cstdint>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "cyclift/multipoly.hpp"

namespace cyclift {

using BigInt = boost::multiprecision::cpp_int;

template <>
struct CoeffOps<BigInt> {
  static bool is_zero(const BigInt& c) { return c.is_zero(); }
  static BigInt one(const BigInt&) { return 1; }
  static BigInt scale(const BigInt& c, std::int64_t k) { return c * k; }
};

using PolyZ = MultiPoly<BigInt>;

inline constexpr std::size_t kDefaultMaxWittLength = 4;

class WittShapeError : public AlgebraError {
 public:
  using AlgebraError::AlgebraError;
};

inline BigInt big_pow(std::uint32_t p, std::size_t e) {
  BigInt r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= p;
  return r;
}

/// Universal polynomials for W_n in characteristic p.
class GhostCalculus {
 public:
  GhostCalculus(std::uint32_t p, std::size_t n) : p_(p), n_(n) {
    if (!is_prime(p)) throw WittShapeError("Witt vectors need a prime characteristic");
    if (n == 0 || 2 * n > kMaxVars) throw WittShapeError("unsupported Witt length");
    std::vector<PolyZ> gs, gn, gd;
    for (std::size_t i = 1; i <= n; ++i) {
      PolyZ wx = ghost(i, 0), wy = ghost(i, n);
      gs.push_back(wx + wy);
      gn.push_back(-wx);
      gd.push_back(wx - wy);
    }
    sum_ = solve_ghost(gs);
    neg_ = solve_ghost(gn);
    diff_ = solve_ghost(gd);
    reduce_all();
  }

  /// Rebuilds from previously computed integer polynomials (cache load).
  GhostCalculus(std::uint32_t p, std::size_t n, std::vector<PolyZ> sum, std::vector<PolyZ> neg,
                std::vector<PolyZ> diff)
      : p_(p), n_(n), sum_(std::move(sum)), neg_(std::move(neg)), diff_(std::move(diff)) {
    if (sum_.size() != n || neg_.size() != n || diff_.size() != n)
      throw WittShapeError("corrupt Witt polynomial cache");
    reduce_all();
  }

  std::uint32_t p() const { return p_; }
  std::size_t length() const { return n_; }

  /// Ghost component w_i in variables offset..offset+i-1 (1-based i).
  PolyZ ghost(std::size_t i, std::size_t offset) const {
    PolyZ w;
    for (std::size_t j = 1; j <= i; ++j) {
      std::size_t e = 1;
      for (std::size_t k = 0; k < i - j; ++k) e *= p_;
      if (e > 0xFFFF) throw WittShapeError("Witt length too large for exponent range");
      w += PolyZ::term(unit_monomial(offset + j - 1, static_cast<Exponent>(e)), big_pow(p_, j - 1));
    }
    return w;
  }

  const std::vector<PolyZ>& sum_integer() const { return sum_; }
  const std::vector<PolyZ>& neg_integer() const { return neg_; }
  const std::vector<PolyZ>& diff_integer() const { return diff_; }
  const std::vector<PolyFp>& sum() const { return sum_p_; }
  const std::vector<PolyFp>& neg() const { return neg_p_; }
  const std::vector<PolyFp>& diff() const { return diff_p_; }

  PolyFp reduce(const PolyZ& a) const {
    std::vector<PolyFp::Term> t;
    for (const auto& [m, c] : a.terms()) {
      BigInt r = c % p_;
      if (r < 0) r += p_;
      t.push_back({m, Fp(static_cast<std::int64_t>(r), p_)});
    }
    return PolyFp::from_terms(std::move(t));
  }

 private:
  // Components C_1..C_n with w_i(C) = targets[i-1].
  std::vector<PolyZ> solve_ghost(const std::vector<PolyZ>& targets) const {
    std::vector<PolyZ> comps;
    for (std::size_t i = 1; i <= n_; ++i) {
      PolyZ rest = targets[i - 1];
      for (std::size_t j = 1; j < i; ++j) {
        std::size_t e = 1;
        for (std::size_t k = 0; k < i - j; ++k) e *= p_;
        rest -= comps[j - 1].pow(e, BigInt(1)).scale(big_pow(p_, j - 1));
      }
      const BigInt d = big_pow(p_, i - 1);
      std::vector<PolyZ::Term> out;
      for (const auto& [m, c] : rest.terms()) {
        if (c % d != 0) throw AlgebraError("ghost solve: inexact division");
        out.push_back({m, c / d});
      }
      comps.push_back(PolyZ::from_terms(std::move(out)));
    }
    return comps;
  }

  void reduce_all() {
    for (const auto& s : sum_) sum_p_.push_back(reduce(s));
    for (const auto& s : neg_) neg_p_.push_back(reduce(s));
    for (const auto& s : diff_) diff_p_.push_back(reduce(s));
  }

  std::uint32_t p_;
  std::size_t n_;
  std::vector<PolyZ> sum_, neg_, diff_;
  std::vector<PolyFp> sum_p_, neg_p_, diff_p_;
};

namespace detail {

inline void write_polys(std::ostream& os, const char* tag, const std::vector<PolyZ>& ps) {
  for (std::size_t i = 0; i < ps.size(); ++i) {
    os << tag << ' ' << i << ' ' << ps[i].size() << '\n';
    for (const auto& [m, c] : ps[i].terms()) {
      os << c;
      for (auto e : m) os << ' ' << e;
      os << '\n';
    }
  }
}

inline std::vector<PolyZ> read_polys(std::istream& is, const std::string& tag, std::size_t n) {
  std::vector<PolyZ> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string t;
    std::size_t idx = 0, count = 0;
    if (!(is >> t >> idx >> count) || t != tag || idx != i)
      throw WittShapeError("corrupt Witt polynomial cache");
    std::vector<PolyZ::Term> terms;
    for (std::size_t k = 0; k < count; ++k) {
      std::string cs;
      is >> cs;
      Monomial m{};
      for (auto& e : m) is >> e;
      if (!is) throw WittShapeError("corrupt Witt polynomial cache");
      terms.push_back({m, BigInt(cs)});
    }
    out.push_back(PolyZ::from_terms(std::move(terms)));
  }
  return out;
}

inline std::shared_ptr<const GhostCalculus> load_or_build(std::uint32_t p, std::size_t n) {
  const char* dir = std::getenv("CYCLIFT_WITT_CACHE");
  if (!dir || !*dir) return std::make_shared<const GhostCalculus>(p, n);
  namespace fs = std::filesystem;
  const fs::path file = fs::path(dir) / ("witt_p" + std::to_string(p) + "_n" + std::to_string(n) + ".txt");
  if (std::ifstream in(file); in) {
    try {
      std::string magic;
      std::uint32_t fp = 0;
      std::size_t fn = 0;
      in >> magic >> fp >> fn;
      if (magic == "cyclift-witt-1" && fp == p && fn == n) {
        auto s = read_polys(in, "sum", n);
        auto ng = read_polys(in, "neg", n);
        auto d = read_polys(in, "diff", n);
        return std::make_shared<const GhostCalculus>(p, n, std::move(s), std::move(ng), std::move(d));
      }
    } catch (const WittShapeError&) {
      // fall through and rebuild
    }
  }
  auto g = std::make_shared<const GhostCalculus>(p, n);
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path tmp = file.string() + ".tmp" + std::to_string(reinterpret_cast<std::uintptr_t>(g.get()));
  if (std::ofstream out(tmp); out) {
    out << "cyclift-witt-1 " << p << ' ' << n << '\n';
    write_polys(out, "sum", g->sum_integer());
    write_polys(out, "neg", g->neg_integer());
    write_polys(out, "diff", g->diff_integer());
    out.close();
    fs::rename(tmp, file, ec);
  }
  return g;
}

}  // namespace detail

/// Shared write-once calculus for (p, n). Safe to call concurrently.
inline std::shared_ptr<const GhostCalculus> ghost_calculus(std::uint32_t p, std::size_t n,
                                                           std::size_t max_length = SIZE_MAX) {
  if (n > max_length)
    throw WittShapeError("Witt length " + std::to_string(n) + " exceeds configured bound " +
                         std::to_string(max_length));
  static std::mutex mu;
  static std::map<std::pair<std::uint32_t, std::size_t>, std::shared_ptr<const GhostCalculus>> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find({p, n}); it != cache.end()) return it->second;
  }
  auto built = detail::load_or_build(p, n);
  std::lock_guard lock(mu);
  auto [it, inserted] = cache.emplace(std::pair{p, n}, built);
  return it->second;
}

// ---------------------------------------------------------------------------

/// Witt vector (x_1, ..., x_n) over a ring R of characteristic p.
template <class R>
struct WittVector {
  std::uint32_t p = 2;
  std::vector<R> x;

  std::size_t length() const { return x.size(); }
  bool operator==(const WittVector&) const = default;
};

namespace detail {

template <class R>
R embed_fp(const R& one, const Fp& c) {
  return one.scale(static_cast<std::int64_t>(c.value()));
}

template <class R>
void check_shape(const WittVector<R>& a, const WittVector<R>& b) {
  if (a.p != b.p || a.length() != b.length() || a.length() == 0)
    throw WittShapeError("Witt vectors of different shape");
}

template <class R>
std::vector<R> eval_all(const std::vector<PolyFp>& polys, const std::vector<R>& values, const R& one) {
  const R zero = one - one;
  std::vector<R> out;
  for (const auto& f : polys)
    out.push_back(f.evaluate(std::span<const R>(values), zero,
                             [&](const Fp& c) { return embed_fp(one, c); }));
  return out;
}

}  // namespace detail

template <class R>
WittVector<R> witt_zero(std::uint32_t p, std::size_t n, const R& like) {
  return {p, std::vector<R>(n, zero_like(like))};
}

template <class R>
WittVector<R> witt_add(const WittVector<R>& a, const WittVector<R>& b) {
  detail::check_shape(a, b);
  auto g = ghost_calculus(a.p, a.length());
  std::vector<R> vals = a.x;
  vals.insert(vals.end(), b.x.begin(), b.x.end());
  return {a.p, detail::eval_all(g->sum(), vals, one_like(a.x[0]))};
}

template <class R>
WittVector<R> witt_neg(const WittVector<R>& a) {
  if (a.length() == 0) throw WittShapeError("empty Witt vector");
  auto g = ghost_calculus(a.p, a.length());
  return {a.p, detail::eval_all(g->neg(), a.x, one_like(a.x[0]))};
}

template <class R>
WittVector<R> witt_sub(const WittVector<R>& a, const WittVector<R>& b) {
  detail::check_shape(a, b);
  auto g = ghost_calculus(a.p, a.length());
  std::vector<R> vals = a.x;
  vals.insert(vals.end(), b.x.begin(), b.x.end());
  return {a.p, detail::eval_all(g->diff(), vals, one_like(a.x[0]))};
}

/// Componentwise p-th power.
template <class R>
WittVector<R> witt_frobenius(const WittVector<R>& a) {
  WittVector<R> r = a;
  for (auto& c : r.x) {
    R acc = one_like(c);
    for (std::uint32_t i = 0; i < a.p; ++i) acc = acc * c;
    c = acc;
  }
  return r;
}

/// (x_1, ..., x_n) -> (0, x_1, ..., x_{n-1}).
template <class R>
WittVector<R> verschiebung(const WittVector<R>& a) {
  if (a.length() == 0) throw WittShapeError("empty Witt vector");
  WittVector<R> r = a;
  r.x.insert(r.x.begin(), zero_like(a.x[0]));
  r.x.pop_back();
  return r;
}

// ---------------------------------------------------------------------------
// Artin-Schreier-Witt layer equations.
//
// The relation F(x) = x + omega (Witt sum) splits into layers
//   x_i^p - x_i = g_i(x_1..x_{i-1}; omega_1..omega_i),   g_i = S_i(x, omega) - x_i,
// and the generator of the Galois group acts by x -> x + (1, 0, ..., 0), i.e.
//   sigma(x_i) = x_i + s_i(x_1..x_{i-1}),               s_i = S_i(x, e_1) - x_i.
// Universal forms use X_1..X_m at indices 0..m-1 and W_1..W_m at m..2m-1.

struct ASWLayerSystem {
  std::uint32_t p = 2;
  std::size_t m = 0;
  std::vector<PolyFp> rhs;    // g_i(X, W)
  std::vector<PolyFp> shift;  // s_i(X)
};

inline ASWLayerSystem asw_layer_equations(std::uint32_t p, std::size_t m) {
  auto g = ghost_calculus(p, m);
  ASWLayerSystem sys;
  sys.p = p;
  sys.m = m;
  const Fp one(1, p);
  std::vector<PolyFp> unit_vals;
  for (std::size_t j = 0; j < m; ++j) unit_vals.push_back(PolyFp::variable(j, one));
  unit_vals.push_back(PolyFp::constant(one));
  for (std::size_t j = 1; j < m; ++j) unit_vals.push_back(PolyFp());
  for (std::size_t i = 0; i < m; ++i) {
    const PolyFp xi = PolyFp::variable(i, one);
    sys.rhs.push_back(g->sum()[i] - xi);
    PolyFp s = g->sum()[i].evaluate(std::span<const PolyFp>(unit_vals), PolyFp(),
                                    [](const Fp& c) { return PolyFp::constant(c); });
    sys.shift.push_back(s - xi);
  }
  return sys;
}

/// Layer system bound to a concrete symbol omega over R.
template <class R>
struct ASWSymbolSystem {
  WittVector<R> symbol;
  ASWLayerSystem universal;

  /// g_i evaluated at lower generators x_1..x_{i-1} (more entries are ignored).
  R rhs(std::size_t i, const std::vector<R>& lower, const R& one) const {
    return eval(universal.rhs[i], lower, one, true);
  }
  R shift(std::size_t i, const std::vector<R>& lower, const R& one) const {
    return eval(universal.shift[i], lower, one, false);
  }

 private:
  R eval(const PolyFp& f, const std::vector<R>& lower, const R& one, bool with_symbol) const {
    const std::size_t m = universal.m;
    const R zero = one - one;
    std::vector<R> vals(2 * m, zero);
    for (std::size_t j = 0; j < lower.size() && j < m; ++j) vals[j] = lower[j];
    if (with_symbol)
      for (std::size_t j = 0; j < m; ++j) vals[m + j] = symbol.x[j];
    return f.evaluate(std::span<const R>(vals), zero,
                      [&](const Fp& c) { return detail::embed_fp(one, c); });
  }
};

template <class R>
ASWSymbolSystem<R> asw_layer_equations(const WittVector<R>& omega) {
  if (omega.length() == 0) throw WittShapeError("empty Witt symbol");
  return {omega, asw_layer_equations(omega.p, omega.length())};
}

}  // namespace cyclift
