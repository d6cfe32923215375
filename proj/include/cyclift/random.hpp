#pragma once

// Seeded generators of small random field elements, for probes and property tests.
// Integer draws use `%` on the raw 64-bit stream so sequences agree across
// standard libraries.

#include <cstdint>
#include <random>

#include "cyclift/field_context.hpp"
#include "cyclift/tower.hpp"

namespace cyclift {

class ElementSampler {
 public:
  struct Shape {
    std::size_t max_terms = 3;
    std::uint32_t max_degree = 2;
    std::uint32_t max_pole = 0;  // numerator may be divided by t^j, j <= max_pole
    bool rational = false;       // also draw a (nonzero) random denominator
  };

  explicit ElementSampler(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : rng_() % n; }

  PolyFp polynomial(const FieldContext& ctx, const Shape& s, bool allow_t = true) {
    PolyFp out;
    const std::size_t terms = 1 + below(s.max_terms);
    const std::size_t vars = allow_t ? ctx.num_vars() : ctx.r;
    for (std::size_t i = 0; i < terms; ++i) {
      Monomial m{};
      for (std::size_t v = 0; v < vars; ++v) m[v] = static_cast<std::uint16_t>(below(s.max_degree + 1));
      Fp c(1 + below(ctx.p - 1), ctx.p);
      out = out + PolyFp::term(m, c);
    }
    return out;
  }

  /// Nonzero element of the base field (k, or K when the context has t).
  RationalFunction base_element(const FieldContext& ctx, const Shape& s) {
    for (;;) {
      PolyFp n = polynomial(ctx, s);
      if (n.is_zero()) continue;
      RationalFunction x(n, ctx.p);
      if (s.rational) {
        PolyFp d = polynomial(ctx, s);
        if (d.is_zero()) continue;
        x = x / RationalFunction(d, ctx.p);
      }
      if (ctx.has_uniformizer && s.max_pole > 0) x = x * ctx.t().pow(-std::int64_t(below(s.max_pole + 1)));
      return x;
    }
  }

  /// Residue-field element (no t).
  RationalFunction residue_element(const FieldContext& ctx, const Shape& s) {
    for (;;) {
      PolyFp n = polynomial(ctx, s, false);
      if (!n.is_zero()) return RationalFunction(n, ctx.p);
    }
  }

  /// Tower element whose coefficients are sparse random base elements; nonzero.
  TowerElement tower_element(const TowerPtr& t, const Shape& s, double density = 0.5) {
    for (;;) {
      Coeffs c = t->zero(t->height());
      for (auto& x : c)
        if (below(1000) < static_cast<std::uint64_t>(density * 1000)) x = base_element(t->base(), s);
      if (!Tower::is_zero(c)) return {t, std::move(c)};
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace cyclift
