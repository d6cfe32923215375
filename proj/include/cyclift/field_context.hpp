#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cyclift/rational_function.hpp"

namespace cyclift {

/// Describes k = F_p(u_1, ..., u_r) and, when `has_uniformizer`, the valued
/// field K = k(t). Variables u_1..u_r occupy indices 0..r-1 and t sits at index
/// r, so every element of k is also an element of K with no conversion.
struct FieldContext {
  std::uint32_t p = 2;
  std::size_t r = 0;
  bool has_uniformizer = true;

  static FieldContext residue(std::uint32_t p, std::size_t r) { return make(p, r, false); }
  static FieldContext valued(std::uint32_t p, std::size_t r) { return make(p, r, true); }

  std::size_t t_index() const { return r; }
  std::size_t num_vars() const { return r + (has_uniformizer ? 1 : 0); }

  std::vector<std::string> names() const {
    std::vector<std::string> n;
    for (std::size_t i = 0; i < r; ++i) n.push_back("u" + std::to_string(i + 1));
    if (has_uniformizer) n.push_back("t");
    return n;
  }

  RationalFunction zero() const { return RationalFunction(p); }
  RationalFunction one() const { return RationalFunction(1, p); }
  RationalFunction constant(std::int64_t c) const { return RationalFunction(c, p); }
  RationalFunction u(std::size_t i) const {
    if (i < 1 || i > r) throw AlgebraError("variable u" + std::to_string(i) + " not declared");
    return RationalFunction::variable(i - 1, p);
  }
  RationalFunction t() const {
    if (!has_uniformizer) throw AlgebraError("context has no uniformizer");
    return RationalFunction::variable(r, p);
  }

  FieldContext residue_context() const { return make(p, r, false); }
  FieldContext valued_context() const { return make(p, r, true); }

  /// True when x lies in the residue field k (does not involve t).
  bool in_residue_field(const RationalFunction& x) const {
    for (std::size_t v = r; v < kMaxVars; ++v)
      if (x.involves(v)) return false;
    return true;
  }

  bool operator==(const FieldContext&) const = default;

 private:
  static FieldContext make(std::uint32_t p, std::size_t r, bool t) {
    if (!is_prime(p)) throw AlgebraError("characteristic must be prime, got " + std::to_string(p));
    if (r + 1 > kMaxVars) throw AlgebraError("too many variables");
    FieldContext c;
    c.p = p;
    c.r = r;
    c.has_uniformizer = t;
    return c;
  }
};

}  // namespace cyclift
