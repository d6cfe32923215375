#pragma once

// Expression language shared by the CLI and the JSON artifacts.
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' ['-'] integer)?
//   atom   := integer | identifier | '(' expr ')'
//
// The parser evaluates as it goes, so it runs over any field type that a
// resolver can supply constants and variables for.

#include <cctype>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "cyclift/field_context.hpp"

namespace cyclift {

class ParseError : public AlgebraError {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : AlgebraError(msg + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

template <class R>
struct Resolver {
  std::function<R(std::int64_t)> constant;
  std::function<std::optional<R>(std::string_view)> variable;
};

template <class R>
R power(const R& base, std::int64_t e, const R& one) {
  if (e < 0) return power(base.inv(), -e, one);
  R acc = one, b = base;
  while (e) {
    if (e & 1) acc = acc * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return acc;
}

namespace detail {

template <class R>
class ExprParser {
 public:
  ExprParser(std::string_view text, const Resolver<R>& res) : s_(text), res_(res) {}

  R parse() {
    R v = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError("unexpected character '" + std::string(1, s_[pos_]) + "'", pos_);
    return v;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  R expr() {
    R v = term();
    for (;;) {
      if (eat('+')) v = v + term();
      else if (eat('-')) v = v - term();
      else return v;
    }
  }
  R term() {
    R v = unary();
    for (;;) {
      if (eat('*')) {
        v = v * unary();
      } else if (eat('/')) {
        std::size_t at = pos_;
        R d = unary();
        if (d.is_zero()) throw ParseError("division by zero", at);
        v = v * d.inv();
      } else {
        return v;
      }
    }
  }
  R unary() {
    if (eat('-')) return res_.constant(0) - unary();
    return pow_expr();
  }
  R pow_expr() {
    std::size_t at = pos_;
    R base = atom();
    if (!eat('^')) return base;
    bool neg = eat('-');
    skip();
    std::int64_t e = integer();
    if (neg) {
      if (base.is_zero()) throw ParseError("division by zero", at);
      e = -e;
    }
    return power(base, e, res_.constant(1));
  }
  std::int64_t integer() {
    skip();
    std::size_t start = pos_;
    std::int64_t v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_] - '0');
      if (v > (std::int64_t(1) << 40)) throw ParseError("integer too large", start);
      ++pos_;
    }
    if (start == pos_) throw ParseError("expected integer", start);
    return v;
  }
  R atom() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      R v = expr();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return res_.constant(integer());
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string_view name = s_.substr(start, pos_ - start);
      auto v = res_.variable(name);
      if (!v) throw ParseError("unknown variable '" + std::string(name) + "'", start);
      return *v;
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  std::string_view s_;
  const Resolver<R>& res_;
  std::size_t pos_ = 0;
};

}  // namespace detail

template <class R>
R parse_with(std::string_view text, const Resolver<R>& res) {
  return detail::ExprParser<R>(text, res).parse();
}

/// Resolver over F_p(names...), variable i bound to names[i].
inline Resolver<RationalFunction> rational_resolver(std::uint32_t p,
                                                    std::vector<std::string> names) {
  Resolver<RationalFunction> r;
  r.constant = [p](std::int64_t c) { return RationalFunction(c, p); };
  r.variable = [p, names = std::move(names)](std::string_view n) -> std::optional<RationalFunction> {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return RationalFunction::variable(i, p);
    return std::nullopt;
  };
  return r;
}

inline RationalFunction parse_rational(std::string_view text, std::uint32_t p,
                                       const std::vector<std::string>& names) {
  return parse_with(text, rational_resolver(p, names));
}

inline RationalFunction parse_expression(std::string_view text, const FieldContext& ctx) {
  return parse_rational(text, ctx.p, ctx.names());
}

enum class Domain { PrimeField, Residue, Valued };

inline Domain classify(const RationalFunction& x, const FieldContext& ctx) {
  if (x.is_constant()) return Domain::PrimeField;
  return ctx.in_residue_field(x) ? Domain::Residue : Domain::Valued;
}

// ---------------------------------------------------------------------------
// Canonical printing. Terms in descending lex order, coefficients in [1, p-1],
// and "(N)/(D)" whenever the denominator is not 1.

inline std::string print_monomial(const Monomial& m, const std::vector<std::string>& names) {
  std::string s;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    if (m[i] == 0) continue;
    if (i >= names.size()) throw AlgebraError("printing: variable index without a name");
    if (!s.empty()) s += '*';
    s += names[i];
    if (m[i] > 1) s += '^' + std::to_string(m[i]);
  }
  return s;
}

inline std::string print_poly(const PolyFp& a, const std::vector<std::string>& names) {
  if (a.is_zero()) return "0";
  std::string s;
  for (const auto& [m, c] : a.terms()) {
    if (!s.empty()) s += '+';
    std::string mono = print_monomial(m, names);
    if (mono.empty()) s += std::to_string(c.value());
    else if (c.is_one()) s += mono;
    else s += std::to_string(c.value()) + "*" + mono;
  }
  return s;
}

inline std::string print_rational(const RationalFunction& x, const std::vector<std::string>& names) {
  if (x.is_polynomial()) return print_poly(x.num(), names);
  return "(" + print_poly(x.num(), names) + ")/(" + print_poly(x.den(), names) + ")";
}

inline std::string print(const RationalFunction& x, const FieldContext& ctx) {
  return print_rational(x, ctx.names());
}

/// True when the printed form needs no parentheses as a factor of a product.
inline bool prints_atomic(const RationalFunction& x) {
  return x.is_polynomial() && x.num().size() <= 1;
}

}  // namespace cyclift
