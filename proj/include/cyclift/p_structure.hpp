#pragma once

// p-structure of k = F_p(u_1, ..., u_r): membership in k^p, p-independence
// over k^p, intersections of the subfields k^p(S), and membership in the
// Artin-Schreier image P(k) = {g^p - g}.
//
// Linear algebra over k^p runs over k itself through the Frobenius
// isomorphism: x = sum_f c_f^p u^f (f in {0..p-1}^r) has k^p-coordinates
// c_f^p, and we store the p-th roots c_f.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "cyclift/expression.hpp"
#include "cyclift/linear_algebra.hpp"
#include "cyclift/valued.hpp"

namespace cyclift {

class PIndependenceFailed : public AlgebraError {
 public:
  using AlgebraError::AlgebraError;
};

/// g with g^p = x, when x is a p-th power in F_p(vars).
inline std::optional<RationalFunction> is_pth_power(const RationalFunction& x,
                                                    const FieldContext& ctx) {
  for (std::size_t s = 0; s < ctx.num_vars(); ++s)
    if (!x.derivative(s).is_zero()) return std::nullopt;
  const std::uint32_t p = ctx.p;
  bool ok = true;
  auto root = [&](const Monomial& m) {
    Monomial r{};
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      if (m[i] % p) ok = false;
      r[i] = m[i] / p;
    }
    return r;
  };
  PolyFp n = x.num().map_monomials(root), d = x.den().map_monomials(root);
  if (!ok) return std::nullopt;
  return RationalFunction(n, d, p);
}

/// Number of exponent vectors in {0..p-1}^n.
inline std::size_t p_power(std::uint32_t p, std::size_t n) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < n; ++i) r *= p;
  return r;
}

/// Digit j of index e in base p.
inline std::size_t p_digit(std::size_t e, std::uint32_t p, std::size_t j) {
  for (std::size_t i = 0; i < j; ++i) e /= p;
  return e % p;
}

/// Coordinates of x over k^p in the monomial basis {u^f}, as p-th roots.
inline std::vector<RationalFunction> p_coordinates(const RationalFunction& x,
                                                   const FieldContext& ctx) {
  const std::uint32_t p = ctx.p;
  const std::size_t r = ctx.r;
  if (!ctx.in_residue_field(x)) throw AlgebraError("p-coordinates are taken in the residue field");
  const PolyFp num = x.num() * x.den().pow(p - 1, Fp(1, p));
  std::vector<std::vector<PolyFp::Term>> parts(p_power(p, r));
  for (const auto& [m, c] : num.terms()) {
    std::size_t f = 0, w = 1;
    Monomial q{};
    for (std::size_t s = 0; s < r; ++s) {
      f += (m[s] % p) * w;
      w *= p;
      q[s] = m[s] / p;
    }
    parts[f].push_back({q, c});
  }
  std::vector<RationalFunction> out;
  out.reserve(parts.size());
  for (auto& part : parts)
    out.push_back(RationalFunction(PolyFp::from_terms(std::move(part)), x.den(), p));
  return out;
}

/// prod_j a_j^{e_j}, with e the base-p digits of `index`.
inline RationalFunction p_monomial(const std::vector<RationalFunction>& a, std::size_t index,
                                   std::uint32_t p) {
  RationalFunction acc(1, p);
  for (std::size_t j = 0; j < a.size(); ++j) {
    std::size_t e = p_digit(index, p, j);
    if (e) acc *= a[j].pow(static_cast<std::int64_t>(e));
  }
  return acc;
}

struct PIndependenceCertificate {
  std::vector<RationalFunction> elements;
  bool independent = false;
  std::size_t monomial_rank = 0;   // rank of the p^n monomials over k^p
  std::size_t jacobian_rank = 0;   // rank of (da_j / du_s) over k
  // independent: a nonsingular n x n minor of the Jacobian
  std::vector<std::size_t> minor_columns;
  RationalFunction minor_determinant;
  // dependent: lambda with sum_e lambda_e^p * prod_j a_j^{e_j} = 0
  std::vector<RationalFunction> dependency;
};

inline Matrix<RationalFunction> jacobian(const std::vector<RationalFunction>& a,
                                         const FieldContext& ctx) {
  Matrix<RationalFunction> j(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t s = 0; s < ctx.r; ++s) j[i].push_back(a[i].derivative(s));
  return j;
}

inline RationalFunction jacobian_minor(const std::vector<RationalFunction>& a,
                                       const std::vector<std::size_t>& cols,
                                       const FieldContext& ctx) {
  Matrix<RationalFunction> m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (auto s : cols) m[i].push_back(a[i].derivative(s));
  return determinant(m, ctx.one());
}

/// Matrix whose column e holds the k^p-coordinates of the monomial M_e.
inline Matrix<RationalFunction> monomial_coordinate_matrix(const std::vector<RationalFunction>& a,
                                                           const FieldContext& ctx,
                                                           bool as_columns) {
  const std::size_t count = p_power(ctx.p, a.size());
  std::vector<std::vector<RationalFunction>> vecs;
  for (std::size_t e = 0; e < count; ++e) vecs.push_back(p_coordinates(p_monomial(a, e, ctx.p), ctx));
  if (!as_columns) return vecs;
  const std::size_t dim = vecs.empty() ? 0 : vecs[0].size();
  Matrix<RationalFunction> m(dim, std::vector<RationalFunction>(count, ctx.zero()));
  for (std::size_t e = 0; e < count; ++e)
    for (std::size_t f = 0; f < dim; ++f) m[f][e] = vecs[e][f];
  return m;
}

inline PIndependenceCertificate p_independent(const std::vector<RationalFunction>& a,
                                              const FieldContext& ctx) {
  if (a.empty()) throw AlgebraError("p_independent: empty list");
  for (const auto& x : a) {
    if (x.is_zero()) throw AlgebraError("p_independent: zero element");
    if (!ctx.in_residue_field(x)) throw AlgebraError("p_independent: element outside k");
  }
  const FieldContext k = ctx.residue_context();
  PIndependenceCertificate cert;
  cert.elements = a;
  const std::size_t n = a.size(), count = p_power(k.p, n);

  auto cols = monomial_coordinate_matrix(a, k, true);
  cert.monomial_rank = rank(cols, count, k.one());

  auto jac = row_reduce(jacobian(a, k), k.r, k.one());
  cert.jacobian_rank = jac.pivots.size();

  const bool by_monomials = cert.monomial_rank == count;
  const bool by_jacobian = cert.jacobian_rank == n;
  if (by_monomials != by_jacobian)
    throw AlgebraError("p_independent: monomial and Jacobian verdicts disagree");
  cert.independent = by_monomials;
  if (cert.independent) {
    cert.minor_columns = jac.pivots;
    cert.minor_determinant = jacobian_minor(a, cert.minor_columns, k);
  } else {
    auto ns = nullspace(cols, count, k.one());
    cert.dependency = ns.front();
  }
  return cert;
}

/// Re-checks a certificate from its witness alone.
inline bool verify_p_independence(const PIndependenceCertificate& c, const FieldContext& ctx) {
  const FieldContext k = ctx.residue_context();
  const std::size_t n = c.elements.size();
  if (n == 0) return false;
  if (c.independent) {
    if (c.minor_columns.size() != n || !c.dependency.empty()) return false;
    for (auto s : c.minor_columns)
      if (s >= k.r) return false;
    RationalFunction d = jacobian_minor(c.elements, c.minor_columns, k);
    return !d.is_zero() && d == c.minor_determinant;
  }
  const std::size_t count = p_power(k.p, n);
  if (c.dependency.size() != count || !c.minor_columns.empty()) return false;
  bool any = false;
  RationalFunction sum = k.zero();
  for (std::size_t e = 0; e < count; ++e) {
    if (c.dependency[e].is_zero()) continue;
    any = true;
    sum += c.dependency[e].frobenius() * p_monomial(c.elements, e, k.p);
  }
  return any && sum.is_zero();
}

struct IntersectionReport {
  bool trivial = false;
  std::size_t dim_first = 0, dim_second = 0, dim_sum = 0, dim_intersection = 0;
  std::size_t dim_ambient = 0;
};

/// Whether k^p(S1) ∩ k^p(S2) = k^p, equivalently k(S1^{1/p}) ∩ k(S2^{1/p}) = k.
inline IntersectionReport subfield_intersection_trivial(const std::vector<RationalFunction>& s1,
                                                        const std::vector<RationalFunction>& s2,
                                                        const FieldContext& ctx) {
  std::vector<RationalFunction> all;
  for (const auto* s : {&s1, &s2})
    for (const auto& x : *s)
      if (std::find(all.begin(), all.end(), x) == all.end()) all.push_back(x);
  auto cert = p_independent(all, ctx);
  if (!cert.independent) throw PIndependenceFailed("subfield_intersection_trivial: union is p-dependent");
  const FieldContext k = ctx.residue_context();
  auto r1 = monomial_coordinate_matrix(s1, k, false);
  auto r2 = monomial_coordinate_matrix(s2, k, false);
  const std::size_t dim = r1.empty() ? 0 : r1[0].size();
  IntersectionReport rep;
  rep.dim_ambient = p_power(k.p, all.size());
  rep.dim_first = rank(r1, dim, k.one());
  rep.dim_second = rank(r2, dim, k.one());
  Matrix<RationalFunction> both = r1;
  both.insert(both.end(), r2.begin(), r2.end());
  rep.dim_sum = rank(both, dim, k.one());
  rep.dim_intersection = rep.dim_first + rep.dim_second - rep.dim_sum;
  rep.trivial = rep.dim_intersection == 1;
  return rep;
}

// ---------------------------------------------------------------------------
// Artin-Schreier classes.

enum class ASVerdict { InImage, NotInImage, Undecided };

inline const char* to_string(ASVerdict v) {
  switch (v) {
    case ASVerdict::InImage: return "in-image";
    case ASVerdict::NotInImage: return "not-in-image";
    case ASVerdict::Undecided: return "undecided";
  }
  return "?";
}

struct ASClassCertificate {
  RationalFunction f;
  ASVerdict verdict = ASVerdict::Undecided;
  std::optional<RationalFunction> witness;  // g with g^p - g = f
  // "degree": deg f > 0 coprime to p; "integrality": the polynomial ansatz
  // covering every possible solution is inconsistent; "non-polynomial".
  std::string obstruction;
  std::uint32_t degree = 0;
};

namespace detail {

inline void monomials_up_to(std::size_t r, std::uint32_t bound, std::size_t var, Monomial cur,
                            std::uint32_t used, std::vector<Monomial>& out) {
  if (var == r) {
    out.push_back(cur);
    return;
  }
  for (std::uint32_t e = 0; e + used <= bound; ++e) {
    cur[var] = static_cast<Exponent>(e);
    monomials_up_to(r, bound, var + 1, cur, used + e, out);
  }
}

/// Solves g^p - g = f for polynomial g with deg g <= bound; (c u^e)^p = c u^{pe}
/// over F_p, so the system is F_p-linear in the coefficients of g.
inline std::optional<PolyFp> as_ansatz(const PolyFp& f, const FieldContext& k, std::uint32_t bound) {
  const std::uint32_t p = k.p;
  const Fp one(1, p);
  std::vector<Monomial> unknowns;
  monomials_up_to(k.r, bound, 0, Monomial{}, 0, unknowns);
  std::erase_if(unknowns, [](const Monomial& m) { return monomial_is_one(m); });
  std::vector<PolyFp> columns;
  std::map<Monomial, std::size_t> row_of;
  for (const auto& [m, c] : f.terms()) row_of.emplace(m, row_of.size());
  for (const auto& e : unknowns) {
    Monomial pe{};
    for (std::size_t i = 0; i < kMaxVars; ++i) pe[i] = static_cast<Exponent>(e[i] * p);
    PolyFp col = PolyFp::term(pe, one) - PolyFp::term(e, one);
    for (const auto& [m, c] : col.terms()) row_of.emplace(m, row_of.size());
    columns.push_back(std::move(col));
  }
  const Fp zero(0, p);
  Matrix<Fp> a(row_of.size(), std::vector<Fp>(columns.size(), zero));
  std::vector<Fp> rhs(row_of.size(), zero);
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (const auto& [m, c] : columns[j].terms()) a[row_of[m]][j] = c;
  for (const auto& [m, c] : f.terms()) rhs[row_of[m]] = c;
  auto x = solve(a, rhs, columns.size(), one);
  if (!x) return std::nullopt;
  PolyFp g;
  for (std::size_t j = 0; j < unknowns.size(); ++j) g += PolyFp::term(unknowns[j], (*x)[j]);
  return g;
}

}  // namespace detail

inline ASClassCertificate not_in_AS_image(const RationalFunction& f, const FieldContext& ctx) {
  const FieldContext k = ctx.residue_context();
  if (!ctx.in_residue_field(f)) throw AlgebraError("not_in_AS_image: element outside k");
  ASClassCertificate c;
  c.f = f;
  if (f.is_zero()) {
    c.verdict = ASVerdict::InImage;
    c.witness = k.zero();
    return c;
  }
  if (!f.is_polynomial()) {
    c.verdict = ASVerdict::Undecided;
    c.obstruction = "non-polynomial";
    return c;
  }
  c.degree = f.num().total_degree();
  if (c.degree > 0 && std::gcd(c.degree, k.p) == 1) {
    c.verdict = ASVerdict::NotInImage;
    c.obstruction = "degree";
    return c;
  }
  if (auto g = detail::as_ansatz(f.num(), k, c.degree)) {
    c.verdict = ASVerdict::InImage;
    c.witness = RationalFunction(*g, k.p);
    return c;
  }
  c.verdict = ASVerdict::NotInImage;
  c.obstruction = "integrality";
  return c;
}

inline bool verify_as_class(const ASClassCertificate& c, const FieldContext& ctx) {
  const FieldContext k = ctx.residue_context();
  switch (c.verdict) {
    case ASVerdict::InImage:
      return c.witness && c.witness->pow(k.p) - *c.witness == c.f;
    case ASVerdict::NotInImage:
      if (c.witness || !c.f.is_polynomial() || c.f.is_zero()) return false;
      if (c.degree != c.f.num().total_degree()) return false;
      if (c.obstruction == "degree") return c.degree > 0 && std::gcd(c.degree, k.p) == 1;
      if (c.obstruction == "integrality") return !detail::as_ansatz(c.f.num(), k, c.degree);
      return false;
    case ASVerdict::Undecided:
      return !c.witness && !c.f.is_polynomial() && c.obstruction == "non-polynomial";
  }
  return false;
}

}  // namespace cyclift
