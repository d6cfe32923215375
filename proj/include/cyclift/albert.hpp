#pragma once

// Cyclic ascent: given a cyclic E/F of degree p^e with generator sigma, pick
// beta with Tr(beta) = 1, solve sigma(alpha) - alpha = beta^p - beta, and
// adjoin x^p - x = c + alpha with sigma(x) = x + beta. The result is cyclic of
// degree p^{e+1} for every shift c in F.

#include "cyclift/tower.hpp"

namespace cyclift {

class TraceNotZero : public AlgebraError {
 public:
  TraceNotZero() : AlgebraError("hilbert90_solve: trace of the input is not zero") {}
};

/// First Artin-Schreier layer over the base: x^p - x = r, sigma(x) = x + 1.
inline TowerPtr artin_schreier_layer(const TowerPtr& base, const RationalFunction& r,
                                     std::string name = "") {
  return adjoin_as_layer(base, TowerElement::from_base(base, r), TowerElement::constant(base, 1),
                         std::move(name));
}

/// β with Tr(β) = 1, by scanning the monomial basis for a nonzero trace.
inline TowerElement find_trace_one(const TowerPtr& t) {
  require_cyclic(*t);
  for (std::size_t i = 0; i < t->degree(); ++i) {
    TowerElement e = TowerElement::basis(t, i);
    RationalFunction tr = trace(e);
    if (tr.is_zero()) continue;
    TowerElement beta = e.scale(tr.inv());
    if (!trace(beta).is_one()) throw AlgebraError("find_trace_one: postcondition failed");
    return beta;
  }
  // Unreachable for separable extensions: the trace form is nondegenerate.
  throw AlgebraError("find_trace_one: trace vanishes on the whole basis");
}

/// α with σ(α) - α = c, for Tr(c) = 0:
///   α = -Σ_{i<d} c_i σ^i(θ),  c_i = Σ_{j<i} σ^j(c),  Tr(θ) = 1.
inline TowerElement hilbert90_solve(const TowerElement& c) {
  const TowerPtr& t = c.tower();
  require_cyclic(*t);
  if (!trace(c).is_zero()) throw TraceNotZero();
  const TowerElement theta = find_trace_one(t);
  TowerElement alpha = zero_like(c), partial = zero_like(c);
  TowerElement sigma_c = c, sigma_theta = theta;
  for (std::size_t i = 0; i < t->degree(); ++i) {
    if (i > 0) {
      partial += sigma_c;
      sigma_c = sigma_c.sigma();
      sigma_theta = sigma_theta.sigma();
      if (!partial.is_zero()) alpha -= partial * sigma_theta;
    }
  }
  if (alpha.sigma() - alpha != c) throw AlgebraError("hilbert90_solve: postcondition failed");
  return alpha;
}

struct AlbertStep {
  TowerElement beta;   // Tr(β) = 1, becomes the sigma shift of the new layer
  TowerElement alpha;  // σ(α) - α = β^p - β
};

inline AlbertStep albert_prepare(const TowerPtr& t) {
  AlbertStep s;
  s.beta = find_trace_one(t);
  s.alpha = hilbert90_solve(s.beta.artin_schreier());
  return s;
}

struct AlbertAscent {
  AlbertStep step;
  TowerPtr extended;
};

/// Adjoins x^p - x = c + α with σ(x) = x + β and certifies the new σ-order.
inline TowerPtr albert_adjoin(const TowerPtr& t, const AlbertStep& s, const TowerElement& c_plus_alpha,
                              std::string name = "") {
  TowerPtr n = adjoin_as_layer(t, c_plus_alpha, s.beta, std::move(name));
  if (!n->is_cyclic())
    throw NotCyclic("ascended tower has sigma order " + std::to_string(n->sigma_order()));
  return n;
}

inline AlbertAscent albert_ascend(const TowerPtr& t, const RationalFunction& c_shift,
                                  std::string name = "") {
  if (t->height() == 0) throw AlgebraError("albert_ascend: start from an Artin-Schreier layer");
  AlbertAscent a;
  a.step = albert_prepare(t);
  a.extended = albert_adjoin(t, a.step, TowerElement::from_base(t, c_shift) + a.step.alpha, std::move(name));
  return a;
}

}  // namespace cyclift
