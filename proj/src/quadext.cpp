#include "ezff/quadext.hpp"

#include <stdexcept>

namespace ezff {

namespace {

// Trace of the residue element r from the residue field down to F_p, p the
// characteristic: sum of the p-power conjugates.
Poly absolute_trace(const ResidueRing& R, const Poly& r, int p) {
  int n = 0;
  long long pw = 1;
  while (pw < R.residue_size()) { pw *= p; ++n; }
  Poly acc = Poly::zero(R.q());
  Poly cur = poly_mod(r, R.pi_poly);
  for (int i = 0; i < n; ++i) {
    acc = poly_mod(acc + cur, R.pi_poly);
    cur = pow_mod(cur, p, R.pi_poly);
  }
  return acc;
}

bool residue_is_square(const ResidueRing& R, const Poly& r) {
  long long Q = R.residue_size();
  return pow_mod(r, (Q - 1) / 2, R.pi_poly).is_one();
}

}  // namespace

QuadExt::QuadExt(const ResidueRing& ring) : R(ring) {
  artin_schreier = (R.q() % 2 == 0);
  for (const Poly& r : polys_below(R.q(), R.deg())) {
    if (poly_mod(r, R.pi_poly).is_zero()) continue;  // eps must be a unit
    bool good = artin_schreier ? absolute_trace(R, r, 2).is_one()
                               : !residue_is_square(R, r);
    if (good) {
      eps = teichmuller(R, r);
      return;
    }
  }
  throw std::logic_error("no defining constant found for the quadratic extension");
}

QuadElt quad_from_base(const LocalElement& x) { return QuadElt{x, local_zero()}; }

QuadElt quad_theta(const QuadExt& K) {
  return QuadElt{local_zero(), local_one(K.R)};
}

QuadElt quad_one(const QuadExt& K) {
  return QuadElt{local_one(K.R), local_zero()};
}

QuadElt quad_add(const QuadExt& K, const QuadElt& a, const QuadElt& b) {
  return QuadElt{local_add(K.R, a.x, b.x), local_add(K.R, a.y, b.y)};
}

QuadElt quad_neg(const QuadExt& K, const QuadElt& a) {
  return QuadElt{local_neg(K.R, a.x), local_neg(K.R, a.y)};
}

QuadElt quad_sub(const QuadExt& K, const QuadElt& a, const QuadElt& b) {
  return quad_add(K, a, quad_neg(K, b));
}

QuadElt quad_mul(const QuadExt& K, const QuadElt& a, const QuadElt& b) {
  const ResidueRing& R = K.R;
  LocalElement eps = local_unit(R, K.eps, 0, R.N);
  LocalElement xx = local_mul(R, a.x, b.x);
  LocalElement yy = local_mul(R, a.y, b.y);
  LocalElement xy = local_add(R, local_mul(R, a.x, b.y), local_mul(R, a.y, b.x));
  // theta^2 = eps, or theta^2 = theta + eps in the Artin-Schreier case.
  LocalElement rx = local_add(R, xx, local_mul(R, eps, yy));
  LocalElement ry = K.artin_schreier ? local_add(R, xy, yy) : xy;
  return QuadElt{rx, ry};
}

QuadElt quad_conj(const QuadExt& K, const QuadElt& a) {
  if (K.artin_schreier)  // theta -> theta + 1
    return QuadElt{local_add(K.R, a.x, a.y), a.y};
  return QuadElt{a.x, local_neg(K.R, a.y)};
}

LocalElement quad_norm(const QuadExt& K, const QuadElt& a) {
  QuadElt n = quad_mul(K, a, quad_conj(K, a));
  // The theta-component of a * conj(a) vanishes identically; keep only the
  // base component (the computed y is an inexact zero).
  return n.x;
}

QuadElt quad_inv(const QuadExt& K, const QuadElt& a) {
  LocalElement n = quad_norm(K, a);
  LocalElement ninv = local_inv(K.R, n);
  QuadElt c = quad_conj(K, a);
  return QuadElt{local_mul(K.R, c.x, ninv), local_mul(K.R, c.y, ninv)};
}

QuadElt quad_div(const QuadExt& K, const QuadElt& a, const QuadElt& b) {
  return quad_mul(K, a, quad_inv(K, b));
}

QuadElt quad_pow(const QuadExt& K, const QuadElt& a, long long e) {
  QuadElt base = e < 0 ? quad_inv(K, a) : a;
  unsigned long long k = e < 0 ? (unsigned long long)(-e) : (unsigned long long)e;
  QuadElt r = quad_one(K);
  while (k > 0) {
    if (k & 1) r = quad_mul(K, r, base);
    base = quad_mul(K, base, base);
    k >>= 1;
  }
  return r;
}

std::optional<long> quad_val(const QuadElt& a) {
  auto vx = local_val(a.x), vy = local_val(a.y);
  if (!vx && !vy) return std::nullopt;
  if (!vx) return vy;
  if (!vy) return vx;
  return std::min(*vx, *vy);
}

bool quad_in_base(const QuadExt& K, const QuadElt& a, long k) {
  return local_is_zero_at(K.R, a.y, k);
}

bool quad_agree(const QuadExt& K, const QuadElt& a, const QuadElt& b, long k) {
  return local_agree(K.R, a.x, b.x, k) && local_agree(K.R, a.y, b.y, k);
}

std::string quad_to_string(const QuadExt& K, const QuadElt& a) {
  return "(" + local_to_string(K.R, a.x) + ") + (" +
         local_to_string(K.R, a.y) + ")*theta";
}

}  // namespace ezff
