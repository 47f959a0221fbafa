#pragma once

#include "ezff/local.hpp"

namespace ezff {

/**
 * The unramified quadratic extension of the completion at a place, with the
 * same uniformizer. Elements are x + y*theta where theta is a fixed unit
 * generator:
 *  - odd residue characteristic: theta^2 = eps, the Teichmuller lift of a
 *    non-square unit of the residue field;
 *  - characteristic 2: theta^2 + theta = eps, the Teichmuller lift of a
 *    residue element of absolute trace 1 (so x^2 + x + eps is irreducible).
 */
struct QuadExt {
  ResidueRing R;
  bool artin_schreier = false;  // true in characteristic 2
  Poly eps;                     // defining constant (Teichmuller lift)

  explicit QuadExt(const ResidueRing& ring);
};

struct QuadElt {
  LocalElement x, y;  // x + y*theta
};

QuadElt quad_from_base(const LocalElement& x);
QuadElt quad_theta(const QuadExt& K);
QuadElt quad_one(const QuadExt& K);

QuadElt quad_add(const QuadExt& K, const QuadElt& a, const QuadElt& b);
QuadElt quad_sub(const QuadExt& K, const QuadElt& a, const QuadElt& b);
QuadElt quad_neg(const QuadExt& K, const QuadElt& a);
QuadElt quad_mul(const QuadExt& K, const QuadElt& a, const QuadElt& b);
QuadElt quad_conj(const QuadExt& K, const QuadElt& a);
LocalElement quad_norm(const QuadExt& K, const QuadElt& a);
QuadElt quad_inv(const QuadExt& K, const QuadElt& a);
QuadElt quad_div(const QuadExt& K, const QuadElt& a, const QuadElt& b);
QuadElt quad_pow(const QuadExt& K, const QuadElt& a, long long e);

// Valuation min(v(x), v(y)) of the unramified extension; nullopt if the
// element is indistinguishable from zero.
std::optional<long> quad_val(const QuadElt& a);
// Is the y-component zero at absolute precision k (i.e. the element lies in
// the base field as far as the precision can tell)?
bool quad_in_base(const QuadExt& K, const QuadElt& a, long k);
bool quad_agree(const QuadExt& K, const QuadElt& a, const QuadElt& b, long k);

std::string quad_to_string(const QuadExt& K, const QuadElt& a);

}  // namespace ezff
