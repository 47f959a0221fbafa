#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ezff/ratfunc.hpp"

namespace ezff {

/**
 * Truncated completion O_v / pi^N at a place v of F_q(T), realized as
 * F_q[x]/(pi(x)^N) for a polynomial variable x:
 *  - finite place pi(T): x is T itself, lifts are polynomials of degree
 *    < N * deg(pi);
 *  - infinite place: x is s = 1/T, pi(x) = s, and a polynomial f(T) of
 *    degree n embeds as s^{-n} * rev(f)(s) with rev the coefficient
 *    reversal.
 *
 * Elements of the field completion are tracked as LocalElement values:
 * val + unit * precision, with a zero sentinel for quantities that are
 * indistinguishable from zero at the working precision.
 */
struct ResidueRing {
  Place v;
  int N = 0;      // precision exponent: ring is O_v / pi^N
  Poly pi_poly;   // uniformizer in the local variable
  Poly modulus;   // pi_poly^N

  ResidueRing() = default;
  ResidueRing(const Place& place, int N);

  int q() const { return v.q; }
  int deg() const { return v.degree(); }          // residue field degree
  long long residue_size() const { return v.residue_size(); }
  std::string var_name() const { return v.is_infinite() ? "s" : "T"; }

  Poly reduce(const Poly& a) const { return poly_mod(a, modulus); }
  Poly reduce(const Poly& a, int k) const;        // mod pi^k, k <= N
  bool is_unit(const Poly& a) const;              // nonzero mod pi
  Poly pi_pow(int k) const;                       // pi^k, 0 <= k <= N
};

struct LocalElement {
  // zero == true: the element is congruent to 0 mod pi^val (val is then an
  // absolute precision bound); exact additionally certifies it is exactly 0.
  bool zero = true;
  bool exact = true;
  long val = 0;
  int prec = 0;   // known pi-adic digits of the unit part (zero == false)
  Poly unit;      // unit part, a unit of the ring, reduced mod pi^prec

  long abs_prec() const { return zero ? val : val + prec; }
};

// --- construction ---------------------------------------------------------

LocalElement local_zero();                               // exact zero
LocalElement local_inexact_zero(long abs_prec);          // O(pi^abs_prec)
LocalElement local_unit(const ResidueRing& R, Poly u, long val, int prec);
LocalElement local_one(const ResidueRing& R);
LocalElement local_from_int(const ResidueRing& R, long long n);
// pi^k as an element (unit 1, valuation k).
LocalElement local_pi_pow(const ResidueRing& R, long k);
// Exact rational function, correct to the ring's full precision.
LocalElement embed(const ResidueRing& R, const RatFunc& f);
inline LocalElement embed(const ResidueRing& R, const Poly& f) {
  return embed(R, RatFunc::from_poly(f));
}

// --- arithmetic ------------------------------------------------------------

LocalElement local_add(const ResidueRing& R, const LocalElement& a,
                       const LocalElement& b);
LocalElement local_neg(const ResidueRing& R, const LocalElement& a);
LocalElement local_sub(const ResidueRing& R, const LocalElement& a,
                       const LocalElement& b);
LocalElement local_mul(const ResidueRing& R, const LocalElement& a,
                       const LocalElement& b);
LocalElement local_inv(const ResidueRing& R, const LocalElement& a);
LocalElement local_div(const ResidueRing& R, const LocalElement& a,
                       const LocalElement& b);
LocalElement local_pow(const ResidueRing& R, const LocalElement& a, long long e);

// --- predicates ------------------------------------------------------------

// a is congruent to 0 mod pi^k (as far as its precision can tell; throws if
// the precision of a cannot certify anything at level k).
bool local_is_zero_at(const ResidueRing& R, const LocalElement& a, long k);
// a and b agree modulo pi^k.
bool local_agree(const ResidueRing& R, const LocalElement& a,
                 const LocalElement& b, long k);
// Valuation, if the element is distinguishable from zero.
std::optional<long> local_val(const LocalElement& a);

// --- display ----------------------------------------------------------------

// Digits of the unit part: residue-field representatives (deg < deg(v)),
// lowest first, prec of them.
std::vector<Poly> local_digits(const ResidueRing& R, const LocalElement& a);
std::string local_to_string(const ResidueRing& R, const LocalElement& a);

// --- multiplicative structure ----------------------------------------------

// Multiplicative order of the residue of u in the residue field; u must be a
// unit of the ring.
int residue_order(const ResidueRing& R, const Poly& u);
// The Teichmuller representative congruent to the unit u mod pi: the unique
// root of x^(Q-1) = 1 (Q the residue field size) with the same residue.
Poly teichmuller(const ResidueRing& R, const Poly& u);

struct RootOfUnity {
  int order;   // multiplicative order (divides Q - 1)
  Poly value;  // the Teichmuller representative, reduced mod pi^N
};

// Decide whether x (a unit, valuation 0) is a root of unity: compares x with
// the Teichmuller lift of its residue through the precision of x (at least
// min_prec digits required, else nullopt).
std::optional<RootOfUnity> detect_root_of_unity(const ResidueRing& R,
                                                const LocalElement& x,
                                                int min_prec);

}  // namespace ezff
