#pragma once

#include <string>

#include "ezff/local.hpp"
#include "ezff/ratfunc.hpp"

namespace ezff {

/**
 * An elliptic curve over F_q(T) in long Weierstrass form
 *   y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6,
 * together with its declared bad-reduction data: the distinguished finite
 * place p where the curve is split multiplicative, and the prime-to-p part n
 * of the finite conductor.  The declaration is validated (valuation checks,
 * reduction types, eigenform matching downstream), never trusted.
 */
struct EllipticCurve {
  RatFunc a1, a2, a4;  // grouped by parity of the Weierstrass weight
  RatFunc a3, a6;
  Place p;  // declared split-multiplicative place
  Poly n;   // declared prime-to-p finite conductor part, coprime to p

  int field_size() const { return a1.field_size(); }
  Poly level() const;  // pi_p * n
};

/** The characteristic-independent Weierstrass formulary. */
struct CurveQuantities {
  RatFunc b2, b4, b6, b8;
  RatFunc c4, c6;
  RatFunc disc;  // nonzero; curve_quantities throws otherwise
  RatFunc j;     // c4^3 / disc
};

CurveQuantities curve_quantities(const EllipticCurve& E);

enum class ReductionType {
  good,
  split_multiplicative,
  nonsplit_multiplicative,
  additive_or_unknown,  // reported, never silently coerced
};

struct ReductionReport {
  ReductionType type = ReductionType::additive_or_unknown;
  long m = 0;  // -v(j) for the multiplicative types, else 0
};

/**
 * Reduction type of E at the place v (finite or infinite), decided on the
 * v-content-scaled model: good needs v(disc) = 0 there; multiplicative needs
 * v(j) < 0 with v(disc) = -v(j); split versus nonsplit is read off the
 * tangent-cone quadratic at the node of the reduced curve.  Anything else is
 * additive_or_unknown.
 */
ReductionReport reduction_check(const EllipticCurve& E, const Place& v);

/**
 * #E(k_Q) for a place Q of good reduction, by enumeration of the residue
 * field (plus the point at infinity); residue degree capped at 3.
 */
long long point_count(const EllipticCurve& E, const Place& Q);

/** a_Q = |k_Q| + 1 - #E(k_Q); the Hasse bound is asserted. */
long long a_value(const EllipticCurve& E, const Place& Q);

/** The Tate parameter data at a split multiplicative place. */
struct TatePeriod {
  long m_p = 0;          // = v_p(q_E) = -v_p(j)
  LocalElement q_E;      // Tate parameter, j(q_E) = j mod pi^N
  LocalElement q_tilde;  // unit part q_E / pi^{m_p}
};

/** Requires reduction_check(E, p) to report split multiplicative. */
TatePeriod tate_period(const EllipticCurve& E, const Place& p, int N);

// --- fixture files -----------------------------------------------------------
//
// Key-value text, one `key = value` per line, # comments allowed:
//   q  = 2
//   a1 = 1
//   ...
//   a6 = T^2+T
//   p  = T            (monic irreducible)
//   n  = T^2+T+1      (polynomial, coprime to p)
// Omitted a-coefficients default to 0.

EllipticCurve parse_curve_fixture(const std::string& text);
EllipticCurve load_curve_fixture(const std::string& path);
std::string curve_fixture_to_string(const EllipticCurve& E);

}  // namespace ezff
