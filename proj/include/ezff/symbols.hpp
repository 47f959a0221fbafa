#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "ezff/cochain.hpp"
#include "ezff/quotient.hpp"
#include "ezff/ratfunc.hpp"
#include "ezff/tree.hpp"

namespace ezff {

/**
 * Lazily filled table of unimodular-symbol values [g0, g infinity] . c,
 * keyed by the class of the bottom row of g in P^1(F_q[T]/m); two
 * unimodular matrices share a key exactly when they lie in the same
 * Gamma_0(m)-coset, so the cached value is well defined. Shared by copies
 * of a context and guarded for concurrent evaluation.
 */
struct UnimodularCache {
  std::mutex guard;
  std::map<std::string, long long> table;
};

// A point of the boundary P^1(F_q(T)); nullopt is the point at infinity.
using BoundaryPoint = std::optional<RatFunc>;

// Moebius action of an invertible exact matrix on a boundary point.
BoundaryPoint mobius(const Mat2& g, const BoundaryPoint& t);

/**
 * Context for modular-symbol evaluation: a harmonic cochain on its quotient
 * graph at level m (the graph lives at the infinite place) together with a
 * distinguished finite place p whose uniformizer divides m exactly once.
 * Immutable after construction; every evaluation below is pure, so disjoint
 * evaluations may run concurrently.
 */
struct SymbolContext {
  const QuotientGraph* G = nullptr;
  HarmonicCochain c;
  Place p;             // distinguished finite place, pi_p || m
  Poly n;              // complementary level factor: m = pi_p * n
  int cap_factor = 4;  // safety multiplier for the path-iteration cap
  std::shared_ptr<UnimodularCache> cache;  // may be null: no memoization
};

SymbolContext make_symbol_context(const HarmonicCochain& c, const Place& p);

/**
 * [r, infinity] . c: the sum of c over the geodesic from r to infinity,
 * edges oriented toward infinity, each edge evaluated through its quotient
 * class. The geodesic is decomposed along the continued fraction of r into
 * unimodular symbols [g0, g infinity] (consecutive convergents pair into a
 * determinant-unit matrix g over F_q[T]), and each of those is summed over
 * the translated standard apartment; the projected image of such a
 * translate crosses the stored core once and then climbs two cusp rays, so
 * iteration in a direction stops after a full window of consecutive
 * outward steps beyond the stored layers (every later value vanishes). A
 * path that fails to stabilize within the safety cap throws instead of
 * returning a silent zero. Unimodular values are memoized per context.
 */
long long symbol_to_infinity(const SymbolContext& ctx, const RatFunc& r);

// [x, y] . c = [x, infinity] . c - [y, infinity] . c;  0 when x == y.
long long modular_symbol(const SymbolContext& ctx, const BoundaryPoint& x,
                         const BoundaryPoint& y);

// The Teitelbaum boundary measure of a canonical residue ball:
// mu(a + pi_p^k O_p) := [a / pi_p^k, infinity] . c.  Requires k >= 0 and
// deg a < k deg pi_p (so a = 0 when k = 0).
long long teit_measure(const SymbolContext& ctx, const Poly& a, int k);

/**
 * mu_c{x->y}(gamma O_p) = -[gamma^{-1} x, gamma^{-1} y] . c for gamma with
 * entries in F_q[T, 1/pi_p], determinant a nonzero constant times a power
 * of pi_p, and lower-left entry divisible by n. Returns 0 when x == y.
 */
long long mu_c_image(const SymbolContext& ctx, const BoundaryPoint& x,
                     const BoundaryPoint& y, const Mat2& gamma);

// mu_c{x->y}(a + pi_p^k O_p): the previous operation with
// gamma = (pi_p^k, a; 0, 1). The center a may carry a pi_p-power
// denominator and k may be any integer.
long long mu_c_ball(const SymbolContext& ctx, const BoundaryPoint& x,
                    const BoundaryPoint& y, const RatFunc& a, int k);

// W_psi = mu_c{infinity->0}(O_p); equals [0, infinity] . c.
long long winding_element(const SymbolContext& ctx);

/**
 * A boundary measure packaged as a ball evaluator:
 * ball(a, k) = measure of a + pi_p^k O_p, an exact integer. The tag records
 * whether the evaluator is defined on all of P^1(F_p) with total mass zero
 * (true for the two-endpoint measures; the Teitelbaum evaluator lives on
 * O_p only).
 */
struct BoundaryMeasure {
  std::function<long long(const RatFunc& a, int k)> ball;
  bool mass_zero = false;
};

// The Teitelbaum measure on O_p; polynomial centers are reduced to their
// canonical residues first.
BoundaryMeasure teit_boundary_measure(const SymbolContext& ctx);

// mu_c{x -> y} on all of P^1(F_p).
BoundaryMeasure boundary_measure(const SymbolContext& ctx,
                                 const BoundaryPoint& x,
                                 const BoundaryPoint& y);

}  // namespace ezff
