#pragma once

#include <functional>

#include "ezff/local.hpp"
#include "ezff/quadext.hpp"
#include "ezff/symbols.hpp"

namespace ezff {

/**
 * Completion-side state for multiplicative integration at the distinguished
 * place: the residue ring at working precision N together with its
 * unramified quadratic extension. The ball level L and N are independent
 * knobs; results are certified to relative precision min(L, N) (less when a
 * quadratic point sits unusually close to the boundary, see rel_prec).
 */
struct IntegrationContext {
  const SymbolContext* sym = nullptr;
  ResidueRing R;
  QuadExt K;

  IntegrationContext(const SymbolContext& s, int N);
};

// Default ball level: 12 at a degree-1 place, 8 at higher degree.
int default_ball_level(const Place& p);

struct IntegralResult {
  QuadElt value;      // base-valued integrals carry an exact-zero theta part
  int level = 0;      // ball level L used
  long rel_prec = 0;  // certified relative precision of the unit part
};

// The base-field value of a result whose theta-component is exactly zero.
LocalElement integral_base_value(const IntegralResult& r);

/**
 * Multiplicative integral of t over O_p^x against the measure: the product
 * over canonical residues a prime to pi_p with deg a < L deg pi_p of
 * embed(a)^{mu(a + pi_p^L O_p)}. (With one distinguished-place class the
 * fundamental region F_psi of the period is exactly O_p^x, so this is also
 * the F_psi integral.) Exponents are grouped and raised by binary powering;
 * the refinement certificate gives relative precision min(L, N). The
 * measure's additivity across the region is cross-checked and a violation
 * throws.
 */
IntegralResult mult_integral_t(const IntegrationContext& ctx,
                               const BoundaryMeasure& mu, int L);

/**
 * General multiplicative integral of f over the single ball a + pi_p^k O_p,
 * refined into level-L balls (L > k): the product of f(center)^{mu(ball)}
 * over canonical sub-ball centers. Exposed for the algebraic transformation
 * checks (constant integrands, pushforward rule); f receives the exact
 * center and returns a ring element.
 */
LocalElement mult_integral_ball(
    const IntegrationContext& ctx,
    const std::function<LocalElement(const RatFunc&)>& f,
    const BoundaryMeasure& mu, const RatFunc& a, int k, int L);

/**
 * Double multiplicative integral: the product of ((t - z2)/(t - z1))^{mu}
 * over the standard level-L cover of P^1(F_p) against mu_c{x -> y}: level-L
 * balls inside O_p, the annuli pi^{-k} O^x for 1 <= k <= L refined into
 * balls, and a residual ball at infinity whose integrand value is exactly 1.
 * z1 and z2 must have nonzero theta-component (genuinely off P^1(F_p));
 * returns exactly 1 when x == y.
 */
IntegralResult double_integral(const IntegrationContext& ctx,
                               const QuadElt& z1, const QuadElt& z2,
                               const BoundaryPoint& x, const BoundaryPoint& y,
                               int L);

enum class PeriodMode { raw, reduced };

/**
 * The period I_psi for the diagonal embedding with x_psi = infinity,
 * y_psi = 0 and gamma_psi = diag(pi_p, 1):
 *  - raw: the defining double integral from z to gamma_psi z (default
 *    z = theta), sped up by the diag(pi_p, 1)-equivariance of the measure
 *    from infinity to zero (annulus measures coincide with unit-ball
 *    measures, so one measure table serves the whole cover);
 *  - reduced: pi_p^{W_psi} times the multiplicative integral of t over
 *    O_p^x against the same measure.
 * Its valuation is the winding element W_psi. The choice of gamma_psi
 * shifts the period by a root of unity; diag(pi_p, 1) is fixed here.
 */
IntegralResult period_I_psi(const IntegrationContext& ctx, int L,
                            PeriodMode mode);
IntegralResult period_I_psi(const IntegrationContext& ctx, int L,
                            PeriodMode mode, const QuadElt& z);

}  // namespace ezff
