#include "ezff/integrals.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

namespace ezff {

namespace {

// Visit all polynomials with digit-length n (degree < n) in a fixed
// lexicographic odometer order, lowest coefficient fastest.
template <typename Fn>
void for_each_poly_below(int q, int n, Fn&& fn) {
  std::vector<int> digits(n, 0);
  while (true) {
    fn(Poly(q, digits));
    int i = 0;
    while (i < n && ++digits[i] == q) {
      digits[i] = 0;
      ++i;
    }
    if (i == n) break;
  }
}

// Working-precision control. In a purely multiplicative accumulation the
// relative error of a product is the worst relative error of its factors,
// so every factor and accumulator may be truncated to the certified
// relative budget plus a few guard digits without touching any certified
// digit; this keeps the digit maps small when the ring precision is much
// larger than what the level can certify.
constexpr long kGuardDigits = 3;

LocalElement local_rel_truncate(const ResidueRing& R, LocalElement a,
                                long r) {
  if (a.zero || a.prec <= r) return a;
  if (r < 1) return local_inexact_zero(a.val);
  a.prec = (int)r;
  a.unit = R.reduce(a.unit, (int)r);
  return a;
}

LocalElement local_abs_truncate(const ResidueRing& R, LocalElement a,
                                long t) {
  if (a.zero) {
    if (!a.exact && a.val > t) a.val = t;
    return a;
  }
  if (a.val >= t) return local_inexact_zero(t);
  return local_rel_truncate(R, a, t - a.val);
}

QuadElt quad_abs_truncate(const QuadExt& K, QuadElt a, long t) {
  a.x = local_abs_truncate(K.R, a.x, t);
  a.y = local_abs_truncate(K.R, a.y, t);
  return a;
}

QuadElt quad_rel_truncate(const QuadExt& K, QuadElt a, long r) {
  std::optional<long> v = quad_val(a);
  if (!v) return a;
  return quad_abs_truncate(K, a, *v + r);
}

// Grouped multiplicative accumulators: factors sharing an exponent are
// multiplied together first and each group is raised once at the end.
// `budget` is the relative precision carried through the products.
struct BaseGroups {
  long budget;
  std::map<long long, LocalElement> g;
  explicit BaseGroups(long b) : budget(b) {}
  void push(const ResidueRing& R, long long e, const LocalElement& f) {
    if (e == 0) return;
    auto it = g.try_emplace(e, local_one(R)).first;
    it->second = local_rel_truncate(R, local_mul(R, it->second, f), budget);
  }
  LocalElement product(const ResidueRing& R) const {
    LocalElement out = local_one(R);
    for (const auto& [e, f] : g) out = local_mul(R, out, local_pow(R, f, e));
    return out;
  }
};

struct QuadGroups {
  long budget;
  std::map<long long, QuadElt> g;
  explicit QuadGroups(long b) : budget(b) {}
  void push(const QuadExt& K, long long e, const QuadElt& f) {
    if (e == 0) return;
    auto it = g.try_emplace(e, quad_one(K)).first;
    it->second = quad_rel_truncate(K, quad_mul(K, it->second, f), budget);
  }
  QuadElt product(const QuadExt& K) const {
    QuadElt out = quad_one(K);
    for (const auto& [e, f] : g) out = quad_mul(K, out, quad_pow(K, f, e));
    return out;
  }
};

long theta_depth(const QuadElt& z) {
  std::optional<long> v = local_val(z.y);
  if (!v)
    throw std::invalid_argument(
        "quadratic point has zero theta-component (lies on P^1(F_p))");
  return std::max(0L, *v);
}

bool boundary_same(const BoundaryPoint& x, const BoundaryPoint& y) {
  if (!x || !y) return !x && !y;
  return *x == *y;
}

}  // namespace

IntegrationContext::IntegrationContext(const SymbolContext& s, int N)
    : sym(&s), R(s.p, N), K(R) {}

int default_ball_level(const Place& p) { return p.degree() == 1 ? 12 : 8; }

LocalElement integral_base_value(const IntegralResult& r) {
  if (!(r.value.y.zero && r.value.y.exact))
    throw std::logic_error("integral value has a theta-component");
  return r.value.x;
}

IntegralResult mult_integral_t(const IntegrationContext& ctx,
                               const BoundaryMeasure& mu, int L) {
  if (L < 2) throw std::invalid_argument("ball level must be at least 2");
  const ResidueRing& R = ctx.R;
  const Poly& pi = ctx.sym->p.pi;
  int q = R.q(), d = R.deg();

  BaseGroups groups(std::min((long)L, (long)R.N) + kGuardDigits);
  long long mass = 0;
  for_each_poly_below(q, L * d, [&](const Poly& a) {
    if (poly_mod(a, pi).is_zero()) return;  // only residues prime to pi
    long long e = mu.ball(RatFunc::from_poly(a), L);
    mass += e;
    if (e != 0) groups.push(R, e, embed(R, a));
  });

  // additivity cross-check: the same region at level 2
  long long coarse = 0;
  for_each_poly_below(q, 2 * d, [&](const Poly& a) {
    if (poly_mod(a, pi).is_zero()) return;
    coarse += mu.ball(RatFunc::from_poly(a), 2);
  });
  if (mass != coarse)
    throw std::runtime_error("measure additivity violated on O_p^x");

  IntegralResult out;
  out.value = quad_from_base(groups.product(R));
  out.level = L;
  out.rel_prec = std::min((long)L, (long)R.N);
  return out;
}

LocalElement mult_integral_ball(
    const IntegrationContext& ctx,
    const std::function<LocalElement(const RatFunc&)>& f,
    const BoundaryMeasure& mu, const RatFunc& a, int k, int L) {
  if (L <= k) throw std::invalid_argument("need refinement level L > k");
  const ResidueRing& R = ctx.R;
  int q = R.q(), d = R.deg();
  RatFunc pik = uniformizer_pow(ctx.sym->p, k);

  BaseGroups groups((long)R.N + kGuardDigits);
  long long mass = 0;
  for_each_poly_below(q, (L - k) * d, [&](const Poly& b) {
    RatFunc center = a + pik * RatFunc::from_poly(b);
    long long e = mu.ball(center, L);
    mass += e;
    if (e != 0) groups.push(R, e, f(center));
  });
  if (mass != mu.ball(a, k))
    throw std::runtime_error("measure additivity violated on the ball");
  return groups.product(R);
}

namespace {

// Shared core of the double integrals: the standard cover of P^1(F_p) with
// exponent(center-of-ball) supplied by the caller (honest per-ball measure
// for the general case; a folded table for the period).
IntegralResult double_integral_core(
    const IntegrationContext& ctx, const QuadElt& z1, const QuadElt& z2,
    const std::function<long long(const Poly&, bool, int)>& exponent,
    const std::function<long long()>& outer_mass, int L) {
  const ResidueRing& R = ctx.R;
  const QuadExt& K = ctx.K;
  int q = R.q(), d = R.deg();
  const Poly& pi = ctx.sym->p.pi;
  long depth = std::max(theta_depth(z1), theta_depth(z2));
  if (L - depth < 1)
    throw std::invalid_argument(
        "precision budget exceeded: quadratic points too close to P^1(F_p)");

  long budget = (L - depth) + kGuardDigits;
  QuadGroups numg(budget), deng(budget);
  QuadElt w1 = quad_abs_truncate(K, z1, depth + budget);
  QuadElt w2 = quad_abs_truncate(K, z2, depth + budget);
  long long mass = 0;

  // level-L balls inside O_p
  for_each_poly_below(q, L * d, [&](const Poly& a) {
    long long e = exponent(a, false, 0);
    mass += e;
    if (e == 0) return;
    QuadElt t = quad_from_base(embed(R, a));
    numg.push(K, e, quad_sub(K, t, w2));
    deng.push(K, e, quad_sub(K, t, w1));
  });

  // annuli pi^{-k} O^x refined into balls of radius exponent L - k
  for (int k = 1; k <= L; ++k) {
    LocalElement pik = local_pi_pow(R, -k);
    for_each_poly_below(q, L * d, [&](const Poly& u) {
      if (poly_mod(u, pi).is_zero()) return;
      long long e = exponent(u, true, k);
      mass += e;
      if (e == 0) return;
      QuadElt t = quad_from_base(local_mul(R, embed(R, u), pik));
      numg.push(K, e, quad_sub(K, t, w2));
      deng.push(K, e, quad_sub(K, t, w1));
    });
  }

  // The residual ball at infinity contributes the factor 1^mu = 1; its
  // measure still participates in the additivity cross-check, whose other
  // side is the measure of pi^{-L} O_p (what the cover tiles).
  if (mass != outer_mass())
    throw std::runtime_error("measure additivity violated across the cover");

  IntegralResult out;
  out.value = quad_div(K, numg.product(K), deng.product(K));
  out.level = L;
  out.rel_prec = std::min((long)L - depth, (long)R.N);
  return out;
}

}  // namespace

IntegralResult double_integral(const IntegrationContext& ctx,
                               const QuadElt& z1, const QuadElt& z2,
                               const BoundaryPoint& x, const BoundaryPoint& y,
                               int L) {
  if (L < 2) throw std::invalid_argument("ball level must be at least 2");
  if (boundary_same(x, y)) {
    IntegralResult out;
    out.value = quad_one(ctx.K);
    out.level = L;
    out.rel_prec = ctx.R.N;
    return out;
  }
  BoundaryMeasure mu = boundary_measure(*ctx.sym, x, y);
  const Place& p = ctx.sym->p;
  auto exponent = [&](const Poly& a, bool annulus, int k) -> long long {
    RatFunc center = RatFunc::from_poly(a);
    if (annulus) center = center * uniformizer_pow(p, -k);
    return mu.ball(center, annulus ? L - k : L);
  };
  auto outer_mass = [&]() { return mu.ball(RatFunc::zero(p.q), -L); };
  return double_integral_core(ctx, z1, z2, exponent, outer_mass, L);
}

IntegralResult period_I_psi(const IntegrationContext& ctx, int L,
                            PeriodMode mode, const QuadElt& z) {
  if (L < 2) throw std::invalid_argument("ball level must be at least 2");
  const ResidueRing& R = ctx.R;
  const QuadExt& K = ctx.K;
  const SymbolContext& sym = *ctx.sym;
  int q = R.q(), d = R.deg();
  BoundaryPoint inf = std::nullopt;
  BoundaryPoint zero = RatFunc::zero(q);
  BoundaryMeasure mu = boundary_measure(sym, inf, zero);

  if (mode == PeriodMode::reduced) {
    IntegralResult inner = mult_integral_t(ctx, mu, L);
    long long W = winding_element(sym);
    IntegralResult out;
    out.value = quad_from_base(
        local_mul(R, local_pi_pow(R, W), integral_base_value(inner)));
    out.level = L;
    out.rel_prec = inner.rel_prec;
    return out;
  }

  // raw mode: one measure table serves the interior and, through the
  // diag(pi_p, 1)-equivariance of mu_c{infinity -> 0}, every annulus.
  std::vector<long long> table;
  std::size_t count = 1;
  for (int i = 0; i < L * d; ++i) count *= (std::size_t)q;
  table.reserve(count);
  for_each_poly_below(q, L * d, [&](const Poly& a) {
    table.push_back(mu.ball(RatFunc::from_poly(a), L));
  });

  QuadElt z2 = quad_mul(K, quad_from_base(local_pi_pow(R, 1)), z);
  const Poly& pi = sym.p.pi;
  long depth = std::max(theta_depth(z), theta_depth(z2));
  if (L - depth < 1)
    throw std::invalid_argument(
        "precision budget exceeded: quadratic points too close to P^1(F_p)");

  long budget = (L - depth) + kGuardDigits;
  QuadGroups numg(budget), deng(budget);
  QuadElt w1 = quad_abs_truncate(K, z, depth + budget);
  QuadElt w2 = quad_abs_truncate(K, z2, depth + budget);
  long long mass = 0;
  std::size_t i = 0;
  for_each_poly_below(q, L * d, [&](const Poly& a) {
    long long e = table[i++];
    mass += e;
    if (e == 0) return;
    QuadElt t = quad_from_base(embed(R, a));
    numg.push(K, e, quad_sub(K, t, w2));
    deng.push(K, e, quad_sub(K, t, w1));
  });
  for (int k = 1; k <= L; ++k) {
    LocalElement pik = local_pi_pow(R, -k);
    i = 0;
    for_each_poly_below(q, L * d, [&](const Poly& u) {
      long long e = table[i++];
      if (poly_mod(u, pi).is_zero()) return;
      mass += e;
      if (e == 0) return;
      QuadElt t = quad_from_base(local_mul(R, embed(R, u), pik));
      numg.push(K, e, quad_sub(K, t, w2));
      deng.push(K, e, quad_sub(K, t, w1));
    });
  }
  if (mass != mu.ball(RatFunc::zero(q), -L))
    throw std::runtime_error("measure additivity violated across the cover");

  IntegralResult out;
  out.value = quad_div(K, numg.product(K), deng.product(K));
  out.level = L;
  out.rel_prec = std::min((long)L - depth, (long)R.N);
  return out;
}

IntegralResult period_I_psi(const IntegrationContext& ctx, int L,
                            PeriodMode mode) {
  return period_I_psi(ctx, L, mode, quad_theta(ctx.K));
}

}  // namespace ezff
