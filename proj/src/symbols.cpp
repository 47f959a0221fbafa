#include "ezff/symbols.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace ezff {

namespace {

// Is r a constant multiple of a (possibly negative) power of pi? Used for
// the determinant condition det(gamma) in F_q^x * pi^Z.
bool const_times_pi_power(const RatFunc& r, const Poly& pi) {
  if (r.is_zero()) return false;
  Poly num = monicize(r.num);
  int a = num.is_one() ? 0 : multiplicity(num, pi);
  Poly pa = Poly::constant(pi.q, 1);
  for (int i = 0; i < a; ++i) pa = pa * pi;
  if (num != pa) return false;
  int b = r.den.is_one() ? 0 : multiplicity(r.den, pi);
  Poly pb = Poly::constant(pi.q, 1);
  for (int i = 0; i < b; ++i) pb = pb * pi;
  return r.den == pb;
}

// Does r lie in F_q[T, 1/pi]? In reduced form the (monic) denominator must
// be a power of pi.
bool pi_power_denominator(const RatFunc& r, const Poly& pi) {
  if (r.den.is_one()) return true;
  int b = multiplicity(r.den, pi);
  Poly pb = Poly::constant(pi.q, 1);
  for (int i = 0; i < b; ++i) pb = pb * pi;
  return r.den == pb;
}

void check_extended_group(const SymbolContext& ctx, const Mat2& g) {
  const Poly& pi = ctx.p.pi;
  for (const RatFunc* r : {&g.a, &g.b, &g.c, &g.d})
    if (!pi_power_denominator(*r, pi))
      throw std::invalid_argument(
          "matrix entry outside F_q[T, 1/pi_p]: " + to_string(*r));
  RatFunc det = mat2_det(g);
  if (det.is_zero() || !const_times_pi_power(det, pi))
    throw std::invalid_argument(
        "matrix determinant is not a constant times a power of pi_p");
  if (!g.c.is_zero() && !divides(ctx.n, g.c.num))
    throw std::invalid_argument(
        "matrix lower-left entry is not divisible by the level cofactor");
}

bool boundary_equal(const BoundaryPoint& x, const BoundaryPoint& y) {
  if (!x || !y) return !x && !y;
  return *x == *y;
}

/**
 * Canonical key of the row (c : d) in P^1(F_q[T]/m). Two rows of
 * determinant-unit integral matrices get equal keys exactly when
 * c d' - c' d = 0 mod m, i.e. when the matrices lie in the same
 * Gamma_0(m)-coset. The key is (g, u d mod m/g) with g = gcd(c, m) monic
 * and u the inverse of c/g modulo m/g; gcd(c/g, m/g) = 1 always, and the
 * second component is invariant under unit scaling of the row.
 */
std::string p1_key(const Poly& m, const Poly& c_in, const Poly& d_in) {
  Poly c = poly_mod(c_in, m);
  if (c.is_zero()) return "Z";
  Poly d = poly_mod(d_in, m);
  Poly g = monicize(gcd(c, m));
  Poly mg = poly_div(m, g);
  Poly u = inv_mod(poly_mod(poly_div(c, g), mg), mg);
  return to_string(g) + "|" + to_string(poly_mod(u * d, mg));
}

/**
 * [g0, g infinity] . c for a determinant-unit matrix g over F_q[T]: the sum
 * of the cochain over the g-translate of the standard apartment through 0
 * and infinity, edges oriented toward g(infinity). The projected path
 * descends one cusp ray, crosses the stored core, and climbs another ray;
 * beyond the stored window the values vanish, so each direction stops after
 * a full window of consecutive outward steps. The degree-sensitive cap
 * turns a non-stabilizing path into an error instead of a silent zero.
 */
long long walk_apartment(const SymbolContext& ctx, const Mat2& g) {
  const QuotientGraph& G = *ctx.G;
  Place vinf = Place::infinite(G.q);
  int window = (int)G.elayers.size();
  int need = std::max(2, window + 2);
  int degs = 0;
  for (const RatFunc* r : {&g.a, &g.b, &g.c, &g.d})
    if (!r->is_zero()) degs = std::max(degs, r->num.deg_nonzero());
  long cap = (long)ctx.cap_factor * (G.m.deg_nonzero() + window + degs + 8);

  RatFunc down = uniformizer_pow(vinf, 1);  // 1/T: one step toward g(0)
  RatFunc up = uniformizer_pow(vinf, -1);   // T: one step toward g(inf)
  long long total = 0;
  for (int dir : {+1, -1}) {
    Mat2 M = g;  // g * diag(pi_inf^k, 1), first column updated per step
    if (dir == -1) {
      M.a = M.a * up;
      M.c = M.c * up;
    }
    int outward = 0;
    int prev_layer = -1;
    long steps = 0;
    while (outward < need) {
      if (++steps > cap)
        throw std::runtime_error(
            "geodesic path did not stabilize within the safety cap");
      ProjectedEdge pe = project_edge(reverse(reduce_matrix(M, vinf)), G);
      total += eval(ctx.c, pe);
      if (pe.layer >= window && prev_layer >= 0 && pe.layer == prev_layer + 1)
        ++outward;
      else
        outward = 0;
      prev_layer = pe.layer;
      const RatFunc& step = (dir == +1) ? down : up;
      M.a = M.a * step;
      M.c = M.c * step;
    }
  }
  return total;
}

long long unimodular_symbol(const SymbolContext& ctx, const Mat2& g) {
  if (!ctx.cache) return walk_apartment(ctx, g);
  if (!g.c.den.is_one() || !g.d.den.is_one())
    throw std::logic_error("unimodular matrix must be integral");
  std::string key = p1_key(ctx.G->m, g.c.num, g.d.num);
  {
    std::lock_guard<std::mutex> lock(ctx.cache->guard);
    auto it = ctx.cache->table.find(key);
    if (it != ctx.cache->table.end()) return it->second;
  }
  long long w = walk_apartment(ctx, g);
  std::lock_guard<std::mutex> lock(ctx.cache->guard);
  ctx.cache->table.emplace(std::move(key), w);
  return w;
}

}  // namespace

BoundaryPoint mobius(const Mat2& g, const BoundaryPoint& t) {
  if (!t) {
    if (g.c.is_zero()) {
      if (g.a.is_zero()) throw std::invalid_argument("singular matrix");
      return std::nullopt;
    }
    return g.a / g.c;
  }
  RatFunc num = g.a * (*t) + g.b;
  RatFunc den = g.c * (*t) + g.d;
  if (den.is_zero()) {
    if (num.is_zero()) throw std::invalid_argument("singular matrix");
    return std::nullopt;
  }
  return num / den;
}

SymbolContext make_symbol_context(const HarmonicCochain& c, const Place& p) {
  if (c.G == nullptr) throw std::invalid_argument("cochain has no graph");
  const QuotientGraph& G = *c.G;
  if (p.is_infinite() || p.q != G.q)
    throw std::invalid_argument("need a finite place of the same field");
  if (multiplicity(G.m, p.pi) != 1)
    throw std::invalid_argument("the level must be exactly divisible by pi_p");
  if ((int)c.values.size() != G.num_edge_orbits())
    throw std::invalid_argument("cochain size does not match the graph");
  if (!is_harmonic(c)) throw std::invalid_argument("cochain is not harmonic");
  SymbolContext ctx;
  ctx.G = &G;
  ctx.c = c;
  ctx.p = p;
  ctx.n = poly_div(G.m, p.pi);
  ctx.cache = std::make_shared<UnimodularCache>();
  return ctx;
}

long long symbol_to_infinity(const SymbolContext& ctx, const RatFunc& r) {
  int q = ctx.G->q;
  // Continued fraction of r: convergents p_i/q_i, seeded at
  // (p_{-2}, q_{-2}) = (0, 1) and (p_{-1}, q_{-1}) = (1, 0), so that
  // [r, inf] telescopes as the sum of [p_i/q_i, p_{i-1}/q_{i-1}]. Pairing
  // consecutive convergents into g_i = (p_i, p_{i-1}; q_i, q_{i-1}), a
  // matrix of unit determinant, each step is -[g_i 0, g_i inf] . c.
  Poly A = r.num, B = r.den;
  Poly pprev2 = Poly::zero(q), qprev2 = Poly::constant(q, 1);
  Poly pprev = Poly::constant(q, 1), qprev = Poly::zero(q);
  long long total = 0;
  do {
    auto [t, rem] = divmod(A, B);
    Poly pcur = t * pprev + pprev2;
    Poly qcur = t * qprev + qprev2;
    Mat2 g{RatFunc::from_poly(pcur), RatFunc::from_poly(pprev),
           RatFunc::from_poly(qcur), RatFunc::from_poly(qprev)};
    total -= unimodular_symbol(ctx, g);
    pprev2 = pprev;
    qprev2 = qprev;
    pprev = pcur;
    qprev = qcur;
    A = B;
    B = rem;
  } while (!B.is_zero());
  return total;
}

long long modular_symbol(const SymbolContext& ctx, const BoundaryPoint& x,
                         const BoundaryPoint& y) {
  if (boundary_equal(x, y)) return 0;
  long long sx = x ? symbol_to_infinity(ctx, *x) : 0;
  long long sy = y ? symbol_to_infinity(ctx, *y) : 0;
  return sx - sy;
}

long long teit_measure(const SymbolContext& ctx, const Poly& a, int k) {
  if (k < 0) throw std::invalid_argument("ball level must be >= 0");
  int bound = k * ctx.p.pi.deg_nonzero();
  if (!a.is_zero() && a.deg_nonzero() >= bound)
    throw std::invalid_argument("ball center is not a canonical residue");
  RatFunc r = RatFunc::from_poly(a) * uniformizer_pow(ctx.p, -k);
  return symbol_to_infinity(ctx, r);
}

long long mu_c_image(const SymbolContext& ctx, const BoundaryPoint& x,
                     const BoundaryPoint& y, const Mat2& gamma) {
  check_extended_group(ctx, gamma);
  if (boundary_equal(x, y)) return 0;
  // The adjugate acts as gamma^{-1} on the boundary (scalars act trivially).
  Mat2 adj{gamma.d, -gamma.b, -gamma.c, gamma.a};
  return -modular_symbol(ctx, mobius(adj, x), mobius(adj, y));
}

long long mu_c_ball(const SymbolContext& ctx, const BoundaryPoint& x,
                    const BoundaryPoint& y, const RatFunc& a, int k) {
  if (!pi_power_denominator(a, ctx.p.pi))
    throw std::invalid_argument(
        "ball center is not representable over F_q[T, 1/pi_p]");
  int q = ctx.p.q;
  Mat2 gamma{uniformizer_pow(ctx.p, k), a, RatFunc::zero(q),
             RatFunc::constant(q, 1)};
  return mu_c_image(ctx, x, y, gamma);
}

long long winding_element(const SymbolContext& ctx) {
  int q = ctx.p.q;
  return mu_c_ball(ctx, std::nullopt, RatFunc::zero(q), RatFunc::zero(q), 0);
}

BoundaryMeasure teit_boundary_measure(const SymbolContext& ctx) {
  BoundaryMeasure out;
  out.mass_zero = false;
  out.ball = [ctx](const RatFunc& a, int k) {
    if (!a.is_poly())
      throw std::invalid_argument(
          "the Teitelbaum measure takes polynomial centers");
    if (k < 0)
      throw std::invalid_argument(
          "the Teitelbaum measure lives on O_p (need k >= 0)");
    Poly pik = Poly::constant(ctx.p.q, 1);
    for (int i = 0; i < k; ++i) pik = pik * ctx.p.pi;
    return teit_measure(ctx, poly_mod(a.num, pik), k);
  };
  return out;
}

BoundaryMeasure boundary_measure(const SymbolContext& ctx,
                                 const BoundaryPoint& x,
                                 const BoundaryPoint& y) {
  BoundaryMeasure out;
  out.mass_zero = true;
  out.ball = [ctx, x, y](const RatFunc& a, int k) {
    return mu_c_ball(ctx, x, y, a, k);
  };
  return out;
}

}  // namespace ezff
