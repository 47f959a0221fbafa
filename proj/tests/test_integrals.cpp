#include <memory>
#include <stdexcept>

#include "doctest.h"
#include "ezff/integrals.hpp"
#include "test_util.hpp"

using namespace ezff;
using ezff_test::P;

namespace {

Place fplace(int q, const char* s) { return Place::finite(parse_poly(q, s)); }

struct Fixtures {
  std::unique_ptr<QuotientGraph> G2, G3;
  SymbolContext A, B, C;
};

const Fixtures& fixtures() {
  static Fixtures* f = [] {
    auto* out = new Fixtures;
    out->G2 = std::make_unique<QuotientGraph>(
        build_quotient(P(2, "T^3 + T^2 + T"), 5));
    out->G3 =
        std::make_unique<QuotientGraph>(build_quotient(P(3, "T^3 + 2*T"), 5));
    HarmonicCochain fA =
        newform_match(*out->G2, {{fplace(2, "T + 1"), -2}},
                      {{fplace(2, "T"), 1}, {fplace(2, "T^2 + T + 1"), -1}});
    HarmonicCochain fB =
        newform_match(*out->G2, {{fplace(2, "T + 1"), 0}},
                      {{fplace(2, "T"), -1}, {fplace(2, "T^2 + T + 1"), 1}});
    HarmonicCochain fC =
        newform_match(*out->G3, {{fplace(3, "T^2 + 1"), -6}},
                      {{fplace(3, "T"), 1},
                       {fplace(3, "T + 1"), -1},
                       {fplace(3, "T + 2"), -1}});
    out->A = make_symbol_context(fA, fplace(2, "T"));
    out->B = make_symbol_context(fB, fplace(2, "T^2 + T + 1"));
    out->C = make_symbol_context(fC, fplace(3, "T"));
    return out;
  }();
  return *f;
}

BoundaryPoint inf() { return std::nullopt; }
BoundaryPoint pt(int q, const char* s) { return parse_ratfunc(q, s); }

// Small test levels per fixture: enough depth to exercise the machinery
// while q^(L deg pi) stays small.
int lvl(const SymbolContext& s) { return s.p.pi.deg_nonzero() == 1 ? 6 : 4; }

}  // namespace

TEST_CASE("levels and preconditions") {
  const SymbolContext& A = fixtures().A;
  IntegrationContext ctx(A, 16);
  CHECK(default_ball_level(fplace(2, "T")) == 12);
  CHECK(default_ball_level(fplace(2, "T^2 + T + 1")) == 8);

  BoundaryMeasure mu = boundary_measure(A, inf(), pt(2, "0"));
  CHECK_THROWS_AS(mult_integral_t(ctx, mu, 1), std::invalid_argument);
  CHECK_THROWS_AS(double_integral(ctx, quad_theta(ctx.K), quad_theta(ctx.K),
                                  inf(), pt(2, "0"), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(period_I_psi(ctx, 1, PeriodMode::raw),
                  std::invalid_argument);
  auto f = [&](const RatFunc& t) { return embed(ctx.R, t); };
  CHECK_THROWS_AS(mult_integral_ball(ctx, f, mu, RatFunc::zero(2), 3, 3),
                  std::invalid_argument);

  // integration points must have a nonzero theta-component
  QuadElt base = quad_one(ctx.K);
  CHECK_THROWS_AS(double_integral(ctx, base, quad_theta(ctx.K), inf(),
                                  pt(2, "0"), 6),
                  std::invalid_argument);
  CHECK_THROWS_AS(period_I_psi(ctx, 6, PeriodMode::raw, base),
                  std::invalid_argument);

  // a value with a theta-component refuses to pose as a base-field element
  IntegralResult bogus;
  bogus.value = quad_theta(ctx.K);
  CHECK_THROWS_AS(integral_base_value(bogus), std::logic_error);
}

TEST_CASE("the zero measure integrates to one") {
  const SymbolContext& A = fixtures().A;
  IntegrationContext ctx(A, 16);
  BoundaryMeasure zero_mu{[](const RatFunc&, int) { return 0LL; }, true};
  IntegralResult r = mult_integral_t(ctx, zero_mu, 4);
  LocalElement v = integral_base_value(r);
  CHECK(local_agree(ctx.R, v, local_one(ctx.R), 4));

  // equal integration endpoints on the boundary: the measure vanishes
  IntegralResult one = double_integral(ctx, quad_theta(ctx.K),
                                       quad_theta(ctx.K), pt(2, "T"),
                                       pt(2, "T"), 6);
  CHECK(quad_agree(ctx.K, one.value, quad_one(ctx.K), 16));
  CHECK(one.rel_prec == 16);
}

TEST_CASE("a constant integrand yields the measure exponential") {
  for (const SymbolContext* s : {&fixtures().A, &fixtures().C}) {
    IntegrationContext ctx(*s, 16);
    int q = ctx.R.q();
    BoundaryMeasure mu = boundary_measure(*s, inf(), RatFunc::zero(q));
    RatFunc c = parse_ratfunc(q, "T + 1");  // a unit at p = T
    auto f = [&](const RatFunc&) { return embed(ctx.R, c); };
    RatFunc a = RatFunc::zero(q);
    int L = lvl(*s);
    LocalElement got = mult_integral_ball(ctx, f, mu, a, 1, L);
    long long e = mu.ball(a, 1);
    LocalElement want = local_pow(ctx.R, embed(ctx.R, c), e);
    CHECK(local_agree(ctx.R, got, want, 12));
  }
}

TEST_CASE("unit integrals of t agree across measure presentations") {
  // The canonical-residue measure and the two-endpoint measure mu{inf -> 0}
  // present the same distribution on O_p^x, so the integrals coincide.
  for (const SymbolContext* s :
       {&fixtures().A, &fixtures().B, &fixtures().C}) {
    IntegrationContext ctx(*s, 16);
    int L = lvl(*s);
    LocalElement a = integral_base_value(
        mult_integral_t(ctx, teit_boundary_measure(*s), L));
    LocalElement b = integral_base_value(mult_integral_t(
        ctx, boundary_measure(*s, inf(), RatFunc::zero(ctx.R.q())), L));
    CHECK(local_agree(ctx.R, a, b, std::min(L, ctx.R.N)));
  }
}

TEST_CASE("refinement stability: level L and L+1 agree mod pi^L") {
  for (const SymbolContext* s : {&fixtures().A, &fixtures().C}) {
    IntegrationContext ctx(*s, 16);
    int L = lvl(*s);
    BoundaryMeasure mu = teit_boundary_measure(*s);
    LocalElement coarse = integral_base_value(mult_integral_t(ctx, mu, L));
    LocalElement fine = integral_base_value(mult_integral_t(ctx, mu, L + 1));
    CHECK(local_agree(ctx.R, coarse, fine, L));

    IntegralResult rawL = period_I_psi(ctx, L, PeriodMode::raw);
    IntegralResult rawL1 = period_I_psi(ctx, L + 1, PeriodMode::raw);
    long long W = winding_element(*s);
    CHECK(quad_agree(ctx.K, rawL.value, rawL1.value, W + rawL.rel_prec));
  }
}

TEST_CASE("integrals do not depend on the residue representatives") {
  for (const SymbolContext* s : {&fixtures().A, &fixtures().C}) {
    IntegrationContext ctx(*s, 16);
    int q = ctx.R.q();
    int L = lvl(*s);
    BoundaryMeasure mu = boundary_measure(*s, inf(), RatFunc::zero(q));
    RatFunc piL = uniformizer_pow(s->p, L);
    std::mt19937 rng(991);
    auto f1 = [&](const RatFunc& t) { return embed(ctx.R, t); };
    auto f2 = [&](const RatFunc& t) {
      // evaluate at a different representative of t + pi^L O_p
      long shift = (long)(rng() % 7) + 1;
      return embed(ctx.R, t + piL * RatFunc::constant(q, shift % q == 0
                                                             ? 1
                                                             : shift % q));
    };
    RatFunc a = RatFunc::constant(q, 1);
    LocalElement v1 = mult_integral_ball(ctx, f1, mu, a, 1, L);
    LocalElement v2 = mult_integral_ball(ctx, f2, mu, a, 1, L);
    CHECK(local_agree(ctx.R, v1, v2, L));
  }
}

TEST_CASE("integrals transform under the period matrix") {
  // For gamma = diag(pi, 1): the image of the ball a + pi^k O is
  // pi a + pi^{k+1} O, the pushforward measure evaluates through the
  // preimage, and integrating f over the image against the pushforward
  // equals integrating f(pi t) over the source.
  for (const SymbolContext* s : {&fixtures().A, &fixtures().C}) {
    IntegrationContext ctx(*s, 16);
    int q = ctx.R.q();
    int L = lvl(*s);
    BoundaryMeasure mu = boundary_measure(*s, inf(), RatFunc::zero(q));
    RatFunc pi1 = uniformizer_pow(s->p, 1);
    BoundaryMeasure push{[&mu, pi1](const RatFunc& a, int k) {
                           return mu.ball(a / pi1, k - 1);
                         },
                         mu.mass_zero};
    auto f = [&](const RatFunc& t) { return embed(ctx.R, t); };
    auto f_pulled = [&](const RatFunc& t) { return embed(ctx.R, pi1 * t); };
    RatFunc a = RatFunc::constant(q, 1);
    LocalElement lhs =
        mult_integral_ball(ctx, f, push, pi1 * a, 2, L + 1);
    LocalElement rhs = mult_integral_ball(ctx, f_pulled, mu, a, 1, L);
    CHECK(local_agree(ctx.R, lhs, rhs, L));
  }
}

TEST_CASE("double integrals are multiplicative in the integration points") {
  const SymbolContext& C = fixtures().C;
  IntegrationContext ctx(C, 16);
  const QuadExt& K = ctx.K;
  int L = 5;
  BoundaryPoint x = inf(), y = pt(3, "0");
  QuadElt z1 = quad_theta(K);
  QuadElt z2 = quad_add(K, quad_one(K), quad_theta(K));
  QuadElt z3 = quad_add(K, quad_theta(K),
                        quad_mul(K, quad_theta(K), quad_theta(K)));
  IntegralResult a = double_integral(ctx, z1, z2, x, y, L);
  IntegralResult b = double_integral(ctx, z2, z3, x, y, L);
  IntegralResult c = double_integral(ctx, z1, z3, x, y, L);
  QuadElt prod = quad_mul(K, a.value, b.value);
  long long v = quad_val(c.value).value_or(0);
  long rel = std::min({a.rel_prec, b.rel_prec, c.rel_prec});
  CHECK(quad_agree(K, prod, c.value, v + rel));
}

TEST_CASE("double integrals are multiplicative in the boundary endpoints") {
  const SymbolContext& A = fixtures().A;
  IntegrationContext ctx(A, 16);
  const QuadExt& K = ctx.K;
  int L = 6;
  QuadElt z1 = quad_theta(K);
  QuadElt z2 = quad_add(K, quad_one(K), quad_theta(K));
  BoundaryPoint x = inf(), y = pt(2, "0"), w = pt(2, "T + 1");
  IntegralResult a = double_integral(ctx, z1, z2, x, y, L);
  IntegralResult b = double_integral(ctx, z1, z2, y, w, L);
  IntegralResult c = double_integral(ctx, z1, z2, x, w, L);
  QuadElt prod = quad_mul(K, a.value, b.value);
  long long v = quad_val(c.value).value_or(0);
  long rel = std::min({a.rel_prec, b.rel_prec, c.rel_prec});
  CHECK(quad_agree(K, prod, c.value, v + rel));
}

TEST_CASE("the period integral") {
  for (const SymbolContext* s :
       {&fixtures().A, &fixtures().B, &fixtures().C}) {
    IntegrationContext ctx(*s, 16);
    const QuadExt& K = ctx.K;
    const ResidueRing& R = ctx.R;
    int L = lvl(*s);
    long long W = winding_element(*s);
    IntegralResult raw = period_I_psi(ctx, L, PeriodMode::raw);

    // valuation counts the winding element, and the value is rational
    CHECK(quad_val(raw.value).value_or(-1) == W);
    CHECK(quad_in_base(K, raw.value, W + raw.rel_prec));

    // folded annulus evaluation equals the honest general double integral
    QuadElt th = quad_theta(K);
    QuadElt gz = quad_mul(K, quad_from_base(local_pi_pow(R, 1)), th);
    IntegralResult gen =
        double_integral(ctx, th, gz, inf(), RatFunc::zero(R.q()), L);
    CHECK(quad_agree(K, raw.value, gen.value,
                     W + std::min(raw.rel_prec, gen.rel_prec)));

    // the reduced form pi^W * (unit integral of t) gives the same value
    IntegralResult red = period_I_psi(ctx, L, PeriodMode::reduced);
    CHECK(quad_agree(K, raw.value, red.value,
                     W + std::min(raw.rel_prec, red.rel_prec)));

    // the base point is immaterial
    QuadElt shifted = quad_add(K, quad_one(K), th);
    IntegralResult raw2 = period_I_psi(ctx, L, PeriodMode::raw, shifted);
    CHECK(quad_agree(K, raw.value, raw2.value,
                     W + std::min(raw.rel_prec, raw2.rel_prec)));
  }
}

TEST_CASE("tampered measures are caught by the additivity cross-checks") {
  const SymbolContext& A = fixtures().A;
  IntegrationContext ctx(A, 16);
  int q = ctx.R.q();
  BoundaryMeasure mu = boundary_measure(A, inf(), RatFunc::zero(q));
  int L = 5;
  RatFunc marked = RatFunc::constant(q, 1);
  auto inner = mu.ball;
  BoundaryMeasure bad{[inner, marked, L](const RatFunc& a, int k) {
                        long long v = inner(a, k);
                        if (k == L && a == marked) return v + 1;
                        return v;
                      },
                      true};
  CHECK_THROWS_AS(mult_integral_t(ctx, bad, L), std::runtime_error);
  auto f = [&](const RatFunc& t) { return embed(ctx.R, t); };
  CHECK_THROWS_AS(
      mult_integral_ball(ctx, f, bad, RatFunc::constant(q, 1), 1, L),
      std::runtime_error);
}

TEST_CASE("integration is deterministic across fresh contexts") {
  const SymbolContext& A = fixtures().A;
  std::string first, second;
  for (std::string* out : {&first, &second}) {
    IntegrationContext ctx(A, 16);
    IntegralResult qc = mult_integral_t(ctx, teit_boundary_measure(A), 6);
    *out = local_to_string(ctx.R, integral_base_value(qc));
  }
  CHECK(first == second);
  CHECK(!first.empty());
}
