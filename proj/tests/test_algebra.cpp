#include "doctest.h"
#include "ezff/poly.hpp"
#include "ezff/ratfunc.hpp"

#include <stdexcept>

using namespace ezff;

TEST_CASE("prime field scalar arithmetic") {
  CHECK(fq_add(5, 3, 4) == 2);
  CHECK(fq_sub(5, 1, 3) == 3);
  CHECK(fq_mul(7, 3, 5) == 1);
  CHECK(fq_neg(5, 0) == 0);
  CHECK(fq_neg(5, 2) == 3);
  for (int q : {2, 3, 5, 7, 13}) {
    for (int a = 1; a < q; ++a) {
      CHECK(fq_mul(q, a, fq_inv(q, a)) == 1);
      CHECK(fq_pow(q, a, q - 1) == 1);  // Fermat
    }
  }
  CHECK_THROWS_AS(fq_inv(5, 0), std::invalid_argument);
}

TEST_CASE("polynomial normal form and basic arithmetic") {
  Poly z = Poly::zero(2);
  CHECK(z.is_zero());
  CHECK(!z.degree().has_value());
  CHECK_THROWS_AS(z.deg_nonzero(), std::invalid_argument);

  Poly t = Poly::var(2);
  Poly one = Poly::constant(2, 1);
  CHECK((t + t).is_zero());  // char 2
  Poly sq = (t + one) * (t + one);
  CHECK(sq == Poly(2, {1, 0, 1}));  // (T+1)^2 = T^2 + 1 over F_2

  // Trailing-zero stripping after cancellation.
  Poly a(3, {1, 2, 1});
  Poly b(3, {0, 1, 1});
  CHECK((a - a).is_zero());
  CHECK((a + scale(a, 2)).is_zero());
  CHECK((a * b).deg_nonzero() == 4);
  CHECK(eval(a * b, 2) == fq_mul(3, eval(a, 2), eval(b, 2)));
}

TEST_CASE("division with remainder: frozen example and random identity") {
  // T^3 = (T+1)(T^2+T+1) + 1 over F_2.
  Poly t3 = shift(Poly::constant(2, 1), 3);
  auto [quot, rem] = divmod(t3, Poly(2, {1, 1}));
  CHECK(quot == Poly(2, {1, 1, 1}));
  CHECK(rem == Poly::constant(2, 1));

  for (int q : {2, 3, 5}) {
    for (const Poly& aa : polys_below(q, 4))
      for (const Poly& bb : monic_polys(q, 2)) {
        auto [qt, r] = divmod(aa, bb);
        CHECK(aa == qt * bb + r);
        if (!r.is_zero()) CHECK(r.deg_nonzero() < bb.deg_nonzero());
      }
  }
}

TEST_CASE("gcd, extended gcd, and modular inverse") {
  Poly t = Poly::var(2);
  Poly t2t = Poly(2, {0, 1, 1});  // T^2 + T = T(T+1)
  CHECK(gcd(t2t, t) == t);
  CHECK(gcd(t2t, Poly(2, {1, 1})) == Poly(2, {1, 1}));
  CHECK(gcd(Poly::zero(3), Poly::zero(3)).is_zero());

  // inverse of T modulo T+1 over F_2 is 1 (T = (T+1) + 1).
  CHECK(inv_mod(t, Poly(2, {1, 1})) == Poly::constant(2, 1));
  CHECK_THROWS_AS(inv_mod(t, t2t), std::invalid_argument);

  for (int q : {2, 3}) {
    for (const Poly& aa : polys_below(q, 3))
      for (const Poly& bb : polys_below(q, 3)) {
        if (aa.is_zero() && bb.is_zero()) continue;
        auto r = xgcd(aa, bb);
        CHECK(r.g == gcd(aa, bb));
        CHECK(r.g == aa * r.x + bb * r.y);
      }
  }

  // pow_mod sanity: Fermat for the residue field F_4 = F_2[T]/(T^2+T+1).
  Poly m(2, {1, 1, 1});
  for (const Poly& u : polys_below(2, 2)) {
    if (u.is_zero()) continue;
    CHECK(pow_mod(u, 3, m).is_one());
  }
}

static bool brute_force_irreducible(const Poly& f) {
  int n = f.deg_nonzero();
  if (n < 1) return false;
  for (int d = 1; 2 * d <= n; ++d)
    for (const Poly& g : monic_polys(f.q, d))
      if (divides(g, f)) return false;
  return true;
}

TEST_CASE("irreducibility matches trial division up to degree 4") {
  for (int q : {2, 3}) {
    for (int d = 1; d <= 4; ++d)
      for (const Poly& f : monic_polys(q, d))
        CHECK(is_irreducible(f) == brute_force_irreducible(f));
  }
  // Counts of monic irreducibles over F_2: 2, 1, 2, 3 in degrees 1..4.
  auto irr = irreducible_monics(2, 4);
  CHECK(irr.size() == 8);
  CHECK(is_irreducible(Poly(3, {1, 0, 1})));   // T^2 + 1 over F_3
  CHECK(!is_irreducible(Poly(2, {1, 0, 1})));  // (T+1)^2 over F_2
}

TEST_CASE("polynomial printing and parsing round-trip") {
  Poly f(3, {1, 2, 0, 1});
  CHECK(to_string(f) == "T^3 + 2*T + 1");
  CHECK(parse_poly(3, to_string(f)) == f);
  CHECK(parse_poly(2, "T") == Poly::var(2));
  CHECK(parse_poly(5, "0") == Poly::zero(5));
  CHECK(parse_poly(2, " T^2 + T + 1 ") == Poly(2, {1, 1, 1}));
  for (int q : {2, 3, 5}) {
    for (const Poly& g : polys_below(q, 4)) CHECK(parse_poly(q, to_string(g)) == g);
  }
  CHECK_THROWS_AS(parse_poly(2, "2*T"), std::invalid_argument);   // 2 not in F_2
  CHECK_THROWS_AS(parse_poly(3, "T - 1"), std::invalid_argument); // no minus
  CHECK_THROWS_AS(parse_poly(3, "3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_poly(3, "TT"), std::invalid_argument);
  CHECK_THROWS_AS(parse_poly(3, "2T"), std::invalid_argument);    // needs '*'
}

TEST_CASE("rational functions canonicalize and obey field axioms") {
  RatFunc half(Poly::constant(3, 1), Poly::constant(3, 2));
  CHECK(half.den.is_one());  // denominator made monic: 1/2 = 2/1 over F_3
  CHECK(half.num == Poly::constant(3, 2));

  RatFunc f(Poly(2, {0, 0, 1}), Poly(2, {0, 1}));  // T^2/T -> T
  CHECK(f.is_poly());
  CHECK(f.num == Poly::var(2));

  RatFunc invT = inverse(RatFunc::var(2));
  RatFunc invT1(Poly::constant(2, 1), Poly(2, {1, 1}));
  RatFunc s = invT + invT1;  // 1/T + 1/(T+1) = 1/(T^2+T) over F_2
  CHECK(s == RatFunc(Poly::constant(2, 1), Poly(2, {0, 1, 1})));
  CHECK((s - s).is_zero());
  CHECK(s * inverse(s) == RatFunc::constant(2, 1));
  CHECK_THROWS_AS(inverse(RatFunc::zero(2)), std::invalid_argument);
  CHECK_THROWS_AS(RatFunc(Poly::var(2), Poly::zero(2)), std::invalid_argument);
}

TEST_CASE("places and valuations") {
  auto places = enumerate_places(2, 2);
  REQUIRE(places.size() == 4);
  CHECK(places[0] == Place::finite(Poly(2, {0, 1})));      // T
  CHECK(places[1] == Place::finite(Poly(2, {1, 1})));      // T+1
  CHECK(places[2] == Place::finite(Poly(2, {1, 1, 1})));   // T^2+T+1
  CHECK(places[3].is_infinite());
  CHECK(places[2].degree() == 2);
  CHECK(places[2].residue_size() == 4);
  CHECK_THROWS_AS(Place::finite(Poly(2, {1, 0, 1})), std::invalid_argument);

  // f = (T+1)^2 / (T^3+T+1): valuations 2, -1, and deg-based 1 at infinity.
  RatFunc f(Poly(2, {1, 0, 1}), Poly(2, {1, 1, 0, 1}));
  Place vT = Place::finite(Poly(2, {0, 1}));
  Place vT1 = Place::finite(Poly(2, {1, 1}));
  Place vC = Place::finite(Poly(2, {1, 1, 0, 1}));
  Place vinf = Place::infinite(2);
  CHECK(valuation(f, vT) == 0);
  CHECK(valuation(f, vT1) == 2);
  CHECK(valuation(f, vC) == -1);
  CHECK(valuation(f, vinf) == 1);
  CHECK(!valuation(RatFunc::zero(2), vT).has_value());

  // Product formula: sum of deg(v) * val_v(f) over all places is 0.
  long total = 0;
  for (const Place& v : enumerate_places(2, 3)) total += v.degree() * *valuation(f, v);
  CHECK(total == 0);

  // Valuation is additive under multiplication wherever both are finite.
  RatFunc g = parse_ratfunc(3, "(T^2 + 1)/(T + 2)");
  RatFunc h = parse_ratfunc(3, "T/(T^2 + 1)");
  for (const Place& v : enumerate_places(3, 2)) {
    CHECK(*valuation(g * h, v) == *valuation(g, v) + *valuation(h, v));
  }
}

TEST_CASE("rational function parsing") {
  CHECK(parse_ratfunc(2, "T^2 + 1") == RatFunc::from_poly(Poly(2, {1, 0, 1})));
  CHECK(parse_ratfunc(2, "(T^2 + 1)/(T + 1)") ==
        RatFunc::from_poly(Poly(2, {1, 1})));  // reduces
  CHECK(parse_ratfunc(3, "1/T") == inverse(RatFunc::var(3)));
  CHECK(parse_ratfunc(3, "(2*T + 1)/(T^2 + T)") ==
        RatFunc(Poly(3, {1, 2}), Poly(3, {0, 1, 1})));
  CHECK_THROWS_AS(parse_ratfunc(2, "1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_ratfunc(2, "1/T/T"), std::invalid_argument);
  CHECK_THROWS_AS(parse_ratfunc(2, "(T"), std::invalid_argument);
  for (int q : {2, 3}) {
    for (const Poly& n : polys_below(q, 3))
      for (const Poly& d : monic_polys(q, 2)) {
        RatFunc r(n, d);
        CHECK(parse_ratfunc(q, to_string(r)) == r);
      }
  }
}
