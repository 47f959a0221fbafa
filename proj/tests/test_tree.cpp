#include "doctest.h"
#include "ezff/tree.hpp"

#include <stdexcept>
#include <vector>

using namespace ezff;

namespace {

Place pT2() { return Place::finite(Poly(2, {0, 1})); }
Place pT3() { return Place::finite(Poly(3, {0, 1})); }

Mat2 mat(int q, const char* a, const char* b, const char* c, const char* d) {
  return Mat2{parse_ratfunc(q, a), parse_ratfunc(q, b), parse_ratfunc(q, c),
              parse_ratfunc(q, d)};
}

}  // namespace

TEST_CASE("pi-adic expansions of rational functions") {
  // 1/(T^2+T) = T^-1 + 1 + T + T^2 + ... over F_2 at the place (T).
  PiExpansion u = expansion_of(parse_ratfunc(2, "1/(T^2 + T)"), pT2(), 3);
  REQUIRE(u.size() == 4);
  for (int e : {-1, 0, 1, 2}) CHECK(u.at(e).is_one());

  // At infinity: T^2 + 1 = s^-2 + 1.
  Place inf = Place::infinite(2);
  PiExpansion w = expansion_of(parse_ratfunc(2, "T^2 + 1"), inf, 2);
  REQUIRE(w.size() == 2);
  CHECK(w.at(-2).is_one());
  CHECK(w.at(0).is_one());
  CHECK(expansion_value(2, w, inf) == parse_ratfunc(2, "T^2 + 1"));

  // Round trip: value agrees with the input mod pi^n.
  for (const Place& v : {pT2(), Place::finite(Poly(2, {1, 1, 1})), inf}) {
    for (const char* s : {"T", "1/T", "(T + 1)/(T^2 + T + 1)", "T^3", "1/(T^3 + T)"}) {
      RatFunc r = parse_ratfunc(2, s);
      for (int n : {-2, 0, 1, 4}) {
        PiExpansion e = expansion_of(r, v, n);
        RatFunc diff = r - expansion_value(2, e, v);
        auto val = valuation(diff, v);
        CHECK((!val.has_value() || *val >= n));
      }
    }
  }
}

TEST_CASE("matrix reduction normal forms") {
  Place v = pT2();
  CHECK(reduce_matrix(mat(2, "1", "0", "0", "1"), v) == base_edge(v));
  // diag(pi^2, 1) is the base-axis edge at level 2.
  OrientedEdge e2 = reduce_matrix(mat(2, "T^2", "0", "0", "1"), v);
  CHECK(e2.n == 2);
  CHECK(e2.u.empty());
  CHECK(e2.family == EdgeFamily::main);
  // (0, 1; pi, 0) is the reversed base edge.
  OrientedEdge r0 = reduce_matrix(mat(2, "0", "1", "T", "0"), v);
  CHECK(r0 == reverse(base_edge(v)));

  // A matrix with a tail: (pi^2, 1 + pi; 0, 1).
  OrientedEdge et = reduce_matrix(mat(2, "T^2", "T + 1", "0", "1"), v);
  CHECK(et.n == 2);
  CHECK(et.family == EdgeFamily::main);
  REQUIRE(et.u.size() == 2);
  CHECK(et.u.at(0).is_one());
  CHECK(et.u.at(1).is_one());

  CHECK_THROWS_AS(reduce_matrix(mat(2, "T", "T", "1", "1"), v),
                  std::invalid_argument);  // singular
}

TEST_CASE("reduction is invariant under the Iwahori-center stabilizer") {
  for (const Place& v : {pT2(), pT3(), Place::infinite(2)}) {
    int q = v.q;
    RatFunc pi = v.is_infinite() ? inverse(RatFunc::var(q))
                                 : RatFunc::from_poly(v.pi);
    std::vector<Mat2> gs = {
        mat2_identity(q),
        Mat2{pi * pi, RatFunc::constant(q, 1) + pi, RatFunc::zero(q),
             RatFunc::constant(q, 1)},
        Mat2{RatFunc::var(q), RatFunc::constant(q, 1),
             RatFunc::constant(q, 1), RatFunc::zero(q)},
        Mat2{inverse(pi), RatFunc::zero(q), RatFunc::constant(q, 1), pi},
    };
    // Stabilizer samples: upper-triangular-mod-pi units, and scalars.
    std::vector<Mat2> hs = {
        Mat2{RatFunc::constant(q, 1), RatFunc::constant(q, 1) + pi * pi,
             RatFunc::zero(q), RatFunc::constant(q, 1)},
        Mat2{RatFunc::constant(q, 1), RatFunc::zero(q), pi,
             RatFunc::constant(q, 1)},
        Mat2{RatFunc::constant(q, 1) + pi, RatFunc::constant(q, 1), pi * pi,
             RatFunc::constant(q, 1)},
        Mat2{pi, RatFunc::zero(q), RatFunc::zero(q), pi},  // scalar pi
        Mat2{RatFunc::var(q) + RatFunc::constant(q, 1), RatFunc::zero(q),
             RatFunc::zero(q), RatFunc::var(q) + RatFunc::constant(q, 1)},
    };
    for (const Mat2& g : gs) {
      OrientedEdge e = reduce_matrix(g, v);
      for (const Mat2& h : hs)
        CHECK(reduce_matrix(mat2_mul(g, h), v) == e);
      // multiplying by rho on the right reverses the edge
      Mat2 rho{RatFunc::zero(q), RatFunc::constant(q, 1), pi, RatFunc::zero(q)};
      CHECK(reduce_matrix(mat2_mul(g, rho), v) == reverse(e));
      CHECK(reverse(reverse(e)) == e);
    }
  }
}

TEST_CASE("local-matrix reduction agrees with the exact one") {
  Place v = pT2();
  ResidueRing R(v, 12);
  std::vector<Mat2> gs = {
      mat(2, "1", "0", "0", "1"),
      mat(2, "T^2", "T + 1", "0", "1"),
      mat(2, "0", "1", "T", "0"),
      mat(2, "T + 1", "1", "T^3", "T"),
      mat(2, "1/T", "0", "1", "T"),
  };
  for (const Mat2& g : gs) {
    LocalMat2 gl{embed(R, g.a), embed(R, g.b), embed(R, g.c), embed(R, g.d)};
    CHECK(reduce_matrix(R, gl) == reduce_matrix(g, v));
  }
}

TEST_CASE("local-matrix reduction fails loudly on insufficient precision") {
  Place v = pT2();
  ResidueRing R(v, 4);
  // (pi^3, u; 0, 1) needs tail digits up to exponent 2 plus a margin of 2,
  // i.e. absolute precision >= 5 > 4.
  LocalMat2 g{local_pi_pow(R, 3), embed(R, parse_ratfunc(2, "T + 1")),
              local_zero(), local_one(R)};
  CHECK_THROWS_AS(reduce_matrix(R, g), std::invalid_argument);

  // A bottom row whose dominance cannot be decided: c is an inexact zero
  // with bound 4, d has valuation 4.
  ResidueRing R2(v, 8);
  LocalMat2 h{local_one(R2), local_zero(), local_inexact_zero(4),
              local_pi_pow(R2, 4)};
  CHECK_THROWS_AS(reduce_matrix(R2, h), std::invalid_argument);
  // ... but is decidable when d's valuation is below the bound.
  LocalMat2 h2{local_one(R2), local_zero(), local_inexact_zero(4),
               local_pi_pow(R2, 2)};
  OrientedEdge e = reduce_matrix(R2, h2);
  CHECK(e.family == EdgeFamily::main);
  CHECK(e.n == -2);  // det has valuation 2, v(d) = 2
}

TEST_CASE("vertices, orientation, and the base axis") {
  Place v = pT3();
  OrientedEdge e0 = base_edge(v);
  CHECK(terminus(e0) == (Vertex{v, 0, {}}));
  CHECK(origin(e0) == (Vertex{v, -1, {}}));
  // e_i runs from v_{i-1} to v_i along the base axis.
  for (int i = -2; i <= 3; ++i) {
    OrientedEdge ei = make_edge(v, i, {}, EdgeFamily::main);
    CHECK(terminus(ei).n == i);
    CHECK(origin(ei).n == i - 1);
    CHECK(origin(ei) == terminus(reverse(ei)));
  }
}

TEST_CASE("boundary balls of edges") {
  Place v = pT2();
  BallDescriptor b0 = ball_of_edge(base_edge(v));
  CHECK(!b0.complement);
  CHECK(b0.center.is_zero());
  CHECK(b0.radius == 0);
  CHECK(ball_contains(b0, parse_ratfunc(2, "T"), v));
  CHECK(ball_contains(b0, RatFunc::zero(2), v));
  CHECK(!ball_contains(b0, parse_ratfunc(2, "1/T"), v));
  CHECK(!ball_contains(b0, std::nullopt, v));

  BallDescriptor bc = ball_of_edge(reverse(base_edge(v)));
  CHECK(bc.complement);
  CHECK(ball_contains(bc, std::nullopt, v));
  CHECK(ball_contains(bc, parse_ratfunc(2, "1/T"), v));
  CHECK(!ball_contains(bc, parse_ratfunc(2, "T"), v));

  BallDescriptor b2 = ball_of_edge(make_edge(v, 2, {}, EdgeFamily::main));
  CHECK(b2.radius == 2);
  CHECK(ball_contains(b2, parse_ratfunc(2, "T^2 + T^3"), v));
  CHECK(!ball_contains(b2, parse_ratfunc(2, "T"), v));
}

TEST_CASE("level-n balls partition their parent ball") {
  Place v = pT3();
  // children of the ball O_v: the three balls c + pi O_v, c in {0,1,2}
  std::vector<RatFunc> points;
  for (const Poly& f : polys_below(3, 3))
    points.push_back(RatFunc::from_poly(f));
  for (const RatFunc& t : points) {
    int hits = 0;
    for (int c = 0; c < 3; ++c) {
      PiExpansion u;
      if (c != 0) u[0] = Poly::constant(3, c);
      if (ball_contains(ball_of_edge(make_edge(v, 1, u, EdgeFamily::main)), t, v))
        ++hits;
    }
    CHECK(hits == 1);
  }
}

TEST_CASE("geodesics toward infinity") {
  Place v = pT2();
  // r = 0: the height-k edge is the reverse of e_k.
  for (int k = -2; k <= 3; ++k)
    CHECK(geodesic_edge(RatFunc::zero(2), k, v) ==
          reverse(make_edge(v, k, {}, EdgeFamily::main)));

  // The path is connected: consecutive edges share a vertex.
  RatFunc r = parse_ratfunc(2, "(T + 1)/T^2");
  for (int k = -4; k <= 4; ++k)
    CHECK(terminus(geodesic_edge(r, k, v)) == origin(geodesic_edge(r, k - 1, v)));

  // r lies on the non-infinity side of every edge of its own geodesic.
  for (int k = -3; k <= 3; ++k) {
    CHECK(!ball_contains(ball_of_edge(geodesic_edge(r, k, v)), r, v));
    CHECK(ball_contains(ball_of_edge(geodesic_edge(r, k, v)), std::nullopt, v));
    CHECK(ball_contains(ball_of_edge(reverse(geodesic_edge(r, k, v))), r, v));
  }

  // Two ends diverge exactly at the valuation of their difference.
  RatFunc r2 = r + parse_ratfunc(2, "T^3");
  long split = *valuation(r2 - r, v);
  CHECK(split == 3);
  for (int k = -3; k <= 6; ++k) {
    bool same = geodesic_edge(r, k, v) == geodesic_edge(r2, k, v);
    CHECK(same == (k <= split));
  }
}

TEST_CASE("edge printing") {
  Place v = pT2();
  CHECK(to_string(base_edge(v)) == "(n=0, u=0, main)@T");
  OrientedEdge e = geodesic_edge(parse_ratfunc(2, "1/T"), 1, v);
  CHECK(to_string(e) == "(n=1, u=1/T, flipped)@T");
}
