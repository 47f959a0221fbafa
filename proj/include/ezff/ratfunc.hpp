#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ezff/poly.hpp"

namespace ezff {

/**
 * A place of the rational function field F_q(T): either a finite place given
 * by a monic irreducible polynomial pi, or the place at infinity with
 * uniformizer 1/T.
 */
struct Place {
  enum class Kind { finite, infinite };
  Kind kind = Kind::finite;
  int q = 0;
  Poly pi;  // monic irreducible; meaningful only for finite places

  static Place finite(const Poly& pi);
  static Place infinite(int q);

  bool is_infinite() const { return kind == Kind::infinite; }
  int degree() const;        // residue field degree over F_q (1 at infinity)
  long long residue_size() const;  // q^degree()
  std::string to_string() const;
};

bool operator==(const Place& a, const Place& b);
inline bool operator!=(const Place& a, const Place& b) { return !(a == b); }

/**
 * Rational function num/den over F_q, canonical form: den monic,
 * gcd(num, den) = 1, and zero represented as 0/1.
 */
struct RatFunc {
  Poly num;
  Poly den;

  RatFunc() = default;
  RatFunc(Poly n, Poly d);  // canonicalizes; throws on zero denominator

  static RatFunc zero(int q);
  static RatFunc from_poly(const Poly& p);
  static RatFunc constant(int q, long long v);
  static RatFunc var(int q);  // T

  int field_size() const { return num.q; }
  bool is_zero() const { return num.is_zero(); }
  bool is_poly() const { return den.is_one(); }
};

bool operator==(const RatFunc& a, const RatFunc& b);
inline bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }
bool operator<(const RatFunc& a, const RatFunc& b);  // deterministic order

RatFunc operator+(const RatFunc& a, const RatFunc& b);
RatFunc operator-(const RatFunc& a, const RatFunc& b);
RatFunc operator-(const RatFunc& a);
RatFunc operator*(const RatFunc& a, const RatFunc& b);
RatFunc operator/(const RatFunc& a, const RatFunc& b);
RatFunc inverse(const RatFunc& a);

// Valuation of a at the given place; nullopt means +infinity (a == 0).
std::optional<long> valuation(const RatFunc& a, const Place& v);

// pi_v^k as a rational function (k may be negative); at infinity pi = 1/T.
RatFunc uniformizer_pow(const Place& v, long k);
inline std::optional<long> valuation(const Poly& a, const Place& v) {
  return valuation(RatFunc::from_poly(a), v);
}

std::string to_string(const RatFunc& a);
// Accepts POLY, POLY/POLY, (POLY)/(POLY) and mixed-paren forms, where POLY is
// in the syntax of parse_poly.
RatFunc parse_ratfunc(int q, const std::string& text);

// All places of degree <= max_degree: finite ones ordered by (degree, lex),
// then the infinite place if max_degree >= 1.
std::vector<Place> enumerate_places(int q, int max_degree);

}  // namespace ezff
