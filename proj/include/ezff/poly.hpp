#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ezff {

// Arithmetic in the prime field F_q (q prime). Values are canonical
// representatives in [0, q).
int fq_add(int q, int a, int b);
int fq_sub(int q, int a, int b);
int fq_mul(int q, int a, int b);
int fq_neg(int q, int a);
int fq_inv(int q, int a);
int fq_pow(int q, int a, long long e);

/**
 * Dense univariate polynomial over F_q, coefficients stored lowest-degree
 * first. Canonical form: no trailing zero coefficients. The zero polynomial
 * has an empty coefficient vector; its degree is a distinguished disengaged
 * value (degree() returns nullopt), never -1 arithmetic.
 */
struct Poly {
  int q = 0;
  std::vector<int> c;

  Poly() = default;
  Poly(int q_, std::vector<int> coeffs);

  static Poly zero(int q);
  static Poly constant(int q, long long v);
  static Poly var(int q);  // the polynomial T

  bool is_zero() const { return c.empty(); }
  bool is_one() const { return c.size() == 1 && c[0] == 1; }
  std::optional<int> degree() const;
  int deg_nonzero() const;  // degree; throws std::invalid_argument on zero
  int leading() const;      // leading coefficient; throws on zero
  int coeff(int i) const { return (i >= 0 && i < (int)c.size()) ? c[i] : 0; }
  bool monic() const { return !c.empty() && c.back() == 1; }

  void normalize();
};

bool operator==(const Poly& a, const Poly& b);
inline bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
// Total order (degree first, then coefficients from the top down); used for
// deterministic canonical choices, not for any mathematical meaning.
bool operator<(const Poly& a, const Poly& b);

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator-(const Poly& a);
Poly operator*(const Poly& a, const Poly& b);
Poly scale(const Poly& a, int s);
Poly shift(const Poly& a, int k);  // multiply by T^k, k >= 0

// Quotient and remainder with deg r < deg b; b must be nonzero.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
Poly poly_mod(const Poly& a, const Poly& b);
Poly poly_div(const Poly& a, const Poly& b);
bool divides(const Poly& d, const Poly& a);
// Largest k with pi^k | f (f nonzero), by repeated exact division.
int multiplicity(const Poly& f, const Poly& pi);

Poly monicize(const Poly& f);
Poly gcd(Poly a, Poly b);  // monic unless both inputs are zero
struct XgcdResult {
  Poly g, x, y;  // g = a*x + b*y, g monic (or zero)
};
XgcdResult xgcd(const Poly& a, const Poly& b);

Poly mul_mod(const Poly& a, const Poly& b, const Poly& m);
Poly pow_mod(Poly base, long long e, const Poly& m);  // e >= 0
Poly inv_mod(const Poly& a, const Poly& m);  // throws if gcd(a, m) != 1

int eval(const Poly& f, int x);

// Rabin's test; f must be nonconstant.
bool is_irreducible(const Poly& f);

// Monic polynomials of exact degree d, lexicographic by coefficient tuple.
std::vector<Poly> monic_polys(int q, int d);
// All polynomials of degree < d (including zero), lexicographic.
std::vector<Poly> polys_below(int q, int d);
// Monic irreducibles of degree 1..max_deg, ordered by (degree, lex).
std::vector<Poly> irreducible_monics(int q, int max_deg);

// Text form like "T^3 + 2*T + 1". The parser accepts sums of terms
// INT, INT*T, INT*T^k, T, T^k with coefficients required to lie in [0, q);
// anything else (negative signs, oversized coefficients) is rejected.
std::string to_string(const Poly& f);
Poly parse_poly(int q, const std::string& text);

}  // namespace ezff
