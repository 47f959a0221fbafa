#include "ezff/ratfunc.hpp"

#include <cstdlib>
#include <stdexcept>

namespace ezff {

Place Place::finite(const Poly& pi) {
  if (pi.is_zero() || pi.deg_nonzero() < 1 || !pi.monic() || !is_irreducible(pi))
    throw std::invalid_argument("a finite place needs a monic irreducible");
  Place p;
  p.kind = Kind::finite;
  p.q = pi.q;
  p.pi = pi;
  return p;
}

Place Place::infinite(int q) {
  Place p;
  p.kind = Kind::infinite;
  p.q = q;
  p.pi = Poly::zero(q);
  return p;
}

int Place::degree() const {
  return is_infinite() ? 1 : pi.deg_nonzero();
}

long long Place::residue_size() const {
  long long r = 1;
  for (int i = 0; i < degree(); ++i) r *= q;
  return r;
}

std::string Place::to_string() const {
  return is_infinite() ? "infinity" : ezff::to_string(pi);
}

bool operator==(const Place& a, const Place& b) {
  if (a.q != b.q || a.kind != b.kind) return false;
  return a.is_infinite() || a.pi == b.pi;
}

RatFunc::RatFunc(Poly n, Poly d) : num(std::move(n)), den(std::move(d)) {
  if (num.q != den.q) throw std::invalid_argument("mixed coefficient fields");
  if (den.is_zero()) throw std::invalid_argument("zero denominator");
  if (num.is_zero()) {
    den = Poly::constant(num.q, 1);
    return;
  }
  Poly g = gcd(num, den);
  if (!g.is_one()) {
    num = poly_div(num, g);
    den = poly_div(den, g);
  }
  int lead = den.leading();
  if (lead != 1) {
    int s = fq_inv(den.q, lead);
    num = scale(num, s);
    den = scale(den, s);
  }
}

RatFunc RatFunc::zero(int q) { return from_poly(Poly::zero(q)); }

RatFunc RatFunc::from_poly(const Poly& p) {
  RatFunc r;
  r.num = p;
  r.den = Poly::constant(p.q, 1);
  return r;
}

RatFunc RatFunc::constant(int q, long long v) {
  return from_poly(Poly::constant(q, v));
}

RatFunc RatFunc::var(int q) { return from_poly(Poly::var(q)); }

bool operator==(const RatFunc& a, const RatFunc& b) {
  return a.num == b.num && a.den == b.den;
}

bool operator<(const RatFunc& a, const RatFunc& b) {
  if (!(a.den == b.den)) return a.den < b.den;
  return a.num < b.num;
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  return RatFunc(a.num * b.den + b.num * a.den, a.den * b.den);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

RatFunc operator-(const RatFunc& a) {
  RatFunc r = a;
  r.num = -r.num;
  return r;
}

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  return RatFunc(a.num * b.num, a.den * b.den);
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) {
  if (b.is_zero()) throw std::invalid_argument("division by zero");
  return RatFunc(a.num * b.den, a.den * b.num);
}

RatFunc inverse(const RatFunc& a) {
  if (a.is_zero()) throw std::invalid_argument("inverse of zero");
  return RatFunc(a.den, a.num);
}

std::optional<long> valuation(const RatFunc& a, const Place& v) {
  if (a.is_zero()) return std::nullopt;
  if (v.is_infinite()) {
    long dn = a.num.deg_nonzero();
    long dd = a.den.is_zero() ? 0 : a.den.deg_nonzero();
    return dd - dn;
  }
  return (long)multiplicity(a.num, v.pi) - (long)multiplicity(a.den, v.pi);
}

std::string to_string(const RatFunc& a) {
  if (a.is_poly()) return to_string(a.num);
  std::string n = to_string(a.num);
  std::string d = to_string(a.den);
  auto wrap = [](const std::string& s) {
    return s.find(' ') == std::string::npos ? s : "(" + s + ")";
  };
  return wrap(n) + "/" + wrap(d);
}

namespace {

// Strip one layer of matching outer parentheses, if the whole string is
// enclosed by them.
std::string strip_outer_parens(std::string s) {
  auto trim = [](std::string& t) {
    size_t b = t.find_first_not_of(" \t");
    size_t e = t.find_last_not_of(" \t");
    t = (b == std::string::npos) ? "" : t.substr(b, e - b + 1);
  };
  trim(s);
  while (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
    int depth = 0;
    bool whole = true;
    for (size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '(') ++depth;
      else if (s[i] == ')') {
        --depth;
        if (depth == 0 && i + 1 != s.size()) { whole = false; break; }
      }
    }
    if (!whole) break;
    s = s.substr(1, s.size() - 2);
    trim(s);
  }
  return s;
}

}  // namespace

RatFunc parse_ratfunc(int q, const std::string& text) {
  // Split on a single top-level '/'.
  int depth = 0;
  std::optional<size_t> slash;
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '(') ++depth;
    else if (text[i] == ')') --depth;
    else if (text[i] == '/' && depth == 0) {
      if (slash) throw std::invalid_argument("more than one top-level '/'");
      slash = i;
    }
  }
  if (depth != 0) throw std::invalid_argument("unbalanced parentheses");
  if (!slash) return RatFunc::from_poly(parse_poly(q, strip_outer_parens(text)));
  Poly n = parse_poly(q, strip_outer_parens(text.substr(0, *slash)));
  Poly d = parse_poly(q, strip_outer_parens(text.substr(*slash + 1)));
  return RatFunc(n, d);
}

std::vector<Place> enumerate_places(int q, int max_degree) {
  std::vector<Place> out;
  for (const Poly& pi : irreducible_monics(q, max_degree))
    out.push_back(Place::finite(pi));
  if (max_degree >= 1) out.push_back(Place::infinite(q));
  return out;
}

RatFunc uniformizer_pow(const Place& v, long k) {
  int q = v.q;
  if (v.is_infinite()) {
    RatFunc t = RatFunc::from_poly(shift(Poly::constant(q, 1), std::labs(k)));
    return k > 0 ? inverse(t) : t;
  }
  RatFunc acc = RatFunc::constant(q, 1);
  RatFunc pik = RatFunc::from_poly(v.pi);
  for (long i = 0; i < std::labs(k); ++i) acc = acc * pik;
  return k < 0 ? inverse(acc) : acc;
}

}  // namespace ezff
