#include "ezff/poly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace ezff {

static void check_prime_q(int q) {
  if (q < 2) throw std::invalid_argument("field size must be a prime >= 2");
  for (int d = 2; d * d <= q; ++d)
    if (q % d == 0) throw std::invalid_argument("field size must be prime");
}

int fq_add(int q, int a, int b) { return (a + b) % q; }
int fq_sub(int q, int a, int b) { return ((a - b) % q + q) % q; }
int fq_mul(int q, int a, int b) { return (int)((long long)a * b % q); }
int fq_neg(int q, int a) { return (q - a) % q; }

int fq_pow(int q, int a, long long e) {
  if (e < 0) return fq_pow(q, fq_inv(q, a), -e);
  long long r = 1, base = a % q;
  while (e > 0) {
    if (e & 1) r = r * base % q;
    base = base * base % q;
    e >>= 1;
  }
  return (int)r;
}

int fq_inv(int q, int a) {
  a %= q;
  if (a == 0) throw std::invalid_argument("division by zero in F_q");
  return fq_pow(q, a, q - 2);
}

Poly::Poly(int q_, std::vector<int> coeffs) : q(q_), c(std::move(coeffs)) {
  check_prime_q(q);
  for (auto& x : c) x = ((x % q) + q) % q;
  normalize();
}

Poly Poly::zero(int q) { return Poly(q, {}); }

Poly Poly::constant(int q, long long v) {
  int r = (int)(((v % q) + q) % q);
  return Poly(q, {r});
}

Poly Poly::var(int q) { return Poly(q, {0, 1}); }

void Poly::normalize() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

std::optional<int> Poly::degree() const {
  if (c.empty()) return std::nullopt;
  return (int)c.size() - 1;
}

int Poly::deg_nonzero() const {
  if (c.empty()) throw std::invalid_argument("degree of the zero polynomial");
  return (int)c.size() - 1;
}

int Poly::leading() const {
  if (c.empty()) throw std::invalid_argument("leading coefficient of zero");
  return c.back();
}

static void check_same_field(const Poly& a, const Poly& b) {
  if (a.q != b.q) throw std::invalid_argument("mixed coefficient fields");
}

bool operator==(const Poly& a, const Poly& b) {
  return a.q == b.q && a.c == b.c;
}

bool operator<(const Poly& a, const Poly& b) {
  if (a.c.size() != b.c.size()) return a.c.size() < b.c.size();
  for (int i = (int)a.c.size() - 1; i >= 0; --i)
    if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
  return false;
}

Poly operator+(const Poly& a, const Poly& b) {
  check_same_field(a, b);
  std::vector<int> r(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < r.size(); ++i)
    r[i] = fq_add(a.q, a.coeff((int)i), b.coeff((int)i));
  Poly out;
  out.q = a.q;
  out.c = std::move(r);
  out.normalize();
  return out;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator-(const Poly& a) {
  Poly r = a;
  for (auto& x : r.c) x = fq_neg(a.q, x);
  return r;
}

Poly operator*(const Poly& a, const Poly& b) {
  check_same_field(a, b);
  if (a.is_zero() || b.is_zero()) return Poly::zero(a.q);
  std::vector<long long> acc(a.c.size() + b.c.size() - 1, 0);
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (size_t j = 0; j < b.c.size(); ++j) acc[i + j] += (long long)a.c[i] * b.c[j];
  }
  Poly out;
  out.q = a.q;
  out.c.resize(acc.size());
  for (size_t i = 0; i < acc.size(); ++i) out.c[i] = (int)(acc[i] % a.q);
  out.normalize();
  return out;
}

Poly scale(const Poly& a, int s) {
  s = ((s % a.q) + a.q) % a.q;
  Poly r = a;
  for (auto& x : r.c) x = fq_mul(a.q, x, s);
  r.normalize();
  return r;
}

Poly shift(const Poly& a, int k) {
  if (k < 0) throw std::invalid_argument("negative shift");
  if (a.is_zero()) return a;
  Poly r;
  r.q = a.q;
  r.c.assign(a.c.size() + k, 0);
  std::copy(a.c.begin(), a.c.end(), r.c.begin() + k);
  return r;
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  check_same_field(a, b);
  if (b.is_zero()) throw std::invalid_argument("polynomial division by zero");
  Poly rem = a;
  int db = b.deg_nonzero();
  int invlead = fq_inv(a.q, b.leading());
  std::vector<int> quot;
  if (!rem.is_zero() && rem.deg_nonzero() >= db)
    quot.assign(rem.deg_nonzero() - db + 1, 0);
  while (!rem.is_zero() && rem.deg_nonzero() >= db) {
    int k = rem.deg_nonzero() - db;
    int f = fq_mul(a.q, rem.leading(), invlead);
    quot[k] = f;
    for (int i = 0; i <= db; ++i)
      rem.c[k + i] = fq_sub(a.q, rem.c[k + i], fq_mul(a.q, f, b.c[i]));
    rem.normalize();
  }
  Poly qout;
  qout.q = a.q;
  qout.c = std::move(quot);
  qout.normalize();
  return {qout, rem};
}

Poly poly_mod(const Poly& a, const Poly& b) { return divmod(a, b).second; }
Poly poly_div(const Poly& a, const Poly& b) { return divmod(a, b).first; }

bool divides(const Poly& d, const Poly& a) {
  if (a.is_zero()) return true;
  return poly_mod(a, d).is_zero();
}

int multiplicity(const Poly& f, const Poly& pi) {
  if (f.is_zero()) throw std::invalid_argument("multiplicity in zero polynomial");
  int k = 0;
  Poly cur = f;
  while (true) {
    auto [qt, r] = divmod(cur, pi);
    if (!r.is_zero()) return k;
    cur = qt;
    ++k;
  }
}

Poly monicize(const Poly& f) {
  if (f.is_zero()) return f;
  return scale(f, fq_inv(f.q, f.leading()));
}

Poly gcd(Poly a, Poly b) {
  check_same_field(a, b);
  while (!b.is_zero()) {
    Poly r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monicize(a);
}

XgcdResult xgcd(const Poly& a, const Poly& b) {
  check_same_field(a, b);
  int q = a.q;
  Poly r0 = a, r1 = b;
  Poly x0 = Poly::constant(q, 1), x1 = Poly::zero(q);
  Poly y0 = Poly::zero(q), y1 = Poly::constant(q, 1);
  while (!r1.is_zero()) {
    auto [qt, r2] = divmod(r0, r1);
    Poly x2 = x0 - qt * x1;
    Poly y2 = y0 - qt * y1;
    r0 = std::move(r1); r1 = std::move(r2);
    x0 = std::move(x1); x1 = std::move(x2);
    y0 = std::move(y1); y1 = std::move(y2);
  }
  if (!r0.is_zero()) {
    int s = fq_inv(q, r0.leading());
    r0 = scale(r0, s);
    x0 = scale(x0, s);
    y0 = scale(y0, s);
  }
  return {r0, x0, y0};
}

Poly mul_mod(const Poly& a, const Poly& b, const Poly& m) {
  return poly_mod(a * b, m);
}

Poly pow_mod(Poly base, long long e, const Poly& m) {
  if (e < 0) throw std::invalid_argument("negative exponent in pow_mod");
  Poly r = poly_mod(Poly::constant(base.q, 1), m);
  base = poly_mod(base, m);
  while (e > 0) {
    if (e & 1) r = mul_mod(r, base, m);
    base = mul_mod(base, base, m);
    e >>= 1;
  }
  return r;
}

Poly inv_mod(const Poly& a, const Poly& m) {
  auto res = xgcd(poly_mod(a, m), m);
  if (!res.g.is_one())
    throw std::invalid_argument("element not invertible modulo " + to_string(m));
  return poly_mod(res.x, m);
}

int eval(const Poly& f, int x) {
  x = ((x % f.q) + f.q) % f.q;
  long long acc = 0;
  for (int i = (int)f.c.size() - 1; i >= 0; --i) acc = (acc * x + f.c[i]) % f.q;
  return (int)acc;
}

bool is_irreducible(const Poly& f) {
  if (f.is_zero() || f.deg_nonzero() < 1)
    throw std::invalid_argument("irreducibility of a constant");
  Poly g = monicize(f);
  int n = g.deg_nonzero();
  int q = g.q;
  Poly t = Poly::var(q);
  // x -> x^q iterated k times gives T^(q^k) mod g.
  auto frob_iter = [&](int k) {
    Poly cur = poly_mod(t, g);
    for (int i = 0; i < k; ++i) cur = pow_mod(cur, q, g);
    return cur;
  };
  if (!(frob_iter(n) == poly_mod(t, g))) return false;
  for (int r = 2; r <= n; ++r) {
    if (n % r != 0) continue;
    bool r_prime = true;
    for (int d = 2; d * d <= r; ++d)
      if (r % d == 0) { r_prime = false; break; }
    if (!r_prime) continue;
    Poly h = frob_iter(n / r) - poly_mod(t, g);
    if (!gcd(h, g).is_one()) return false;
  }
  return true;
}

std::vector<Poly> polys_below(int q, int d) {
  check_prime_q(q);
  std::vector<Poly> out;
  std::vector<int> cur(std::max(d, 0), 0);
  long long total = 1;
  for (int i = 0; i < d; ++i) total *= q;
  for (long long n = 0; n < total; ++n) {
    long long m = n;
    for (int i = 0; i < d; ++i) { cur[i] = (int)(m % q); m /= q; }
    out.push_back(Poly(q, cur));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Poly> monic_polys(int q, int d) {
  std::vector<Poly> out;
  for (const Poly& low : polys_below(q, d)) {
    Poly p = low + shift(Poly::constant(q, 1), d);
    out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Poly> irreducible_monics(int q, int max_deg) {
  std::vector<Poly> out;
  for (int d = 1; d <= max_deg; ++d)
    for (const Poly& p : monic_polys(q, d))
      if (is_irreducible(p)) out.push_back(p);
  return out;
}

std::string to_string(const Poly& f) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = (int)f.c.size() - 1; i >= 0; --i) {
    if (f.c[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0) {
      os << f.c[i];
    } else {
      if (f.c[i] != 1) os << f.c[i] << "*";
      os << "T";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

namespace {

struct PolyParser {
  int q;
  const std::string& s;
  size_t pos = 0;

  explicit PolyParser(int q_, const std::string& text) : q(q_), s(text) {}

  void skip_ws() {
    while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
  }

  [[noreturn]] void fail(const std::string& why) {
    throw std::invalid_argument("polynomial parse error at position " +
                                std::to_string(pos) + ": " + why);
  }

  long long parse_int() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
    if (pos == start) fail("expected an integer");
    return std::stoll(s.substr(start, pos - start));
  }

  // term := INT | INT '*' tpart | tpart ; tpart := 'T' ['^' INT]
  Poly parse_term() {
    skip_ws();
    if (pos >= s.size()) fail("expected a term");
    long long coeff = 1;
    bool saw_coeff = false;
    if (std::isdigit((unsigned char)s[pos])) {
      coeff = parse_int();
      if (coeff < 0 || coeff >= q)
        fail("coefficient " + std::to_string(coeff) + " out of range for F_" +
             std::to_string(q));
      saw_coeff = true;
      skip_ws();
      if (pos < s.size() && s[pos] == '*') {
        ++pos;
        skip_ws();
      } else if (pos < s.size() && s[pos] == 'T') {
        fail("expected '*' between coefficient and T");
      } else {
        return Poly::constant(q, coeff);
      }
    }
    skip_ws();
    if (pos >= s.size() || s[pos] != 'T') {
      if (saw_coeff) fail("expected T after '*'");
      fail("expected a term");
    }
    ++pos;
    long long e = 1;
    skip_ws();
    if (pos < s.size() && s[pos] == '^') {
      ++pos;
      e = parse_int();
      if (e < 0 || e > 4096) fail("unreasonable exponent");
    }
    Poly t = shift(Poly::constant(q, 1), (int)e);
    return scale(t, (int)coeff);
  }

  Poly parse_sum() {
    Poly acc = parse_term();
    while (true) {
      skip_ws();
      if (pos < s.size() && s[pos] == '+') {
        ++pos;
        acc = acc + parse_term();
      } else {
        break;
      }
    }
    return acc;
  }
};

}  // namespace

Poly parse_poly(int q, const std::string& text) {
  check_prime_q(q);
  PolyParser p(q, text);
  Poly r = p.parse_sum();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return r;
}

}  // namespace ezff
