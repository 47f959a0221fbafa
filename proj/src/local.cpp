#include "ezff/local.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ezff {

ResidueRing::ResidueRing(const Place& place, int N_) : v(place), N(N_) {
  if (N < 1) throw std::invalid_argument("ring precision must be >= 1");
  pi_poly = v.is_infinite() ? Poly::var(v.q) : v.pi;
  modulus = Poly::constant(v.q, 1);
  for (int i = 0; i < N; ++i) modulus = modulus * pi_poly;
}

Poly ResidueRing::reduce(const Poly& a, int k) const {
  if (k < 0 || k > N) throw std::invalid_argument("reduction level out of range");
  return poly_mod(a, pi_pow(k));
}

bool ResidueRing::is_unit(const Poly& a) const {
  return !poly_mod(a, pi_poly).is_zero();
}

Poly ResidueRing::pi_pow(int k) const {
  if (k < 0 || k > N) throw std::invalid_argument("pi power out of range");
  Poly r = Poly::constant(v.q, 1);
  for (int i = 0; i < k; ++i) r = r * pi_poly;
  return r;
}

LocalElement local_zero() { return LocalElement{}; }

LocalElement local_inexact_zero(long abs_prec) {
  LocalElement z;
  z.zero = true;
  z.exact = false;
  z.val = abs_prec;
  return z;
}

LocalElement local_unit(const ResidueRing& R, Poly u, long val, int prec) {
  if (prec < 1 || prec > R.N) throw std::invalid_argument("bad unit precision");
  u = R.reduce(u);
  if (!R.is_unit(u)) throw std::invalid_argument("unit part is not a unit");
  LocalElement x;
  x.zero = x.exact = false;
  x.val = val;
  x.prec = prec;
  x.unit = R.reduce(u, prec);
  return x;
}

LocalElement local_one(const ResidueRing& R) {
  return local_unit(R, Poly::constant(R.q(), 1), 0, R.N);
}

LocalElement local_from_int(const ResidueRing& R, long long n) {
  return embed(R, RatFunc::constant(R.q(), n));
}

LocalElement local_pi_pow(const ResidueRing& R, long k) {
  return local_unit(R, Poly::constant(R.q(), 1), k, R.N);
}

namespace {

// Write f = pi^k * f0 with f0 coprime to pi; f is a polynomial in T.
std::pair<int, Poly> strip_pi(const Poly& f, const Poly& pi) {
  int k = multiplicity(f, pi);
  Poly f0 = f;
  for (int i = 0; i < k; ++i) f0 = poly_div(f0, pi);
  return {k, f0};
}

Poly reverse_coeffs(const Poly& f) {
  std::vector<int> c(f.c.rbegin(), f.c.rend());
  return Poly(f.q, std::move(c));
}

}  // namespace

LocalElement embed(const ResidueRing& R, const RatFunc& f) {
  if (f.is_zero()) return local_zero();
  if (R.v.is_infinite()) {
    // f = num/den, deg-based valuation; both reversals have nonzero
    // constant term, hence are units in F_q[s]/(s^N).
    long val = (long)f.den.deg_nonzero() - (long)f.num.deg_nonzero();
    Poly u = mul_mod(reverse_coeffs(f.num),
                     inv_mod(reverse_coeffs(f.den), R.modulus), R.modulus);
    return local_unit(R, u, val, R.N);
  }
  auto [a, n0] = strip_pi(f.num, R.v.pi);
  auto [b, d0] = strip_pi(f.den, R.v.pi);
  Poly u = mul_mod(R.reduce(n0), inv_mod(R.reduce(d0), R.modulus), R.modulus);
  return local_unit(R, u, a - b, R.N);
}

LocalElement local_neg(const ResidueRing& R, const LocalElement& a) {
  if (a.zero) return a;
  LocalElement r = a;
  r.unit = R.reduce(-a.unit, a.prec);
  return r;
}

LocalElement local_add(const ResidueRing& R, const LocalElement& a,
                       const LocalElement& b) {
  if (a.zero && a.exact) return b;
  if (b.zero && b.exact) return a;
  long abs = std::min(a.abs_prec(), b.abs_prec());
  long m = std::min(a.zero ? abs : a.val, b.zero ? abs : b.val);
  if (abs <= m) return local_inexact_zero(abs);
  int digits = (int)(abs - m);
  if (digits > R.N)
    throw std::invalid_argument("sum exceeds the ring precision; raise N");
  Poly mod_k = R.pi_pow(digits);
  auto lift = [&](const LocalElement& x) {
    if (x.zero) return Poly::zero(R.q());
    Poly p = x.unit;
    for (long i = 0; i < x.val - m; ++i) p = poly_mod(p * R.pi_poly, mod_k);
    return poly_mod(p, mod_k);
  };
  Poly s = poly_mod(lift(a) + lift(b), mod_k);
  if (s.is_zero()) return local_inexact_zero(abs);
  int k = multiplicity(s, R.pi_poly);
  if (k >= digits) return local_inexact_zero(abs);
  Poly u = s;
  for (int i = 0; i < k; ++i) u = poly_div(u, R.pi_poly);
  return local_unit(R, u, m + k, digits - k);
}

LocalElement local_sub(const ResidueRing& R, const LocalElement& a,
                       const LocalElement& b) {
  return local_add(R, a, local_neg(R, b));
}

LocalElement local_mul(const ResidueRing& R, const LocalElement& a,
                       const LocalElement& b) {
  if (a.zero || b.zero) {
    if ((a.zero && a.exact) || (b.zero && b.exact)) return local_zero();
    // val is a lower bound on the valuation in both representations.
    return local_inexact_zero(a.val + b.val);
  }
  int prec = std::min(a.prec, b.prec);
  Poly u = poly_mod(a.unit * b.unit, R.pi_pow(prec));
  return local_unit(R, u, a.val + b.val, prec);
}

LocalElement local_inv(const ResidueRing& R, const LocalElement& a) {
  if (a.zero)
    throw std::invalid_argument("cannot invert an element indistinguishable from zero");
  Poly u = inv_mod(a.unit, R.pi_pow(a.prec));
  return local_unit(R, u, -a.val, a.prec);
}

LocalElement local_div(const ResidueRing& R, const LocalElement& a,
                       const LocalElement& b) {
  return local_mul(R, a, local_inv(R, b));
}

LocalElement local_pow(const ResidueRing& R, const LocalElement& a, long long e) {
  if (a.zero) {
    if (e > 0) return a.exact ? local_zero()
                              : local_inexact_zero(a.val * e);
    if (e == 0 && !a.exact) return local_one(R);
    throw std::invalid_argument("zero raised to a nonpositive power");
  }
  LocalElement base = e < 0 ? local_inv(R, a) : a;
  unsigned long long k = e < 0 ? (unsigned long long)(-e) : (unsigned long long)e;
  LocalElement r = local_one(R);
  r.prec = base.prec;
  r.unit = R.reduce(r.unit, r.prec);
  while (k > 0) {
    if (k & 1) r = local_mul(R, r, base);
    base = local_mul(R, base, base);
    k >>= 1;
  }
  return r;
}

bool local_is_zero_at(const ResidueRing& R, const LocalElement& a, long k) {
  (void)R;
  if (a.zero) {
    if (a.exact || a.val >= k) return true;
    throw std::invalid_argument("insufficient precision to test vanishing");
  }
  // Nonzero elements have an exactly known valuation.
  return a.val >= k;
}

bool local_agree(const ResidueRing& R, const LocalElement& a,
                 const LocalElement& b, long k) {
  return local_is_zero_at(R, local_sub(R, a, b), k);
}

std::optional<long> local_val(const LocalElement& a) {
  if (a.zero) return std::nullopt;
  return a.val;
}

std::vector<Poly> local_digits(const ResidueRing& R, const LocalElement& a) {
  std::vector<Poly> out;
  if (a.zero) return out;
  Poly cur = a.unit;
  for (int i = 0; i < a.prec; ++i) {
    auto [quot, rem] = divmod(cur, R.pi_poly);
    out.push_back(rem);
    cur = quot;
  }
  return out;
}

std::string local_to_string(const ResidueRing& R, const LocalElement& a) {
  std::ostringstream os;
  std::string pi = R.v.is_infinite() ? "s" : "pi";
  if (a.zero) {
    if (a.exact) return "0";
    os << "O(" << pi << "^" << a.val << ")";
    return os.str();
  }
  auto digs = local_digits(R, a);
  bool first = true;
  for (size_t i = 0; i < digs.size(); ++i) {
    if (digs[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    std::string d = to_string(digs[i]);
    if (d.find(' ') != std::string::npos) d = "(" + d + ")";
    long e = a.val + (long)i;
    if (e == 0) os << d;
    else if (d == "1") os << pi << "^" << e;
    else os << d << "*" << pi << "^" << e;
  }
  if (first) os << "0";
  os << " + O(" << pi << "^" << a.abs_prec() << ")";
  return os.str();
}

int residue_order(const ResidueRing& R, const Poly& u) {
  Poly r = poly_mod(u, R.pi_poly);
  if (r.is_zero()) throw std::invalid_argument("residue order of a non-unit");
  long long Q = R.residue_size();
  Poly cur = r;
  for (int t = 1; t <= Q - 1; ++t) {
    if (cur.is_one()) return t;
    cur = mul_mod(cur, r, R.pi_poly);
  }
  throw std::logic_error("residue order not found below field size");
}

Poly teichmuller(const ResidueRing& R, const Poly& u) {
  if (!R.is_unit(u)) throw std::invalid_argument("Teichmuller lift of a non-unit");
  long long Q = R.residue_size();
  Poly y = R.reduce(u);
  for (int i = 0; i <= R.N + 2; ++i) {
    Poly next = pow_mod(y, Q, R.modulus);
    if (next == y) return y;
    y = next;
  }
  throw std::logic_error("Teichmuller iteration failed to stabilize");
}

std::optional<RootOfUnity> detect_root_of_unity(const ResidueRing& R,
                                                const LocalElement& x,
                                                int min_prec) {
  if (x.zero || x.val != 0)
    throw std::invalid_argument("root-of-unity test needs a valuation-0 unit");
  if (x.prec < min_prec) return std::nullopt;
  Poly omega = teichmuller(R, x.unit);
  if (!poly_mod(omega - x.unit, R.pi_pow(x.prec)).is_zero()) return std::nullopt;
  return RootOfUnity{residue_order(R, x.unit), omega};
}

}  // namespace ezff
