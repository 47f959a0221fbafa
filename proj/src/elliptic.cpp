#include "ezff/elliptic.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ezff/tate.hpp"

namespace ezff {

namespace {

RatFunc cnum(int q, long long v) { return RatFunc::constant(q, v); }

long floor_div(long a, long b) {  // b > 0
  long d = a / b;
  return (a % b != 0 && a < 0) ? d - 1 : d;
}

struct ScaledModel {
  RatFunc a1, a2, a3, a4, a6;
  long s = 0;  // the model is the (u = pi^s)-rescaling of the input
};

// The v-content-scaled model: the largest s with v(a_i) >= i*s for every
// nonzero coefficient, then a_i  ->  a_i * pi^{-i s}.
ScaledModel content_scale(const EllipticCurve& E, const Place& v) {
  struct Item {
    const RatFunc* a;
    int w;
  };
  const Item items[] = {{&E.a1, 1}, {&E.a2, 2}, {&E.a3, 3}, {&E.a4, 4}, {&E.a6, 6}};
  bool any = false;
  long s = 0;
  for (const Item& it : items) {
    auto val = valuation(*it.a, v);
    if (!val) continue;
    long bound = floor_div(*val, it.w);
    s = any ? std::min(s, bound) : bound;
    any = true;
  }
  if (!any) throw std::invalid_argument("all Weierstrass coefficients vanish");
  ScaledModel out;
  out.s = s;
  out.a1 = E.a1 * uniformizer_pow(v, -1 * s);
  out.a2 = E.a2 * uniformizer_pow(v, -2 * s);
  out.a3 = E.a3 * uniformizer_pow(v, -3 * s);
  out.a4 = E.a4 * uniformizer_pow(v, -4 * s);
  out.a6 = E.a6 * uniformizer_pow(v, -6 * s);
  return out;
}

/**
 * The residue field k_v presented as F_q[T]/(modulus): the place's own
 * polynomial at a finite place, and F_q (modulus T) at infinity, where the
 * residue of an integral rational function is the ratio of leading
 * coefficients when numerator and denominator have equal degree.
 */
struct ResField {
  int q = 0;
  bool at_inf = false;
  Poly modulus;
  int d = 1;  // residue degree over F_q

  explicit ResField(const Place& v)
      : q(v.q),
        at_inf(v.is_infinite()),
        modulus(v.is_infinite() ? Poly::var(v.q) : v.pi),
        d(v.degree()) {}

  long long size() const {
    long long s = 1;
    for (int i = 0; i < d; ++i) s *= q;
    return s;
  }

  Poly reduce(const RatFunc& f) const {
    if (f.is_zero()) return Poly::zero(q);
    if (at_inf) {
      int dn = f.num.deg_nonzero(), dd = f.den.deg_nonzero();
      if (dn > dd) throw std::invalid_argument("not integral at infinity");
      if (dn < dd) return Poly::zero(q);
      return Poly::constant(q, fq_mul(q, f.num.leading(), fq_inv(q, f.den.leading())));
    }
    Poly den = poly_mod(f.den, modulus);
    if (den.is_zero()) throw std::invalid_argument("not integral at the place");
    return mul_mod(poly_mod(f.num, modulus), inv_mod(den, modulus), modulus);
  }

  Poly add(const Poly& a, const Poly& b) const { return poly_mod(a + b, modulus); }
  Poly mul(const Poly& a, const Poly& b) const { return mul_mod(a, b, modulus); }
  Poly neg(const Poly& a) const { return poly_mod(-a, modulus); }
  Poly times(const Poly& a, long long k) const {
    int r = static_cast<int>(((k % q) + q) % q);
    return scale(a, r);
  }
  std::vector<Poly> elements() const { return polys_below(q, at_inf ? 1 : d); }
};

struct ReducedCoefficients {
  Poly A1, A2, A3, A4, A6;
};

ReducedCoefficients reduce_model(const ScaledModel& m, const ResField& k) {
  return {k.reduce(m.a1), k.reduce(m.a2), k.reduce(m.a3), k.reduce(m.a4),
          k.reduce(m.a6)};
}

// F(x, y) = y^2 + A1 xy + A3 y - x^3 - A2 x^2 - A4 x - A6 over k.
Poly curve_poly(const ResField& k, const ReducedCoefficients& A, const Poly& x,
                const Poly& y) {
  Poly x2 = k.mul(x, x);
  Poly lhs = k.add(k.add(k.mul(y, y), k.mul(A.A1, k.mul(x, y))), k.mul(A.A3, y));
  Poly rhs = k.add(k.add(k.mul(x2, x), k.mul(A.A2, x2)),
                   k.add(k.mul(A.A4, x), A.A6));
  return k.add(lhs, k.neg(rhs));
}

// The split/nonsplit decision for the tangent-cone quadratic
// t^2 + B t - C at the node; degenerate cones return nullopt.
std::optional<bool> cone_splits(const ResField& k, const Poly& B, const Poly& C) {
  long long Q = k.size();
  if (k.q % 2 == 0) {
    // Artin-Schreier: distinct tangents need B != 0; rational tangents need
    // absolute trace of C / B^2 to vanish.
    if (B.is_zero()) return std::nullopt;
    Poly z = k.mul(C, inv_mod(k.mul(B, B), k.modulus));
    Poly tr = Poly::zero(k.q);
    Poly pw = z;
    int abs_deg = 0;  // degree of k over F_2
    for (long long sz = 1; sz < Q; sz *= 2) ++abs_deg;
    for (int i = 0; i < abs_deg; ++i) {
      tr = k.add(tr, pw);
      pw = k.mul(pw, pw);
    }
    return tr.is_zero();
  }
  // Odd characteristic: discriminant B^2 + 4C must be a nonzero square.
  Poly D = k.add(k.mul(B, B), k.times(C, 4));
  if (D.is_zero()) return std::nullopt;
  Poly e = pow_mod(D, (Q - 1) / 2, k.modulus);
  return e.is_one();
}

}  // namespace

Poly EllipticCurve::level() const { return p.pi * n; }

CurveQuantities curve_quantities(const EllipticCurve& E) {
  int q = E.field_size();
  CurveQuantities r;
  r.b2 = E.a1 * E.a1 + cnum(q, 4) * E.a2;
  r.b4 = cnum(q, 2) * E.a4 + E.a1 * E.a3;
  r.b6 = E.a3 * E.a3 + cnum(q, 4) * E.a6;
  r.b8 = E.a1 * E.a1 * E.a6 + cnum(q, 4) * E.a2 * E.a6 - E.a1 * E.a3 * E.a4 +
         E.a2 * E.a3 * E.a3 - E.a4 * E.a4;
  r.c4 = r.b2 * r.b2 - cnum(q, 24) * r.b4;
  r.c6 = -(r.b2 * r.b2 * r.b2) + cnum(q, 36) * r.b2 * r.b4 - cnum(q, 216) * r.b6;
  r.disc = -(r.b2 * r.b2 * r.b8) - cnum(q, 8) * r.b4 * r.b4 * r.b4 -
           cnum(q, 27) * r.b6 * r.b6 + cnum(q, 9) * r.b2 * r.b4 * r.b6;
  if (r.disc.is_zero()) throw std::invalid_argument("singular Weierstrass model");
  r.j = r.c4 * r.c4 * r.c4 / r.disc;
  return r;
}

ReductionReport reduction_check(const EllipticCurve& E, const Place& v) {
  CurveQuantities cq = curve_quantities(E);
  ScaledModel m = content_scale(E, v);
  RatFunc disc_scaled = cq.disc * uniformizer_pow(v, -12 * m.s);
  long vd = *valuation(disc_scaled, v);
  if (vd < 0) throw std::logic_error("content scaling left a non-integral model");
  if (vd == 0) return {ReductionType::good, 0};

  std::optional<long> vj = valuation(cq.j, v);  // nullopt iff j == 0
  if (!vj || *vj >= 0 || vd != -*vj) return {ReductionType::additive_or_unknown, 0};

  // Nodal case: locate the singular point of the reduced curve and test the
  // tangent cone. A genuine node is unique and rational over k_v.
  ResField k(v);
  ReducedCoefficients A = reduce_model(m, k);
  std::vector<std::pair<Poly, Poly>> singular;
  for (const Poly& x : k.elements()) {
    for (const Poly& y : k.elements()) {
      if (!curve_poly(k, A, x, y).is_zero()) continue;
      // F_y = 2y + A1 x + A3, F_x = A1 y - 3x^2 - 2 A2 x - A4.
      Poly fy = k.add(k.times(y, 2), k.add(k.mul(A.A1, x), A.A3));
      Poly fx = k.add(k.mul(A.A1, y),
                      k.neg(k.add(k.times(k.mul(x, x), 3),
                                  k.add(k.times(k.mul(A.A2, x), 2), A.A4))));
      if (fy.is_zero() && fx.is_zero()) singular.emplace_back(x, y);
    }
  }
  if (singular.size() != 1) return {ReductionType::additive_or_unknown, 0};

  const Poly& x0 = singular.front().first;
  Poly B = A.A1;
  Poly C = k.add(A.A2, k.times(x0, 3));
  std::optional<bool> split = cone_splits(k, B, C);
  if (!split) return {ReductionType::additive_or_unknown, 0};
  return {*split ? ReductionType::split_multiplicative
                 : ReductionType::nonsplit_multiplicative,
          -*vj};
}

long long point_count(const EllipticCurve& E, const Place& Q) {
  if (Q.is_infinite())
    throw std::invalid_argument("point counts are for finite places");
  if (Q.degree() > 3)
    throw std::invalid_argument("point counting capped at residue degree 3");
  ReductionReport rr = reduction_check(E, Q);
  if (rr.type != ReductionType::good)
    throw std::invalid_argument("point count requires good reduction at " +
                                Q.to_string());
  ResField k(Q);
  // The good model must already be Q-integral as given (content scaling at a
  // good place cannot change the count, but a fixture is expected integral).
  ScaledModel m = content_scale(E, Q);
  ReducedCoefficients A = reduce_model(m, k);
  long long affine = 0;
  for (const Poly& x : k.elements())
    for (const Poly& y : k.elements())
      if (curve_poly(k, A, x, y).is_zero()) ++affine;
  return affine + 1;
}

long long a_value(const EllipticCurve& E, const Place& Q) {
  long long size = Q.residue_size();
  long long a = size + 1 - point_count(E, Q);
  if (a * a > 4 * size) throw std::logic_error("Hasse bound violated at " +
                                               Q.to_string());
  return a;
}

TatePeriod tate_period(const EllipticCurve& E, const Place& p, int N) {
  ReductionReport rr = reduction_check(E, p);
  if (rr.type != ReductionType::split_multiplicative)
    throw std::domain_error("Tate period needs split multiplicative reduction at " +
                            p.to_string());
  TatePeriod out;
  out.m_p = rr.m;
  // Work at absolute precision N + m_p so the unit part keeps N digits.
  ResidueRing R(p, N + static_cast<int>(rr.m));
  CurveQuantities cq = curve_quantities(E);
  LocalElement j = embed(R, cq.j);
  out.q_E = tate_q_from_j(R, j);
  auto val = local_val(out.q_E);
  if (!val || *val != rr.m)
    throw std::logic_error("Tate parameter valuation disagrees with -v(j)");
  out.q_tilde = local_mul(R, out.q_E, local_pi_pow(R, -rr.m));
  return out;
}

// --- fixture files ----------------------------------------------------------

EllipticCurve parse_curve_fixture(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  auto trim = [](std::string s) {
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    auto e = s.find_last_not_of(ws);
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("fixture line without '=': " + line);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument("malformed fixture line: " + line);
    if (!kv.emplace(key, value).second)
      throw std::invalid_argument("duplicate fixture key: " + key);
  }
  for (const char* required : {"q", "p", "n"})
    if (!kv.count(required))
      throw std::invalid_argument(std::string("fixture misses key: ") + required);

  int q = std::stoi(kv.at("q"));
  auto coeff = [&](const char* key) {
    auto it = kv.find(key);
    return it == kv.end() ? RatFunc::zero(q) : parse_ratfunc(q, it->second);
  };
  EllipticCurve E;
  E.a1 = coeff("a1");
  E.a2 = coeff("a2");
  E.a3 = coeff("a3");
  E.a4 = coeff("a4");
  E.a6 = coeff("a6");
  E.p = Place::finite(parse_poly(q, kv.at("p")));
  E.n = monicize(parse_poly(q, kv.at("n")));
  if (E.n.is_zero()) throw std::invalid_argument("fixture level part n is zero");
  if (!gcd(E.p.pi, E.n).is_one())
    throw std::invalid_argument("declared n must be coprime to p");
  const std::set<std::string> known = {"q", "a1", "a2", "a3", "a4", "a6", "p", "n"};
  for (const auto& [key, value] : kv) {
    (void)value;
    if (!known.count(key))
      throw std::invalid_argument("unknown fixture key: " + key);
  }
  return E;
}

EllipticCurve load_curve_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open curve fixture: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_curve_fixture(buf.str());
}

std::string curve_fixture_to_string(const EllipticCurve& E) {
  std::ostringstream out;
  out << "q = " << E.field_size() << "\n";
  auto emit = [&](const char* key, const RatFunc& a) {
    if (!a.is_zero()) out << key << " = " << to_string(a) << "\n";
  };
  emit("a1", E.a1);
  emit("a2", E.a2);
  emit("a3", E.a3);
  emit("a4", E.a4);
  emit("a6", E.a6);
  out << "p = " << to_string(E.p.pi) << "\n";
  out << "n = " << to_string(E.n) << "\n";
  return out.str();
}

}  // namespace ezff
