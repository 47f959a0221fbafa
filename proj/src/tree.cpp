#include "ezff/tree.hpp"

#include <sstream>
#include <stdexcept>

namespace ezff {

PiExpansion expansion_of(const RatFunc& r, const Place& v, int n) {
  PiExpansion out;
  if (r.is_zero()) return out;
  long val = *valuation(r, v);
  if (val >= n) return out;
  ResidueRing R(v, (int)(n - val));
  LocalElement x = embed(R, r);
  auto digits = local_digits(R, x);
  for (size_t i = 0; i < digits.size(); ++i)
    if (!digits[i].is_zero()) out[(int)(val + (long)i)] = digits[i];
  return out;
}

RatFunc expansion_value(int q, const PiExpansion& u, const Place& v) {
  RatFunc acc = RatFunc::zero(q);
  RatFunc pi = v.is_infinite() ? inverse(RatFunc::var(q))
                               : RatFunc::from_poly(v.pi);
  for (const auto& [e, digit] : u) {
    RatFunc p = RatFunc::constant(q, 1);
    for (int i = 0; i < (e >= 0 ? e : -e); ++i) p = p * pi;
    if (e < 0) p = inverse(p);
    acc = acc + RatFunc::from_poly(digit) * p;
  }
  return acc;
}

PiExpansion truncate_expansion(const PiExpansion& u, int n) {
  PiExpansion out;
  for (const auto& [e, digit] : u)
    if (e < n) out[e] = digit;
  return out;
}

bool operator==(const OrientedEdge& a, const OrientedEdge& b) {
  return a.v == b.v && a.n == b.n && a.family == b.family && a.u == b.u;
}

bool operator<(const OrientedEdge& a, const OrientedEdge& b) {
  if (a.n != b.n) return a.n < b.n;
  if (a.family != b.family) return a.family < b.family;
  return a.u < b.u;
}

bool operator==(const Vertex& a, const Vertex& b) {
  return a.v == b.v && a.n == b.n && a.u == b.u;
}

bool operator<(const Vertex& a, const Vertex& b) {
  if (a.n != b.n) return a.n < b.n;
  return a.u < b.u;
}

OrientedEdge base_edge(const Place& v) {
  return OrientedEdge{v, 0, {}, EdgeFamily::main};
}

OrientedEdge make_edge(const Place& v, int n, PiExpansion u, EdgeFamily f) {
  for (auto it = u.begin(); it != u.end();) {
    const auto& [e, digit] = *it;
    if (digit.is_zero()) {
      it = u.erase(it);
      continue;
    }
    if (e >= n) throw std::invalid_argument("tail digit at exponent >= level");
    if (digit.q != v.q || (int)digit.c.size() > v.degree())
      throw std::invalid_argument("tail digit is not a residue representative");
    ++it;
  }
  return OrientedEdge{v, n, std::move(u), f};
}

OrientedEdge reverse(const OrientedEdge& e) {
  OrientedEdge r = e;
  r.family = e.family == EdgeFamily::main ? EdgeFamily::flipped : EdgeFamily::main;
  return r;
}

Vertex terminus(const OrientedEdge& e) {
  if (e.family == EdgeFamily::main) return Vertex{e.v, e.n, e.u};
  return Vertex{e.v, e.n - 1, truncate_expansion(e.u, e.n - 1)};
}

Vertex origin(const OrientedEdge& e) { return terminus(reverse(e)); }

std::string to_string(const OrientedEdge& e) {
  std::ostringstream os;
  os << "(n=" << e.n << ", u=" << to_string(expansion_value(e.v.q, e.u, e.v))
     << ", " << (e.family == EdgeFamily::main ? "main" : "flipped") << ")@"
     << e.v.to_string();
  return os.str();
}

std::string to_string(const Vertex& w) {
  std::ostringstream os;
  os << "[n=" << w.n << ", u=" << to_string(expansion_value(w.v.q, w.u, w.v))
     << "]@" << w.v.to_string();
  return os.str();
}

BallDescriptor ball_of_edge(const OrientedEdge& e) {
  BallDescriptor B;
  B.complement = (e.family == EdgeFamily::flipped);
  B.center = expansion_value(e.v.q, e.u, e.v);
  B.radius = e.n;
  return B;
}

bool ball_contains(const BallDescriptor& B, const std::optional<RatFunc>& t,
                   const Place& v) {
  if (!t.has_value()) return B.complement;  // infinity
  auto val = valuation(*t - B.center, v);
  bool in_ball = !val.has_value() || *val >= B.radius;
  return B.complement ? !in_ball : in_ball;
}

Mat2 mat2_mul(const Mat2& x, const Mat2& y) {
  return Mat2{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
              x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

RatFunc mat2_det(const Mat2& m) { return m.a * m.d - m.b * m.c; }

Mat2 mat2_identity(int q) {
  return Mat2{RatFunc::constant(q, 1), RatFunc::zero(q), RatFunc::zero(q),
              RatFunc::constant(q, 1)};
}

OrientedEdge reduce_matrix(const Mat2& g, const Place& v) {
  RatFunc det = mat2_det(g);
  if (det.is_zero()) throw std::invalid_argument("matrix is singular");
  long vdet = *valuation(det, v);
  auto vc = valuation(g.c, v);
  auto vd = valuation(g.d, v);
  bool caseA = !vc.has_value() || (vd.has_value() && *vc > *vd);
  if (caseA) {
    // column ops clear c; the edge is main with n = v(det) - 2 v(d),
    // tail b/d mod pi^n.
    int n = (int)(vdet - 2 * *vd);
    return make_edge(v, n, expansion_of(g.b / g.d, v, n), EdgeFamily::main);
  }
  // c dominates: flipped family, n = 1 + v(det) - 2 v(c), tail a/c.
  int n = (int)(1 + vdet - 2 * *vc);
  return make_edge(v, n, expansion_of(g.a / g.c, v, n), EdgeFamily::flipped);
}

namespace {

// Digits of a local element as a sparse expansion, truncated below level n;
// demands two digits of margin beyond the level.
PiExpansion local_expansion(const ResidueRing& R, const LocalElement& x, int n) {
  PiExpansion out;
  if (x.zero) {
    if (!x.exact && x.val < n + 2)
      throw std::invalid_argument(
          "insufficient precision to resolve the edge tail");
    return out;
  }
  if (x.abs_prec() < n + 2)
    throw std::invalid_argument("insufficient precision to resolve the edge tail");
  auto digits = local_digits(R, x);
  for (size_t i = 0; i < digits.size(); ++i) {
    long e = x.val + (long)i;
    if (e >= n) break;
    if (!digits[i].is_zero()) out[(int)e] = digits[i];
  }
  return out;
}

}  // namespace

OrientedEdge reduce_matrix(const ResidueRing& R, const LocalMat2& g) {
  const Place& v = R.v;
  LocalElement det = local_sub(R, local_mul(R, g.a, g.d), local_mul(R, g.b, g.c));
  auto vdet = local_val(det);
  if (!vdet)
    throw std::invalid_argument(
        "matrix determinant is indistinguishable from zero");
  auto vc = local_val(g.c);
  auto vd = local_val(g.d);
  bool caseA;
  if (!vc && !vd) {
    throw std::invalid_argument("bottom row is indistinguishable from zero");
  } else if (vc && vd) {
    caseA = *vc > *vd;
  } else if (!vc) {
    // v(c) >= g.c.val (infinite when exact); case A needs v(c) > v(d)
    if (g.c.exact || g.c.val > *vd) caseA = true;
    else throw std::invalid_argument("insufficient precision on the bottom row");
  } else {
    // v(d) >= g.d.val; case B needs v(c) <= v(d)
    if (g.d.exact || *vc <= g.d.val) caseA = false;
    else throw std::invalid_argument("insufficient precision on the bottom row");
  }
  if (caseA) {
    int n = (int)(*vdet - 2 * *vd);
    LocalElement tail = local_div(R, g.b, g.d);
    return make_edge(v, n, local_expansion(R, tail, n), EdgeFamily::main);
  }
  int n = (int)(1 + *vdet - 2 * *vc);
  LocalElement tail = local_div(R, g.a, g.c);
  return make_edge(v, n, local_expansion(R, tail, n), EdgeFamily::flipped);
}

OrientedEdge geodesic_edge(const RatFunc& r, int k, const Place& v) {
  return make_edge(v, k, expansion_of(r, v, k), EdgeFamily::flipped);
}

}  // namespace ezff
