#include "ezff/quotient.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ezff {

bool operator==(const ProjPoint& a, const ProjPoint& b) {
  return a.c == b.c && a.d == b.d;
}

bool operator<(const ProjPoint& a, const ProjPoint& b) {
  if (a.c != b.c) return a.c < b.c;
  return a.d < b.d;
}

namespace {

void require_level(const Poly& m) {
  if (m.is_zero() || !m.monic() || m.deg_nonzero() < 1)
    throw std::invalid_argument("level must be monic of degree >= 1");
}

std::vector<Poly> units_mod(const Poly& m) {
  std::vector<Poly> out;
  for (const Poly& u : polys_below(m.q, m.deg_nonzero()))
    if (!u.is_zero() && gcd(u, m).is_one()) out.push_back(u);
  return out;
}

std::pair<Poly, Poly> normalize_pair(const Poly& c, const Poly& d,
                                     const Poly& m,
                                     const std::vector<Poly>& units) {
  std::pair<Poly, Poly> best{mul_mod(units[0], c, m), mul_mod(units[0], d, m)};
  for (size_t i = 1; i < units.size(); ++i) {
    std::pair<Poly, Poly> cand{mul_mod(units[i], c, m),
                               mul_mod(units[i], d, m)};
    if (cand.first < best.first ||
        (cand.first == best.first && cand.second < best.second))
      best = cand;
  }
  return best;
}

void enumerate_points(const Poly& m, std::vector<ProjPoint>& points,
                      std::map<std::pair<Poly, Poly>, int>& raw_index) {
  require_level(m);
  const int q = m.q;
  const std::vector<Poly> units = units_mod(m);
  const std::vector<Poly> residues = polys_below(q, m.deg_nonzero());
  std::map<std::pair<Poly, Poly>, int> norm_index;
  points.clear();
  raw_index.clear();
  for (const Poly& c : residues)
    for (const Poly& d : residues) {
      if (!gcd(gcd(c, d), m).is_one()) continue;
      auto norm = normalize_pair(c, d, m, units);
      auto it = norm_index.find(norm);
      int id;
      if (it == norm_index.end()) {
        id = (int)points.size();
        norm_index.emplace(norm, id);
        points.push_back(ProjPoint{norm.first, norm.second});
      } else {
        id = it->second;
      }
      raw_index.emplace(std::make_pair(c, d), id);
    }
}

// The size P^1(A/m) must have: |m| * prod over irreducible divisors pi of
// (1 + 1/|pi|).
long long expected_p1_size(const Poly& m) {
  const int q = m.q;
  const int degm = m.deg_nonzero();
  long long n = 1;
  for (int i = 0; i < degm; ++i) n *= q;
  for (const Poly& pi : irreducible_monics(q, degm)) {
    if (!divides(pi, m)) continue;
    long long s = 1;
    for (int i = 0; i < pi.deg_nonzero(); ++i) s *= q;
    if (n % s != 0) throw std::logic_error("p1 size bookkeeping");
    n = n / s * (s + 1);
  }
  return n;
}

// A constant-entry or upper-triangular generator with entries reduced mod m.
struct Gen {
  Poly a, b, c, d;
};

struct PointAction {
  const Poly& m;
  const std::vector<ProjPoint>& points;
  const std::map<std::pair<Poly, Poly>, int>& raw_index;

  int apply(int pid, const Gen& g) const {
    const ProjPoint& p = points[pid];
    Poly c2 = poly_mod(p.c * g.a + p.d * g.c, m);
    Poly d2 = poly_mod(p.c * g.b + p.d * g.d, m);
    auto it = raw_index.find({c2, d2});
    if (it == raw_index.end())
      throw std::logic_error("group action left P^1");
    return it->second;
  }
};

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int x, int y) {
    x = find(x);
    y = find(y);
    if (x < y) parent[y] = x;
    else if (y < x) parent[x] = y;
  }
};

OrbitPartition orbits_under(const std::vector<Gen>& gens,
                            const PointAction& act) {
  const int n = (int)act.points.size();
  UnionFind uf(n);
  for (int i = 0; i < n; ++i)
    for (const Gen& g : gens) uf.unite(i, act.apply(i, g));
  // Canonical numbering: orbits ordered by their smallest member.
  OrbitPartition part;
  part.orbit_of_point.assign(n, -1);
  std::map<int, int> root_to_orbit;
  for (int i = 0; i < n; ++i) {
    int r = uf.find(i);
    auto it = root_to_orbit.find(r);
    if (it == root_to_orbit.end()) {
      int id = (int)part.rep.size();
      root_to_orbit.emplace(r, id);
      part.rep.push_back(i);  // i is the smallest member: ids ascend with i
      part.orbit_of_point[i] = id;
    } else {
      part.orbit_of_point[i] = it->second;
    }
  }
  return part;
}

std::vector<Gen> torus_gens(int q, const Poly& /*m*/) {
  std::vector<Gen> gens;
  for (int a = 2; a < q; ++a) {
    gens.push_back(Gen{Poly::constant(q, a), Poly::zero(q), Poly::zero(q),
                       Poly::constant(q, 1)});
    gens.push_back(Gen{Poly::constant(q, 1), Poly::zero(q), Poly::zero(q),
                       Poly::constant(q, a)});
  }
  return gens;
}

Gen unipotent(int q, const Poly& b) {
  return Gen{Poly::constant(q, 1), b, Poly::zero(q), Poly::constant(q, 1)};
}

// Stabilizer order, modulo scalars, of the point pid under the group
// { (a, b; 0, d) : a, d units, deg b <= k } acting through reduction mod m.
// Only b mod m matters; each residue class is hit q^max(0, k+1-deg m) times.
long long stab_upper(const PointAction& act, int pid, int k) {
  const Poly& m = act.m;
  const int q = m.q;
  const int degm = m.deg_nonzero();
  const int bdim = std::min(k + 1, degm);
  long long mult = 1;
  for (int i = 0; i < k + 1 - degm; ++i) mult *= q;
  const ProjPoint& p = act.points[pid];
  long long count = 0;
  for (int a = 1; a < q; ++a)
    for (int d = 1; d < q; ++d)
      for (const Poly& b : polys_below(q, bdim)) {
        Poly c2 = poly_mod(scale(p.c, a), m);
        Poly d2 = poly_mod(p.c * b + scale(p.d, d), m);
        auto it = act.raw_index.find({c2, d2});
        if (it != act.raw_index.end() && it->second == pid) ++count;
      }
  long long total = count * mult;
  if (total % (q - 1) != 0)
    throw std::logic_error("stabilizer count not divisible by q-1");
  return total / (q - 1);
}

// Stabilizer order, modulo scalars, under all of GL_2(F_q).
long long stab_gl2(const PointAction& act, int pid) {
  const int q = act.m.q;
  const ProjPoint& p = act.points[pid];
  long long count = 0;
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b)
      for (int c = 0; c < q; ++c)
        for (int d = 0; d < q; ++d) {
          if (fq_sub(q, fq_mul(q, a, d), fq_mul(q, b, c)) == 0) continue;
          Poly c2 = poly_mod(scale(p.c, a) + scale(p.d, c), act.m);
          Poly d2 = poly_mod(scale(p.c, b) + scale(p.d, d), act.m);
          auto it = act.raw_index.find({c2, d2});
          if (it != act.raw_index.end() && it->second == pid) ++count;
        }
  if (count % (q - 1) != 0)
    throw std::logic_error("stabilizer count not divisible by q-1");
  return count / (q - 1);
}

[[noreturn]] void invariant_failure(const std::string& what, const Poly& m) {
  throw std::runtime_error("quotient graph invariant failed (" + what +
                           ") for level " + to_string(m));
}

}  // namespace

std::vector<ProjPoint> p1_points(const Poly& m) {
  std::vector<ProjPoint> points;
  std::map<std::pair<Poly, Poly>, int> raw_index;
  enumerate_points(m, points, raw_index);
  if ((long long)points.size() != expected_p1_size(m))
    invariant_failure("P^1 point count", m);
  return points;
}

int QuotientGraph::point_id(const Poly& c, const Poly& d) const {
  auto it = raw_index.find({poly_mod(c, m), poly_mod(d, m)});
  if (it == raw_index.end())
    throw std::invalid_argument("pair does not define a point of P^1(A/m)");
  return it->second;
}

int QuotientGraph::num_edge_orbits() const {
  int n = 0;
  for (const OrbitPartition& e : elayers) n += e.size();
  return n;
}

int QuotientGraph::edge_index(int layer, int orbit) const {
  int off = 0;
  for (int k = 0; k < layer; ++k) off += elayers[k].size();
  return off + orbit;
}

std::pair<int, int> QuotientGraph::edge_from_index(int idx) const {
  for (int k = 0; k < (int)elayers.size(); ++k) {
    if (idx < elayers[k].size()) return {k, idx};
    idx -= elayers[k].size();
  }
  throw std::out_of_range("edge orbit index out of range");
}

QuotientGraph build_quotient(const Poly& m, int depth) {
  require_level(m);
  QuotientGraph G;
  G.q = m.q;
  G.m = m;
  G.K0 = m.deg_nonzero();
  G.vdepth = depth;
  if (depth < G.K0 + 2)
    throw std::invalid_argument("quotient depth must be at least deg(m) + 2");

  enumerate_points(m, G.points, G.raw_index);
  if ((long long)G.points.size() != expected_p1_size(m))
    invariant_failure("P^1 point count", m);

  PointAction act{G.m, G.points, G.raw_index};
  const int q = G.q;
  const Poly one = Poly::constant(q, 1);

  // Vertex layers: k = 0 carries all of GL_2(F_q); k >= 1 the upper-triangular
  // group with deg b <= k (b mod m is all that acts, so T^j for
  // j < min(k+1, deg m) generates every reachable unipotent).
  for (int k = 0; k <= depth; ++k) {
    std::vector<Gen> gens = torus_gens(q, m);
    if (k == 0) {
      gens.push_back(unipotent(q, one));
      gens.push_back(Gen{Poly::zero(q), one, one, Poly::zero(q)});  // Weyl
    } else {
      for (int j = 0; j < std::min(k + 1, G.K0); ++j)
        gens.push_back(unipotent(q, shift(one, j)));
    }
    OrbitPartition part = orbits_under(gens, act);
    part.stab.resize(part.size());
    for (int o = 0; o < part.size(); ++o)
      part.stab[o] = (k == 0) ? stab_gl2(act, part.rep[o])
                              : stab_upper(act, part.rep[o], k);
    G.vlayers.push_back(std::move(part));
  }

  // Edge layers: the edge joining layers k and k+1 carries G_k ∩ G_{k+1},
  // which is G_k for k >= 1 and the constant Borel for k = 0.
  for (int k = 0; k < depth; ++k) {
    if (k >= 1) {
      G.elayers.push_back(G.vlayers[k]);
      continue;
    }
    std::vector<Gen> gens = torus_gens(q, m);
    gens.push_back(unipotent(q, one));
    OrbitPartition part = orbits_under(gens, act);
    part.stab.resize(part.size());
    for (int o = 0; o < part.size(); ++o)
      part.stab[o] = stab_upper(act, part.rep[o], 0);
    G.elayers.push_back(std::move(part));
  }

  // Incidence: an edge orbit's representative point read in the two adjacent
  // vertex layers.
  G.bottom_vertex.resize(depth);
  G.top_vertex.resize(depth);
  for (int k = 0; k < depth; ++k) {
    const OrbitPartition& E = G.elayers[k];
    G.bottom_vertex[k].resize(E.size());
    G.top_vertex[k].resize(E.size());
    for (int o = 0; o < E.size(); ++o) {
      G.bottom_vertex[k][o] = G.vlayers[k].orbit_of_point[E.rep[o]];
      G.top_vertex[k][o] = G.vlayers[k + 1].orbit_of_point[E.rep[o]];
    }
  }

  // Invariant: star sums. Each vertex orbit must see total edge multiplicity
  // q + 1 (its lift has q + 1 tree neighbours). Down-edges of a layer-k
  // vertex live at edge layer k-1; the up-edge multiplicity is
  // stab(V)/stab(E) with E the same orbit one edge layer up.
  for (int k = 0; k <= depth; ++k) {
    const OrbitPartition& V = G.vlayers[k];
    for (int o = 0; o < V.size(); ++o) {
      long long sum = 0;
      if (k >= 1) {
        const OrbitPartition& E = G.elayers[k - 1];
        for (int eo = 0; eo < E.size(); ++eo) {
          if (G.top_vertex[k - 1][eo] != o) continue;
          if (V.stab[o] % E.stab[eo] != 0)
            invariant_failure("edge stabilizer does not divide vertex's", m);
          sum += V.stab[o] / E.stab[eo];
        }
      }
      if (k < depth) {
        const OrbitPartition& E = G.elayers[k];
        for (int eo = 0; eo < E.size(); ++eo) {
          if (G.bottom_vertex[k][eo] != o) continue;
          if (V.stab[o] % E.stab[eo] != 0)
            invariant_failure("edge stabilizer does not divide vertex's", m);
          sum += V.stab[o] / E.stab[eo];
        }
      }
      long long expect = (k == depth) ? q : q + 1;
      if (k == 0) expect = q + 1;  // all q+1 neighbours are one layer up
      if (sum != expect) {
        std::ostringstream os;
        os << "star sum at layer " << k << " orbit " << o << " is " << sum
           << ", expected " << expect;
        invariant_failure(os.str(), m);
      }
    }
  }

  // Invariant: beyond the core the layer partition is stable and stabilizer
  // orders grow by exactly q per layer (the cusp rays).
  for (int k = G.K0; k < depth; ++k) {
    const OrbitPartition& A = G.vlayers[k];
    const OrbitPartition& B = G.vlayers[k + 1];
    if (A.orbit_of_point != B.orbit_of_point)
      invariant_failure("stabilization not reached by requested depth", m);
    for (int o = 0; o < A.size(); ++o)
      if (B.stab[o] != q * A.stab[o])
        invariant_failure("cusp-ray stabilizer growth", m);
  }

  return G;
}

namespace {

struct PolyMat {
  Poly a, b, c, d;
};

PolyMat pm_mul(const PolyMat& x, const PolyMat& y) {
  return PolyMat{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                 x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Mat2 pm_to_mat2(const PolyMat& w) {
  return Mat2{RatFunc::from_poly(w.a), RatFunc::from_poly(w.b),
              RatFunc::from_poly(w.c), RatFunc::from_poly(w.d)};
}

int pm_max_deg(const PolyMat& w) {
  int d = 0;
  for (const Poly* p : {&w.a, &w.b, &w.c, &w.d})
    if (!p->is_zero()) d = std::max(d, p->deg_nonzero());
  return d;
}

// The edge's defining coset representative, cleared to a polynomial matrix
// by a power of T (a central scaling, so the same coset class).
PolyMat edge_poly_matrix(const OrientedEdge& e) {
  const int q = e.v.q;
  const int s = std::max(e.n, 0);
  Poly tail = Poly::zero(q);
  for (const auto& [exp, digit] : e.u) tail = tail + shift(digit, s - exp);
  if (e.family == EdgeFamily::main)
    return PolyMat{shift(Poly::constant(q, 1), s - e.n), tail, Poly::zero(q),
                   shift(Poly::constant(q, 1), s)};
  return PolyMat{tail, shift(Poly::constant(q, 1), s + 1 - e.n),
                 shift(Poly::constant(q, 1), s), Poly::zero(q)};
}

}  // namespace

ProjectedEdge project_edge(const OrientedEdge& e, const QuotientGraph& G) {
  if (!e.v.is_infinite())
    throw std::invalid_argument("project_edge expects an edge at infinity");
  if (e.v.q != G.q) throw std::invalid_argument("field size mismatch");
  const int q = G.q;
  const Place vinf = e.v;

  PolyMat W = edge_poly_matrix(e);
  PolyMat gamma{Poly::constant(q, 1), Poly::zero(q), Poly::zero(q),
                Poly::constant(q, 1)};
  const PolyMat weyl{Poly::zero(q), Poly::constant(q, 1),
                     Poly::constant(q, 1), Poly::zero(q)};

  const int cap = 4 * (pm_max_deg(W) + 1) + 32;
  OrientedEdge f = base_edge(vinf);
  for (int iter = 0;; ++iter) {
    if (iter > cap)
      throw std::runtime_error("project_edge: reduction did not terminate");
    f = reduce_matrix(pm_to_mat2(W), vinf);

    // Split the tail at exponent zero: digits at non-positive exponents form
    // a polynomial in T that a unipotent of GL_2(F_q[T]) removes.
    Poly P = Poly::zero(q);
    bool proper = false;
    for (const auto& [exp, digit] : f.u) {
      if (exp <= 0)
        P = P + shift(digit, -exp);
      else
        proper = true;
    }
    if (!P.is_zero()) {
      PolyMat L{Poly::constant(q, 1), -P, Poly::zero(q), Poly::constant(q, 1)};
      W = pm_mul(L, W);
      gamma = pm_mul(L, gamma);
      continue;
    }
    if (!proper) {
      if (f.n > 0) {  // Weyl flip onto the standard ray's side
        W = pm_mul(weyl, W);
        gamma = pm_mul(weyl, gamma);
        continue;
      }
      break;
    }
    // Pure proper tail: invert it (continued-fraction step).
    W = pm_mul(weyl, W);
    gamma = pm_mul(weyl, gamma);
  }

  ProjectedEdge out;
  out.layer = -f.n;
  out.sign = (f.family == EdgeFamily::main) ? 1 : -1;
  // The edge is gamma^-1 times the standard layer edge; its label is the
  // bottom row of gamma^-1, i.e. (-c, a) up to the unit determinant.
  int pid = G.point_id(poly_mod(-gamma.c, G.m), poly_mod(gamma.a, G.m));
  int el = std::min(out.layer, G.vdepth - 1);
  out.orbit = G.elayers[el].orbit_of_point[pid];
  return out;
}

Mat2 matrix_with_bottom_row(const ProjPoint& p, const Poly& m) {
  require_level(m);
  const int q = m.q;
  Poly c = poly_mod(p.c, m), d = poly_mod(p.d, m);
  if (!gcd(gcd(c, d), m).is_one())
    throw std::invalid_argument("label is not a point of P^1(A/m)");
  // Coprime lift: adjust both entries by multiples of m until gcd 1. The
  // excluded classes per irreducible divisor of one entry are finitely many,
  // so a small search always lands.
  Poly c0 = c, d0 = d;
  bool found = false;
  for (int bound = 1; bound <= 6 && !found; ++bound)
    for (const Poly& tc : polys_below(q, bound)) {
      for (const Poly& td : polys_below(q, bound)) {
        Poly cc = c + m * tc, dd = d + m * td;
        if (gcd(cc, dd).is_one()) {
          c0 = cc;
          d0 = dd;
          found = true;
          break;
        }
      }
      if (found) break;
    }
  if (!found) throw std::logic_error("coprime lift search failed");
  XgcdResult x = xgcd(c0, d0);  // 1 = x.x * c0 + x.y * d0
  if (!x.g.is_one()) throw std::logic_error("coprime lift not coprime");
  // det (y, -x; c0, d0) = y d0 + x c0 = 1.
  return Mat2{RatFunc::from_poly(x.y), RatFunc::from_poly(-x.x),
              RatFunc::from_poly(c0), RatFunc::from_poly(d0)};
}

Mat2 edge_orbit_rep_matrix(const QuotientGraph& G, int layer, int orbit) {
  if (layer < 0 || layer >= (int)G.elayers.size())
    throw std::out_of_range("edge layer out of range");
  if (orbit < 0 || orbit >= G.elayers[layer].size())
    throw std::out_of_range("edge orbit out of range");
  const ProjPoint& p = G.points[G.elayers[layer].rep[orbit]];
  Mat2 g = matrix_with_bottom_row(p, G.m);
  Mat2 standard{RatFunc::from_poly(shift(Poly::constant(G.q, 1), layer)),
                RatFunc::zero(G.q), RatFunc::zero(G.q),
                RatFunc::constant(G.q, 1)};
  return mat2_mul(g, standard);
}

OrientedEdge edge_orbit_rep(const QuotientGraph& G, int layer, int orbit) {
  return reduce_matrix(edge_orbit_rep_matrix(G, layer, orbit),
                       Place::infinite(G.q));
}

std::string to_dot(const QuotientGraph& G) {
  std::ostringstream os;
  os << "graph quotient {\n";
  os << "  // level " << to_string(G.m) << " over F_" << G.q << ", core depth "
     << G.K0 << "; weighted star sum " << (G.q + 1) << " at every vertex\n";
  for (int k = 0; k <= G.K0; ++k)
    for (int o = 0; o < G.vlayers[k].size(); ++o)
      os << "  v" << k << "_" << o << " [label=\"" << k << ":" << o
         << " stab " << G.vlayers[k].stab[o] << " star " << (G.q + 1)
         << "\"];\n";
  // Beyond the core the quotient is a disjoint union of stable rays; each is
  // collapsed to one node carrying its entry-stabilizer multiplicity (the
  // stabilizer order then grows by q per layer along the ray).
  for (int o = 0; o < G.vlayers[G.K0 + 1].size(); ++o)
    os << "  cusp_" << o << " [label=\"cusp ray " << o << " x"
       << G.vlayers[G.K0 + 1].stab[o] << "\", shape=doublecircle];\n";
  for (int k = 0; k <= G.K0 && k < (int)G.elayers.size(); ++k)
    for (int eo = 0; eo < G.elayers[k].size(); ++eo) {
      os << "  v" << k << "_" << G.bottom_vertex[k][eo] << " -- ";
      if (k == G.K0)
        os << "cusp_" << G.top_vertex[k][eo];
      else
        os << "v" << (k + 1) << "_" << G.top_vertex[k][eo];
      os << " [label=\"stab " << G.elayers[k].stab[eo] << "\"];\n";
    }
  os << "}\n";
  return os.str();
}

}  // namespace ezff
