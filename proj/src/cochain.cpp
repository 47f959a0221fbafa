#include "ezff/cochain.hpp"

#include <algorithm>
#include <stdexcept>

namespace ezff {

bool operator==(const HarmonicCochain& a, const HarmonicCochain& b) {
  return a.G == b.G && a.values == b.values;
}

long long eval(const HarmonicCochain& phi, const ProjectedEdge& pe) {
  if (pe.layer >= (int)phi.G->elayers.size()) return 0;  // cuspidal tail
  return pe.sign * phi.values[phi.G->edge_index(pe.layer, pe.orbit)];
}

long long eval(const HarmonicCochain& phi, const OrientedEdge& e) {
  return eval(phi, project_edge(e, *phi.G));
}

long long harmonicity_residual(const HarmonicCochain& phi, int layer,
                               int orbit) {
  const QuotientGraph& G = *phi.G;
  long long sum = 0;
  // Edges one layer further out, oriented toward this vertex = stored
  // inward orientation.
  if (layer < G.vdepth) {
    const OrbitPartition& E = G.elayers[layer];
    for (int eo = 0; eo < E.size(); ++eo) {
      if (G.bottom_vertex[layer][eo] != orbit) continue;
      long long mult = G.vlayers[layer].stab[orbit] / E.stab[eo];
      sum += mult * phi.values[G.edge_index(layer, eo)];
    }
  }
  // Edges one layer further in, toward this vertex = reversed orientation.
  if (layer >= 1) {
    const OrbitPartition& E = G.elayers[layer - 1];
    for (int eo = 0; eo < E.size(); ++eo) {
      if (G.top_vertex[layer - 1][eo] != orbit) continue;
      long long mult = G.vlayers[layer].stab[orbit] / E.stab[eo];
      sum -= mult * phi.values[G.edge_index(layer - 1, eo)];
    }
  }
  return sum;
}

bool is_harmonic(const HarmonicCochain& phi) {
  const QuotientGraph& G = *phi.G;
  for (int k = 0; k <= G.vdepth; ++k)
    for (int o = 0; o < G.vlayers[k].size(); ++o)
      if (harmonicity_residual(phi, k, o) != 0) return false;
  return true;
}

IntMat harmonicity_matrix(const QuotientGraph& G) {
  IntMat A;
  const int ncols = G.num_edge_orbits();
  for (int k = 0; k <= G.vdepth; ++k)
    for (int o = 0; o < G.vlayers[k].size(); ++o) {
      std::vector<BigInt> row(ncols, 0);
      if (k < G.vdepth) {
        const OrbitPartition& E = G.elayers[k];
        for (int eo = 0; eo < E.size(); ++eo)
          if (G.bottom_vertex[k][eo] == o)
            row[G.edge_index(k, eo)] +=
                BigInt(G.vlayers[k].stab[o] / E.stab[eo]);
      }
      if (k >= 1) {
        const OrbitPartition& E = G.elayers[k - 1];
        for (int eo = 0; eo < E.size(); ++eo)
          if (G.top_vertex[k - 1][eo] == o)
            row[G.edge_index(k - 1, eo)] -=
                BigInt(G.vlayers[k].stab[o] / E.stab[eo]);
      }
      A.push_back(std::move(row));
    }
  return A;
}

std::vector<HarmonicCochain> cuspidal_basis(const QuotientGraph& G) {
  std::vector<std::vector<BigInt>> kernel = integer_kernel(harmonicity_matrix(G));
  std::vector<HarmonicCochain> basis;
  for (const auto& v : kernel) {
    HarmonicCochain phi{&G, {}};
    phi.values.reserve(v.size());
    for (const BigInt& x : v) phi.values.push_back(to_int64(x));
    // Cuspidal support must be confined to the core: the solve only imposes
    // vanishing beyond the window, so check the two outermost stored layers.
    for (int k = G.vdepth - 2; k < G.vdepth; ++k)
      for (int eo = 0; eo < G.elayers[k].size(); ++eo)
        if (phi.values[G.edge_index(k, eo)] != 0)
          throw std::runtime_error(
              "cuspidal support leaks into the assertion window; "
              "increase the graph depth");
    basis.push_back(std::move(phi));
  }
  return basis;
}

namespace {

Mat2 poly_mat(const Poly& a, const Poly& b, const Poly& c, const Poly& d) {
  return Mat2{RatFunc::from_poly(a), RatFunc::from_poly(b),
              RatFunc::from_poly(c), RatFunc::from_poly(d)};
}

}  // namespace

HarmonicCochain pushforward(const HarmonicCochain& phi,
                            const QuotientGraph& target,
                            const std::vector<Mat2>& factors) {
  const Place inf = Place::infinite(target.q);
  HarmonicCochain out{&target,
                      std::vector<long long>(target.num_edge_orbits(), 0)};
  for (int k = 0; k < target.vdepth; ++k)
    for (int o = 0; o < target.elayers[k].size(); ++o) {
      Mat2 R = edge_orbit_rep_matrix(target, k, o);
      long long s = 0;
      for (const Mat2& L : factors)
        s += eval(phi, reduce_matrix(mat2_mul(L, R), inf));
      out.values[target.edge_index(k, o)] = s;
    }
  return out;
}

IntMat pushforward_matrix(const QuotientGraph& source,
                          const QuotientGraph& target,
                          const std::vector<Mat2>& factors) {
  const Place inf = Place::infinite(target.q);
  IntMat M(target.num_edge_orbits(),
           std::vector<BigInt>(source.num_edge_orbits(), 0));
  for (int k = 0; k < target.vdepth; ++k)
    for (int o = 0; o < target.elayers[k].size(); ++o) {
      Mat2 R = edge_orbit_rep_matrix(target, k, o);
      for (const Mat2& L : factors) {
        ProjectedEdge pe =
            project_edge(reduce_matrix(mat2_mul(L, R), inf), source);
        if (pe.layer >= (int)source.elayers.size()) continue;  // tail = 0
        M[target.edge_index(k, o)][source.edge_index(pe.layer, pe.orbit)] +=
            pe.sign;
      }
    }
  return M;
}

std::vector<Mat2> hecke_cosets(const Place& Q) {
  if (Q.is_infinite())
    throw std::invalid_argument("Hecke operators at infinity are not defined");
  const int q = Q.q;
  // Right cosets Gamma_0(m) \ {integral det-Q matrices of unit content}:
  // (1, b; 0, Q) for b mod Q, plus (Q, 0; 0, 1). (The variants (Q, b; 0, 1)
  // all agree up to a unipotent on the left, so they would not do.)
  std::vector<Mat2> out;
  for (const Poly& b : polys_below(q, Q.pi.deg_nonzero()))
    out.push_back(poly_mat(Poly::constant(q, 1), b, Poly::zero(q), Q.pi));
  out.push_back(poly_mat(Q.pi, Poly::zero(q), Poly::zero(q),
                         Poly::constant(q, 1)));
  return out;
}

std::vector<Mat2> u_cosets(const Place& P) {
  if (P.is_infinite()) throw std::invalid_argument("U at infinity undefined");
  const int q = P.q;
  std::vector<Mat2> out;
  for (const Poly& b : polys_below(q, P.pi.deg_nonzero()))
    out.push_back(poly_mat(Poly::constant(q, 1), b, Poly::zero(q), P.pi));
  return out;
}

Mat2 atkin_lehner_matrix(const Place& P, const Poly& m) {
  if (P.is_infinite() || !divides(P.pi, m) || multiplicity(m, P.pi) != 1)
    throw std::invalid_argument(
        "Atkin-Lehner requires a finite place exactly dividing the level");
  Poly n = poly_div(m, P.pi);
  XgcdResult xg = xgcd(P.pi, n);  // 1 = x*P + y*n
  if (!xg.g.is_one()) throw std::logic_error("level factors not coprime");
  // det (xP, -y; m, P) = x P^2 + y n P = P.
  return poly_mat(xg.x * P.pi, -xg.y, m, P.pi);
}

namespace {

// CRT idempotents mod n*P: first is 1 mod P and 0 mod n, second the reverse.
std::pair<Poly, Poly> crt_idempotents(const Place& P, const Poly& n) {
  if (P.is_infinite()) throw std::invalid_argument("trace place is infinite");
  if (!gcd(P.pi, n).is_one())
    throw std::invalid_argument("trace place must not divide the base level");
  const Poly en = n * inv_mod(poly_mod(n, P.pi), P.pi);
  const Poly ep = n.is_one() ? Poly::zero(P.q)
                             : P.pi * inv_mod(poly_mod(P.pi, n), n);
  return {en, ep};
}

// Determinant-1 matrices in Gamma_0(n) whose *top* rows cover P^1(A/P):
// right-coset representatives for (Gamma_0(n) ∩ Gamma^0(P)) \ Gamma_0(n),
// the coset space of the second degeneracy direction.
std::vector<Mat2> top_row_cosets(const Place& P, const Poly& n) {
  const Poly np = n * P.pi;
  auto [en, ep] = crt_idempotents(P, n);
  std::vector<Mat2> out;
  for (const ProjPoint& lbl : p1_points(P.pi)) {
    // Row congruent to the label mod P and to (1, 0) mod n.
    Poly ahat = poly_mod(lbl.c * en + ep, np);
    Poly bhat = poly_mod(lbl.d * en, np);
    Mat2 M = matrix_with_bottom_row(ProjPoint{ahat, bhat}, np);
    // Swap the rows (negating the new bottom row to keep determinant 1) so
    // the congruence sits on top, then clear the bottom-left entry mod n by
    // a lower-unipotent row operation; a == ahat == 1 mod n makes t = y work.
    Poly a = M.c.num, b = M.d.num, y = M.a.num, x = M.b.num;
    Poly t = n.is_one() ? Poly::zero(P.q) : poly_mod(y, n);
    out.push_back(Mat2{RatFunc::from_poly(a), RatFunc::from_poly(b),
                       RatFunc::from_poly(t * a - y),
                       RatFunc::from_poly(t * b - x)});
  }
  return out;
}

}  // namespace

std::vector<Mat2> trace_cosets(const Place& P, const Poly& n) {
  const Poly np = n * P.pi;
  auto [en, ep] = crt_idempotents(P, n);
  std::vector<Mat2> out;
  for (const ProjPoint& lbl : p1_points(P.pi)) {
    // Bottom row congruent to the label mod P and to (0 : 1) mod n, so the
    // lift lies in Gamma_0(n) and the labels are distinct mod n*P.
    Poly c = poly_mod(lbl.c * en, np);
    Poly d = poly_mod(lbl.d * en + ep, np);
    out.push_back(matrix_with_bottom_row(ProjPoint{c, d}, np));
  }
  return out;
}

HarmonicCochain hecke_operator(const Place& Q, const HarmonicCochain& phi) {
  if (!gcd(Q.pi, phi.G->m).is_one())
    throw std::invalid_argument("Hecke place must be good for the level");
  return pushforward(phi, *phi.G, hecke_cosets(Q));
}

HarmonicCochain u_operator(const Place& P, const HarmonicCochain& phi) {
  if (P.is_infinite() || !divides(P.pi, phi.G->m))
    throw std::invalid_argument("U requires a place dividing the level");
  return pushforward(phi, *phi.G, u_cosets(P));
}

HarmonicCochain atkin_lehner(const Place& P, const HarmonicCochain& phi) {
  return pushforward(phi, *phi.G, {atkin_lehner_matrix(P, phi.G->m)});
}

HarmonicCochain trace_map(const Place& P, const HarmonicCochain& phi,
                          const QuotientGraph& Gn) {
  if (phi.G->m != Gn.m * P.pi)
    throw std::invalid_argument("trace levels must differ by exactly P");
  return pushforward(phi, Gn, trace_cosets(P, Gn.m));
}

HarmonicCochain trace_map_twisted(const Place& P, const HarmonicCochain& phi,
                                  const QuotientGraph& Gn) {
  if (phi.G->m != Gn.m * P.pi)
    throw std::invalid_argument("trace levels must differ by exactly P");
  const int q = P.q;
  // Fibers of the twisted degeneracy map e -> [diag(pi,1) e] are indexed by
  // top-row classes mod P; diag(1,pi) = pi * diag(pi,1)^{-1} up to the
  // (edge-trivial) scalar pi.
  Mat2 D1p =
      poly_mat(Poly::constant(q, 1), Poly::zero(q), Poly::zero(q), P.pi);
  std::vector<Mat2> factors;
  for (const Mat2& g : top_row_cosets(P, Gn.m))
    factors.push_back(mat2_mul(D1p, g));
  return pushforward(phi, Gn, factors);
}

HarmonicCochain inflate(const HarmonicCochain& psi, const QuotientGraph& Gnp) {
  if (!divides(psi.G->m, Gnp.m))
    throw std::invalid_argument("inflation target level must be a multiple");
  return pushforward(psi, Gnp, {mat2_identity(Gnp.q)});
}

HarmonicCochain inflate_twisted(const Place& P, const HarmonicCochain& psi,
                                const QuotientGraph& Gnp) {
  if (psi.G->m * P.pi != Gnp.m)
    throw std::invalid_argument("twisted inflation levels must differ by P");
  const int q = P.q;
  Mat2 D = poly_mat(P.pi, Poly::zero(q), Poly::zero(q), Poly::constant(q, 1));
  return pushforward(psi, Gnp, {D});
}

BigRat petersson(const HarmonicCochain& phi, const HarmonicCochain& psi) {
  if (phi.G != psi.G)
    throw std::invalid_argument("Petersson product needs a common graph");
  const QuotientGraph& G = *phi.G;
  BigRat s = 0;
  for (int k = 0; k < G.vdepth; ++k)
    for (int o = 0; o < G.elayers[k].size(); ++o) {
      int idx = G.edge_index(k, o);
      // Both orientations of the orbit contribute the same product.
      BigInt num = BigInt(2) * phi.values[idx] * psi.values[idx];
      s += BigRat(num, BigInt(G.elayers[k].stab[o]));
    }
  return s;
}

HarmonicCochain newform_match(const QuotientGraph& G,
                              const std::vector<EigenvalueEntry>& good,
                              const std::vector<EigenvalueEntry>& at_level) {
  std::vector<EigenvalueEntry> ordered = good;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const EigenvalueEntry& a, const EigenvalueEntry& b) {
                     return a.Q.degree() < b.Q.degree();
                   });

  IntMat rows = harmonicity_matrix(G);
  const int ncols = G.num_edge_orbits();
  auto append_eigen_rows = [&](const IntMat& M, long long a) {
    for (int i = 0; i < (int)M.size(); ++i) {
      std::vector<BigInt> row = M[i];
      row[i] -= a;
      rows.push_back(std::move(row));
    }
  };
  for (const EigenvalueEntry& e : at_level)
    append_eigen_rows(pushforward_matrix(G, G, u_cosets(e.Q)), e.a);

  std::vector<std::vector<BigInt>> kernel = integer_kernel(rows);
  size_t used = 0;
  while (kernel.size() > 1 && used < ordered.size()) {
    const EigenvalueEntry& e = ordered[used++];
    append_eigen_rows(pushforward_matrix(G, G, hecke_cosets(e.Q)), e.a);
    kernel = integer_kernel(rows);
  }
  if (kernel.empty())
    throw std::runtime_error(
        "no eigenform matches the requested eigenvalue system");
  if (kernel.size() > 1)
    throw std::runtime_error(
        "eigenspace is not one-dimensional; extend the eigenvalue table");

  std::vector<BigInt> v = primitive_vector(kernel[0]);
  HarmonicCochain phi{&G, {}};
  phi.values.reserve(ncols);
  for (const BigInt& x : v) phi.values.push_back(to_int64(x));

  // Entries not consumed as constraints must still hold on the solution.
  for (size_t i = used; i < ordered.size(); ++i) {
    HarmonicCochain img = hecke_operator(ordered[i].Q, phi);
    for (int j = 0; j < ncols; ++j)
      if (img.values[j] != ordered[i].a * phi.values[j])
        throw std::runtime_error(
            "no eigenform matches the requested eigenvalue system");
  }
  return phi;
}

}  // namespace ezff
