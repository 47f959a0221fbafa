#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ezff/tree.hpp"

namespace ezff {

/**
 * A point of P^1(F_q[T]/m): a class (c : d) of pairs with unit ideal
 * (c, d, m) = (1) modulo unit scaling, stored as the lexicographically
 * smallest representative pair.
 */
struct ProjPoint {
  Poly c, d;
};
bool operator==(const ProjPoint& a, const ProjPoint& b);
bool operator<(const ProjPoint& a, const ProjPoint& b);

std::vector<ProjPoint> p1_points(const Poly& m);

/** Orbits of the P^1 labels under a layer group, with canonical numbering
 * (orbits sorted by their smallest member) and stabilizer orders counted
 * modulo scalars. */
struct OrbitPartition {
  std::vector<int> orbit_of_point;  // point id -> orbit id
  std::vector<int> rep;             // orbit id -> smallest member point id
  std::vector<long long> stab;      // orbit id -> stabilizer order / (q-1)
  int size() const { return (int)rep.size(); }
};

/**
 * The quotient Gamma_0(m)\T_infty, layer by layer: layer-k vertex orbits are
 * the label orbits under the stabilizer G_k of the k-th standard-ray vertex
 * (G_0 = GL_2(F_q); for k >= 1 upper-triangular with deg b <= k), and the
 * edge orbits between layers k and k+1 are the orbits under G_k ∩ G_{k+1}.
 * Stored edge-orbit representatives are oriented inward (toward layer 0).
 */
struct QuotientGraph {
  int q = 0;
  Poly m;
  int K0 = 0;     // core depth = deg m
  int vdepth = 0; // vertex layers 0..vdepth

  std::vector<ProjPoint> points;
  std::map<std::pair<Poly, Poly>, int> raw_index;  // any valid raw pair -> id

  std::vector<OrbitPartition> vlayers;  // size vdepth + 1
  std::vector<OrbitPartition> elayers;  // size vdepth; k joins layers k, k+1

  // Per edge layer: orbit -> incident vertex orbits.
  std::vector<std::vector<int>> bottom_vertex;  // in vlayers[k]
  std::vector<std::vector<int>> top_vertex;     // in vlayers[k+1]

  int point_id(const Poly& c, const Poly& d) const;  // lookup (mod m inputs ok)
  int num_edge_orbits() const;
  // Flat id across layers for (layer, orbit), layer < vdepth.
  int edge_index(int layer, int orbit) const;
  std::pair<int, int> edge_from_index(int idx) const;
};

// Build the quotient with vertex layers 0..depth; depth >= deg m + 2.
// Verifies the star-sum and stabilization invariants and throws on failure.
QuotientGraph build_quotient(const Poly& m, int depth);

struct ProjectedEdge {
  int layer = 0;  // true distance-from-root layer of the unoriented edge
  int orbit = 0;  // orbit id within elayers[min(layer, vdepth-1)]
  int sign = 1;   // +1 if the input orientation is inward (toward layer 0)
};

// Reduce a tree edge at the infinite place to its quotient class by
// continued-fraction / Euclidean steps over F_q[T].
ProjectedEdge project_edge(const OrientedEdge& e, const QuotientGraph& G);

// A matrix gamma in SL_2(F_q[T]) whose bottom row reduces to the given label
// mod m (coprime lift + Bezout completion).
Mat2 matrix_with_bottom_row(const ProjPoint& p, const Poly& m);

// The defining matrix of the stored (inward) representative of an edge
// orbit: g * (T^layer, 0; 0, 1) with g the bottom-row lift of the orbit's
// label, and the representative edge itself.
Mat2 edge_orbit_rep_matrix(const QuotientGraph& G, int layer, int orbit);
OrientedEdge edge_orbit_rep(const QuotientGraph& G, int layer, int orbit);

std::string to_dot(const QuotientGraph& G);

}  // namespace ezff
