#pragma once

#include <map>
#include <optional>
#include <string>

#include "ezff/local.hpp"
#include "ezff/ratfunc.hpp"

namespace ezff {

/**
 * A class in F_v / pi^n O_v, stored as its finite pi-adic expansion:
 * exponent -> residue digit (polynomial of degree < deg v, nonzero). Only
 * exponents < n are kept; negative exponents are allowed.
 */
using PiExpansion = std::map<int, Poly>;

PiExpansion expansion_of(const RatFunc& r, const Place& v, int n);
RatFunc expansion_value(int q, const PiExpansion& u, const Place& v);
PiExpansion truncate_expansion(const PiExpansion& u, int n);

enum class EdgeFamily { main, flipped };

/**
 * Oriented edge of the Bruhat-Tits tree at v in normal form. The main-family
 * edge (n, u) is the coset of (pi^n, u; 0, 1); the flipped-family edge (n, u)
 * is the coset of (pi^n, u; 0, 1) * (0, 1; pi, 0), which is the same
 * unoriented edge with the opposite orientation. A main edge points from the
 * level-(n-1) vertex to the level-n vertex under it.
 */
struct OrientedEdge {
  Place v;
  int n = 0;
  PiExpansion u;
  EdgeFamily family = EdgeFamily::main;
};

bool operator==(const OrientedEdge& a, const OrientedEdge& b);
inline bool operator!=(const OrientedEdge& a, const OrientedEdge& b) {
  return !(a == b);
}
bool operator<(const OrientedEdge& a, const OrientedEdge& b);

struct Vertex {
  Place v;
  int n = 0;
  PiExpansion u;
};

bool operator==(const Vertex& a, const Vertex& b);
inline bool operator!=(const Vertex& a, const Vertex& b) { return !(a == b); }
bool operator<(const Vertex& a, const Vertex& b);

OrientedEdge base_edge(const Place& v);  // e0 = (0, 0, main)
OrientedEdge make_edge(const Place& v, int n, PiExpansion u, EdgeFamily f);
OrientedEdge reverse(const OrientedEdge& e);
Vertex terminus(const OrientedEdge& e);
Vertex origin(const OrientedEdge& e);
std::string to_string(const OrientedEdge& e);
std::string to_string(const Vertex& w);

/** The boundary set U(e): a ball center + pi^radius O_v, or its complement
 * in P^1(F_v) (which is the side containing infinity). */
struct BallDescriptor {
  bool complement = false;
  RatFunc center;
  int radius = 0;
};

BallDescriptor ball_of_edge(const OrientedEdge& e);
// Membership of a boundary point (nullopt = infinity) in the set.
bool ball_contains(const BallDescriptor& B, const std::optional<RatFunc>& t,
                   const Place& v);

/** Exact 2x2 matrix over F_q(T); the reduction below computes the edge
 * g * e0 it represents at a given place. */
struct Mat2 {
  RatFunc a, b, c, d;
};
Mat2 mat2_mul(const Mat2& x, const Mat2& y);
RatFunc mat2_det(const Mat2& m);
Mat2 mat2_identity(int q);

OrientedEdge reduce_matrix(const Mat2& g, const Place& v);

/** Matrix of local elements; fails loudly when the entries' precision cannot
 * resolve the normal form (a margin of 2 digits beyond the edge level is
 * demanded for the tail). */
struct LocalMat2 {
  LocalElement a, b, c, d;
};
OrientedEdge reduce_matrix(const ResidueRing& R, const LocalMat2& g);

// The height-k edge of the geodesic A(r, infinity), oriented toward infinity:
// the reverse of the main edge (k, r mod pi^k).
OrientedEdge geodesic_edge(const RatFunc& r, int k, const Place& v);

}  // namespace ezff
