#pragma once

#include <utility>
#include <vector>

#include "ezff/linalg.hpp"
#include "ezff/quotient.hpp"

namespace ezff {

/**
 * Integer-valued harmonic cochain on a quotient graph, stored as one value
 * per edge orbit on the inward orientation. The function on tree edges it
 * represents is alternating by construction and vanishes beyond the stored
 * window (cuspidal support).
 */
struct HarmonicCochain {
  const QuotientGraph* G = nullptr;
  std::vector<long long> values;  // indexed by QuotientGraph::edge_index
};

bool operator==(const HarmonicCochain& a, const HarmonicCochain& b);

long long eval(const HarmonicCochain& phi, const ProjectedEdge& pe);
long long eval(const HarmonicCochain& phi, const OrientedEdge& e);

// Weighted harmonicity residual at one vertex orbit (0 for harmonic phi).
long long harmonicity_residual(const HarmonicCochain& phi, int layer,
                               int orbit);
bool is_harmonic(const HarmonicCochain& phi);

// Rows of the weighted harmonicity system over all vertex orbits, columns
// indexed like HarmonicCochain::values; edges beyond the window count as 0.
IntMat harmonicity_matrix(const QuotientGraph& G);

// Integral basis of the cuspidal space: kernel of the harmonicity system.
// Asserts that every basis vector vanishes on the outermost two edge layers
// (support confined to the core) and throws if the window was too shallow.
std::vector<HarmonicCochain> cuspidal_basis(const QuotientGraph& G);

// Sum of phi over translates: result(E) = sum_i phi(factors[i] * rep(E)),
// projecting each translated representative back into phi's graph. All the
// operators below are instances of this with their classical coset systems.
HarmonicCochain pushforward(const HarmonicCochain& phi,
                            const QuotientGraph& target,
                            const std::vector<Mat2>& factors);
// Matrix of the same map on edge-value vectors (columns: phi's edges).
IntMat pushforward_matrix(const QuotientGraph& source,
                          const QuotientGraph& target,
                          const std::vector<Mat2>& factors);

// Coset systems.
std::vector<Mat2> hecke_cosets(const Place& Q);          // deg Q + 1 matrices
std::vector<Mat2> u_cosets(const Place& P);              // deg P matrices
Mat2 atkin_lehner_matrix(const Place& P, const Poly& m); // P exactly divides m
// Lifts of Gamma_0(n)/Gamma_0(n*P) coset representatives (bottom rows cover
// P^1(A/P), congruent to (0:1) mod n).
std::vector<Mat2> trace_cosets(const Place& P, const Poly& n);

HarmonicCochain hecke_operator(const Place& Q, const HarmonicCochain& phi);
HarmonicCochain u_operator(const Place& P, const HarmonicCochain& phi);
HarmonicCochain atkin_lehner(const Place& P, const HarmonicCochain& phi);

// Trace maps from level n*P down to level n (the target graph), and the
// companion level raisings, one pair per degeneracy direction: the plain
// maps are along e -> e, the twisted ones along e -> diag(pi, 1) e.
// trace o inflate across directions recovers the Hecke operator T_P, and
// within one direction multiplies by q^deg P + 1.
HarmonicCochain trace_map(const Place& P, const HarmonicCochain& phi,
                          const QuotientGraph& Gn);
HarmonicCochain trace_map_twisted(const Place& P, const HarmonicCochain& phi,
                                  const QuotientGraph& Gn);
HarmonicCochain inflate(const HarmonicCochain& psi, const QuotientGraph& Gnp);
HarmonicCochain inflate_twisted(const Place& P, const HarmonicCochain& psi,
                                const QuotientGraph& Gnp);

// Petersson product: sum over oriented edge orbits of phi*psi weighted by
// 1/#stabilizer (each stored orbit counted with both orientations).
BigRat petersson(const HarmonicCochain& phi, const HarmonicCochain& psi);

struct EigenvalueEntry {
  Place Q;
  long long a = 0;
};

/**
 * The one-dimensional simultaneous integral eigenspace: T_Q phi = a_Q phi
 * for the listed good places and U_P phi = a_P phi for the listed exact
 * divisors of the level. Good places are consumed in degree order and more
 * are only used while the space is still more than one-dimensional. Returns
 * the primitive vector with positive leading value. Throws if the space is
 * empty (no eigenform matches) or not cut to dimension one.
 */
HarmonicCochain newform_match(const QuotientGraph& G,
                              const std::vector<EigenvalueEntry>& good,
                              const std::vector<EigenvalueEntry>& at_level);

}  // namespace ezff
