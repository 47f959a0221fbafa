#pragma once

#include <string>
#include <vector>

#include "ezff/local.hpp"

namespace ezff {

/**
 * The j-invariant q-expansion j = q^-1 + 744 + 196884 q + ..., loaded from the
 * bundled integer table and reduced mod the characteristic.  c[k] holds the
 * coefficient of q^(k-1), so c[0] = 1 always.
 */
struct JExpansion {
  int q = 0;           // characteristic of the coefficient field
  std::vector<int> c;  // c[k] = coefficient of q^(k-1) mod char; size order+2
  int order() const { return (int)c.size() - 2; }
};

// Locate the data directory: $EZFF_DATA_DIR if set, else the bundled one.
std::string data_dir();

// Load and checksum-verify the expansion table, reduced mod q, with
// coefficients of q^-1 .. q^order available (throws if the table is shorter).
JExpansion load_j_expansion(int q, int order);

/**
 * The compositional inverse of w = 1/j(q): the series q(w) = w + 744 w^2 + ...
 * with integer coefficients reduced mod the characteristic, from which the
 * Tate parameter is read off as q = series evaluated at w = 1/j.
 */
struct TateSeries {
  int q = 0;
  std::vector<int> b;  // b[k] = coefficient of w^(k+1); b[0] = 1
  int order() const { return (int)b.size(); }
};

// Newton reversion of the loaded expansion, to the requested number of terms.
TateSeries build_tate_series(int q, int order);

// The Tate parameter of an elliptic curve with the given j-invariant:
// valuation(q) = -valuation(j) > 0 and j(q) = j to the working precision.
LocalElement tate_q_from_j(const ResidueRing& R, const LocalElement& j);

// Evaluate the j-expansion at a parameter of positive valuation (round-trip
// companion of tate_q_from_j).
LocalElement j_from_tate_q(const ResidueRing& R, const LocalElement& qE);

}  // namespace ezff
