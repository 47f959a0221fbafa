#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ezff/elliptic.hpp"
#include "ezff/integrals.hpp"

namespace ezff {

// JSON report schema identifier; bump when the report layout changes.
inline constexpr const char* kReportSchema = "ezff.verification-report/1";

enum class CheckStatus { passed, failed, skipped };

/** One named verification check with its verdict and a detail line. */
struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::failed;
  std::string detail;  // value strings carry their own O(pi^k) tails
};

/**
 * Full record of one verification run.  Every local value is reported as a
 * digit string ending in its certified O(pi^k) tail, so the report never
 * claims more digits than the computation certified.  A report passes
 * exactly when no check failed (skipped checks make no claim).
 */
struct VerificationReport {
  std::string curve_id;  // canonical one-line Weierstrass/level summary
  int q = 0;
  std::string place_p;  // distinguished split multiplicative place
  std::string level;    // pi_p * n
  long m_p = 0;         // = v_p(q_{E,p}) = -v_p(j)
  long long w_psi = 0;  // winding element [0, infinity] . c_inf

  // Eigenvalue table: a_Q at good places of degree <= 3 (point counts) and
  // the U_P eigenvalues at the places dividing the level.
  std::vector<std::pair<std::string, long long>> eigenvalues;

  std::string q_tilde;  // unit part of the Tate period, N digits
  std::string q_c_inf;  // Teitelbaum unit x-int_{O_p^x} t dmu_Teit
  std::string i_psi;    // period I_psi (base-field component)

  int ball_level = 0;  // L
  int precision = 0;   // N
  long certified_rel_prec = 0;  // relative precision carried by xi

  // xi := q(c_inf)^{m_p} * q_tilde^{-w_psi}.  When certification succeeds,
  // xi_residue holds the residue-field element (a polynomial of degree
  // < deg p) and xi_order its multiplicative order; otherwise the "not a
  // root of unity" flag stays false and xi_residue is empty.
  std::string xi_digits;
  bool xi_is_root_of_unity = false;
  std::string xi_residue;
  int xi_order = 0;

  std::string zeta_residue;  // xi-compatible root when m_p | w_psi

  std::vector<CheckResult> checks;
  bool all_passed() const;
};

std::string report_to_json(const VerificationReport& r);

/**
 * Everything assembled from a validated fixture, before any completion-side
 * work: the quotient graph at level pi_p * n, the matched newform, the
 * symbol context at p, and the eigenvalue table.  Assembly throws
 * std::runtime_error with a specific message when the fixture does not
 * validate (reduction types, conductor support, eigenform match); the
 * checks passed along the way are recorded for the report.
 */
struct VerificationSetup {
  EllipticCurve E;
  std::unique_ptr<QuotientGraph> G;  // stable address: referees below point in
  HarmonicCochain c_inf;
  SymbolContext sym;
  std::vector<std::pair<std::string, long long>> eigenvalues;
  std::vector<CheckResult> setup_checks;
};

VerificationSetup assemble(const EllipticCurve& E);

/**
 * Verify the exceptional-zero identity and the period identity for one
 * fixture: computes xi := q(c_inf)^{m_p} * q_tilde^{-[0,infinity].c_inf} to
 * relative precision min(L, N) and certifies it a root of unity (a
 * detection failure is a FAILED check, never swallowed); checks
 * v_p(I_psi) = W_psi; and, when m_p | W_psi, checks
 * I_psi = zeta * q_{E,p}^{W_psi/m_p} with zeta a root of unity satisfying
 * zeta^{m_p} = xi (otherwise that check is reported as skipped).
 * Deterministic: identical inputs and knobs give bit-identical reports, and
 * larger L, N reproduce every previously certified digit.
 */
VerificationReport verify(const VerificationSetup& s, int L, int N);
VerificationReport verify(const EllipticCurve& E, int L, int N);
// Defaults: L = default_ball_level(E.p), N = 32.
VerificationReport verify(const EllipticCurve& E);

/** Search bounds for the fixture scan. */
struct ScanBounds {
  std::vector<int> fields = {2, 3};  // prime field sizes q
  int coeff_deg = 1;   // max degree of each Weierstrass coefficient
  int level_deg = 4;   // max degree of pi_p * n (>= 3 is forced by the scan)
  int max_results = 0; // stop after this many fixtures; 0 = no cap
};

/**
 * Enumerate Weierstrass data with polynomial coefficients of degree at most
 * coeff_deg, in a fixed deterministic order, and keep the curves with
 * nonzero discriminant, split multiplicative reduction at infinity and at
 * some finite place p, multiplicative reduction at every other bad finite
 * place (semistable), and 3 <= deg(pi_p * n) <= level_deg.  One fixture is
 * emitted per admissible choice of p.  Curves whose discriminant has an
 * irreducible factor of degree above level_deg are discarded without
 * further analysis (such a factor either enters the conductor, overflowing
 * the level bound, or signals a non-minimal model outside the search
 * range).
 */
std::vector<EllipticCurve> scan(const ScanBounds& bounds);

/** DOT text for the quotient graph at level m (depth deg m + 2). */
std::string export_graph(const Poly& m);

}  // namespace ezff
