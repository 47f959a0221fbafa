#include "ezff/harness.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace ezff {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* status_str(CheckStatus s) {
  switch (s) {
    case CheckStatus::passed:
      return "passed";
    case CheckStatus::failed:
      return "failed";
    case CheckStatus::skipped:
      return "skipped";
  }
  return "failed";
}

void add_check(std::vector<CheckResult>& v, std::string name, bool ok,
               std::string detail) {
  v.push_back({std::move(name),
               ok ? CheckStatus::passed : CheckStatus::failed,
               std::move(detail)});
}

// a^e for any integer e (a invertible when e < 0).
LocalElement local_zpow(const ResidueRing& R, const LocalElement& a,
                        long long e) {
  if (e >= 0) return local_pow(R, a, e);
  return local_inv(R, local_pow(R, a, -e));
}

std::string curve_id(const EllipticCurve& E) {
  std::ostringstream os;
  os << "[" << to_string(E.a1) << ", " << to_string(E.a2) << ", "
     << to_string(E.a3) << ", " << to_string(E.a4) << ", " << to_string(E.a6)
     << "] over F_" << E.field_size() << "(T), p = " << to_string(E.p.pi)
     << ", n = " << to_string(E.n);
  return os.str();
}

// Monic irreducible factors of a nonzero polynomial with multiplicities, by
// trial division up to degree 6 plus an irreducibility test on the cofactor;
// throws if a composite cofactor with only higher-degree factors remains
// (does not occur at fixture scale, and silence would be worse).
std::vector<std::pair<Poly, int>> factor_supported(const Poly& f0) {
  if (f0.is_zero()) throw std::invalid_argument("factor of zero polynomial");
  Poly f = monicize(f0);
  std::vector<std::pair<Poly, int>> out;
  if (f.is_one()) return out;
  for (const Poly& pi : irreducible_monics(f.q, std::min(6, f.deg_nonzero()))) {
    if (!divides(pi, f)) continue;
    int k = multiplicity(f, pi);
    for (int i = 0; i < k; ++i) f = poly_div(f, pi);
    out.emplace_back(pi, k);
    if (f.is_one()) break;
  }
  if (!f.is_one()) {
    if (!is_irreducible(f))
      throw std::runtime_error(
          "cannot factor discriminant support: composite cofactor " +
          to_string(f));
    out.emplace_back(f, 1);
  }
  return out;
}

const char* reduction_name(ReductionType t) {
  switch (t) {
    case ReductionType::good:
      return "good";
    case ReductionType::split_multiplicative:
      return "split multiplicative";
    case ReductionType::nonsplit_multiplicative:
      return "nonsplit multiplicative";
    case ReductionType::additive_or_unknown:
      return "additive or unknown";
  }
  return "additive or unknown";
}

}  // namespace

bool VerificationReport::all_passed() const {
  for (const CheckResult& c : checks)
    if (c.status == CheckStatus::failed) return false;
  return true;
}

std::string report_to_json(const VerificationReport& r) {
  ordered_json j;
  j["schema"] = kReportSchema;
  j["curve"] = {{"id", r.curve_id},
                {"q", r.q},
                {"p", r.place_p},
                {"level", r.level}};
  j["parameters"] = {{"ball_level", r.ball_level},
                     {"precision", r.precision}};
  j["invariants"] = {{"m_p", r.m_p}, {"w_psi", r.w_psi}};
  ordered_json eig = ordered_json::array();
  for (const auto& [place, a] : r.eigenvalues)
    eig.push_back({{"place", place}, {"eigenvalue", a}});
  j["eigenvalues"] = eig;
  j["values"] = {{"q_tilde", r.q_tilde},
                 {"q_c_inf", r.q_c_inf},
                 {"i_psi", r.i_psi},
                 {"xi", r.xi_digits},
                 {"certified_rel_prec", r.certified_rel_prec},
                 {"xi_is_root_of_unity", r.xi_is_root_of_unity},
                 {"xi_residue", r.xi_residue},
                 {"xi_order", r.xi_order},
                 {"zeta_residue", r.zeta_residue}};
  ordered_json checks = ordered_json::array();
  for (const CheckResult& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"status", status_str(c.status)},
                      {"detail", c.detail}});
  j["checks"] = checks;
  j["all_passed"] = r.all_passed();
  return j.dump(2);
}

VerificationSetup assemble(const EllipticCurve& E) {
  VerificationSetup s;
  s.E = E;
  int q = E.field_size();
  std::vector<CheckResult>& checks = s.setup_checks;

  CurveQuantities cq = curve_quantities(E);  // throws when disc == 0
  add_check(checks, "fixture: nonzero discriminant", true,
            "disc = " + to_string(cq.disc));

  // Declared level data: p monic irreducible (Place::finite enforces), n
  // monic, squarefree, coprime to p.
  if (E.n.is_zero() || !E.n.monic())
    throw std::runtime_error("fixture: declared n must be monic");
  if (divides(E.p.pi, E.n))
    throw std::runtime_error("fixture: declared n must be coprime to p");
  std::vector<std::pair<Poly, int>> n_factors = factor_supported(E.n);
  for (const auto& [pi, mult] : n_factors)
    if (mult != 1)
      throw std::runtime_error(
          "fixture: declared n must be squarefree (multiplicative places "
          "have conductor exponent 1), repeated factor " +
          to_string(pi));

  // Reduction types at the declared places.
  ReductionReport rp = reduction_check(E, E.p);
  if (rp.type != ReductionType::split_multiplicative)
    throw std::runtime_error(std::string("fixture: reduction at p is ") +
                             reduction_name(rp.type) +
                             ", need split multiplicative");
  add_check(checks, "fixture: split multiplicative at p", true,
            "-v_p(j) = " + std::to_string(rp.m));
  ReductionReport rinf = reduction_check(E, Place::infinite(q));
  if (rinf.type != ReductionType::split_multiplicative)
    throw std::runtime_error(
        std::string("fixture: reduction at infinity is ") +
        reduction_name(rinf.type) + ", need split multiplicative");
  add_check(checks, "fixture: split multiplicative at infinity", true,
            "-v_inf(j) = " + std::to_string(rinf.m));

  std::vector<EigenvalueEntry> at_level;
  at_level.push_back({E.p, +1});
  s.eigenvalues.emplace_back("U(" + to_string(E.p.pi) + ")", +1);
  for (const auto& [pi, mult] : n_factors) {
    (void)mult;
    Place v = Place::finite(pi);
    ReductionReport rv = reduction_check(E, v);
    long long u;
    if (rv.type == ReductionType::split_multiplicative)
      u = +1;
    else if (rv.type == ReductionType::nonsplit_multiplicative)
      u = -1;
    else
      throw std::runtime_error(std::string("fixture: reduction at ") +
                               to_string(pi) + " is " +
                               reduction_name(rv.type) +
                               ", need multiplicative (semistable level)");
    at_level.push_back({v, u});
    s.eigenvalues.emplace_back("U(" + to_string(pi) + ")", u);
  }
  add_check(checks, "fixture: declared level places are multiplicative", true,
            std::to_string(at_level.size()) + " level places");

  // Conductor support cross-check: every finite place of bad reduction
  // divides pi_p * n.  Bad finite places divide the discriminant support
  // (numerator, denominator, and coefficient denominators).
  Poly support = cq.disc.num * cq.disc.den;
  for (const RatFunc* a : {&E.a1, &E.a2, &E.a3, &E.a4, &E.a6})
    support = support * a->den;
  Poly m = E.level();
  std::vector<std::string> extra_bad;
  for (const auto& [pi, mult] : factor_supported(support)) {
    (void)mult;
    if (divides(pi, m)) continue;
    ReductionReport rv = reduction_check(E, Place::finite(pi));
    if (rv.type != ReductionType::good)
      extra_bad.push_back(to_string(pi) + " (" + reduction_name(rv.type) +
                          ")");
  }
  if (!extra_bad.empty()) {
    std::string msg = "fixture: bad reduction outside the declared level at";
    for (const std::string& e : extra_bad) msg += " " + e;
    throw std::runtime_error(msg);
  }
  add_check(checks, "fixture: conductor support matches the declared level",
            true, "level = " + to_string(m));

  // Good-place eigenvalue table from point counts (degrees 1..3).
  std::vector<EigenvalueEntry> good;
  for (const Place& Q : enumerate_places(q, 3)) {
    if (Q.is_infinite() || divides(Q.pi, m)) continue;
    long long a = a_value(E, Q);
    good.push_back({Q, a});
    s.eigenvalues.emplace_back("a(" + to_string(Q.pi) + ")", a);
  }

  s.G = std::make_unique<QuotientGraph>(
      build_quotient(m, m.deg_nonzero() + 2));
  s.c_inf = newform_match(*s.G, good, at_level);  // throws when no match
  add_check(checks, "eigenform: newform matched to a one-dimensional space",
            true,
            "cuspidal dimension " +
                std::to_string(cuspidal_basis(*s.G).size()));
  s.sym = make_symbol_context(s.c_inf, E.p);
  return s;
}

VerificationReport verify(const VerificationSetup& s, int L, int N) {
  if (L < 2 || N < 1)
    throw std::invalid_argument("verify: need ball level >= 2 and N >= 1");
  VerificationReport r;
  r.curve_id = curve_id(s.E);
  r.q = s.E.field_size();
  r.place_p = to_string(s.E.p.pi);
  r.level = to_string(s.E.level());
  r.ball_level = L;
  r.precision = N;
  r.eigenvalues = s.eigenvalues;
  r.checks = s.setup_checks;

  IntegrationContext ictx(s.sym, N);
  const ResidueRing& R = ictx.R;
  const QuadExt& K = ictx.K;
  long cert = std::min<long>(L, N);

  // Tate period data at p.
  TatePeriod tp = tate_period(s.E, s.E.p, N);
  r.m_p = tp.m_p;
  r.q_tilde = local_to_string(R, tp.q_tilde);
  add_check(r.checks, "Tate period: m_p = -v_p(j) >= 1", tp.m_p >= 1,
            "m_p = " + std::to_string(tp.m_p));

  // Winding element W_psi = [0, infinity] . c_inf.
  r.w_psi = winding_element(s.sym);

  // Boundary-measure agreement on O_p at levels <= 2: the Teitelbaum
  // evaluator against mu_c{infinity -> 0}, exact integers, zero tolerance.
  {
    BoundaryMeasure teit = teit_boundary_measure(s.sym);
    BoundaryMeasure two =
        boundary_measure(s.sym, std::nullopt, RatFunc::zero(r.q));
    int mismatches = 0, balls = 0;
    for (int k = 0; k <= 2; ++k)
      for (const Poly& a : polys_below(r.q, k * s.E.p.degree())) {
        RatFunc c = RatFunc::from_poly(a);
        ++balls;
        if (teit.ball(c, k) != two.ball(c, k)) ++mismatches;
      }
    add_check(r.checks,
              "measures: mu_c{infinity->0} restricted to O_p equals the "
              "Teitelbaum measure (levels <= 2)",
              mismatches == 0,
              std::to_string(balls) + " balls, " +
                  std::to_string(mismatches) + " mismatches");
  }

  // The Teitelbaum unit q(c_inf) and the period I_psi.
  IntegralResult qc = mult_integral_t(ictx, teit_boundary_measure(s.sym), L);
  LocalElement qcv = integral_base_value(qc);
  r.q_c_inf = local_to_string(R, qcv);

  IntegralResult ip = period_I_psi(ictx, L, PeriodMode::raw);
  r.i_psi = local_to_string(R, ip.value.x);

  // Exceptional-zero identity: xi := q(c_inf)^{m_p} * q_tilde^{-W_psi} must
  // be a root of unity in the residue field of p, certified to relative
  // precision min(L, N).
  LocalElement xi =
      local_mul(R, local_zpow(R, qcv, tp.m_p),
                local_zpow(R, tp.q_tilde, -r.w_psi));
  r.xi_digits = local_to_string(R, xi);
  r.certified_rel_prec = xi.zero ? 0 : std::min<long>(xi.prec, cert);
  std::optional<RootOfUnity> xi_root;
  if (!xi.zero && xi.val == 0)
    xi_root = detect_root_of_unity(R, xi, (int)cert);
  if (xi_root) {
    r.xi_is_root_of_unity = true;
    r.xi_residue = to_string(poly_mod(xi_root->value, R.pi_poly));
    r.xi_order = xi_root->order;
    add_check(r.checks,
              "exceptional zero: xi = q(c_inf)^{m_p} / q_tilde^{W_psi} is a "
              "root of unity",
              true,
              "xi = " + r.xi_residue + " (order " +
                  std::to_string(xi_root->order) + "), certified to " +
                  std::to_string(cert) + " digits");
  } else {
    add_check(r.checks,
              "exceptional zero: xi = q(c_inf)^{m_p} / q_tilde^{W_psi} is a "
              "root of unity",
              false,
              "not certified a root of unity at relative precision " +
                  std::to_string(cert) + "; xi = " + r.xi_digits);
  }

  // Period valuation: v_p(I_psi) = W_psi, exact integers.
  std::optional<long> ipval = quad_val(ip.value);
  add_check(r.checks, "period: v_p(I_psi) = W_psi",
            ipval && *ipval == r.w_psi,
            "v_p(I_psi) = " +
                (ipval ? std::to_string(*ipval) : std::string("O(pi^large)")) +
                ", W_psi = " + std::to_string(r.w_psi));

  // The period is defined over the quadratic extension but lands in the
  // base completion (up to the certified precision).
  bool in_base = quad_in_base(K, ip.value, r.w_psi + ip.rel_prec);
  add_check(r.checks, "period: I_psi lies in the base completion", in_base,
            "theta component zero to O(pi^" +
                std::to_string(r.w_psi + ip.rel_prec) + ")");

  // Period identity I_psi = zeta * q_{E,p}^{W_psi/m_p} with zeta^{m_p} = xi,
  // applicable when m_p divides W_psi.
  std::string zname =
      "period identity: I_psi = zeta * q_{E,p}^{W_psi/m_p} with "
      "zeta^{m_p} = xi";
  if (r.w_psi % tp.m_p != 0) {
    r.checks.push_back(
        {zname, CheckStatus::skipped,
         "m_p = " + std::to_string(tp.m_p) + " does not divide W_psi = " +
             std::to_string(r.w_psi)});
  } else if (!in_base || !ipval || *ipval != r.w_psi) {
    add_check(r.checks, zname, false,
              "period valuation or base-field membership failed upstream");
  } else {
    long long rr = r.w_psi / tp.m_p;
    LocalElement zeta =
        local_mul(R, ip.value.x, local_zpow(R, tp.q_E, -rr));
    long zcert = std::min<long>(cert, ip.rel_prec);
    std::optional<RootOfUnity> zeta_root;
    if (!zeta.zero && zeta.val == 0 && zeta.prec >= zcert)
      zeta_root = detect_root_of_unity(R, zeta, (int)zcert);
    if (!zeta_root) {
      add_check(r.checks, zname, false,
                "zeta = I_psi * q_{E,p}^{-" + std::to_string(rr) +
                    "} not certified a root of unity at relative precision " +
                    std::to_string(zcert));
    } else if (!xi_root) {
      add_check(r.checks, zname, false,
                "zeta is a root of unity but xi was not certified");
    } else {
      r.zeta_residue = to_string(poly_mod(zeta_root->value, R.pi_poly));
      LocalElement zl = local_unit(R, zeta_root->value, 0, N);
      LocalElement xl = local_unit(R, xi_root->value, 0, N);
      bool compat = local_agree(R, local_pow(R, zl, tp.m_p), xl, N);
      add_check(r.checks, zname, compat,
                "zeta = " + r.zeta_residue + " (order " +
                    std::to_string(zeta_root->order) + "), zeta^{m_p} " +
                    (compat ? "=" : "!=") + " xi");
    }
  }
  return r;
}

VerificationReport verify(const EllipticCurve& E, int L, int N) {
  return verify(assemble(E), L, N);
}

VerificationReport verify(const EllipticCurve& E) {
  return verify(E, default_ball_level(E.p), 32);
}

std::vector<EllipticCurve> scan(const ScanBounds& bounds) {
  std::vector<EllipticCurve> out;
  for (int q : bounds.fields) {
    std::vector<Poly> coeffs = polys_below(q, bounds.coeff_deg + 1);
    std::vector<Poly> irreds =
        irreducible_monics(q, std::max(1, bounds.level_deg));
    Place inf = Place::infinite(q);
    for (const Poly& a1 : coeffs)
      for (const Poly& a2 : coeffs)
        for (const Poly& a3 : coeffs)
          for (const Poly& a4 : coeffs)
            for (const Poly& a6 : coeffs) {
              EllipticCurve E{RatFunc::from_poly(a1), RatFunc::from_poly(a2),
                              RatFunc::from_poly(a4), RatFunc::from_poly(a3),
                              RatFunc::from_poly(a6),
                              Place::finite(irreds.front()),
                              Poly::constant(q, 1)};
              CurveQuantities cq;
              try {
                cq = curve_quantities(E);
              } catch (const std::exception&) {
                continue;  // singular Weierstrass data
              }
              // Factor the discriminant within the level-degree bound; a
              // higher-degree factor either overflows the level bound or
              // hides a non-minimal model, so the curve is discarded.
              Poly f = monicize(cq.disc.num);
              std::vector<Place> bad;
              bool semistable = true;
              for (const Poly& pi : irreds) {
                if (!divides(pi, f)) continue;
                while (divides(pi, f)) f = poly_div(f, pi);
                Place v = Place::finite(pi);
                ReductionReport rv = reduction_check(E, v);
                if (rv.type == ReductionType::good) continue;
                if (rv.type == ReductionType::additive_or_unknown) {
                  semistable = false;
                  break;
                }
                bad.push_back(v);
                if (f.is_one()) break;
              }
              if (!semistable || !f.is_one()) continue;
              if (reduction_check(E, inf).type !=
                  ReductionType::split_multiplicative)
                continue;
              for (const Place& p : bad) {
                if (reduction_check(E, p).type !=
                    ReductionType::split_multiplicative)
                  continue;
                Poly n = Poly::constant(q, 1);
                for (const Place& v : bad)
                  if (!(v == p)) n = n * v.pi;
                int lev = p.degree() + (n.is_one() ? 0 : n.deg_nonzero());
                if (lev < 3 || lev > bounds.level_deg) continue;
                EllipticCurve fx = E;
                fx.p = p;
                fx.n = n;
                out.push_back(fx);
                if (bounds.max_results &&
                    (int)out.size() >= bounds.max_results)
                  return out;
              }
            }
  }
  return out;
}

std::string export_graph(const Poly& m) {
  return to_dot(build_quotient(m, m.deg_nonzero() + 2));
}

}  // namespace ezff
