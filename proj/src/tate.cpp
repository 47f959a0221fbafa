#include "ezff/tate.hpp"

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ezff {

std::string data_dir() {
  if (const char* env = std::getenv("EZFF_DATA_DIR")) return env;
#ifdef EZFF_SOURCE_DATA_DIR
  return EZFF_SOURCE_DATA_DIR;
#else
  return "data";
#endif
}

namespace {

uint64_t fnv1a64(const std::string& blob) {
  uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char byte : blob) {
    h ^= byte;
    h *= 0x100000001B3ull;
  }
  return h;
}

// Reduce a (possibly huge) decimal integer string mod m.
int decimal_mod(const std::string& s, int m) {
  long long acc = 0;
  for (char ch : s) {
    if (ch < '0' || ch > '9')
      throw std::invalid_argument("bad integer in expansion table: " + s);
    acc = (acc * 10 + (ch - '0')) % m;
  }
  return (int)acc;
}

}  // namespace

JExpansion load_j_expansion(int q, int order) {
  std::string path = data_dir() + "/j_q_expansion.txt";
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open expansion table " + path);
  std::string line;
  int file_order = -1;
  uint64_t checksum = 0;
  std::string blob;
  std::vector<std::pair<int, std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string first;
    ls >> first;
    if (first == "order") {
      ls >> file_order;
    } else if (first == "checksum-fnv1a64") {
      std::string hex;
      ls >> hex;
      checksum = std::stoull(hex, nullptr, 16);
    } else {
      int k = std::stoi(first);
      std::string value;
      ls >> value;
      rows.emplace_back(k, value);
      blob += line + "\n";
    }
  }
  if (file_order < 0) throw std::runtime_error("expansion table missing order line");
  if (fnv1a64(blob) != checksum)
    throw std::runtime_error("expansion table failed its checksum");
  if ((int)rows.size() != file_order + 2)
    throw std::runtime_error("expansion table row count mismatch");
  // Spot checks of universally known leading coefficients.
  if (rows[0] != std::make_pair(-1, std::string("1")) ||
      rows[1] != std::make_pair(0, std::string("744")) ||
      rows[2] != std::make_pair(1, std::string("196884")))
    throw std::runtime_error("expansion table leading coefficients are wrong");
  if (order > file_order)
    throw std::runtime_error("expansion table too short for requested order");

  JExpansion J;
  J.q = q;
  J.c.resize(order + 2);
  for (int k = 0; k < order + 2; ++k) {
    if (rows[k].first != k - 1)
      throw std::runtime_error("expansion table rows out of order");
    J.c[k] = decimal_mod(rows[k].second, q);
  }
  return J;
}

namespace {

// Dense power series over F_q truncated at degree M (inclusive).
struct Series {
  int q;
  int M;
  std::vector<int> c;  // size M+1
  Series(int q_, int M_) : q(q_), M(M_), c(M_ + 1, 0) {}
};

Series smul(const Series& a, const Series& b) {
  Series r(a.q, a.M);
  for (int i = 0; i <= a.M; ++i) {
    if (a.c[i] == 0) continue;
    for (int j = 0; i + j <= a.M; ++j)
      r.c[i + j] = (int)((r.c[i + j] + (long long)a.c[i] * b.c[j]) % a.q);
  }
  return r;
}

Series sadd(const Series& a, const Series& b) {
  Series r = a;
  for (int i = 0; i <= a.M; ++i) r.c[i] = fq_add(a.q, r.c[i], b.c[i]);
  return r;
}

Series sneg(const Series& a) {
  Series r = a;
  for (auto& x : r.c) x = fq_neg(a.q, x);
  return r;
}

// Inverse of a series with unit constant term.
Series sinv(const Series& a) {
  if (a.c[0] == 0) throw std::invalid_argument("series inverse needs a unit");
  Series r(a.q, a.M);
  int c0inv = fq_inv(a.q, a.c[0]);
  r.c[0] = c0inv;
  for (int n = 1; n <= a.M; ++n) {
    long long s = 0;
    for (int k = 1; k <= n; ++k) s += (long long)a.c[k] * r.c[n - k];
    r.c[n] = fq_mul(a.q, fq_neg(a.q, (int)(s % a.q)), c0inv);
  }
  return r;
}

// Compose a polynomial (given by coefficients, low first) with a series that
// has zero constant term.
Series scomp(const std::vector<int>& poly, const Series& g) {
  Series acc(g.q, g.M);
  for (int i = (int)poly.size() - 1; i >= 0; --i) {
    acc = smul(acc, g);
    acc.c[0] = fq_add(g.q, acc.c[0], ((poly[i] % g.q) + g.q) % g.q);
  }
  return acc;
}

}  // namespace

TateSeries build_tate_series(int q, int order) {
  if (order < 1) throw std::invalid_argument("reversion order must be >= 1");
  JExpansion J = load_j_expansion(q, order);
  int M = order;

  // w = 1/j = q / (1 + 744 q + ...) =: f(q); as a polynomial in q of degree
  // M+1 with zero constant term.
  Series denom(q, M);
  for (int k = 0; k <= M; ++k) denom.c[k] = J.c[k];
  Series denom_inv = sinv(denom);
  std::vector<int> f(M + 2, 0);
  for (int k = 0; k <= M; ++k) f[k + 1] = denom_inv.c[k];

  std::vector<int> fprime(M + 1, 0);
  for (int k = 1; k <= M + 1; ++k)
    fprime[k - 1] = fq_mul(q, k % q, f[k]);

  // Newton iteration for the compositional inverse g with f(g(w)) = w.
  Series g(q, M);
  if (M >= 1) g.c[1] = 1;
  Series w(q, M);
  if (M >= 1) w.c[1] = 1;
  int steps = 1;
  while ((1 << steps) < M + 1) ++steps;
  for (int it = 0; it <= steps + 1; ++it) {
    Series num = sadd(scomp(f, g), sneg(w));   // f(g) - w
    Series den = scomp(fprime, g);             // f'(g), unit constant term
    g = sadd(g, sneg(smul(num, sinv(den))));
  }
  // Certify: the reversion identity must hold exactly at this truncation.
  Series check = scomp(f, g);
  if (!(check.c == w.c))
    throw std::logic_error("series reversion failed to converge");

  TateSeries T;
  T.q = q;
  T.b.assign(order, 0);
  for (int k = 1; k <= order; ++k) T.b[k - 1] = g.c[k];
  if (T.b.empty() || T.b[0] != 1)
    throw std::logic_error("reversion has wrong leading coefficient");
  return T;
}

LocalElement tate_q_from_j(const ResidueRing& R, const LocalElement& j) {
  auto vj = local_val(j);
  if (!vj || *vj >= 0)
    throw std::invalid_argument("Tate parameter needs valuation(j) < 0");
  int order = R.N + 2;
  TateSeries T = build_tate_series(R.q(), order);

  LocalElement w = local_inv(R, j);
  // Horner: q = ((b_K w + b_{K-1}) w + ... + b_1) w
  LocalElement acc = local_zero();
  for (int k = order; k >= 1; --k) {
    acc = local_mul(R, acc, w);
    acc = local_add(R, acc, local_from_int(R, T.b[k - 1]));
  }
  LocalElement qE = local_mul(R, acc, w);
  if (local_val(qE) != -*vj)
    throw std::logic_error("Tate parameter has unexpected valuation");
  return qE;
}

LocalElement j_from_tate_q(const ResidueRing& R, const LocalElement& qE) {
  auto vq = local_val(qE);
  if (!vq || *vq <= 0)
    throw std::invalid_argument("j-evaluation needs valuation(q) > 0");
  int order = R.N + 2;
  JExpansion J = load_j_expansion(R.q(), order);
  // j = q^-1 * (c(-1) + c(0) q + c(1) q^2 + ...)
  LocalElement acc = local_zero();
  for (int k = order + 1; k >= 0; --k) {
    acc = local_mul(R, acc, qE);
    acc = local_add(R, acc, local_from_int(R, J.c[k]));
  }
  return local_mul(R, acc, local_inv(R, qE));
}

}  // namespace ezff
