#include "ezff/linalg.hpp"

#include <limits>
#include <stdexcept>

namespace ezff {

namespace {

BigInt big_abs(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

}  // namespace

std::vector<std::vector<BigInt>> integer_kernel(const IntMat& A) {
  const int m = (int)A.size();
  const int n = m == 0 ? 0 : (int)A[0].size();
  for (const auto& row : A)
    if ((int)row.size() != n) throw std::invalid_argument("ragged matrix");

  // H starts as A; column operations applied to H are mirrored on U = I.
  IntMat H = A;
  IntMat U(n, std::vector<BigInt>(n, 0));
  for (int j = 0; j < n; ++j) U[j][j] = 1;

  auto col_sub = [&](int dst, int src, const BigInt& f) {
    for (int i = 0; i < m; ++i) H[i][dst] -= f * H[i][src];
    for (int i = 0; i < n; ++i) U[i][dst] -= f * U[i][src];
  };
  auto col_swap = [&](int a, int b) {
    if (a == b) return;
    for (int i = 0; i < m; ++i) std::swap(H[i][a], H[i][b]);
    for (int i = 0; i < n; ++i) std::swap(U[i][a], U[i][b]);
  };

  int pivot = 0;
  for (int r = 0; r < m && pivot < n; ++r) {
    // Euclidean reduction across columns pivot..n-1 in row r.
    for (;;) {
      int best = -1;
      for (int j = pivot; j < n; ++j) {
        if (H[r][j] == 0) continue;
        if (best < 0 || big_abs(H[r][j]) < big_abs(H[r][best])) best = j;
      }
      if (best < 0) break;  // row r is zero on the active columns
      col_swap(pivot, best);
      bool clean = true;
      for (int j = pivot + 1; j < n; ++j) {
        if (H[r][j] == 0) continue;
        BigInt f = H[r][j] / H[r][pivot];  // truncated division
        if (f != 0) col_sub(j, pivot, f);
        if (H[r][j] != 0) clean = false;  // remainder left; another pass
      }
      if (clean) {
        ++pivot;
        break;
      }
    }
  }

  std::vector<std::vector<BigInt>> kernel;
  for (int j = pivot; j < n; ++j) {
    std::vector<BigInt> v(n);
    for (int i = 0; i < n; ++i) v[i] = U[i][j];
    kernel.push_back(std::move(v));
  }
  return kernel;
}

IntMat mat_mul(const IntMat& A, const IntMat& B) {
  const int m = (int)A.size();
  const int k = m == 0 ? 0 : (int)A[0].size();
  const int n = B.empty() ? 0 : (int)B[0].size();
  if ((int)B.size() != k) throw std::invalid_argument("shape mismatch");
  IntMat C(m, std::vector<BigInt>(n, 0));
  for (int i = 0; i < m; ++i)
    for (int t = 0; t < k; ++t) {
      if (A[i][t] == 0) continue;
      for (int j = 0; j < n; ++j) C[i][j] += A[i][t] * B[t][j];
    }
  return C;
}

std::vector<BigInt> mat_apply(const IntMat& A, const std::vector<BigInt>& x) {
  std::vector<BigInt> y(A.size(), 0);
  for (size_t i = 0; i < A.size(); ++i) {
    if (A[i].size() != x.size()) throw std::invalid_argument("shape mismatch");
    for (size_t j = 0; j < x.size(); ++j) y[i] += A[i][j] * x[j];
  }
  return y;
}

std::vector<BigInt> primitive_vector(std::vector<BigInt> v) {
  BigInt g = 0;
  for (const BigInt& x : v) g = boost::multiprecision::gcd(g, x);
  if (g == 0) return v;
  int lead = 0;
  for (const BigInt& x : v) {
    if (x != 0) {
      lead = x < 0 ? -1 : 1;
      break;
    }
  }
  if (lead < 0) g = -g;
  for (BigInt& x : v) x /= g;
  return v;
}

long long to_int64(const BigInt& v) {
  if (v > std::numeric_limits<long long>::max() ||
      v < std::numeric_limits<long long>::min())
    throw std::overflow_error("integer does not fit in 64 bits");
  return v.convert_to<long long>();
}

}  // namespace ezff
