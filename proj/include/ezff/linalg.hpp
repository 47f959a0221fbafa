#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

namespace ezff {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;
using IntMat = std::vector<std::vector<BigInt>>;  // row-major, rectangular

// Basis of { x : A x = 0 } as a lattice in Z^n (the kernel of an integer
// matrix is saturated, so this is also a Q-basis of the rational kernel).
// Computed by unimodular column reduction to echelon form.
std::vector<std::vector<BigInt>> integer_kernel(const IntMat& A);

IntMat mat_mul(const IntMat& A, const IntMat& B);
std::vector<BigInt> mat_apply(const IntMat& A, const std::vector<BigInt>& x);

// Divide by the gcd of the entries and make the first nonzero entry
// positive; the zero vector is returned unchanged.
std::vector<BigInt> primitive_vector(std::vector<BigInt> v);

long long to_int64(const BigInt& v);  // throws std::overflow_error

}  // namespace ezff
