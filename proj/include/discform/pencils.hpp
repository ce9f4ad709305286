#pragma once

// Binary forms f0 x^n + f1 x^{n-1} y + ... + fn y^n and pencils of symmetric
// bilinear forms (A, B), over the integers or over F_p.
//
// disc_form(A, B) = (-1)^{n(n-1)/2} det(A x - B y).
//
// binary_discriminant uses disc(f) = (-1)^{n(n-1)/2} Res(F, F') / f0 with
// F(x) = f(x, 1). When f0 = 0 the form is first moved by the unimodular
// substitution y -> y + k x (smallest k >= 1 with f(1, k) != 0); the
// discriminant is invariant under SL_2(Z), so this is the same number. With
// this normalization disc(a x^2 + b x y + c y^2) = b^2 - 4ac, and disc(f) = 0
// iff f has a repeated projective root.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "discform/arith.hpp"

namespace discform {

struct BinaryForm {
  BinaryForm() = default;
  /// Coefficients f0..fn; with p != 0 they are reduced into [0, p).
  /// Throws UsageError for an empty list or p not prime.
  BinaryForm(std::vector<BigInt> coefficients, std::uint64_t p = 0);

  std::vector<BigInt> coeffs;
  /// 0 for integer forms, otherwise the prime.
  std::uint64_t p = 0;

  std::size_t degree() const { return coeffs.size() - 1; }
  bool is_zero() const;
  BigInt eval(const BigInt& x, const BigInt& y) const;
  /// c * f (reduced mod p when applicable).
  BinaryForm scaled(const BigInt& c) const;
  std::string to_string() const;
  bool operator==(const BinaryForm& o) const { return p == o.p && coeffs == o.coeffs; }
};

struct Pencil {
  Pencil() = default;
  /// Row-major entries; throws UsageError unless both are symmetric n x n.
  Pencil(std::size_t n, std::vector<BigInt> a, std::vector<BigInt> b, std::uint64_t p = 0);

  std::size_t n = 0;
  std::vector<BigInt> a;
  std::vector<BigInt> b;
  std::uint64_t p = 0;

  const BigInt& at_a(std::size_t i, std::size_t j) const { return a[i * n + j]; }
  const BigInt& at_b(std::size_t i, std::size_t j) const { return b[i * n + j]; }
};

/// Cofactor expansion of det(A x - B y) over homogeneous polynomials,
/// memoized over column subsets. n <= 12.
BinaryForm disc_form(const Pencil& pencil);

/// Exact discriminant of an integer form; for a form over F_p the
/// discriminant of its lift reduced mod p. Throws UsageError for degree 0.
BigInt binary_discriminant(const BinaryForm& f);

/// det of an integer matrix (fraction-free elimination).
BigInt determinant(std::vector<BigInt> m, std::size_t n);

struct SearchLimits {
  std::uint64_t max_p = 7;
  std::size_t max_n = 4;
  /// (A representatives) x (B matrices) examined at most.
  std::uint64_t max_candidates = 20'000'000;
  unsigned threads = 1;
};

/// Congruence-class representatives of symmetric n x n matrices over F_p
/// (row-major): diag(1,..,1,d,0,..,0) with d in {1, least non-square} for odd
/// p; I_r + 0 and hyperbolic H^k + 0 for p = 2.
std::vector<std::vector<std::int64_t>> congruence_representatives(std::size_t n, std::uint64_t p);

/// Exhaustive search for a pencil over F_p with disc_form = f. A ranges over
/// congruence representatives compatible with f0 (rank n and matching
/// determinant square class when f0 != 0, rank < n when f0 = 0); B ranges
/// over all symmetric matrices in lexicographic order. A hit with
/// disc(A, B) = u^2 f is moved to f by the congruence diag(1/u, 1, ..., 1).
/// The lowest (representative, B) hit is returned regardless of threads.
/// Throws UsageError for integer or zero forms, ResourceError above caps.
std::optional<Pencil> pencil_search(const BinaryForm& f, const SearchLimits& limits = {});

struct ScalingReport {
  bool base_found = false;
  bool scaled_found = false;
  bool consistent() const { return base_found == scaled_found; }
};

/// pencil_search on f and on c^2 f (c a unit mod p).
ScalingReport scaling_harness(const BinaryForm& f, std::uint64_t c, const SearchLimits& limits = {});

}  // namespace discform
