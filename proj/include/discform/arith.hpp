#pragma once

// Integer and F_p[x] helpers for the arithmetic side: prime tables, integer
// factorization (trial division, Pollard-Brent, then elliptic-curve method),
// and factor-degree patterns of squarefree polynomials mod p.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace discform {

using BigInt = mpz_class;

/// Primes <= n (sieve).
std::vector<std::uint32_t> primes_up_to(std::uint32_t n);
/// Smallest prime strictly greater than x.
std::uint64_t next_prime_after(std::uint64_t x);
bool is_probable_prime(const BigInt& n);
/// v_p(n) for n != 0.
unsigned valuation(const BigInt& n, std::uint64_t p);

struct Factorization {
  /// Prime factors of |n| with multiplicity, ascending by prime.
  std::vector<std::pair<BigInt, unsigned>> factors;
  /// False when a composite cofactor could not be split within the cap; it is
  /// then listed in `unfactored`.
  bool complete = true;
  std::vector<BigInt> unfactored;
};

struct FactorLimits {
  std::uint32_t trial_limit = 1'000'000;
  std::uint64_t rho_iterations = 1u << 16;
  /// Elliptic curves tried after rho, over increasing smoothness bounds.
  unsigned ecm_curves = 400;
};

/// Throws UsageError for n == 0.
Factorization factor_integer(const BigInt& n, const FactorLimits& limits = {});

/// Polynomial over F_p, coefficient i is the x^i coefficient, no trailing zeros.
using PolyFp = std::vector<std::uint64_t>;

PolyFp poly_trim(PolyFp a);
PolyFp poly_from_integers(const std::vector<BigInt>& ascending, std::uint64_t p);
PolyFp poly_sub(const PolyFp& a, const PolyFp& b, std::uint64_t p);
PolyFp poly_mul(const PolyFp& a, const PolyFp& b, std::uint64_t p);
/// Remainder of a by nonzero b.
PolyFp poly_rem(const PolyFp& a, const PolyFp& b, std::uint64_t p);
/// Quotient of a by nonzero b (remainder discarded).
PolyFp poly_div(const PolyFp& a, const PolyFp& b, std::uint64_t p);
/// Monic gcd (zero polynomial if both are zero).
PolyFp poly_gcd(PolyFp a, PolyFp b, std::uint64_t p);
PolyFp poly_derivative(const PolyFp& a, std::uint64_t p);
/// base^e mod m.
PolyFp poly_powmod(PolyFp base, std::uint64_t e, const PolyFp& m, std::uint64_t p);
std::uint64_t mod_pow(std::uint64_t b, std::uint64_t e, std::uint64_t p);
std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t p);

/// Degrees of the irreducible factors of a squarefree polynomial of degree
/// >= 1 mod p, sorted descending. Distinct-degree splitting: after removing
/// factors of degree < i, gcd(f, x^{p^i} - x) is the product of the degree-i
/// factors. Throws UsageError if f is not squarefree mod p.
std::vector<unsigned> factor_degrees(const PolyFp& f, std::uint64_t p);

/// Same result by trial division with every monic polynomial of degree
/// <= deg/2 (for small p and degree; used as a test oracle).
std::vector<unsigned> factor_degrees_naive(const PolyFp& f, std::uint64_t p);

/// splitmix64 step, used to derive per-sample seeds.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace discform
