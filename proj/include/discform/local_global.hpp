#pragma once

// Local and global tests for z^2 = f(x, y), f an integer binary form.
//
// A form of even degree n has a Q_v-point on the weighted curve iff f(x, y)
// is a square in Q_v for some (x : y) in P^1(Q_v) (f(lx, ly) = l^n f(x, y)
// with n even). The p-adic search covers P^1(Q_p) with the patches y = 1,
// x in Z_p and x = 1, y in pZ_p.
//
// Threshold for skipping good primes: let B_g be the smallest prime above
// (4g+2)^2 with g = floor((n-2)/2). For p > B_g not dividing 2 disc(f) the
// reduction is a smooth genus-g curve, so it has at least
// p + 1 - 2g sqrt(p) points, of which at most n + 2 lie over roots of f or at
// infinity. Since (4g+2)^2 + 1 - 2g(4g+2) - (n+2) > 0 there is a smooth
// F_p-point with z != 0, and it lifts by Hensel's lemma.

#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "discform/arith.hpp"
#include "discform/pencils.hpp"

namespace discform {

/// p = 0 is the real place.
struct Place {
  BigInt p = 0;
  bool is_real() const { return p == 0; }
  std::string to_string() const { return p == 0 ? "R" : p.get_str(); }
};

enum class LocalMethod { NegDefiniteTest, ResidueLift, WeilBoundSkip };
std::string to_string(LocalMethod m);

struct LocalVerdict {
  Place place;
  bool solvable = false;
  LocalMethod method = LocalMethod::ResidueLift;
  /// Deepest residue-disc level visited.
  unsigned depth = 0;
  /// Discs still undecided when the depth bound was reached (counted as
  /// insolvable).
  std::size_t undecided = 0;
  /// How the verdict was reached, for the audit.
  std::string detail;
};

/// Throws UsageError unless f is an integer form with nonzero discriminant.
LocalVerdict real_obstruction(const BinaryForm& f);

/// 2 v_p(2) + v_p(disc f) + 1.
unsigned qp_depth_bound(const BinaryForm& f, std::uint64_t p);
/// Residue-disc recursion; extra_depth deepens the bound (validation only).
/// Throws UsageError for non-squarefree f, ResourceError for p > 10^6.
LocalVerdict qp_solvable(const BinaryForm& f, std::uint64_t p, unsigned extra_depth = 0);
/// Decision from the reduction mod p alone for p > B_g: solvable when the
/// reduction is not a constant times a square, or is a square constant times
/// a square. nullopt otherwise.
std::optional<LocalVerdict> large_prime_check(const BinaryForm& f, const BigInt& p);

/// B_g for forms of degree n.
std::uint64_t weil_threshold(std::size_t n);

/// Memoizes complete factorizations of discriminants as JSON files in a directory.
class FactorCache {
 public:
  explicit FactorCache(std::string directory);
  std::optional<Factorization> lookup(const BigInt& n) const;
  void store(const BigInt& n, const Factorization& f) const;

 private:
  std::string dir_;
  mutable std::mutex mutex_;
};

enum class ElsStatus { Solvable, NotSolvable, Unknown };
std::string to_string(ElsStatus s);

struct ElsResult {
  ElsStatus status = ElsStatus::Unknown;
  std::vector<LocalVerdict> audit;
  std::optional<Place> obstruction;
  std::uint64_t weil_threshold = 0;
  std::vector<BigInt> unfactored;
};

struct CertifyOptions {
  int point_search_bound = 20;
  std::size_t max_primes = 500;
  FactorLimits factor_limits;
  const FactorCache* cache = nullptr;
};

/// Real place, every p <= B_g and every p | 2 disc(f).
ElsResult everywhere_locally_solvable(const BinaryForm& f, const CertifyOptions& options = {});

/// Degrees of the irreducible factors of f(x, 1) mod p, descending.
/// Throws UsageError if p divides f0 * disc(f).
std::vector<unsigned> frobenius_cycle_type(const BinaryForm& f, std::uint64_t p);

struct GaloisCertificate {
  bool certified = false;
  std::size_t primes_scanned = 0;
  /// Witnesses for an n-cycle, an (n-1)-cycle and a transposition (a cycle
  /// type with exactly one 2-cycle and otherwise odd cycles; its odd power is
  /// a transposition).
  std::vector<std::uint64_t> primes;
  std::vector<std::vector<unsigned>> cycle_types;
};

GaloisCertificate certify_sn(const BinaryForm& f, std::size_t max_primes = 500);

enum class Verdict { DiscForm, LocalObstruction, Unknown, NotSquareFree };
enum class Reason { None, OddDegree, RationalPoint, LocalGlobal };
std::string to_string(Verdict v);
std::string to_string(Reason r);

struct GlobalCertificate {
  Verdict verdict = Verdict::Unknown;
  Reason reason = Reason::None;
  std::optional<std::pair<BigInt, BigInt>> point;
  std::optional<Place> obstruction;
  std::optional<ElsResult> els;
  std::optional<GaloisCertificate> galois;

  nlohmann::json to_json() const;
};

/// First applicable of: odd degree; a rational point (infinity, then
/// |a|, |b| <= bound); a local obstruction; ELS with an S_n certificate.
/// Throws UsageError for integer forms of degree < 1 or the zero form.
GlobalCertificate certify_discriminant_form(const BinaryForm& f, const CertifyOptions& options = {});

/// Smallest point (a, b), |a|, |b| <= bound, gcd = 1, with f(a, b) a square.
std::optional<std::pair<BigInt, BigInt>> find_rational_point(const BinaryForm& f, int bound);

struct Proportion {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  double estimate = 0;
  double low = 0;
  double high = 1;
  double half_width() const { return (high - low) / 2; }
};

Proportion wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.96);

/// Coefficients independent and uniform in [-height, height], from a seed
/// derived from (seed, index) only.
BinaryForm sample_form(std::size_t n, std::uint64_t height, std::uint64_t seed, std::uint64_t index);

struct DensityReport {
  std::size_t n = 0;
  std::uint64_t height = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t not_squarefree = 0;
  std::uint64_t certified = 0;
  std::uint64_t els = 0;
  std::uint64_t els_unknown = 0;
  std::uint64_t local_obstruction = 0;
  std::uint64_t els_certified = 0;
  std::map<std::string, std::uint64_t> reasons;
  Proportion proportion_certified;
  Proportion proportion_els;
  Proportion certified_among_els;

  nlohmann::json to_json() const;
};

DensityReport density_estimate(std::size_t n, std::uint64_t height, std::uint64_t samples, std::uint64_t seed,
                               unsigned threads = 1, const CertifyOptions& options = {});

}  // namespace discform
