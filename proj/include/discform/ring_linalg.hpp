#pragma once

// Exact linear algebra over Z/p^r.
//
// Z/p^r is a local ring: every nonzero element is p^v times a unit, and an
// element of valuation v divides every element of valuation >= v. All
// elimination below pivots on an entry of minimal p-valuation, which makes it
// possible to clear a whole row/column without divisions that fail. Ties are
// broken by lowest row index, then lowest column index, so representatives
// are reproducible.
//
// When the modulus is 2 the kernel and solve entry points switch to a
// bit-packed elimination (F2RowBasis) with word-wise XOR.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace discform {

using Residue = std::uint32_t;

class Modulus {
 public:
  /// Throws UsageError if p is not prime, r == 0, or p^r does not fit in 31 bits.
  Modulus(std::uint32_t p, std::uint32_t r);

  std::uint32_t p() const { return p_; }
  std::uint32_t r() const { return r_; }
  std::uint32_t m() const { return m_; }

  Residue reduce(std::int64_t x) const;
  Residue add(Residue a, Residue b) const { return static_cast<Residue>((std::uint64_t{a} + b) % m_); }
  Residue sub(Residue a, Residue b) const { return static_cast<Residue>((std::uint64_t{a} + m_ - b) % m_); }
  Residue mul(Residue a, Residue b) const { return static_cast<Residue>((std::uint64_t{a} * b) % m_); }
  Residue neg(Residue a) const { return a == 0 ? 0 : m_ - a; }

  /// p-adic valuation of a residue; returns r for zero.
  unsigned valuation(Residue a) const;
  bool is_unit(Residue a) const { return a % p_ != 0; }
  /// Throws UsageError for non-units.
  Residue inverse(Residue unit) const;
  /// p^e for 0 <= e <= r (p^r reduces to 0).
  Residue power_of_p(unsigned e) const;

  std::string to_string() const;

  bool operator==(const Modulus& other) const { return m_ == other.m_; }

 private:
  std::uint32_t p_;
  std::uint32_t r_;
  std::uint32_t m_;
};

bool is_prime_u64(std::uint64_t n);

struct ModVector {
  ModVector(Modulus modulus, std::size_t size) : modulus(modulus), entries(size, 0) {}
  ModVector(Modulus modulus, std::vector<Residue> values);

  Modulus modulus;
  std::vector<Residue> entries;

  std::size_t size() const { return entries.size(); }
  Residue operator[](std::size_t i) const { return entries[i]; }
  Residue& operator[](std::size_t i) { return entries[i]; }
  bool is_zero() const;

  ModVector& operator+=(const ModVector& other);
  ModVector& operator-=(const ModVector& other);
  ModVector scaled(Residue c) const;

  friend ModVector operator+(ModVector a, const ModVector& b) { return a += b; }
  friend ModVector operator-(ModVector a, const ModVector& b) { return a -= b; }
  bool operator==(const ModVector& other) const {
    return modulus == other.modulus && entries == other.entries;
  }
};

class ModMatrix {
 public:
  ModMatrix(Modulus modulus, std::size_t rows, std::size_t cols);
  /// Entries are reduced mod m; throws UsageError when the shape does not match.
  ModMatrix(Modulus modulus, std::size_t rows, std::size_t cols, const std::vector<std::int64_t>& row_major);

  static ModMatrix identity(Modulus modulus, std::size_t n);
  /// Matrix whose columns are the given vectors (all of equal length).
  static ModMatrix from_columns(Modulus modulus, std::size_t rows, std::span<const ModVector> columns);
  static ModMatrix from_rows(Modulus modulus, std::size_t cols, std::span<const ModVector> rows);

  const Modulus& modulus() const { return modulus_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Residue operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  Residue& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  std::span<const Residue> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<Residue> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  const std::vector<Residue>& data() const { return data_; }

  ModVector column(std::size_t j) const;
  ModVector row_vector(std::size_t i) const;

  ModMatrix operator*(const ModMatrix& other) const;
  ModVector operator*(const ModVector& v) const;
  ModMatrix operator+(const ModMatrix& other) const;
  ModMatrix operator-(const ModMatrix& other) const;
  ModMatrix transpose() const;
  bool operator==(const ModMatrix& other) const;

  bool is_square() const { return rows_ == cols_; }
  /// Square matrices only; invertible iff the reduction mod p is.
  bool is_invertible() const;
  /// Throws UsageError if not invertible.
  ModMatrix inverse() const;

  std::string to_string() const;

 private:
  Modulus modulus_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Residue> data_;
};

/// U * A * V = D with D diagonal, diagonal entries p^{valuations[k]} for
/// k < rank and zero afterwards. U is only populated when requested.
struct Diagonalization {
  std::size_t rank = 0;
  std::vector<unsigned> valuations;
  std::optional<ModMatrix> left;  // U
  ModMatrix right;                // V
  ModMatrix right_inverse;        // V^{-1}
};

Diagonalization diagonalize(const ModMatrix& a, bool track_left);

/// Some x with A x = b, or nullopt when no solution exists over Z/p^r.
/// Throws UsageError on modulus or shape mismatch.
std::optional<ModVector> solve(const ModMatrix& a, const ModVector& b);

/// Generators of {x : A x = 0} as a subgroup of (Z/p^r)^cols.
std::vector<ModVector> kernel_generators(const ModMatrix& a);

/// True iff v lies in the subgroup generated by gens.
bool in_span(std::span<const ModVector> gens, const ModVector& v);

/// log_p of the order of the subgroup generated by gens (gens may be empty;
/// then `length` gives the ambient dimension).
unsigned subgroup_order_log(const Modulus& modulus, std::size_t length, std::span<const ModVector> gens);

struct QuotientStructure {
  /// Orders of the cyclic factors, each a power of p (> 1), ascending.
  std::vector<std::uint64_t> invariant_factors;
  /// One lift in <sup> of a generator of each cyclic factor.
  std::vector<ModVector> representatives;

  bool trivial() const { return invariant_factors.empty(); }
  /// log_p of |<sup>/<sub>|.
  unsigned order_log(std::uint32_t p) const;
};

/// Invariant-factor decomposition of <sup>/<sub>. Throws PreconditionError if
/// <sub> is not contained in <sup>.
QuotientStructure quotient_structure(const Modulus& modulus, std::size_t length,
                                     std::span<const ModVector> sub, std::span<const ModVector> sup);

/// Accumulates rows and keeps only an echelon basis of their span, so huge
/// constraint systems can be reduced in bounded memory. Only invertible row
/// operations are used, so the kernel of the accumulated rows is preserved.
class RowReducer {
 public:
  RowReducer(Modulus modulus, std::size_t cols);

  void add_row(std::span<const Residue> row);
  /// Matrix whose rows span the same subgroup as all rows added so far.
  ModMatrix matrix();

 private:
  void compress();

  Modulus modulus_;
  std::size_t cols_;
  std::vector<Residue> rows_;
  std::size_t count_ = 0;
};

/// Incremental XOR basis indexed by pivot (lowest set bit).
class F2RowBasis {
 public:
  explicit F2RowBasis(std::size_t cols);

  /// Returns true when the row was independent of the basis so far.
  bool insert(std::span<const std::uint64_t> packed);
  std::size_t rank() const { return rank_; }
  std::size_t cols() const { return cols_; }

  /// Basis of the null space of the accumulated rows (reduced echelon back-substitution).
  std::vector<std::vector<std::uint8_t>> null_space() const;
  /// Treats the last column as a right-hand side: returns x (length cols-1)
  /// solving the accumulated system, or nullopt if it is inconsistent.
  std::optional<std::vector<std::uint8_t>> solve_augmented() const;

  static std::vector<std::uint64_t> pack(std::span<const Residue> row);

 private:
  /// Fully reduced copies of the pivot rows (each pivot column cleared elsewhere).
  std::vector<std::vector<std::uint64_t>> reduced() const;

  std::size_t cols_;
  std::size_t words_;
  std::size_t rank_ = 0;
  std::vector<std::vector<std::uint64_t>> pivots_;  // indexed by pivot column, empty if none
};

std::vector<ModVector> kernel_generators_f2(const ModMatrix& a);
std::optional<ModVector> solve_f2(const ModMatrix& a, const ModVector& b);

namespace detail {
std::vector<ModVector> kernel_generators_generic(const ModMatrix& a);
std::optional<ModVector> solve_generic(const ModMatrix& a, const ModVector& b);
}  // namespace detail

}  // namespace discform
