#include "discform/ring_linalg.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <sstream>

#include "discform/errors.hpp"

namespace discform {

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

Modulus::Modulus(std::uint32_t p, std::uint32_t r) : p_(p), r_(r), m_(1) {
  if (!is_prime_u64(p)) throw UsageError("modulus base " + std::to_string(p) + " is not prime");
  if (r == 0) throw UsageError("modulus exponent must be positive");
  std::uint64_t m = 1;
  for (std::uint32_t i = 0; i < r; ++i) {
    m *= p;
    if (m > (std::uint64_t{1} << 31)) throw UsageError("modulus p^r too large");
  }
  m_ = static_cast<std::uint32_t>(m);
}

Residue Modulus::reduce(std::int64_t x) const {
  std::int64_t v = x % static_cast<std::int64_t>(m_);
  if (v < 0) v += m_;
  return static_cast<Residue>(v);
}

unsigned Modulus::valuation(Residue a) const {
  if (a == 0) return r_;
  unsigned v = 0;
  while (a % p_ == 0) {
    a /= p_;
    ++v;
  }
  return v;
}

Residue Modulus::inverse(Residue unit) const {
  if (!is_unit(unit)) throw UsageError("inverse of a non-unit mod " + std::to_string(m_));
  // Extended Euclid on (unit, m).
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = m_, new_r = unit;
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::tie(t, new_t) = std::pair{new_t, t - q * new_t};
    std::tie(r, new_r) = std::pair{new_r, r - q * new_r};
  }
  return reduce(t);
}

Residue Modulus::power_of_p(unsigned e) const {
  std::uint64_t v = 1;
  for (unsigned i = 0; i < e; ++i) v *= p_;
  return static_cast<Residue>(v % m_);
}

std::string Modulus::to_string() const {
  return r_ == 1 ? std::to_string(p_) : std::to_string(p_) + "^" + std::to_string(r_);
}

ModVector::ModVector(Modulus modulus, std::vector<Residue> values) : modulus(modulus), entries(std::move(values)) {
  for (auto& e : entries) e %= modulus.m();
}

bool ModVector::is_zero() const {
  return std::all_of(entries.begin(), entries.end(), [](Residue e) { return e == 0; });
}

ModVector& ModVector::operator+=(const ModVector& other) {
  if (!(modulus == other.modulus) || size() != other.size()) throw UsageError("vector shape or modulus mismatch");
  for (std::size_t i = 0; i < size(); ++i) entries[i] = modulus.add(entries[i], other.entries[i]);
  return *this;
}

ModVector& ModVector::operator-=(const ModVector& other) {
  if (!(modulus == other.modulus) || size() != other.size()) throw UsageError("vector shape or modulus mismatch");
  for (std::size_t i = 0; i < size(); ++i) entries[i] = modulus.sub(entries[i], other.entries[i]);
  return *this;
}

ModVector ModVector::scaled(Residue c) const {
  ModVector out(modulus, size());
  for (std::size_t i = 0; i < size(); ++i) out.entries[i] = modulus.mul(entries[i], c);
  return out;
}

ModMatrix::ModMatrix(Modulus modulus, std::size_t rows, std::size_t cols)
    : modulus_(modulus), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

ModMatrix::ModMatrix(Modulus modulus, std::size_t rows, std::size_t cols, const std::vector<std::int64_t>& row_major)
    : ModMatrix(modulus, rows, cols) {
  if (row_major.size() != rows * cols) throw UsageError("matrix data does not match its shape");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] = modulus.reduce(row_major[i]);
}

ModMatrix ModMatrix::identity(Modulus modulus, std::size_t n) {
  ModMatrix out(modulus, n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1 % modulus.m();
  return out;
}

ModMatrix ModMatrix::from_columns(Modulus modulus, std::size_t rows, std::span<const ModVector> columns) {
  ModMatrix out(modulus, rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows || !(columns[j].modulus == modulus)) throw UsageError("column shape or modulus mismatch");
    for (std::size_t i = 0; i < rows; ++i) out(i, j) = columns[j][i];
  }
  return out;
}

ModMatrix ModMatrix::from_rows(Modulus modulus, std::size_t cols, std::span<const ModVector> rows) {
  ModMatrix out(modulus, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols || !(rows[i].modulus == modulus)) throw UsageError("row shape or modulus mismatch");
    std::copy(rows[i].entries.begin(), rows[i].entries.end(), out.row(i).begin());
  }
  return out;
}

ModVector ModMatrix::column(std::size_t j) const {
  ModVector out(modulus_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

ModVector ModMatrix::row_vector(std::size_t i) const {
  return ModVector(modulus_, std::vector<Residue>(row(i).begin(), row(i).end()));
}

ModMatrix ModMatrix::operator*(const ModMatrix& other) const {
  if (!(modulus_ == other.modulus_) || cols_ != other.rows_) throw UsageError("matrix product shape or modulus mismatch");
  ModMatrix out(modulus_, rows_, other.cols_);
  const std::uint64_t m = modulus_.m();
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < other.cols_; ++j) {
      std::uint64_t acc = 0;
      for (std::size_t k = 0; k < cols_; ++k) {
        acc += std::uint64_t{(*this)(i, k)} * other(k, j);
        if (acc >= (std::uint64_t{1} << 62)) acc %= m;
      }
      out(i, j) = static_cast<Residue>(acc % m);
    }
  }
  return out;
}

ModVector ModMatrix::operator*(const ModVector& v) const {
  if (!(modulus_ == v.modulus) || cols_ != v.size()) throw UsageError("matrix-vector shape or modulus mismatch");
  ModVector out(modulus_, rows_);
  const std::uint64_t m = modulus_.m();
  for (std::size_t i = 0; i < rows_; ++i) {
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < cols_; ++k) {
      acc += std::uint64_t{(*this)(i, k)} * v[k];
      if (acc >= (std::uint64_t{1} << 62)) acc %= m;
    }
    out[i] = static_cast<Residue>(acc % m);
  }
  return out;
}

ModMatrix ModMatrix::operator+(const ModMatrix& other) const {
  if (!(modulus_ == other.modulus_) || rows_ != other.rows_ || cols_ != other.cols_) throw UsageError("matrix sum shape mismatch");
  ModMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = modulus_.add(data_[i], other.data_[i]);
  return out;
}

ModMatrix ModMatrix::operator-(const ModMatrix& other) const {
  if (!(modulus_ == other.modulus_) || rows_ != other.rows_ || cols_ != other.cols_) throw UsageError("matrix difference shape mismatch");
  ModMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = modulus_.sub(data_[i], other.data_[i]);
  return out;
}

ModMatrix ModMatrix::transpose() const {
  ModMatrix out(modulus_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

bool ModMatrix::operator==(const ModMatrix& other) const {
  return modulus_ == other.modulus_ && rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
}

bool ModMatrix::is_invertible() const {
  if (!is_square()) return false;
  auto diag = diagonalize(*this, false);
  if (diag.rank != rows_) return false;
  return std::all_of(diag.valuations.begin(), diag.valuations.end(), [](unsigned v) { return v == 0; });
}

ModMatrix ModMatrix::inverse() const {
  if (!is_square()) throw UsageError("inverse of a non-square matrix");
  auto diag = diagonalize(*this, true);
  if (diag.rank != rows_ ||
      !std::all_of(diag.valuations.begin(), diag.valuations.end(), [](unsigned v) { return v == 0; })) {
    throw UsageError("matrix is not invertible mod " + std::to_string(modulus_.m()));
  }
  // U A V = I, so A^{-1} = V U.
  return diag.right * *diag.left;
}

std::string ModMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j);
    os << "]";
  }
  os << "]";
  return os.str();
}

namespace {

// row[dst] -= q * row[src], restricted to columns [from, cols).
void axpy_row(ModMatrix& a, std::size_t dst, std::size_t src, Residue q, std::size_t from = 0) {
  if (q == 0) return;
  const Modulus& md = a.modulus();
  auto d = a.row(dst);
  auto s = a.row(src);
  for (std::size_t j = from; j < a.cols(); ++j) {
    if (s[j]) d[j] = md.sub(d[j], md.mul(q, s[j]));
  }
}

void swap_rows(ModMatrix& a, std::size_t i, std::size_t k) {
  if (i == k) return;
  auto ri = a.row(i);
  auto rk = a.row(k);
  std::swap_ranges(ri.begin(), ri.end(), rk.begin());
}

void swap_cols(ModMatrix& a, std::size_t i, std::size_t k) {
  if (i == k) return;
  for (std::size_t r = 0; r < a.rows(); ++r) std::swap(a(r, i), a(r, k));
}

// col[dst] -= q * col[src]
void axpy_col(ModMatrix& a, std::size_t dst, std::size_t src, Residue q) {
  if (q == 0) return;
  const Modulus& md = a.modulus();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    if (a(r, src)) a(r, dst) = md.sub(a(r, dst), md.mul(q, a(r, src)));
  }
}

void scale_row(ModMatrix& a, std::size_t i, Residue c) {
  const Modulus& md = a.modulus();
  for (auto& e : a.row(i)) e = md.mul(e, c);
}

}  // namespace

Diagonalization diagonalize(const ModMatrix& a, bool track_left) {
  const Modulus md = a.modulus();
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  ModMatrix d = a;
  Diagonalization out{0, {}, std::nullopt, ModMatrix::identity(md, cols), ModMatrix::identity(md, cols)};
  if (track_left) out.left = ModMatrix::identity(md, rows);

  for (std::size_t k = 0; k < std::min(rows, cols); ++k) {
    // Minimal valuation pivot in the trailing block; ties: lowest row, then lowest column.
    unsigned best = md.r();
    std::size_t pi = 0, pj = 0;
    for (std::size_t i = k; i < rows && best > 0; ++i) {
      auto row = d.row(i);
      for (std::size_t j = k; j < cols; ++j) {
        if (row[j] == 0) continue;
        unsigned v = md.valuation(row[j]);
        if (v < best) {
          best = v;
          pi = i;
          pj = j;
          if (v == 0) break;
        }
      }
    }
    if (best == md.r()) break;

    swap_rows(d, k, pi);
    if (out.left) swap_rows(*out.left, k, pi);
    swap_cols(d, k, pj);
    swap_cols(out.right, k, pj);
    swap_rows(out.right_inverse, k, pj);

    const Residue pivot = d(k, k);
    const Residue pv = md.power_of_p(best);
    const Residue unit_inv = md.inverse(static_cast<Residue>(pivot / pv));
    scale_row(d, k, unit_inv);
    if (out.left) scale_row(*out.left, k, unit_inv);

    for (std::size_t i = k + 1; i < rows; ++i) {
      Residue e = d(i, k);
      if (e == 0) continue;
      Residue q = e / pv;
      axpy_row(d, i, k, q, k);
      if (out.left) axpy_row(*out.left, i, k, q);
    }
    for (std::size_t j = k + 1; j < cols; ++j) {
      Residue e = d(k, j);
      if (e == 0) continue;
      Residue q = e / pv;
      d(k, j) = 0;
      axpy_col(out.right, j, k, q);
      // V' = V (I - q e_k e_j^T), so V'^{-1} = (I + q e_k e_j^T) V^{-1}.
      axpy_row(out.right_inverse, k, j, md.neg(q));
    }
    out.valuations.push_back(best);
    ++out.rank;
  }
  return out;
}

namespace detail {

std::optional<ModVector> solve_generic(const ModMatrix& a, const ModVector& b) {
  const Modulus md = a.modulus();
  auto diag = diagonalize(a, true);
  ModVector c = *diag.left * b;
  ModVector y(md, a.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    if (k < diag.rank) {
      unsigned v = diag.valuations[k];
      if (md.valuation(c[k]) < v) return std::nullopt;
      y[k] = c[k] / md.power_of_p(v);
    } else if (c[k] != 0) {
      return std::nullopt;
    }
  }
  return diag.right * y;
}

std::vector<ModVector> kernel_generators_generic(const ModMatrix& a) {
  const Modulus md = a.modulus();
  auto diag = diagonalize(a, false);
  std::vector<ModVector> gens;
  for (std::size_t k = 0; k < a.cols(); ++k) {
    Residue scale = 1;
    if (k < diag.rank) {
      unsigned v = diag.valuations[k];
      if (v == 0) continue;
      scale = md.power_of_p(md.r() - v);
    }
    gens.push_back(diag.right.column(k).scaled(scale));
  }
  return gens;
}

}  // namespace detail

std::optional<ModVector> solve(const ModMatrix& a, const ModVector& b) {
  if (!(a.modulus() == b.modulus)) throw UsageError("solve: modulus mismatch");
  if (a.rows() != b.size()) throw UsageError("solve: right-hand side has wrong length");
  if (a.modulus().m() == 2) return solve_f2(a, b);
  return detail::solve_generic(a, b);
}

std::vector<ModVector> kernel_generators(const ModMatrix& a) {
  if (a.modulus().m() == 2) return kernel_generators_f2(a);
  return detail::kernel_generators_generic(a);
}

bool in_span(std::span<const ModVector> gens, const ModVector& v) {
  if (gens.empty()) return v.is_zero();
  auto m = ModMatrix::from_columns(v.modulus, v.size(), gens);
  return solve(m, v).has_value();
}

unsigned subgroup_order_log(const Modulus& modulus, std::size_t length, std::span<const ModVector> gens) {
  if (gens.empty()) return 0;
  auto diag = diagonalize(ModMatrix::from_rows(modulus, length, gens), false);
  unsigned total = 0;
  for (unsigned v : diag.valuations) total += modulus.r() - v;
  return total;
}

unsigned QuotientStructure::order_log(std::uint32_t p) const {
  unsigned total = 0;
  for (auto f : invariant_factors) {
    while (f > 1) {
      f /= p;
      ++total;
    }
  }
  return total;
}

QuotientStructure quotient_structure(const Modulus& md, std::size_t length, std::span<const ModVector> sub,
                                     std::span<const ModVector> sup) {
  for (const auto& s : sub) {
    if (s.size() != length) throw UsageError("quotient_structure: vector length mismatch");
    if (!in_span(sup, s)) throw PreconditionError("quotient_structure: sub is not contained in sup");
  }
  const std::size_t a = sup.size();
  const std::size_t b = sub.size();
  QuotientStructure out;
  if (a == 0) return out;

  // Relations among sup-generators modulo <sub>: project ker [S | -T] onto the S block.
  ModMatrix st(md, length, a + b);
  for (std::size_t j = 0; j < a; ++j)
    for (std::size_t i = 0; i < length; ++i) st(i, j) = sup[j][i];
  for (std::size_t j = 0; j < b; ++j)
    for (std::size_t i = 0; i < length; ++i) st(i, a + j) = md.neg(sub[j][i]);
  auto kernel = kernel_generators(st);
  ModMatrix relations(md, kernel.size(), a);
  for (std::size_t i = 0; i < kernel.size(); ++i)
    for (std::size_t j = 0; j < a; ++j) relations(i, j) = kernel[i][j];

  auto diag = diagonalize(relations, false);
  struct Factor {
    unsigned exponent;
    ModVector rep;
  };
  std::vector<Factor> factors;
  for (std::size_t k = 0; k < a; ++k) {
    unsigned exponent = k < diag.rank ? diag.valuations[k] : md.r();
    if (exponent == 0) continue;
    ModVector rep(md, length);
    auto w = diag.right_inverse.row(k);
    for (std::size_t j = 0; j < a; ++j) {
      if (w[j]) rep += sup[j].scaled(w[j]);
    }
    factors.push_back({exponent, std::move(rep)});
  }
  std::stable_sort(factors.begin(), factors.end(),
                   [](const Factor& x, const Factor& y) { return x.exponent < y.exponent; });
  for (auto& f : factors) {
    std::uint64_t order = 1;
    for (unsigned i = 0; i < f.exponent; ++i) order *= md.p();
    out.invariant_factors.push_back(order);
    out.representatives.push_back(std::move(f.rep));
  }
  return out;
}

RowReducer::RowReducer(Modulus modulus, std::size_t cols) : modulus_(modulus), cols_(cols) {}

void RowReducer::add_row(std::span<const Residue> row) {
  if (row.size() != cols_) throw UsageError("RowReducer: row length mismatch");
  if (std::all_of(row.begin(), row.end(), [](Residue e) { return e == 0; })) return;
  rows_.insert(rows_.end(), row.begin(), row.end());
  ++count_;
  if (count_ >= 4 * cols_ + 64) compress();
}

void RowReducer::compress() {
  // Column-by-column elimination with row operations only: at most cols_
  // nonzero rows survive and the row span is unchanged.
  ModMatrix m(modulus_, count_, cols_);
  std::copy(rows_.begin(), rows_.end(), m.row(0).begin());
  std::size_t next = 0;
  for (std::size_t c = 0; c < cols_ && next < count_; ++c) {
    unsigned best = modulus_.r();
    std::size_t pi = 0;
    for (std::size_t i = next; i < count_; ++i) {
      Residue e = m(i, c);
      if (e == 0) continue;
      unsigned v = modulus_.valuation(e);
      if (v < best) {
        best = v;
        pi = i;
        if (v == 0) break;
      }
    }
    if (best == modulus_.r()) continue;
    swap_rows(m, next, pi);
    const Residue pv = modulus_.power_of_p(best);
    scale_row(m, next, modulus_.inverse(static_cast<Residue>(m(next, c) / pv)));
    for (std::size_t i = next + 1; i < count_; ++i) {
      Residue e = m(i, c);
      if (e) axpy_row(m, i, next, e / pv, c);
    }
    ++next;
  }
  rows_.assign(m.data().begin(), m.data().begin() + static_cast<std::ptrdiff_t>(next * cols_));
  count_ = next;
}

ModMatrix RowReducer::matrix() {
  compress();
  ModMatrix out(modulus_, count_, cols_);
  std::copy(rows_.begin(), rows_.end(), out.row(0).begin());
  return out;
}

F2RowBasis::F2RowBasis(std::size_t cols) : cols_(cols), words_((cols + 63) / 64), pivots_(cols) {}

std::vector<std::uint64_t> F2RowBasis::pack(std::span<const Residue> row) {
  std::vector<std::uint64_t> out((row.size() + 63) / 64, 0);
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] & 1u) out[j / 64] |= std::uint64_t{1} << (j % 64);
  }
  return out;
}

bool F2RowBasis::insert(std::span<const std::uint64_t> packed) {
  if (packed.size() != words_) throw UsageError("F2RowBasis: row width mismatch");
  std::vector<std::uint64_t> row(packed.begin(), packed.end());
  for (std::size_t w = 0; w < words_; ++w) {
    while (row[w] != 0) {
      std::size_t col = w * 64 + static_cast<std::size_t>(std::countr_zero(row[w]));
      const auto& piv = pivots_[col];
      if (piv.empty()) {
        pivots_[col] = std::move(row);
        ++rank_;
        return true;
      }
      for (std::size_t x = w; x < words_; ++x) row[x] ^= piv[x];
    }
  }
  return false;
}

namespace {
bool test_bit(const std::vector<std::uint64_t>& row, std::size_t j) { return (row[j / 64] >> (j % 64)) & 1u; }
}  // namespace

std::vector<std::vector<std::uint64_t>> F2RowBasis::reduced() const {
  auto rows = pivots_;
  // Clear each pivot column in the rows with smaller pivots (larger pivots
  // already have zeros there since a pivot is the lowest set bit).
  for (std::size_t c = cols_; c-- > 0;) {
    if (rows[c].empty()) continue;
    for (std::size_t c2 = 0; c2 < c; ++c2) {
      if (!rows[c2].empty() && test_bit(rows[c2], c)) {
        for (std::size_t x = 0; x < words_; ++x) rows[c2][x] ^= rows[c][x];
      }
    }
  }
  return rows;
}

std::vector<std::vector<std::uint8_t>> F2RowBasis::null_space() const {
  auto rows = reduced();
  std::vector<std::vector<std::uint8_t>> out;
  for (std::size_t f = 0; f < cols_; ++f) {
    if (!rows[f].empty()) continue;
    std::vector<std::uint8_t> v(cols_, 0);
    v[f] = 1;
    for (std::size_t c = 0; c < f; ++c) {
      if (!rows[c].empty() && test_bit(rows[c], f)) v[c] = 1;
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<std::vector<std::uint8_t>> F2RowBasis::solve_augmented() const {
  if (cols_ == 0) return std::vector<std::uint8_t>{};
  const std::size_t rhs = cols_ - 1;
  if (!pivots_[rhs].empty()) return std::nullopt;
  auto rows = reduced();
  std::vector<std::uint8_t> x(rhs, 0);
  for (std::size_t c = 0; c < rhs; ++c) {
    if (!rows[c].empty() && test_bit(rows[c], rhs)) x[c] = 1;
  }
  return x;
}

std::vector<ModVector> kernel_generators_f2(const ModMatrix& a) {
  if (a.modulus().m() != 2) throw UsageError("F2 kernel requested for modulus " + a.modulus().to_string());
  F2RowBasis basis(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) basis.insert(F2RowBasis::pack(a.row(i)));
  std::vector<ModVector> out;
  for (auto& v : basis.null_space()) out.emplace_back(a.modulus(), std::vector<Residue>(v.begin(), v.end()));
  return out;
}

std::optional<ModVector> solve_f2(const ModMatrix& a, const ModVector& b) {
  if (a.modulus().m() != 2) throw UsageError("F2 solve requested for modulus " + a.modulus().to_string());
  F2RowBasis basis(a.cols() + 1);
  std::vector<Residue> row(a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::copy(a.row(i).begin(), a.row(i).end(), row.begin());
    row.back() = b[i];
    basis.insert(F2RowBasis::pack(row));
  }
  auto x = basis.solve_augmented();
  if (!x) return std::nullopt;
  return ModVector(a.modulus(), std::vector<Residue>(x->begin(), x->end()));
}

}  // namespace discform
