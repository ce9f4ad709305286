#pragma once

// Independent oracles for the test suites. Everything here works by plain
// enumeration over small sets and shares no code with the library's solvers.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "discform/cohomology.hpp"
#include "discform/local_global.hpp"
#include "discform/pencils.hpp"
#include "discform/ring_linalg.hpp"

namespace oracle {

using Vec = std::vector<std::uint32_t>;
using discform::ModMatrix;
using discform::ModVector;
using discform::Modulus;

/// Every vector of (Z/m)^d in lexicographic order.
std::vector<Vec> all_vectors(std::uint32_t m, std::size_t d);
Vec apply(const ModMatrix& a, const Vec& x);
Vec to_vec(const ModVector& v);
ModVector to_mod(const Modulus& mod, const Vec& v);

/// |{x : A x = 0}| by enumeration.
std::uint64_t kernel_size(const ModMatrix& a);
/// Whether A x = b has a solution, by enumeration.
bool solvable(const ModMatrix& a, const Vec& b);
/// Elements of the subgroup generated by gens (closure under addition).
std::set<Vec> span(std::uint32_t m, std::size_t d, const std::vector<Vec>& gens);

ModMatrix random_matrix(std::mt19937_64& rng, const Modulus& mod, std::size_t rows, std::size_t cols);
ModVector random_vector(std::mt19937_64& rng, const Modulus& mod, std::size_t d);

/// Result of comparing the library's kernel, solve and quotient routines with
/// enumeration on one random instance.
struct LinalgComparison {
  std::string label;
  bool kernel_ok = false;
  bool solve_ok = false;
  bool quotient_ok = false;
  bool ok() const { return kernel_ok && solve_ok && quotient_ok; }
};
LinalgComparison compare_linalg(std::mt19937_64& rng, const Modulus& mod, std::size_t rows, std::size_t cols);

/// Small modules (|G| <= 8, |M| <= 81) for checking h1 against enumeration.
struct SmallInstance {
  std::string label;
  discform::GModulePtr module;
};
std::vector<SmallInstance> small_instances();

/// log_p |H^1| counted by enumerating all generator values, testing the
/// cocycle identity on every pair of elements, and counting coboundaries.
unsigned h1_order_log_by_enumeration(const discform::GModule& m);

/// Is xi(g) = g Q - Q for some Q in M? By enumerating M.
bool restriction_trivial_by_enumeration(const discform::Cocycle& xi, std::size_t g);

/// Number of conjugacy classes of cyclic subgroups, by enumeration of subsets.
std::size_t cyclic_subgroup_classes(const discform::FiniteGroup& g);

/// Local solvability of z^2 = f(x, y) at p from primitive residues mod p^k:
/// Solvable when some primitive (x, y) has f(x, y) = p^{2j} u with the unit u
/// a square to the available precision, Insolvable when every primitive pair
/// gives a value that cannot be such a square, Undecided otherwise.
enum class LocalResult { Solvable, Insolvable, Undecided };
LocalResult local_by_residues(const discform::BinaryForm& f, std::uint64_t p, unsigned k);

/// prod (x - r_i y) for integer roots r_i.
discform::BinaryForm product_of_linear(const std::vector<long>& roots);
/// Coefficient product of two forms.
discform::BinaryForm multiply(const discform::BinaryForm& a, const discform::BinaryForm& b);

/// det(A x - B y) at (x, y) = (t, 1) by exact integer elimination.
discform::BigInt pencil_value(const discform::Pencil& p, long t);

/// Every symmetric n x n matrix over F_p (row-major).
std::vector<std::vector<discform::BigInt>> all_symmetric(std::size_t n, std::uint64_t p);

bool is_square(const discform::BigInt& v);

}  // namespace oracle
