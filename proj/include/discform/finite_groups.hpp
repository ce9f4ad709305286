#pragma once

// Finite groups given by explicit generators, fully enumerated by a
// breadth-first search of the right Cayley graph. Element 0 is the identity;
// every other element e is reached by a tree edge e = parent(e) * gen(e), and
// all remaining Cayley edges (e, s) are kept as cycle edges. Cocycle solvers
// use the tree to propagate values and the cycle edges as constraints.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "discform/ring_linalg.hpp"

namespace discform {

/// A permutation of {0..n-1} (printed 1-based) or an invertible matrix over Z/p^r.
/// Products compose as functions: (a * b)(x) = a(b(x)).
class GroupElement {
 public:
  using Permutation = std::vector<std::uint16_t>;

  /// Images are 0-based; throws UsageError unless a bijection.
  static GroupElement permutation(Permutation images);
  /// Images 1-based, as in cycle notation.
  static GroupElement permutation_one_based(const std::vector<int>& images);
  /// Product of cycles on {1..n}, e.g. {{1,2},{3,4,5}}.
  static GroupElement from_cycles(std::size_t n, const std::vector<std::vector<int>>& cycles);
  /// Throws UsageError unless square and invertible.
  static GroupElement matrix(ModMatrix m);

  bool is_permutation() const { return std::holds_alternative<Permutation>(value_); }
  bool is_matrix() const { return std::holds_alternative<ModMatrix>(value_); }
  const Permutation& perm() const { return std::get<Permutation>(value_); }
  const ModMatrix& mat() const { return std::get<ModMatrix>(value_); }
  /// Permutation degree or matrix dimension.
  std::size_t degree() const;

  GroupElement operator*(const GroupElement& other) const;
  GroupElement inverse() const;
  GroupElement identity_like() const;
  bool same_kind(const GroupElement& other) const;

  /// Canonical serialization; equal iff the elements are equal.
  std::string key() const;
  std::string to_string() const;

  bool operator==(const GroupElement& other) const { return key() == other.key(); }

 private:
  explicit GroupElement(std::variant<Permutation, ModMatrix> v) : value_(std::move(v)) {}
  std::variant<Permutation, ModMatrix> value_;
};

struct TreeEdge {
  std::size_t parent;
  std::size_t generator;
};

struct CayleyEdge {
  std::size_t element;
  std::size_t generator;
};

struct CyclicRep {
  std::size_t element;
  std::size_t order;
};

inline constexpr std::size_t kDefaultGroupCap = 2'000'000;

class FiniteGroup {
 public:
  /// BFS closure. Throws ResourceError if the order would exceed cap and
  /// UsageError for an empty or inconsistent generator list.
  static FiniteGroup generate(std::vector<GroupElement> gens, std::size_t cap = kDefaultGroupCap);

  std::size_t order() const { return elements_.size(); }
  std::size_t num_generators() const { return generators_.size(); }
  const std::vector<GroupElement>& generators() const { return generators_; }
  const GroupElement& element(std::size_t i) const { return elements_[i]; }
  std::optional<std::size_t> index_of(const GroupElement& g) const;
  /// Tree edge of a non-identity element.
  const TreeEdge& tree_edge(std::size_t i) const { return tree_[i]; }
  const std::vector<CayleyEdge>& cycle_edges() const { return cycle_edges_; }

  /// Index of element(e) * generator(s).
  std::size_t times_generator(std::size_t e, std::size_t s) const { return right_[e * generators_.size() + s]; }
  std::size_t multiply(std::size_t a, std::size_t b) const;
  std::size_t inverse(std::size_t a) const;
  std::size_t power(std::size_t a, std::size_t k) const;
  std::size_t element_order(std::size_t a) const;
  /// h g h^{-1}
  std::size_t conjugate(std::size_t g, std::size_t h) const;

  /// Generator indices along the spanning tree: element = gen[w0] * gen[w1] * ...
  std::vector<std::size_t> element_word(std::size_t i) const;

  /// Conjugacy class id of every element, and the number of classes.
  std::vector<std::size_t> conjugacy_classes(std::size_t* num_classes = nullptr) const;

 private:
  std::vector<GroupElement> generators_;
  std::vector<GroupElement> elements_;
  std::vector<TreeEdge> tree_;
  std::vector<CayleyEdge> cycle_edges_;
  std::vector<std::uint32_t> right_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// One representative per conjugacy class of cyclic subgroups, ordered by
/// the index of the representative element.
std::vector<CyclicRep> cyclic_reps(const FiniteGroup& group);

struct GeneratorSet {
  std::string name;
  std::vector<GroupElement> generators;
  /// Conjugacy class label when the set is one of several subgroups.
  std::string conjugacy_class;
};

enum class StandardFamily { SnCoxeter, Sp2gF2, GL2, SL2, SubgroupsOfS3 };

struct StandardParams {
  std::size_t n = 0;  // SnCoxeter degree
  std::size_t g = 0;  // Sp2gF2 genus
  std::uint32_t p = 0;
  std::uint32_t r = 1;
};

/// Throws UsageError for unsupported parameters.
std::vector<GeneratorSet> standard_generators(StandardFamily family, const StandardParams& params);

/// Coxeter transpositions (t, t+1) of S_n, t = 1..n-1.
std::vector<GroupElement> sn_coxeter(std::size_t n);
/// Gram matrix of the standard symplectic form on F_2^{2g}, basis e_1..e_g, f_1..f_g.
ModMatrix symplectic_form_f2(std::size_t g);
/// x -> x + <x,v> v.
ModMatrix transvection_f2(std::size_t g, const ModVector& v);
std::vector<GroupElement> sp2g_f2_generators(std::size_t g);
std::vector<GroupElement> gl2_generators(std::uint32_t p, std::uint32_t r);
std::vector<GroupElement> sl2_generators(std::uint32_t p, std::uint32_t r = 1);

/// |GL_2(Z/p^r)| = p^{4(r-1)} (p^2-1)(p^2-p).
std::uint64_t gl2_order(std::uint32_t p, std::uint32_t r);
/// |Sp_{2g}(F_2)| = 2^{g^2} prod_{i=1..g} (4^i - 1).
std::uint64_t sp2g_f2_order(std::size_t g);

}  // namespace discform
