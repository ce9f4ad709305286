#pragma once

// Finite G-modules (Z/p^r)^d given by one action matrix per generator, and the
// concrete modules attached to a binary form of degree n with roots
// Delta = {1..n}:
//
//   perm module      F_2^n, subsets of Delta, addition = symmetric difference
//   even submodule   J_m[2], even subsets, basis P_t = {t, t+1}
//   subset quotient  calJ[2], subsets modulo complements
//   even quotient    J[2], even subsets modulo complements (n even)
//
// Coordinates of the quotient modules: the class of S is represented by the
// member of {S, complement of S} not containing n (subset coordinates
// 1..n-1), resp. the P-basis with P_{n-1} eliminated.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "discform/finite_groups.hpp"
#include "discform/ring_linalg.hpp"

namespace discform {

class GModule {
 public:
  /// Throws UsageError unless every action matrix is invertible and the
  /// matrices satisfy all Cayley relations of the group (the matrix assigned
  /// to an element through its tree word is path-independent).
  GModule(std::shared_ptr<const FiniteGroup> group, Modulus modulus, std::vector<ModMatrix> action, std::string label);

  const std::shared_ptr<const FiniteGroup>& group_ptr() const { return group_; }
  const FiniteGroup& group() const { return *group_; }
  const Modulus& modulus() const { return modulus_; }
  std::size_t rank() const { return rank_; }
  const std::string& label() const { return label_; }
  const std::vector<ModMatrix>& action() const { return action_; }
  const ModMatrix& generator_action(std::size_t s) const { return action_[s]; }
  /// Matrix of any group element (propagated along the spanning tree).
  const ModMatrix& element_action(std::size_t e) const { return element_action_[e]; }

  /// Cardinality of the module, i.e. m^d, as log_p.
  unsigned order_log() const { return modulus_.r() * static_cast<unsigned>(rank_); }

 private:
  std::shared_ptr<const FiniteGroup> group_;
  Modulus modulus_;
  std::size_t rank_;
  std::vector<ModMatrix> action_;
  std::vector<ModMatrix> element_action_;
  std::string label_;
};

using GModulePtr = std::shared_ptr<const GModule>;

std::shared_ptr<const FiniteGroup> make_group(std::vector<GroupElement> gens, std::size_t cap = kDefaultGroupCap);

/// Module with every generator acting as the identity.
GModulePtr trivial_module(std::shared_ptr<const FiniteGroup> group, Modulus modulus, std::size_t rank = 1);

/// F_2^n with coordinate permutation, for a permutation group of degree n.
GModulePtr perm_power_module(std::shared_ptr<const FiniteGroup> group);
GModulePtr perm_power_module(std::size_t n);

/// Even subsets in the basis P_1..P_{n-1}.
GModulePtr even_submodule(std::shared_ptr<const FiniteGroup> group);
GModulePtr even_submodule(std::size_t n);

/// Matrix of a permutation acting on F_2^n (column j = image of {j}).
ModMatrix permutation_matrix_f2(const GroupElement& perm);
/// Matrix of a permutation on even subsets in the P-basis.
ModMatrix even_action_matrix(const GroupElement& perm);

/// Subset coordinates (length n) of an even subset -> P-basis coordinates (length n-1).
ModVector subset_to_p_basis(const ModVector& subset);
/// P-basis coordinates -> subset coordinates.
ModVector p_basis_to_subset(const ModVector& p_coords);

/// Quotient of a module by the span of a G-fixed vector v that has a unit
/// coordinate. The last unit coordinate j of v is dropped: a class is
/// represented by its unique member with coordinate j equal to 0.
struct FixedQuotient {
  GModulePtr module;
  std::size_t dropped_coordinate;
  ModVector fixed_vector;
};
FixedQuotient quotient_by_fixed_vector(const GModule& m, const ModVector& v, std::string label);

/// Quotient by complements: applied to perm_power_module gives calJ[2], applied
/// to even_submodule gives J[2]. The all-ones subset is located from the
/// module label ("perm" or "even" prefix). Throws UsageError for J[2] with n odd.
GModulePtr quotient_complements(const GModule& m);

/// calJ[2] = subsets modulo complements, coordinates: subset not containing n.
GModulePtr subset_quotient_module(std::size_t n);
GModulePtr subset_quotient_module(std::shared_ptr<const FiniteGroup> group);
/// J[2] = even subsets modulo complements in the basis Ptilde_1..Ptilde_{n-2}.
GModulePtr even_quotient_module(std::size_t n);
GModulePtr even_quotient_module(std::shared_ptr<const FiniteGroup> group);

/// Normal form of a subset (length n) in calJ[2] coordinates (length n-1).
ModVector subset_class(const ModVector& subset);
/// Inclusion J[2] -> calJ[2]: column t is Ptilde_t = e_t + e_{t+1} in subset coordinates.
ModMatrix even_quotient_inclusion(std::size_t n);

/// e(S, T) = |S cap T| mod 2 for S even (subset coordinates, length n) and T a
/// class in calJ[2] (length n-1). Throws UsageError if S is odd.
Residue parity_pairing(const ModVector& even_subset, const ModVector& calj_class);
/// Gram matrix of e between J_m[2] (P-basis, rows) and calJ[2] (columns).
ModMatrix parity_pairing_matrix(std::size_t n);
/// Weil pairing on J[2] in the Ptilde basis (induced by e).
Residue weil_pairing(const ModVector& a, const ModVector& b);
ModMatrix weil_pairing_matrix(std::size_t n);

/// Transpose-inverse action.
GModulePtr dual_module(const GModule& m);

/// True iff phi * rho_src(s) = rho_dst(s) * phi for every generator s.
bool intertwines(const ModMatrix& phi, const GModule& src, const GModule& dst);

/// (Z/p^r)^2 with the tautological action of a matrix group.
GModulePtr elliptic_module(std::uint32_t p, std::uint32_t r, std::vector<GroupElement> gens);
GModulePtr elliptic_module(std::shared_ptr<const FiniteGroup> group);

/// Module whose generators act through the given matrices (any group).
GModulePtr module_from_matrices(std::shared_ptr<const FiniteGroup> group, std::vector<ModMatrix> action,
                                std::string label);

/// A 1-cochain G -> M given by its values on the group generators. The value
/// at any element is determined by the spanning tree; it is a cocycle iff the
/// propagated values satisfy xi(e s) = xi(e) + e xi(s) on every cycle edge.
struct Cocycle {
  GModulePtr module;
  std::vector<ModVector> gen_values;
};

/// 0 -> base -> total -> Z/m -> 0 with total = base (+) Z/m as groups, the
/// base occupying the first d coordinates and epsilon = (0,...,0,1) lifting 1.
/// The map total -> Z/m is the last coordinate, i.e. (1/ell) deg.
struct ExtensionRecord {
  GModulePtr base;
  GModulePtr total;
  std::uint32_t quotient_modulus = 0;
  ModMatrix inclusion;  // (d+1) x d
  ModVector epsilon;
  std::uint32_t ell = 1;
};

/// Total module with g(v, a) = (g v + a xi(g), a). Throws InvalidCocycleError
/// if xi violates a Cayley relation.
ExtensionRecord extension_from_cocycle(const Cocycle& xi, std::uint32_t ell = 1);

/// Rewrites a module W containing a submodule (given by the columns of
/// `inclusion`) of corank one, complemented by epsilon, in the block form of
/// ExtensionRecord. Throws UsageError if the columns and epsilon are not a
/// basis, the image is not stable, or epsilon does not map to 1 in W/base.
ExtensionRecord extension_from_embedding(const GModule& total, const ModMatrix& inclusion, const ModVector& epsilon,
                                         std::uint32_t ell, std::string base_label);

struct TranspositionIdentityReport {
  std::size_t n = 0;
  std::size_t cases_checked = 0;
  std::vector<std::string> violations;
  bool holds() const { return violations.empty(); }
};

/// Checks tau_t(Q) + Q = e(P_t, Q) Ptilde_t for t = 1..n-1 and every Q in calJ[2].
TranspositionIdentityReport check_transposition_identity(std::size_t n);

/// All 2^d vectors of F_2^d (or m^d in general), in lexicographic order.
std::vector<ModVector> enumerate_vectors(const Modulus& modulus, std::size_t d);

}  // namespace discform
