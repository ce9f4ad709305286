#pragma once

// First cohomology of finite groups with coefficients in GModule.
//
// A 1-cochain is parameterized by its values on the k generators (k*d
// unknowns). The spanning tree of the Cayley graph extends those values to
// every element through xi(e s) = xi(e) + e xi(s); each non-tree edge (e, s)
// then contributes d linear constraints. Z^1 is the kernel of that system.
//
// Restriction to a cyclic subgroup <g> of order n: a cocycle on <g> is
// determined by its value at g, since xi(g^k) = (1 + g + ... + g^{k-1}) xi(g).
// It is a coboundary iff there is Q with xi(g^k) = g^k Q - Q for all k, and
// because both sides satisfy the same recursion in k this holds iff
// xi(g) = g Q - Q. So res_<g>[xi] = 0 iff xi(g) lies in the image of (g - 1).

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "discform/finite_groups.hpp"
#include "discform/galois_modules.hpp"
#include "discform/ring_linalg.hpp"

namespace discform {

struct H1Report {
  GModulePtr module;
  std::vector<Cocycle> z1_gens;
  std::vector<Cocycle> b1_gens;
  std::vector<std::uint64_t> invariant_factors;
  std::vector<Cocycle> representatives;
  /// Filled by h1_star only.
  bool has_hstar = false;
  std::vector<std::uint64_t> hstar_factors;
  std::vector<Cocycle> hstar_reps;

  /// log_p |H^1|
  unsigned order_log() const;
  unsigned hstar_order_log() const;
};

std::vector<Cocycle> z1_generators(const GModulePtr& m);
std::vector<Cocycle> b1_generators(const GModulePtr& m);
H1Report h1(const GModulePtr& m);
H1Report h1_star(const GModulePtr& m);

/// Values at every element, by tree propagation.
std::vector<ModVector> cocycle_values(const Cocycle& xi);
/// Value at one element, by walking its tree word.
ModVector cocycle_value_at(const Cocycle& xi, std::size_t element);
/// Full check of the cocycle identity on every cycle edge.
bool is_cocycle(const Cocycle& xi);
/// Some Q with xi(s) = s Q - Q for every generator s.
std::optional<ModVector> coboundary_witness(const Cocycle& xi);
bool is_coboundary(const Cocycle& xi);
Cocycle coboundary_of(const GModulePtr& m, const ModVector& q);
Cocycle zero_cocycle(const GModulePtr& m);
Cocycle add(const Cocycle& a, const Cocycle& b);
Cocycle scale(const Cocycle& a, Residue c);
/// Flattened generator values (length k*d) and the inverse.
ModVector flatten(const Cocycle& xi);
Cocycle unflatten(const GModulePtr& m, const ModVector& v);

bool restriction_trivial(const Cocycle& xi, std::size_t g);
/// Some Q with xi(g) = g Q - Q.
std::optional<ModVector> restriction_witness(const Cocycle& xi, std::size_t g);

/// g -> g(epsilon) - epsilon, valued in the base.
Cocycle delta1(const ExtensionRecord& ext);
/// Same with another lift of 1 (any vector of the total module whose last
/// coordinate is 1). Throws UsageError otherwise.
Cocycle delta1_with_lift(const ExtensionRecord& ext, const ModVector& lift);

/// A homomorphism G' -> G given by the images (element indices in G) of the
/// generators of G'. Construction checks it is a well-defined homomorphism.
class Surjection {
 public:
  /// Throws UsageError if the images do not define a homomorphism or it is not onto.
  Surjection(std::shared_ptr<const FiniteGroup> source, std::shared_ptr<const FiniteGroup> target,
             std::vector<std::size_t> generator_images);

  const std::shared_ptr<const FiniteGroup>& source() const { return source_; }
  const std::shared_ptr<const FiniteGroup>& target() const { return target_; }
  std::size_t image(std::size_t source_element) const { return element_images_[source_element]; }
  std::size_t generator_image(std::size_t s) const { return generator_images_[s]; }
  /// Elements of the source mapping to the identity.
  std::vector<std::size_t> kernel() const;

 private:
  std::shared_ptr<const FiniteGroup> source_;
  std::shared_ptr<const FiniteGroup> target_;
  std::vector<std::size_t> generator_images_;
  std::vector<std::size_t> element_images_;
};

/// M viewed as a G'-module through q.
GModulePtr inflate_module(const GModule& m, const Surjection& q);
/// xi o q on the inflated module.
Cocycle inflation(const Surjection& q, const Cocycle& xi, const GModulePtr& inflated);

struct Subgroup {
  std::shared_ptr<const FiniteGroup> group;
  /// Index in the ambient group of each subgroup element.
  std::vector<std::size_t> ambient_index;
  GModulePtr module;
};

/// Subgroup generated by the given ambient elements, with M restricted to it.
Subgroup restrict_module(const GModulePtr& m, const std::vector<std::size_t>& generator_elements);
Cocycle restriction(const Subgroup& h, const Cocycle& xi, const std::vector<std::size_t>& generator_elements);

/// phi o xi for a G-map phi : M -> M' (checked).
Cocycle pushforward(const Cocycle& xi, const ModMatrix& phi, const GModulePtr& target);

/// Witness Q from the constructive argument for H^1_*(S_n, calJ[2]) = 0: given
/// xi on calJ[2] (sn_coxeter generators) whose restriction to every <tau_t>
/// is trivial, choose Q_t with xi(tau_t) = tau_t Q_t + Q_t, then Q with
/// e(P_t, Q) = e(P_t, Q_t) for all t using nondegeneracy of e. Returns nullopt
/// if some restriction is nontrivial.
std::optional<ModVector> transposition_witness(const Cocycle& xi);

/// Invariant factors of H^1 computed by enumerating every function G -> M
/// (backtracking in element order, pruned by the cocycle identity on all
/// pairs). Throws ResourceError unless |G| <= 8 and |M| <= 81.
std::vector<std::uint64_t> brute_force_h1(const GModule& m);

/// |M^G| as log_p, by enumeration of M.
unsigned fixed_points_order_log(const GModule& m);

namespace detail {
/// Generic Z/p^r cocycle solver; z1_generators dispatches to the bit-packed
/// solver when m = 2.
std::vector<ModVector> z1_vectors_generic(const GModule& m);
std::vector<ModVector> z1_vectors_f2(const GModule& m);
}  // namespace detail

}  // namespace discform
