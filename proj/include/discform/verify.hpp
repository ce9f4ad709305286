#pragma once

// Verification drivers. Each returns a certificate listing named assertions
// with expected and computed values; the JSON form follows
// {case, params, assertions: [{name, expected, got, pass}], group_order, timings_ms}
// plus the module label, dimensions and the statement the case verifies.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "discform/cohomology.hpp"

namespace discform {

struct Assertion {
  std::string name;
  nlohmann::json expected;
  nlohmann::json got;
  bool pass = false;
};

struct Certificate {
  std::string case_id;
  std::string lemma;
  nlohmann::json params = nlohmann::json::object();
  std::vector<Assertion> assertions;
  std::uint64_t group_order = 0;
  std::string module_label;
  nlohmann::json dims = nlohmann::json::object();
  std::map<std::string, double> timings_ms;

  bool passed() const;
  void check(std::string name, nlohmann::json expected, nlohmann::json got);
  /// timings_ms is emitted as {} when with_timings is false.
  nlohmann::json to_json(bool with_timings = true) const;
};

/// H^1_*(S_n, calJ[2]) = 0.
Certificate verify_case1(std::size_t n);
/// dim H^1(Sp_2g(F_2), F_2^2g) = 1, delta(1) != 0, H^1_* of the extension = 0.
/// g > 2 requires allow_large.
Certificate verify_case2(std::size_t g, bool allow_large = false);
/// H^1(G, F_2^2) = 0 for the subgroups of S_3.
Certificate verify_case3();
/// H^1(G, (Z/p^r)^2) = 0 for G = SL_2(Z/p^r) and GL_2(Z/p^r).
Certificate verify_case4(std::uint32_t p, std::uint32_t r);

/// Result of checking the surjection
///   ker(H^1(G, J) -> prod_{g in G'} H^1(<g>, W)) -> H^1_*(G', W)
/// for W containing J with quotient Z/m, G the image of G' in GL(J) and
/// N the kernel of G' -> G.
struct SurjectionCheck {
  std::uint64_t source_order = 0;  // |G'|
  std::uint64_t target_order = 0;  // |G|
  std::uint64_t kernel_order = 0;  // |N|
  unsigned kernel_classes_log = 0;  // log_p of the kernel in H^1(G, J)
  unsigned image_log = 0;           // log_p of its image in H^1(G', W)
  unsigned hstar_log = 0;           // log_p |H^1_*(G', W)|
  bool image_equals_hstar = false;
  bool i_homomorphism = false;
  bool i_injective = false;
  bool i_equivariant = false;
  /// G-endomorphisms of i(N) sending every element to a multiple of itself;
  /// all of them should be scalars. Left empty (checked = false) when i(N)
  /// is too large to enumerate or m is not prime.
  bool scalar_check_run = false;
  std::size_t pointwise_scalar_endomorphisms = 0;
  std::size_t non_scalar = 0;
};

SurjectionCheck check_h1_surjection(const GModulePtr& total, const ModMatrix& inclusion, const ModVector& epsilon);

/// Instances: "s4" (calJ[2], n = 4, kernel V_4), "s6" (calJ[2], n = 6),
/// "sp4" (extension of F_2^4 over Sp_4(F_2) along the nonzero class).
Certificate verify_lemma_h1ga(const std::string& instance);

/// Dispatch by id: case1 {n}, case2 {g, allow_large}, case3 {}, case4 {p, r},
/// lemma_h1ga {instance}. Throws UsageError for unknown ids or bad params.
Certificate verify_case(const std::string& case_id, const nlohmann::json& params);

}  // namespace discform
