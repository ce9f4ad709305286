#include "discform/galois_modules.hpp"

#include <algorithm>

#include "discform/errors.hpp"

namespace discform {

namespace {

const Modulus kF2(2, 1);

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

std::size_t permutation_degree(const FiniteGroup& group) {
  const auto& g = group.generators().front();
  if (!g.is_permutation()) throw UsageError("module requires a permutation group");
  return g.degree();
}

}  // namespace

GModule::GModule(std::shared_ptr<const FiniteGroup> group, Modulus modulus, std::vector<ModMatrix> action,
                 std::string label)
    : group_(std::move(group)), modulus_(modulus), rank_(0), action_(std::move(action)), label_(std::move(label)) {
  if (!group_) throw UsageError("module without a group");
  if (action_.size() != group_->num_generators()) throw UsageError("need one action matrix per generator");
  rank_ = action_.front().rows();
  for (const auto& a : action_) {
    if (!(a.modulus() == modulus_) || a.rows() != rank_ || a.cols() != rank_)
      throw UsageError("action matrices must be square of equal size over the module's modulus");
    if (!a.is_invertible()) throw UsageError("action matrix is not invertible");
  }
  const FiniteGroup& g = *group_;
  element_action_.reserve(g.order());
  element_action_.push_back(ModMatrix::identity(modulus_, rank_));
  for (std::size_t e = 1; e < g.order(); ++e) {
    const auto& edge = g.tree_edge(e);
    element_action_.push_back(element_action_[edge.parent] * action_[edge.generator]);
  }
  for (const auto& edge : g.cycle_edges()) {
    std::size_t target = g.times_generator(edge.element, edge.generator);
    if (!(element_action_[target] == element_action_[edge.element] * action_[edge.generator])) {
      throw UsageError("action of module '" + label_ + "' violates a Cayley relation");
    }
  }
}

std::shared_ptr<const FiniteGroup> make_group(std::vector<GroupElement> gens, std::size_t cap) {
  return std::make_shared<const FiniteGroup>(FiniteGroup::generate(std::move(gens), cap));
}

GModulePtr module_from_matrices(std::shared_ptr<const FiniteGroup> group, std::vector<ModMatrix> action,
                                std::string label) {
  if (action.empty()) throw UsageError("module_from_matrices: no matrices");
  Modulus md = action.front().modulus();
  return std::make_shared<const GModule>(std::move(group), md, std::move(action), std::move(label));
}

GModulePtr trivial_module(std::shared_ptr<const FiniteGroup> group, Modulus modulus, std::size_t rank) {
  std::vector<ModMatrix> action(group->num_generators(), ModMatrix::identity(modulus, rank));
  return std::make_shared<const GModule>(std::move(group), modulus, std::move(action),
                                         "trivial (Z/" + modulus.to_string() + ")^" + std::to_string(rank));
}

ModMatrix permutation_matrix_f2(const GroupElement& perm) {
  const auto& a = perm.perm();
  ModMatrix m(kF2, a.size(), a.size());
  for (std::size_t j = 0; j < a.size(); ++j) m(a[j], j) = 1;
  return m;
}

ModVector subset_to_p_basis(const ModVector& subset) {
  // S = sum c_t P_t with c_t = |S cap {1..t}| mod 2.
  if (subset.size() < 2) throw UsageError("subset_to_p_basis: n >= 2 required");
  Residue parity = 0;
  for (auto e : subset.entries) parity ^= (e & 1u);
  if (parity) throw UsageError("subset is odd; not in the even submodule");
  ModVector out(kF2, subset.size() - 1);
  Residue acc = 0;
  for (std::size_t t = 0; t + 1 < subset.size(); ++t) {
    acc ^= subset[t] & 1u;
    out[t] = acc;
  }
  return out;
}

ModVector p_basis_to_subset(const ModVector& p_coords) {
  ModVector out(kF2, p_coords.size() + 1);
  for (std::size_t t = 0; t < p_coords.size(); ++t) {
    if (p_coords[t]) {
      out[t] ^= 1u;
      out[t + 1] ^= 1u;
    }
  }
  return out;
}

ModMatrix even_action_matrix(const GroupElement& perm) {
  const std::size_t n = perm.degree();
  ModMatrix full = permutation_matrix_f2(perm);
  ModMatrix out(kF2, n - 1, n - 1);
  for (std::size_t t = 0; t + 1 < n; ++t) {
    ModVector pt(kF2, n - 1);
    pt[t] = 1;
    ModVector image = subset_to_p_basis(full * p_basis_to_subset(pt));
    for (std::size_t i = 0; i + 1 < n; ++i) out(i, t) = image[i];
  }
  return out;
}

GModulePtr perm_power_module(std::shared_ptr<const FiniteGroup> group) {
  const std::size_t n = permutation_degree(*group);
  std::vector<ModMatrix> action;
  for (const auto& g : group->generators()) action.push_back(permutation_matrix_f2(g));
  return std::make_shared<const GModule>(std::move(group), kF2, std::move(action),
                                         "perm F2^" + std::to_string(n));
}

GModulePtr perm_power_module(std::size_t n) { return perm_power_module(make_group(sn_coxeter(n))); }

GModulePtr even_submodule(std::shared_ptr<const FiniteGroup> group) {
  const std::size_t n = permutation_degree(*group);
  if (n < 2) throw UsageError("even submodule needs n >= 2");
  std::vector<ModMatrix> action;
  for (const auto& g : group->generators()) action.push_back(even_action_matrix(g));
  return std::make_shared<const GModule>(std::move(group), kF2, std::move(action),
                                         "even J_m[2] n=" + std::to_string(n));
}

GModulePtr even_submodule(std::size_t n) { return even_submodule(make_group(sn_coxeter(n))); }

FixedQuotient quotient_by_fixed_vector(const GModule& m, const ModVector& v, std::string label) {
  const Modulus& md = m.modulus();
  const std::size_t d = m.rank();
  if (v.size() != d) throw UsageError("fixed vector has the wrong length");
  for (const auto& a : m.action()) {
    if (!(a * v == v)) throw UsageError("vector is not fixed by the group");
  }
  std::optional<std::size_t> pivot;
  for (std::size_t j = 0; j < d; ++j) {
    if (md.is_unit(v[j])) pivot = j;
  }
  if (!pivot) throw UsageError("fixed vector has no unit coordinate");
  const std::size_t j = *pivot;
  const Residue inv = md.inverse(v[j]);

  // Lift: insert a zero at j. Projection: subtract (x_j / v_j) v, drop j.
  auto project = [&](const ModVector& x) {
    ModVector y = x - v.scaled(md.mul(x[j], inv));
    ModVector out(md, d - 1);
    for (std::size_t i = 0, k = 0; i < d; ++i) {
      if (i != j) out[k++] = y[i];
    }
    return out;
  };
  std::vector<ModMatrix> action;
  for (const auto& a : m.action()) {
    ModMatrix q(md, d - 1, d - 1);
    for (std::size_t c = 0, k = 0; c < d; ++c) {
      if (c == j) continue;
      ModVector col = project(a.column(c));
      for (std::size_t i = 0; i + 1 < d; ++i) q(i, k) = col[i];
      ++k;
    }
    action.push_back(std::move(q));
  }
  auto module = std::make_shared<const GModule>(m.group_ptr(), md, std::move(action), std::move(label));
  return {module, j, v};
}

GModulePtr quotient_complements(const GModule& m) {
  if (starts_with(m.label(), "perm")) {
    const std::size_t n = m.rank();
    ModVector ones(kF2, std::vector<Residue>(n, 1));
    return quotient_by_fixed_vector(m, ones, "calJ[2] n=" + std::to_string(n)).module;
  }
  if (starts_with(m.label(), "even")) {
    const std::size_t n = m.rank() + 1;
    if (n % 2 != 0) throw UsageError("J[2] requires n even: the complement of an even subset is odd for odd n");
    ModVector ones(kF2, std::vector<Residue>(n, 1));
    return quotient_by_fixed_vector(m, subset_to_p_basis(ones), "J[2] n=" + std::to_string(n)).module;
  }
  throw UsageError("quotient_complements expects a perm or even subset module, got '" + m.label() + "'");
}

GModulePtr subset_quotient_module(std::shared_ptr<const FiniteGroup> group) {
  return quotient_complements(*perm_power_module(std::move(group)));
}
GModulePtr subset_quotient_module(std::size_t n) { return quotient_complements(*perm_power_module(n)); }

GModulePtr even_quotient_module(std::shared_ptr<const FiniteGroup> group) {
  return quotient_complements(*even_submodule(std::move(group)));
}
GModulePtr even_quotient_module(std::size_t n) { return quotient_complements(*even_submodule(n)); }

ModVector subset_class(const ModVector& subset) {
  const std::size_t n = subset.size();
  if (n < 2) throw UsageError("subset_class: n >= 2 required");
  const bool flip = subset[n - 1] & 1u;
  ModVector out(kF2, n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) out[i] = (subset[i] & 1u) ^ (flip ? 1u : 0u);
  return out;
}

ModMatrix even_quotient_inclusion(std::size_t n) {
  if (n % 2 != 0 || n < 4) throw UsageError("J[2] inclusion needs n even, n >= 4");
  ModMatrix out(kF2, n - 1, n - 2);
  for (std::size_t t = 0; t + 2 < n; ++t) {
    out(t, t) = 1;
    out(t + 1, t) = 1;
  }
  return out;
}

Residue parity_pairing(const ModVector& even_subset, const ModVector& calj_class) {
  const std::size_t n = even_subset.size();
  if (calj_class.size() + 1 != n) throw UsageError("parity_pairing: size mismatch");
  Residue parity = 0;
  for (auto e : even_subset.entries) parity ^= e & 1u;
  if (parity) throw UsageError("parity_pairing: first argument must be an even subset");
  Residue acc = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) acc ^= (even_subset[i] & calj_class[i] & 1u);
  return acc;
}

ModMatrix parity_pairing_matrix(std::size_t n) {
  ModMatrix out(kF2, n - 1, n - 1);
  for (std::size_t t = 0; t + 1 < n; ++t) {
    ModVector pt(kF2, n - 1);
    pt[t] = 1;
    ModVector s = p_basis_to_subset(pt);
    for (std::size_t j = 0; j + 1 < n; ++j) {
      ModVector ej(kF2, n - 1);
      ej[j] = 1;
      out(t, j) = parity_pairing(s, ej);
    }
  }
  return out;
}

Residue weil_pairing(const ModVector& a, const ModVector& b) {
  const std::size_t n = a.size() + 2;
  if (b.size() != a.size()) throw UsageError("weil_pairing: size mismatch");
  // Lift a to an even subset via the P-basis (coordinate P_{n-1} = 0), and
  // push b into calJ[2].
  ModVector a_p(kF2, n - 1);
  std::copy(a.entries.begin(), a.entries.end(), a_p.entries.begin());
  ModVector b_class = even_quotient_inclusion(n) * b;
  return parity_pairing(p_basis_to_subset(a_p), b_class);
}

ModMatrix weil_pairing_matrix(std::size_t n) {
  ModMatrix out(kF2, n - 2, n - 2);
  for (std::size_t s = 0; s + 2 < n; ++s) {
    for (std::size_t t = 0; t + 2 < n; ++t) {
      ModVector a(kF2, n - 2), b(kF2, n - 2);
      a[s] = 1;
      b[t] = 1;
      out(s, t) = weil_pairing(a, b);
    }
  }
  return out;
}

GModulePtr dual_module(const GModule& m) {
  std::vector<ModMatrix> action;
  for (const auto& a : m.action()) action.push_back(a.inverse().transpose());
  return std::make_shared<const GModule>(m.group_ptr(), m.modulus(), std::move(action), "dual(" + m.label() + ")");
}

bool intertwines(const ModMatrix& phi, const GModule& src, const GModule& dst) {
  if (src.group_ptr() != dst.group_ptr() && src.group().order() != dst.group().order()) return false;
  for (std::size_t s = 0; s < src.action().size(); ++s) {
    if (!(phi * src.generator_action(s) == dst.generator_action(s) * phi)) return false;
  }
  return true;
}

GModulePtr elliptic_module(std::shared_ptr<const FiniteGroup> group) {
  std::vector<ModMatrix> action;
  for (const auto& g : group->generators()) {
    if (!g.is_matrix() || g.degree() != 2) throw UsageError("elliptic_module needs 2x2 matrix generators");
    action.push_back(g.mat());
  }
  Modulus md = action.front().modulus();
  return std::make_shared<const GModule>(std::move(group), md, std::move(action),
                                         "J[" + md.to_string() + "] = (Z/" + md.to_string() + ")^2");
}

GModulePtr elliptic_module(std::uint32_t p, std::uint32_t r, std::vector<GroupElement> gens) {
  Modulus md(p, r);
  for (const auto& g : gens) {
    if (!g.is_matrix() || !(g.mat().modulus() == md)) throw UsageError("generator is not a matrix over Z/p^r");
  }
  return elliptic_module(make_group(std::move(gens)));
}

ExtensionRecord extension_from_cocycle(const Cocycle& xi, std::uint32_t ell) {
  const GModule& base = *xi.module;
  const Modulus& md = base.modulus();
  const std::size_t d = base.rank();
  if (xi.gen_values.size() != base.group().num_generators()) throw UsageError("cocycle needs one value per generator");
  std::vector<ModMatrix> action;
  for (std::size_t s = 0; s < base.action().size(); ++s) {
    if (!(xi.gen_values[s].modulus == md) || xi.gen_values[s].size() != d)
      throw UsageError("cocycle values must lie in the module");
    ModMatrix w(md, d + 1, d + 1);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) w(i, j) = base.generator_action(s)(i, j);
      w(i, d) = xi.gen_values[s][i];
    }
    w(d, d) = 1;
    action.push_back(std::move(w));
  }
  GModulePtr total;
  try {
    total = std::make_shared<const GModule>(base.group_ptr(), md, std::move(action), "ext(" + base.label() + ")");
  } catch (const UsageError& e) {
    throw InvalidCocycleError(std::string("extension_from_cocycle: not a cocycle: ") + e.what());
  }
  ModMatrix inclusion(md, d + 1, d);
  for (std::size_t i = 0; i < d; ++i) inclusion(i, i) = 1;
  ModVector eps(md, d + 1);
  eps[d] = 1;
  return {xi.module, total, md.m(), inclusion, eps, ell};
}

ExtensionRecord extension_from_embedding(const GModule& total, const ModMatrix& inclusion, const ModVector& epsilon,
                                         std::uint32_t ell, std::string base_label) {
  const Modulus& md = total.modulus();
  const std::size_t d = inclusion.cols();
  if (inclusion.rows() != total.rank() || d + 1 != total.rank() || epsilon.size() != total.rank())
    throw UsageError("extension_from_embedding: shapes do not describe a corank-one submodule");
  ModMatrix basis(md, d + 1, d + 1);
  for (std::size_t i = 0; i <= d; ++i) {
    for (std::size_t j = 0; j < d; ++j) basis(i, j) = inclusion(i, j);
    basis(i, d) = epsilon[i];
  }
  if (!basis.is_invertible()) throw UsageError("extension_from_embedding: inclusion and epsilon are not a basis");
  ModMatrix basis_inv = basis.inverse();
  std::vector<ModMatrix> new_action, base_action;
  for (const auto& a : total.action()) {
    ModMatrix w = basis_inv * a * basis;
    for (std::size_t j = 0; j < d; ++j) {
      if (w(d, j) != 0) throw UsageError("extension_from_embedding: submodule is not stable");
    }
    if (w(d, d) != 1 % md.m()) throw UsageError("extension_from_embedding: group acts nontrivially on the quotient");
    ModMatrix b(md, d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) b(i, j) = w(i, j);
    base_action.push_back(std::move(b));
    new_action.push_back(std::move(w));
  }
  auto base = std::make_shared<const GModule>(total.group_ptr(), md, std::move(base_action), std::move(base_label));
  auto rebased = std::make_shared<const GModule>(total.group_ptr(), md, std::move(new_action), total.label());
  ModMatrix incl(md, d + 1, d);
  for (std::size_t i = 0; i < d; ++i) incl(i, i) = 1;
  ModVector eps(md, d + 1);
  eps[d] = 1;
  return {base, rebased, md.m(), incl, eps, ell};
}

std::vector<ModVector> enumerate_vectors(const Modulus& modulus, std::size_t d) {
  std::vector<ModVector> out;
  ModVector v(modulus, d);
  while (true) {
    out.push_back(v);
    std::size_t i = d;
    while (i > 0) {
      --i;
      if (++v[i] < modulus.m()) break;
      v[i] = 0;
      if (i == 0) return out;
    }
    if (d == 0) return out;
  }
}

TranspositionIdentityReport check_transposition_identity(std::size_t n) {
  if (n < 3) throw UsageError("transposition identity needs n >= 3");
  TranspositionIdentityReport report;
  report.n = n;
  auto calj = subset_quotient_module(n);
  const auto all_q = enumerate_vectors(kF2, n - 1);
  for (std::size_t t = 0; t + 1 < n; ++t) {
    ModVector pt_subset(kF2, n);
    pt_subset[t] = 1;
    pt_subset[t + 1] = 1;
    const ModVector pt_tilde = subset_class(pt_subset);
    const ModMatrix& tau = calj->generator_action(t);
    for (const auto& q : all_q) {
      ModVector lhs = tau * q + q;
      ModVector rhs = pt_tilde.scaled(parity_pairing(pt_subset, q));
      ++report.cases_checked;
      if (!(lhs == rhs)) {
        std::string qs;
        for (auto e : q.entries) qs += std::to_string(e);
        report.violations.push_back("t=" + std::to_string(t + 1) + " Q=" + qs);
      }
    }
  }
  return report;
}

}  // namespace discform
