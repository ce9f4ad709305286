#include "discform/finite_groups.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <sstream>

#include "discform/errors.hpp"

namespace discform {

GroupElement GroupElement::permutation(Permutation images) {
  std::vector<bool> seen(images.size(), false);
  for (auto x : images) {
    if (x >= images.size() || seen[x]) throw UsageError("permutation images are not a bijection");
    seen[x] = true;
  }
  return GroupElement(std::move(images));
}

GroupElement GroupElement::permutation_one_based(const std::vector<int>& images) {
  Permutation p;
  for (int x : images) {
    if (x < 1) throw UsageError("1-based permutation image out of range");
    p.push_back(static_cast<std::uint16_t>(x - 1));
  }
  return permutation(std::move(p));
}

GroupElement GroupElement::from_cycles(std::size_t n, const std::vector<std::vector<int>>& cycles) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), std::uint16_t{0});
  std::vector<bool> used(n, false);
  for (const auto& cycle : cycles) {
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      int from = cycle[i];
      int to = cycle[(i + 1) % cycle.size()];
      if (from < 1 || static_cast<std::size_t>(from) > n || to < 1 || static_cast<std::size_t>(to) > n)
        throw UsageError("cycle entry out of range");
      if (used[from - 1]) throw UsageError("cycles are not disjoint");
      used[from - 1] = true;
      p[from - 1] = static_cast<std::uint16_t>(to - 1);
    }
  }
  return permutation(std::move(p));
}

GroupElement GroupElement::matrix(ModMatrix m) {
  if (!m.is_square()) throw UsageError("matrix group element must be square");
  if (!m.is_invertible()) throw UsageError("matrix group element is not invertible: " + m.to_string());
  return GroupElement(std::move(m));
}

std::size_t GroupElement::degree() const { return is_permutation() ? perm().size() : mat().rows(); }

bool GroupElement::same_kind(const GroupElement& other) const {
  if (is_permutation() != other.is_permutation()) return false;
  if (is_permutation()) return perm().size() == other.perm().size();
  return mat().rows() == other.mat().rows() && mat().modulus() == other.mat().modulus();
}

GroupElement GroupElement::operator*(const GroupElement& other) const {
  if (!same_kind(other)) throw UsageError("product of incompatible group elements");
  if (is_permutation()) {
    const auto& a = perm();
    const auto& b = other.perm();
    Permutation out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[b[i]];
    return GroupElement(std::move(out));
  }
  return GroupElement(mat() * other.mat());
}

GroupElement GroupElement::inverse() const {
  if (is_permutation()) {
    const auto& a = perm();
    Permutation out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[a[i]] = static_cast<std::uint16_t>(i);
    return GroupElement(std::move(out));
  }
  return GroupElement(mat().inverse());
}

GroupElement GroupElement::identity_like() const {
  if (is_permutation()) {
    Permutation out(perm().size());
    std::iota(out.begin(), out.end(), std::uint16_t{0});
    return GroupElement(std::move(out));
  }
  return GroupElement(ModMatrix::identity(mat().modulus(), mat().rows()));
}

std::string GroupElement::key() const {
  std::string out;
  if (is_permutation()) {
    const auto& a = perm();
    out.resize(a.size() * sizeof(std::uint16_t));
    std::memcpy(out.data(), a.data(), out.size());
  } else {
    const auto& d = mat().data();
    out.resize(d.size() * sizeof(Residue));
    std::memcpy(out.data(), d.data(), out.size());
  }
  return out;
}

std::string GroupElement::to_string() const {
  if (is_matrix()) return mat().to_string();
  const auto& a = perm();
  std::ostringstream os;
  std::vector<bool> seen(a.size(), false);
  bool any = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (seen[i] || a[i] == i) continue;
    any = true;
    os << "(";
    std::size_t j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = true;
      os << (first ? "" : " ") << j + 1;
      first = false;
      j = a[j];
    }
    os << ")";
  }
  if (!any) os << "()";
  return os.str();
}

FiniteGroup FiniteGroup::generate(std::vector<GroupElement> gens, std::size_t cap) {
  if (gens.empty()) throw UsageError("a group needs at least one generator (use the identity for the trivial group)");
  for (const auto& g : gens) {
    if (!g.same_kind(gens.front())) throw UsageError("generators differ in kind or degree");
  }
  FiniteGroup group;
  group.generators_ = std::move(gens);
  const std::size_t k = group.generators_.size();
  group.elements_.push_back(group.generators_.front().identity_like());
  group.tree_.push_back({0, 0});
  group.index_.emplace(group.elements_.front().key(), 0);

  for (std::size_t head = 0; head < group.elements_.size(); ++head) {
    for (std::size_t s = 0; s < k; ++s) {
      GroupElement next = group.elements_[head] * group.generators_[s];
      auto key = next.key();
      auto it = group.index_.find(key);
      std::size_t idx;
      if (it == group.index_.end()) {
        idx = group.elements_.size();
        if (idx >= cap) {
          throw ResourceError("group order exceeds cap " + std::to_string(cap));
        }
        group.index_.emplace(std::move(key), idx);
        group.elements_.push_back(std::move(next));
        group.tree_.push_back({head, s});
      } else {
        idx = it->second;
        group.cycle_edges_.push_back({head, s});
      }
      group.right_.push_back(static_cast<std::uint32_t>(idx));
    }
  }
  return group;
}

std::optional<std::size_t> FiniteGroup::index_of(const GroupElement& g) const {
  auto it = index_.find(g.key());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> FiniteGroup::element_word(std::size_t i) const {
  std::vector<std::size_t> word;
  while (i != 0) {
    word.push_back(tree_[i].generator);
    i = tree_[i].parent;
  }
  std::reverse(word.begin(), word.end());
  return word;
}

std::size_t FiniteGroup::multiply(std::size_t a, std::size_t b) const {
  for (std::size_t s : element_word(b)) a = times_generator(a, s);
  return a;
}

std::size_t FiniteGroup::inverse(std::size_t a) const { return *index_of(elements_[a].inverse()); }

std::size_t FiniteGroup::power(std::size_t a, std::size_t k) const {
  std::size_t result = 0;
  std::size_t base = a;
  while (k) {
    if (k & 1u) result = multiply(result, base);
    base = multiply(base, base);
    k >>= 1;
  }
  return result;
}

std::size_t FiniteGroup::element_order(std::size_t a) const {
  std::size_t order = 1;
  std::size_t x = a;
  while (x != 0) {
    x = multiply(x, a);
    ++order;
  }
  return order;
}

std::size_t FiniteGroup::conjugate(std::size_t g, std::size_t h) const {
  const auto& he = elements_[h];
  return *index_of(he * elements_[g] * he.inverse());
}

std::vector<std::size_t> FiniteGroup::conjugacy_classes(std::size_t* num_classes) const {
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> cls(order(), kUnset);
  std::vector<GroupElement> gen_inverses;
  for (const auto& s : generators_) gen_inverses.push_back(s.inverse());
  std::size_t next_id = 0;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < order(); ++start) {
    if (cls[start] != kUnset) continue;
    cls[start] = next_id;
    stack.push_back(start);
    while (!stack.empty()) {
      std::size_t x = stack.back();
      stack.pop_back();
      for (std::size_t s = 0; s < generators_.size(); ++s) {
        std::size_t y = *index_of(generators_[s] * elements_[x] * gen_inverses[s]);
        if (cls[y] == kUnset) {
          cls[y] = next_id;
          stack.push_back(y);
        }
      }
    }
    ++next_id;
  }
  if (num_classes) *num_classes = next_id;
  return cls;
}

std::vector<CyclicRep> cyclic_reps(const FiniteGroup& group) {
  std::size_t num_classes = 0;
  auto cls = group.conjugacy_classes(&num_classes);
  // Elements are scanned in index order, so the first element met in a class
  // is its smallest index.
  std::vector<bool> merged(num_classes, false);
  std::vector<CyclicRep> reps;
  for (std::size_t x = 0; x < group.order(); ++x) {
    if (merged[cls[x]]) continue;
    std::size_t ord = group.element_order(x);
    // Generators of <x> are x^k with gcd(k, ord) = 1; all their classes
    // describe the same conjugacy class of cyclic subgroups.
    std::size_t y = x;
    for (std::size_t k = 1; k <= ord; ++k) {
      if (std::gcd(k, ord) == 1) merged[cls[y]] = true;
      y = group.multiply(y, x);
    }
    merged[cls[x]] = true;
    reps.push_back({x, ord});
  }
  return reps;
}

std::vector<GroupElement> sn_coxeter(std::size_t n) {
  if (n < 2) throw UsageError("S_n needs n >= 2");
  std::vector<GroupElement> gens;
  for (std::size_t t = 1; t < n; ++t) {
    gens.push_back(GroupElement::from_cycles(n, {{static_cast<int>(t), static_cast<int>(t + 1)}}));
  }
  return gens;
}

ModMatrix symplectic_form_f2(std::size_t g) {
  Modulus f2(2, 1);
  ModMatrix form(f2, 2 * g, 2 * g);
  for (std::size_t i = 0; i < g; ++i) {
    form(i, g + i) = 1;
    form(g + i, i) = 1;
  }
  return form;
}

ModMatrix transvection_f2(std::size_t g, const ModVector& v) {
  // T(x) = x + <x,v> v, i.e. T = I + v (J v)^T.
  Modulus f2(2, 1);
  ModVector jv = symplectic_form_f2(g) * v;
  ModMatrix t = ModMatrix::identity(f2, 2 * g);
  for (std::size_t i = 0; i < 2 * g; ++i)
    for (std::size_t j = 0; j < 2 * g; ++j) t(i, j) = f2.add(t(i, j), f2.mul(v[i], jv[j]));
  return t;
}

std::vector<GroupElement> sp2g_f2_generators(std::size_t g) {
  if (g < 1) throw UsageError("Sp_2g(F_2) needs g >= 1");
  Modulus f2(2, 1);
  auto basis = [&](std::size_t i) {
    ModVector v(f2, 2 * g);
    v[i] = 1;
    return v;
  };
  std::vector<ModVector> vectors;
  for (std::size_t i = 0; i < g; ++i) vectors.push_back(basis(i));
  for (std::size_t i = 0; i < g; ++i) vectors.push_back(basis(g + i));
  for (std::size_t i = 0; i + 1 < g; ++i) vectors.push_back(basis(i) + basis(i + 1));
  for (std::size_t i = 0; i + 1 < g; ++i) vectors.push_back(basis(g + i) + basis(g + i + 1));
  std::vector<GroupElement> gens;
  for (const auto& v : vectors) gens.push_back(GroupElement::matrix(transvection_f2(g, v)));
  return gens;
}

namespace {

std::uint64_t unit_group_order(std::uint32_t p, std::uint32_t r) {
  std::uint64_t m = 1;
  for (std::uint32_t i = 1; i < r; ++i) m *= p;
  return m * (p - 1);
}

std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t m) {
  std::uint64_t x = a % m, k = 1;
  while (x != 1) {
    x = x * a % m;
    ++k;
  }
  return k;
}

}  // namespace

std::vector<GroupElement> sl2_generators(std::uint32_t p, std::uint32_t r) {
  Modulus md(p, r);
  return {GroupElement::matrix(ModMatrix(md, 2, 2, {1, 1, 0, 1})),
          GroupElement::matrix(ModMatrix(md, 2, 2, {1, 0, 1, 1}))};
}

std::vector<GroupElement> gl2_generators(std::uint32_t p, std::uint32_t r) {
  Modulus md(p, r);
  auto gens = sl2_generators(p, r);
  std::vector<std::int64_t> diag_entries;
  if (p == 2) {
    if (r == 2) diag_entries = {3};
    if (r >= 3) diag_entries = {static_cast<std::int64_t>(md.m()) - 1, 5};
  } else {
    // Smallest generator of (Z/p^r)^x; it lies in [2, p) for the primes used here.
    const std::uint64_t units = unit_group_order(p, r);
    for (std::uint64_t a = 2; a < md.m(); ++a) {
      if (a % p != 0 && multiplicative_order(a, md.m()) == units) {
        diag_entries = {static_cast<std::int64_t>(a)};
        break;
      }
    }
  }
  for (auto a : diag_entries) gens.push_back(GroupElement::matrix(ModMatrix(md, 2, 2, {a, 0, 0, 1})));
  return gens;
}

std::uint64_t gl2_order(std::uint32_t p, std::uint32_t r) {
  std::uint64_t q = p;
  std::uint64_t order = (q * q - 1) * (q * q - q);
  for (std::uint32_t i = 1; i < r; ++i) order *= q * q * q * q;
  return order;
}

std::uint64_t sp2g_f2_order(std::size_t g) {
  std::uint64_t order = std::uint64_t{1} << (g * g);
  for (std::size_t i = 1; i <= g; ++i) order *= (std::uint64_t{1} << (2 * i)) - 1;
  return order;
}

std::vector<GeneratorSet> standard_generators(StandardFamily family, const StandardParams& params) {
  switch (family) {
    case StandardFamily::SnCoxeter:
      return {{"S" + std::to_string(params.n), sn_coxeter(params.n), ""}};
    case StandardFamily::Sp2gF2:
      return {{"Sp" + std::to_string(2 * params.g) + "(F2)", sp2g_f2_generators(params.g), ""}};
    case StandardFamily::GL2:
      if (params.r < 1) throw UsageError("GL2 needs r >= 1");
      return {{"GL2(Z/" + Modulus(params.p, params.r).to_string() + ")", gl2_generators(params.p, params.r), ""}};
    case StandardFamily::SL2:
      if (params.r < 1) throw UsageError("SL2 needs r >= 1");
      return {{"SL2(Z/" + Modulus(params.p, params.r).to_string() + ")", sl2_generators(params.p, params.r), ""}};
    case StandardFamily::SubgroupsOfS3: {
      auto c = [](std::vector<std::vector<int>> cycles) { return GroupElement::from_cycles(3, cycles); };
      return {
          {"1", {c({})}, "trivial"},
          {"<(1 2)>", {c({{1, 2}})}, "order 2"},
          {"<(1 3)>", {c({{1, 3}})}, "order 2"},
          {"<(2 3)>", {c({{2, 3}})}, "order 2"},
          {"A3", {c({{1, 2, 3}})}, "A3"},
          {"S3", {c({{1, 2}}), c({{1, 2, 3}})}, "S3"},
      };
    }
  }
  throw UsageError("unknown standard generator family");
}

}  // namespace discform
