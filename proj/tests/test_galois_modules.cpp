#include <doctest.h>

#include "discform/cohomology.hpp"
#include "discform/errors.hpp"
#include "discform/galois_modules.hpp"
#include "support.hpp"

using namespace discform;

namespace {

const Modulus F2(2, 1);

ModVector subset(std::size_t n, std::initializer_list<int> members) {
  ModVector v(F2, n);
  for (int i : members) v[i - 1] = 1;
  return v;
}

ModVector permute(const GroupElement& g, const ModVector& s) {
  ModVector out(F2, s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i]) out[g.perm()[i]] = 1;
  return out;
}

// Subset representative (length n) of a calJ[2] class (length n-1).
ModVector lift_class(const ModVector& c) {
  ModVector out(F2, c.size() + 1);
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i];
  return out;
}

std::size_t rank_f2(const ModMatrix& a) { return a.cols() - kernel_generators(a).size(); }

}  // namespace

TEST_CASE("permutation module on subsets") {
  const auto m = perm_power_module(4);
  CHECK(m->rank() == 4);
  // tau_1 swaps 1 and 2.
  CHECK(m->generator_action(0) * subset(4, {1, 3}) == subset(4, {2, 3}));
  CHECK(subset(4, {1, 2}) + subset(4, {2, 3}) == subset(4, {1, 3}));
  CHECK(perm_power_module(6)->rank() == 6);
}

TEST_CASE("even submodule in the P basis") {
  const auto m = even_submodule(6);
  CHECK(m->rank() == 5);
  CHECK(subset_to_p_basis(subset(6, {1, 3})) == ModVector(F2, {1, 1, 0, 0, 0}));
  for (const auto& v : enumerate_vectors(F2, 5)) CHECK(subset_to_p_basis(p_basis_to_subset(v)) == v);
  // Stability: every generator maps even subsets to even subsets, and the P-basis
  // matrix agrees with permuting subsets.
  const auto& grp = m->group();
  for (const auto& coords : enumerate_vectors(F2, 5)) {
    const ModVector s = p_basis_to_subset(coords);
    for (std::size_t g = 0; g < grp.num_generators(); ++g) {
      const ModVector image = permute(grp.generators()[g], s);
      Residue parity = 0;
      for (auto e : image.entries) parity ^= e;
      CHECK(parity == 0);
      CHECK(m->generator_action(g) * coords == subset_to_p_basis(image));
    }
  }
}

TEST_CASE("quotients by complements") {
  CHECK(subset_quotient_module(6)->rank() == 5);
  CHECK(even_quotient_module(6)->rank() == 4);
  CHECK(subset_class(subset(6, {1, 2, 3})) == subset_class(subset(6, {4, 5, 6})));
  CHECK_FALSE(subset_class(subset(6, {1, 2})) == subset_class(subset(6, {1, 3})));
  CHECK_THROWS_AS(even_quotient_module(5), UsageError);
  for (std::size_t n : {4, 6, 8}) {
    CHECK(perm_power_module(n)->rank() == n);
    CHECK(even_submodule(n)->rank() == n - 1);
    CHECK(even_quotient_module(n)->rank() == n - 2);
  }
}

TEST_CASE("S_6 acts on J[2] through a group of order 720 preserving the Weil pairing") {
  for (std::size_t n : {6, 8}) {
    const auto j = even_quotient_module(n);
    const ModMatrix w = weil_pairing_matrix(n);
    std::vector<GroupElement> images;
    for (const auto& a : j->action()) {
      CHECK(a.transpose() * w * a == w);
      images.push_back(GroupElement::matrix(a));
    }
    if (n == 6) CHECK(FiniteGroup::generate(images).order() == 720);
  }
}

TEST_CASE("parity pairing") {
  CHECK(parity_pairing(subset(6, {1, 2}), subset_class(subset(6, {2, 3}))) == 1);
  CHECK(parity_pairing(subset(6, {1, 2}), subset_class(subset(6, {1, 4, 5, 6}))) == 1);
  CHECK_THROWS_AS(parity_pairing(subset(6, {1}), subset_class(subset(6, {2}))), UsageError);
  // Nondegenerate on both sides: no nonzero vector pairs trivially with everything.
  const std::size_t n = 6;
  const auto evens = enumerate_vectors(F2, n - 1);
  const auto classes = enumerate_vectors(F2, n - 1);
  std::size_t left_radical = 0, right_radical = 0;
  for (const auto& p : evens) {
    bool all_zero = true;
    for (const auto& c : classes) all_zero = all_zero && parity_pairing(p_basis_to_subset(p), c) == 0;
    if (all_zero) ++left_radical;
  }
  for (const auto& c : classes) {
    bool all_zero = true;
    for (const auto& p : evens) all_zero = all_zero && parity_pairing(p_basis_to_subset(p), c) == 0;
    if (all_zero) ++right_radical;
  }
  CHECK(left_radical == 1);
  CHECK(right_radical == 1);
  CHECK(rank_f2(parity_pairing_matrix(6)) == 5);
}

TEST_CASE("parity pairing is S_n-equivariant") {
  for (std::size_t n : {4, 5, 6}) {
    const auto grp = make_group(sn_coxeter(n));
    const auto classes = enumerate_vectors(F2, n - 1);
    for (const auto& g : grp->generators()) {
      for (const auto& p : enumerate_vectors(F2, n - 1)) {
        const ModVector s = p_basis_to_subset(p);
        for (const auto& c : classes) {
          const ModVector gc = subset_class(permute(g, lift_class(c)));
          CHECK(parity_pairing(permute(g, s), gc) == parity_pairing(s, c));
        }
      }
    }
  }
}

TEST_CASE("Weil pairing") {
  const auto all = enumerate_vectors(F2, 4);
  for (const auto& x : all) CHECK(weil_pairing(x, x) == 0);
  CHECK(weil_pairing(ModVector(F2, {1, 0, 0, 0}), ModVector(F2, {0, 1, 0, 0})) == 1);
  CHECK(rank_f2(weil_pairing_matrix(6)) == 4);
}

TEST_CASE("duals") {
  const auto grp = make_group(sn_coxeter(6));
  const auto triv = trivial_module(grp, F2);
  CHECK(dual_module(*triv)->action() == triv->action());
  const auto calj = subset_quotient_module(grp);
  CHECK(dual_module(*dual_module(*calj))->action() == calj->action());
  // e identifies J_m[2] with the dual of calJ[2].
  const ModMatrix e = parity_pairing_matrix(6);
  CHECK(e.is_invertible());
  CHECK(intertwines(e.transpose(), *even_submodule(grp), *dual_module(*calj)));
  CHECK_FALSE(intertwines(ModMatrix::identity(F2, 5), *even_submodule(grp), *dual_module(*calj)));
}

TEST_CASE("elliptic modules") {
  SUBCASE("SL_2(F_3) on F_3^2 has no stable line") {
    const auto m = elliptic_module(3, 1, sl2_generators(3));
    CHECK(m->order_log() == 2);
    const Modulus f3(3, 1);
    const std::vector<ModVector> lines{ModVector(f3, {1, 0}), ModVector(f3, {0, 1}), ModVector(f3, {1, 1}),
                                       ModVector(f3, {1, 2})};
    for (const auto& l : lines) {
      bool stable = true;
      for (const auto& a : m->action()) {
        const ModVector image = a * l;
        bool on_line = false;
        for (Residue c = 1; c < 3; ++c) on_line = on_line || image == l.scaled(c);
        stable = stable && on_line;
      }
      CHECK_FALSE(stable);
    }
  }
  SUBCASE("GL_2(F_2) is S_3") {
    CHECK(elliptic_module(2, 1, gl2_generators(2, 1))->group().order() == 6);
  }
  SUBCASE("GL_2(Z/9)") {
    const auto m = elliptic_module(3, 2, gl2_generators(3, 2));
    CHECK(m->group().order() == 3888);
    CHECK(m->modulus().m() == 9);
  }
  SUBCASE("non-invertible generator") {
    CHECK_THROWS(elliptic_module(3, 1, {GroupElement::matrix(ModMatrix(Modulus(3, 1), 2, 2, {1, 0, 0, 0}))}));
  }
}

TEST_CASE("modules must satisfy the Cayley relations") {
  const auto grp = make_group(sn_coxeter(3));
  // (1 2) acting by -1 and (2 3) trivially violates (12)(23)(12) = (23)(12)(23).
  const Modulus z3(3, 1);
  std::vector<ModMatrix> bad{ModMatrix(z3, 1, 1, {2}), ModMatrix(z3, 1, 1, {1})};
  CHECK_THROWS_AS(module_from_matrices(grp, bad, "bad"), UsageError);
}

TEST_CASE("extensions from cocycles") {
  SUBCASE("zero cocycle splits") {
    const auto m = even_quotient_module(6);
    const auto ext = extension_from_cocycle(zero_cocycle(m));
    CHECK(ext.total->rank() == 5);
    CHECK(is_coboundary(delta1(ext)));
  }
  SUBCASE("invalid cocycle is rejected") {
    const auto m = trivial_module(make_group(sn_coxeter(3)), F2);
    Cocycle xi{m, {ModVector(F2, std::vector<Residue>{1}), ModVector(F2, std::vector<Residue>{0})}};
    CHECK_THROWS_AS(extension_from_cocycle(xi), InvalidCocycleError);
  }
  SUBCASE("subset model: calJ[2] is a non-split extension of Z/2 by J[2]") {
    const auto grp = make_group(sn_coxeter(6));
    const auto calj = subset_quotient_module(grp);
    const auto ext = extension_from_embedding(*calj, even_quotient_inclusion(6), subset_class(subset(6, {1})), 1, "J[2]");
    CHECK(ext.base->rank() == 4);
    CHECK_FALSE(is_coboundary(delta1(ext)));
  }
  SUBCASE("Sp_4(F_2) on F_2^4 along the nonzero class") {
    const auto grp = make_group(sp2g_f2_generators(2));
    std::vector<ModMatrix> action;
    for (const auto& g : grp->generators()) action.push_back(g.mat());
    const auto v = module_from_matrices(grp, action, "F_2^4");
    const auto rep = h1(v);
    REQUIRE(rep.representatives.size() == 1);
    const auto ext = extension_from_cocycle(rep.representatives[0]);
    CHECK(ext.total->rank() == 5);
    CHECK_FALSE(is_coboundary(delta1(ext)));
  }
}

TEST_CASE("transposition identity") {
  const auto r4 = check_transposition_identity(4);
  CHECK(r4.holds());
  CHECK(r4.cases_checked == 3 * 8);
  const auto r6 = check_transposition_identity(6);
  CHECK(r6.holds());
  CHECK(r6.cases_checked == 5 * 32);
}
