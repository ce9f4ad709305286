#include <doctest.h>

#include <algorithm>
#include <map>

#include "discform/errors.hpp"
#include "discform/finite_groups.hpp"
#include "discform/galois_modules.hpp"
#include "support.hpp"

using namespace discform;

namespace {

std::vector<std::size_t> rep_orders(const FiniteGroup& g) {
  std::vector<std::size_t> out;
  for (const auto& r : cyclic_reps(g)) out.push_back(r.order);
  std::sort(out.begin(), out.end());
  return out;
}

void check_structure(const FiniteGroup& g) {
  // Closure and consistency of the right multiplication table.
  for (std::size_t e = 0; e < g.order(); ++e)
    for (std::size_t s = 0; s < g.num_generators(); ++s) {
      const std::size_t t = g.times_generator(e, s);
      REQUIRE(t < g.order());
      CHECK(g.element(t) == g.element(e) * g.generators()[s]);
    }
  CHECK(g.cycle_edges().size() == g.order() * g.num_generators() - (g.order() - 1));
  for (std::size_t e = 1; e < g.order(); ++e) CHECK(g.tree_edge(e).parent < e);
}

}  // namespace

TEST_CASE("S_3 from a transposition and a 3-cycle") {
  const auto g = FiniteGroup::generate(
      {GroupElement::from_cycles(3, {{1, 2}}), GroupElement::from_cycles(3, {{1, 2, 3}})});
  CHECK(g.order() == 6);
  check_structure(g);
  CHECK(rep_orders(g) == std::vector<std::size_t>{1, 2, 3});
}

TEST_CASE("orders of the standard groups") {
  for (std::size_t n = 3; n <= 7; ++n) {
    std::size_t fact = 1;
    for (std::size_t i = 2; i <= n; ++i) fact *= i;
    const auto g = FiniteGroup::generate(sn_coxeter(n));
    CHECK(g.order() == fact);
    check_structure(g);
  }
  const auto sp4 = FiniteGroup::generate(sp2g_f2_generators(2));
  CHECK(sp4.order() == 720);
  CHECK(sp2g_f2_order(2) == 16 * 3 * 15);
  check_structure(sp4);
  const auto gl9 = FiniteGroup::generate(gl2_generators(3, 2));
  CHECK(gl9.order() == 3888);
  CHECK(gl2_order(3, 2) == 81 * 48);
  check_structure(gl9);
  CHECK(FiniteGroup::generate(sl2_generators(3)).order() == 24);
  CHECK(FiniteGroup::generate(gl2_generators(5, 1)).order() == gl2_order(5, 1));
  CHECK(FiniteGroup::generate(gl2_generators(2, 1)).order() == 6);
}

TEST_CASE("Coxeter generators of S_4") {
  const auto gens = sn_coxeter(4);
  REQUIRE(gens.size() == 3);
  CHECK(gens[0] == GroupElement::from_cycles(4, {{1, 2}}));
  CHECK(gens[1] == GroupElement::from_cycles(4, {{2, 3}}));
  CHECK(gens[2] == GroupElement::from_cycles(4, {{3, 4}}));
  CHECK(FiniteGroup::generate(gens).order() == 24);
}

TEST_CASE("symplectic generators preserve the form") {
  const ModMatrix j = symplectic_form_f2(2);
  for (const auto& g : sp2g_f2_generators(2)) CHECK(g.mat().transpose() * j * g.mat() == j);
}

TEST_CASE("cyclic subgroup representatives") {
  const auto s4 = FiniteGroup::generate(sn_coxeter(4));
  CHECK(rep_orders(s4) == std::vector<std::size_t>{1, 2, 2, 3, 4});
  const auto c4 = FiniteGroup::generate({GroupElement::from_cycles(4, {{1, 2, 3, 4}})});
  CHECK(rep_orders(c4) == std::vector<std::size_t>{1, 2, 4});
  for (std::size_t n = 3; n <= 5; ++n) {
    const auto g = FiniteGroup::generate(sn_coxeter(n));
    CHECK(cyclic_reps(g).size() == oracle::cyclic_subgroup_classes(g));
  }
  CHECK(cyclic_reps(FiniteGroup::generate(sl2_generators(3))).size() ==
        oracle::cyclic_subgroup_classes(FiniteGroup::generate(sl2_generators(3))));
}

TEST_CASE("subgroups of S_3") {
  const auto sets = standard_generators(StandardFamily::SubgroupsOfS3, {});
  CHECK(sets.size() == 6);
  std::map<std::string, std::size_t> classes;
  for (const auto& s : sets) ++classes[s.conjugacy_class];
  CHECK(classes.size() == 4);
  std::vector<std::size_t> orders;
  for (const auto& s : sets) {
    auto gens = s.generators;
    if (gens.empty()) gens.push_back(GroupElement::from_cycles(3, {}));
    orders.push_back(FiniteGroup::generate(gens).order());
  }
  std::sort(orders.begin(), orders.end());
  CHECK(orders == std::vector<std::size_t>{1, 2, 2, 2, 3, 6});
}

TEST_CASE("element words") {
  const auto g = FiniteGroup::generate(sn_coxeter(6));
  CHECK(g.element_word(0).empty());
  for (std::size_t s = 0; s < g.num_generators(); ++s) {
    const auto idx = g.index_of(g.generators()[s]);
    REQUIRE(idx);
    CHECK(g.element_word(*idx) == std::vector<std::size_t>{s});
  }
  for (std::size_t e = 0; e < g.order(); e += 7) {
    GroupElement x = g.element(0);
    for (std::size_t s : g.element_word(e)) x = x * g.generators()[s];
    CHECK(x == g.element(e));
  }
}

TEST_CASE("group operations") {
  const auto g = FiniteGroup::generate(sn_coxeter(5));
  for (std::size_t a = 0; a < g.order(); a += 11) {
    CHECK(g.multiply(a, g.inverse(a)) == 0);
    CHECK(g.power(a, g.element_order(a)) == 0);
    for (std::size_t b = 0; b < g.order(); b += 13) {
      CHECK(g.element(g.multiply(a, b)) == g.element(a) * g.element(b));
      CHECK(g.element(g.conjugate(a, b)) == g.element(b) * g.element(a) * g.element(b).inverse());
    }
  }
  std::size_t classes = 0;
  g.conjugacy_classes(&classes);
  CHECK(classes == 7);
}

TEST_CASE("generation errors") {
  CHECK_THROWS_AS(FiniteGroup::generate(sn_coxeter(6), 100), ResourceError);
  const Modulus f3(3, 1);
  CHECK_THROWS_AS(GroupElement::matrix(ModMatrix(f3, 2, 2, {1, 1, 1, 1})), UsageError);
  CHECK_THROWS_AS(GroupElement::permutation({0, 0, 1}), UsageError);
  CHECK_THROWS_AS(FiniteGroup::generate({}), UsageError);
}
