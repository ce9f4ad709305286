#include <doctest.h>

#include <filesystem>
#include <numeric>
#include <random>

#include <unistd.h>

#include "discform/errors.hpp"
#include "discform/local_global.hpp"
#include "support.hpp"

using namespace discform;

namespace {

BinaryForm form(std::initializer_list<long> c) {
  std::vector<BigInt> v;
  for (long x : c) v.emplace_back(x);
  return BinaryForm(v);
}

// x^6 + x y^5 + 6 y^6
const BinaryForm kSextic = form({1, 0, 0, 0, 0, 1, 6});
// -(x^2 + y^2)(x^2 + 2 y^2)(x^2 + 3 y^2)
const BinaryForm kNegDefinite = form({-1, 0, -6, 0, -11, 0, -6});

BinaryForm reducible_sextic(long c = 1) {
  return oracle::multiply(oracle::multiply(form({c, 0, c}), form({1, 0, 17})), form({1, 0, -17}));
}

bool squarefree(const BinaryForm& f) { return binary_discriminant(f) != 0; }

std::vector<BigInt> ascending(const BinaryForm& f) {
  // f(x, 1) = f0 x^n + ... + fn, lowest degree first.
  return std::vector<BigInt>(f.coeffs.rbegin(), f.coeffs.rend());
}

// Fixture forms for the residue comparison at p: random forms, some with
// coefficients scaled by powers of p or by a non-residue to produce local
// obstructions.
std::vector<BinaryForm> residue_fixtures(std::uint64_t p, std::mt19937_64& rng) {
  std::vector<BinaryForm> out;
  std::uniform_int_distribution<long> small(-6, 6);
  const long nonresidue = p == 2 ? 3 : 2;
  while (out.size() < 30) {
    const std::size_t n = out.size() % 2 ? 2 : 4;
    const int style = static_cast<int>(out.size() % 3);
    std::vector<BigInt> c(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
      c[j] = small(rng);
      if (style == 1 && j % 2 == 1) c[j] *= static_cast<long>(p);
      if (style == 2) c[j] *= nonresidue;
    }
    BinaryForm f(c);
    if (f.is_zero() || !squarefree(f)) continue;
    out.push_back(f);
  }
  out.push_back(form({-1, 0, -1}));
  out.push_back(form({1, 0, 1}));
  return out;
}

}  // namespace

TEST_CASE("real place") {
  const auto v = real_obstruction(kNegDefinite);
  CHECK_FALSE(v.solvable);
  CHECK(v.method == LocalMethod::NegDefiniteTest);
  CHECK(v.place.is_real());
  CHECK(real_obstruction(kSextic).solvable);
  CHECK(real_obstruction(form({-1, 0, 0, 5})).solvable);
  CHECK(real_obstruction(form({-3, 1, 0, 0, 7, -2})).solvable);
  // Negative leading coefficient with real roots.
  CHECK(real_obstruction(form({-1, 0, 0, 0, 1})).solvable);
  CHECK_THROWS_AS(real_obstruction(form({1, -2, 1})), UsageError);
}

TEST_CASE("p-adic examples") {
  CHECK(qp_solvable(form({1, 0, 1}), 3).solvable);
  CHECK_FALSE(qp_solvable(form({-1, 0, -1}), 2).solvable);
  CHECK(qp_solvable(kSextic, 5).solvable);
  CHECK_THROWS_AS(qp_solvable(form({1, -2, 1}), 3), UsageError);
  // x^2 + y^2 is a 3-adic unit for primitive (x, y), so 3 (x^2 + y^2) has odd valuation.
  CHECK_FALSE(qp_solvable(form({3, 0, 3}), 3).solvable);
  CHECK(qp_depth_bound(form({1, 0, 1}), 2) == 2 + 2 + 1);
}

TEST_CASE("qp_solvable agrees with residues mod p^k") {
  std::mt19937_64 rng(41);
  for (std::uint64_t p : {2, 3, 5}) {
    const unsigned k = p == 5 ? 3 : (p == 3 ? 4 : 5);
    std::size_t solvable = 0, insolvable = 0, undecided = 0;
    for (const auto& f : residue_fixtures(p, rng)) {
      CAPTURE(p);
      CAPTURE(f.to_string());
      const auto got = qp_solvable(f, p);
      CHECK(got.solvable == qp_solvable(f, p, 3).solvable);
      switch (oracle::local_by_residues(f, p, k)) {
        case oracle::LocalResult::Solvable:
          CHECK(got.solvable);
          ++solvable;
          break;
        case oracle::LocalResult::Insolvable:
          CHECK_FALSE(got.solvable);
          ++insolvable;
          break;
        case oracle::LocalResult::Undecided:
          ++undecided;
          break;
      }
    }
    CHECK(solvable > 0);
    CHECK(insolvable > 0);
    MESSAGE("p = " << p << ": " << solvable << " solvable, " << insolvable << " insolvable, " << undecided
                   << " undecided by residues");
  }
}

TEST_CASE("good primes above the threshold are solvable") {
  CHECK(weil_threshold(6) == 101);
  CHECK(weil_threshold(4) == 37);
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<long> coeff(-50, 50);
  std::size_t checked = 0;
  while (checked < 50) {
    std::vector<BigInt> c(7);
    for (auto& x : c) x = coeff(rng);
    const BinaryForm f(c);
    if (f.coeffs[0] == 0 || !squarefree(f)) continue;
    const BigInt twice_disc = 2 * binary_discriminant(f);
    std::uint64_t p = next_prime_after(101 + rng() % 200);
    while (twice_disc % BigInt(static_cast<unsigned long>(p)) == 0) p = next_prime_after(p);
    CAPTURE(f.to_string());
    CAPTURE(p);
    const auto skip = large_prime_check(f, BigInt(static_cast<unsigned long>(p)));
    REQUIRE(skip);
    CHECK(skip->solvable);
    CHECK(qp_solvable(f, p).solvable);
    ++checked;
  }
}

TEST_CASE("large_prime_check on bad reduction") {
  const BigInt p = 103;
  // Reductions mod 103: c (x^2 + y^2)^2, decided by whether c is a square.
  // 5 is a non-residue mod 103 and 4 is a square.
  CHECK(mpz_legendre(BigInt(5).get_mpz_t(), p.get_mpz_t()) == -1);
  CHECK_FALSE(large_prime_check(form({5, 103, 10, 0, 5}), p));
  const auto square = large_prime_check(form({4, 0, 8, 103, 4}), p);
  REQUIRE(square);
  CHECK(square->solvable);
  // (x^2 + y^2)^3 is not a constant times a square.
  const auto cube = large_prime_check(form({1, 0, 3, 0, 3, 103, 1}), p);
  REQUIRE(cube);
  CHECK(cube->solvable);
  // Leading zeros mod p: 103 x^4 + x^2 y^2 reduces to (x y)^2.
  const auto shifted = large_prime_check(form({103, 0, 1, 0, 0}), p);
  REQUIRE(shifted);
  CHECK(shifted->solvable);
}

TEST_CASE("everywhere local solvability") {
  const auto neg = everywhere_locally_solvable(kNegDefinite);
  CHECK(neg.status == ElsStatus::NotSolvable);
  REQUIRE(neg.obstruction);
  CHECK(neg.obstruction->is_real());

  const auto sextic = everywhere_locally_solvable(kSextic);
  CHECK(sextic.status == ElsStatus::Solvable);
  CHECK(sextic.weil_threshold == 101);

  const auto e = everywhere_locally_solvable(reducible_sextic());
  bool has2 = false, has17 = false;
  for (const auto& v : e.audit) {
    has2 = has2 || v.place.p == 2;
    has17 = has17 || v.place.p == 17;
  }
  CHECK(has2);
  CHECK(has17);
}

TEST_CASE("Frobenius cycle types") {
  CHECK(frobenius_cycle_type(oracle::product_of_linear({1, 2, 3, 4, 5, 6}), 7) ==
        std::vector<unsigned>{1, 1, 1, 1, 1, 1});
  CHECK(frobenius_cycle_type(form({1, 0, 1}), 3) == std::vector<unsigned>{2});
  CHECK(frobenius_cycle_type(kSextic, 11) == factor_degrees_naive(poly_from_integers(ascending(kSextic), 11), 11));
  CHECK_THROWS_AS(frobenius_cycle_type(form({1, 0, 1}), 2), UsageError);
  CHECK_THROWS_AS(frobenius_cycle_type(form({3, 0, 1}), 3), UsageError);

  std::mt19937_64 rng(43);
  std::uniform_int_distribution<long> coeff(-20, 20);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<BigInt> c(7);
    c[0] = 1;
    for (std::size_t i = 1; i < 7; ++i) c[i] = coeff(rng);
    const BinaryForm f(c);
    const BigInt d = binary_discriminant(f);
    if (d == 0) continue;
    for (std::uint64_t p : {3, 5, 7, 11, 13, 101}) {
      if (d % BigInt(static_cast<unsigned long>(p)) == 0) continue;
      auto naive = factor_degrees_naive(poly_from_integers(ascending(f), p), p);
      std::sort(naive.rbegin(), naive.rend());
      CHECK(frobenius_cycle_type(f, p) == naive);
    }
  }
}

TEST_CASE("S_n certificates") {
  const auto g = certify_sn(kSextic, 50);
  REQUIRE(g.certified);
  REQUIRE(g.primes.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(frobenius_cycle_type(kSextic, g.primes[i]) == g.cycle_types[i]);
  CHECK(g.cycle_types[0] == std::vector<unsigned>{6});
  CHECK(g.cycle_types[1] == std::vector<unsigned>{5, 1});

  // Reducible forms never certify.
  std::vector<BinaryForm> reducible{reducible_sextic(), oracle::product_of_linear({1, 2, 3, 4, 5, 6})};
  std::mt19937_64 rng(44);
  std::uniform_int_distribution<long> coeff(-9, 9);
  while (reducible.size() < 12) {
    const BinaryForm a({1, coeff(rng), coeff(rng)});
    const BinaryForm b({1, coeff(rng), coeff(rng), coeff(rng), coeff(rng)});
    const BinaryForm f = oracle::multiply(a, b);
    if (squarefree(f)) reducible.push_back(f);
  }
  for (const auto& f : reducible) {
    CAPTURE(f.to_string());
    CHECK_FALSE(certify_sn(f, 200).certified);
  }
}

TEST_CASE("certification fixtures") {
  const auto odd = certify_discriminant_form(form({1, 0, 0, 2}));
  CHECK(odd.verdict == Verdict::DiscForm);
  CHECK(odd.reason == Reason::OddDegree);

  const auto sextic = certify_discriminant_form(kSextic);
  CHECK(sextic.verdict == Verdict::DiscForm);
  CHECK(sextic.reason == Reason::RationalPoint);
  REQUIRE(sextic.point);
  CHECK(sextic.point->second == 0);

  const auto neg = certify_discriminant_form(kNegDefinite);
  CHECK(neg.verdict == Verdict::LocalObstruction);
  REQUIRE(neg.obstruction);
  CHECK(neg.obstruction->is_real());
  CHECK(neg.to_json()["verdict"] == to_string(Verdict::LocalObstruction));

  const auto e = certify_discriminant_form(reducible_sextic());
  CHECK(e.reason != Reason::LocalGlobal);
  CHECK_FALSE(certify_sn(reducible_sextic(), 500).certified);

  CHECK(certify_discriminant_form(form({1, -2, 1, 0, 0})).verdict == Verdict::NotSquareFree);
  CHECK_THROWS_AS(certify_discriminant_form(form({0, 0, 0})), UsageError);
}

TEST_CASE("every DiscForm verdict carries a checkable reason") {
  std::size_t local_global = 0;
  for (std::uint64_t i = 0; i < 60; ++i) {
    const BinaryForm f = sample_form(6, 1000, 7, i);
    if (!squarefree(f)) continue;
    const auto c = certify_discriminant_form(f);
    CAPTURE(f.to_string());
    if (c.verdict != Verdict::DiscForm) continue;
    if (c.reason == Reason::RationalPoint) {
      REQUIRE(c.point);
      CHECK(oracle::is_square(f.eval(c.point->first, c.point->second)));
    } else {
      REQUIRE(c.reason == Reason::LocalGlobal);
      ++local_global;
      REQUIRE(c.galois);
      REQUIRE(c.els);
      CHECK(c.galois->certified);
      for (std::size_t k = 0; k < c.galois->primes.size(); ++k)
        CHECK(frobenius_cycle_type(f, c.galois->primes[k]) == c.galois->cycle_types[k]);
      CHECK(c.els->status == ElsStatus::Solvable);
      for (const auto& v : c.els->audit) CHECK(v.solvable);
    }
  }
  CHECK(local_global > 0);
}

TEST_CASE("rational points") {
  const auto p = find_rational_point(form({2, 0, 0, 0, 0, 0, 7}), 20);
  if (p) {
    CHECK(std::gcd(p->first.get_si(), p->second.get_si()) == 1);
    CHECK(oracle::is_square(form({2, 0, 0, 0, 0, 0, 7}).eval(p->first, p->second)));
  }
  const auto q = find_rational_point(form({2, 0, 0, 0, 0, 0, 2}), 20);
  REQUIRE(q);
  CHECK(oracle::is_square(form({2, 0, 0, 0, 0, 0, 2}).eval(q->first, q->second)));
  CHECK_FALSE(find_rational_point(kNegDefinite, 20));
}

TEST_CASE("Wilson interval") {
  const auto w = wilson_interval(8, 10);
  CHECK(w.estimate == doctest::Approx(0.8));
  CHECK(w.low == doctest::Approx(0.4902).epsilon(1e-3));
  CHECK(w.high == doctest::Approx(0.9433).epsilon(1e-3));
  const auto all = wilson_interval(50, 50);
  CHECK(all.high == doctest::Approx(1.0));
  CHECK(all.low < 1.0);
}

TEST_CASE("sampling") {
  for (std::uint64_t i = 0; i < 50; ++i) {
    const BinaryForm f = sample_form(6, 10, 3, i);
    CHECK(f == sample_form(6, 10, 3, i));
    CHECK(f.degree() == 6);
    for (const auto& c : f.coeffs) CHECK(abs(c) <= 10);
  }
  CHECK_FALSE(sample_form(6, 1000, 3, 0) == sample_form(6, 1000, 4, 0));
}

TEST_CASE("density estimates") {
  const auto cubic = density_estimate(3, 50, 40, 1);
  CHECK(cubic.proportion_certified.estimate == 1.0);
  const auto a = density_estimate(6, 100, 40, 9, 1);
  const auto b = density_estimate(6, 100, 40, 9, 1);
  const auto c = density_estimate(6, 100, 40, 9, 4);
  CHECK(a.to_json().dump() == b.to_json().dump());
  CHECK(a.to_json().dump() == c.to_json().dump());
  CHECK(a.certified + a.local_obstruction + a.not_squarefree <= a.samples);
}

TEST_CASE("integer factorization") {
  const std::vector<BigInt> cases{BigInt(1), BigInt(-360), BigInt(97), BigInt("1000000007") * BigInt("998244353"),
                                  BigInt("1099511627791") * BigInt("1099511627689"),
                                  BigInt("18446744073709551557") * BigInt(3) * BigInt(3)};
  for (const auto& n : cases) {
    CAPTURE(n.get_str());
    const auto f = factor_integer(n);
    CHECK(f.complete);
    BigInt prod = 1;
    for (const auto& [q, e] : f.factors) {
      CHECK(is_probable_prime(q));
      for (unsigned i = 0; i < e; ++i) prod *= q;
    }
    CHECK(prod == abs(n));
  }
  CHECK(primes_up_to(30) == std::vector<std::uint32_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
  CHECK(next_prime_after(100) == 101);
  CHECK(valuation(BigInt(48), 2) == 4);
}

TEST_CASE("factor cache round trip") {
  const auto dir = std::filesystem::temp_directory_path() / ("discform-cache-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  {
    const FactorCache cache(dir.string());
    const BigInt n = BigInt("1000000007") * 12;
    CHECK_FALSE(cache.lookup(n));
    const auto f = factor_integer(n);
    cache.store(n, f);
    const auto back = cache.lookup(n);
    REQUIRE(back);
    CHECK(back->factors == f.factors);
    CHECK(back->complete);
  }
  std::filesystem::remove_all(dir);
}
