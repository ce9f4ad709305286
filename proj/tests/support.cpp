#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "discform/galois_modules.hpp"

namespace oracle {

using namespace discform;

std::vector<Vec> all_vectors(std::uint32_t m, std::size_t d) {
  std::vector<Vec> out;
  Vec v(d, 0);
  while (true) {
    out.push_back(v);
    std::size_t i = d;
    while (i > 0) {
      --i;
      if (++v[i] < m) break;
      v[i] = 0;
      if (i == 0) return out;
    }
    if (d == 0) return out;
  }
}

Vec apply(const ModMatrix& a, const Vec& x) {
  const std::uint64_t m = a.modulus().m();
  Vec out(a.rows(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::uint64_t acc = 0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += std::uint64_t{a(i, j)} * x[j];
    out[i] = static_cast<std::uint32_t>(acc % m);
  }
  return out;
}

Vec to_vec(const ModVector& v) { return v.entries; }

ModVector to_mod(const Modulus& mod, const Vec& v) { return ModVector(mod, v); }

std::uint64_t kernel_size(const ModMatrix& a) {
  std::uint64_t count = 0;
  const Vec zero(a.rows(), 0);
  for (const auto& x : all_vectors(a.modulus().m(), a.cols()))
    if (apply(a, x) == zero) ++count;
  return count;
}

bool solvable(const ModMatrix& a, const Vec& b) {
  for (const auto& x : all_vectors(a.modulus().m(), a.cols()))
    if (apply(a, x) == b) return true;
  return false;
}

std::set<Vec> span(std::uint32_t m, std::size_t d, const std::vector<Vec>& gens) {
  std::set<Vec> seen{Vec(d, 0)};
  std::vector<Vec> frontier{Vec(d, 0)};
  while (!frontier.empty()) {
    std::vector<Vec> next;
    for (const auto& v : frontier) {
      for (const auto& g : gens) {
        Vec w(d);
        for (std::size_t i = 0; i < d; ++i) w[i] = (v[i] + g[i]) % m;
        if (seen.insert(w).second) next.push_back(w);
      }
    }
    frontier = std::move(next);
  }
  return seen;
}

ModMatrix random_matrix(std::mt19937_64& rng, const Modulus& mod, std::size_t rows, std::size_t cols) {
  ModMatrix a(mod, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = static_cast<Residue>(rng() % mod.m());
  return a;
}

ModVector random_vector(std::mt19937_64& rng, const Modulus& mod, std::size_t d) {
  ModVector v(mod, d);
  for (std::size_t i = 0; i < d; ++i) v[i] = static_cast<Residue>(rng() % mod.m());
  return v;
}

LinalgComparison compare_linalg(std::mt19937_64& rng, const Modulus& mod, std::size_t rows, std::size_t cols) {
  LinalgComparison out;
  out.label = std::to_string(rows) + "x" + std::to_string(cols) + " over Z/" + std::to_string(mod.m());
  // Bias towards singular matrices: scale a random row by p.
  ModMatrix a = random_matrix(rng, mod, rows, cols);
  const std::size_t row = rng() % rows;
  for (std::size_t j = 0; j < cols; ++j) a(row, j) = mod.mul(a(row, j), mod.p());

  const auto gens = kernel_generators(a);
  std::vector<Vec> plain;
  bool all_in_kernel = true;
  for (const auto& g : gens) {
    plain.push_back(to_vec(g));
    all_in_kernel = all_in_kernel && (a * g).is_zero();
  }
  out.kernel_ok = all_in_kernel && span(mod.m(), cols, plain).size() == kernel_size(a);

  const ModVector x0 = random_vector(rng, mod, cols);
  const ModVector b_in = a * x0;
  const auto x = solve(a, b_in);
  const ModVector b_any = random_vector(rng, mod, rows);
  const auto y = solve(a, b_any);
  out.solve_ok = x && a * *x == b_in && y.has_value() == solvable(a, to_vec(b_any)) && (!y || a * *y == b_any);

  // Quotient of a random subgroup of (Z/m)^4 by combinations of its generators.
  const std::size_t d = 4;
  std::vector<ModVector> sup;
  for (int i = 0; i < 3; ++i) sup.push_back(random_vector(rng, mod, d));
  std::vector<ModVector> sub;
  for (int i = 0; i < 2; ++i) {
    ModVector c(mod, d);
    for (const auto& s : sup) c += s.scaled(static_cast<Residue>(rng() % mod.m()));
    if (i == 0) c = c.scaled(mod.p());
    sub.push_back(c);
  }
  const auto q = quotient_structure(mod, d, sub, sup);
  std::vector<Vec> psup, psub;
  for (const auto& v : sup) psup.push_back(to_vec(v));
  for (const auto& v : sub) psub.push_back(to_vec(v));
  const auto big = span(mod.m(), d, psup);
  const auto small = span(mod.m(), d, psub);
  std::uint64_t product = 1;
  for (auto f : q.invariant_factors) product *= f;
  bool reps_ok = q.representatives.size() == q.invariant_factors.size();
  for (const auto& r : q.representatives) reps_ok = reps_ok && big.count(to_vec(r));
  out.quotient_ok = reps_ok && product * small.size() == big.size();
  return out;
}

namespace {

std::shared_ptr<const FiniteGroup> perm_group(std::size_t n, const std::vector<std::vector<std::vector<int>>>& gens) {
  std::vector<GroupElement> g;
  for (const auto& cycles : gens) g.push_back(GroupElement::from_cycles(n, cycles));
  return make_group(g);
}

GModulePtr scalar_module(std::shared_ptr<const FiniteGroup> g, std::uint32_t p, std::uint32_t r,
                         const std::vector<std::int64_t>& scalars, const std::string& label) {
  Modulus mod(p, r);
  std::vector<ModMatrix> action;
  for (auto s : scalars) action.emplace_back(mod, 1, 1, std::vector<std::int64_t>{s});
  return module_from_matrices(g, action, label);
}

GModulePtr perm_module_mod(std::shared_ptr<const FiniteGroup> g, std::uint32_t p, const std::string& label) {
  Modulus mod(p, 1);
  std::vector<ModMatrix> action;
  for (const auto& s : g->generators()) {
    const std::size_t n = s.degree();
    ModMatrix a(mod, n, n);
    for (std::size_t j = 0; j < n; ++j) a(s.perm()[j], j) = 1;
    action.push_back(a);
  }
  return module_from_matrices(g, action, label);
}

}  // namespace

std::vector<SmallInstance> small_instances() {
  std::vector<SmallInstance> out;
  auto c2 = perm_group(2, {{{1, 2}}});
  out.push_back({"C2 on Z/2", trivial_module(c2, Modulus(2, 1))});
  out.push_back({"C2 on Z/3", trivial_module(c2, Modulus(3, 1))});
  out.push_back({"C2 on Z/4", trivial_module(c2, Modulus(2, 2))});
  out.push_back({"C2 on Z/9", trivial_module(c2, Modulus(3, 2))});
  out.push_back({"C2 on F_2^2 by swap", perm_power_module(c2)});
  out.push_back({"C2 on Z/4 by -1", scalar_module(c2, 2, 2, {-1}, "Z/4 sign")});
  out.push_back({"C2 on Z/9 by -1", scalar_module(c2, 3, 2, {-1}, "Z/9 sign")});

  auto c3 = perm_group(3, {{{1, 2, 3}}});
  out.push_back({"C3 on Z/3", trivial_module(c3, Modulus(3, 1))});
  out.push_back({"C3 on Z/9", trivial_module(c3, Modulus(3, 2))});
  out.push_back({"C3 on Z/2", trivial_module(c3, Modulus(2, 1))});
  out.push_back({"C3 on F_2^3", perm_power_module(c3)});
  out.push_back({"C3 on F_3^3", perm_module_mod(c3, 3, "F_3^3 perm")});

  auto c4 = perm_group(4, {{{1, 2, 3, 4}}});
  out.push_back({"C4 on F_2^4", perm_power_module(c4)});
  out.push_back({"C4 on Z/4", trivial_module(c4, Modulus(2, 2))});
  out.push_back({"C4 on Z/2", trivial_module(c4, Modulus(2, 1))});
  out.push_back({"C4 on Z/4 by -1", scalar_module(c4, 2, 2, {-1}, "Z/4 sign")});

  auto v4 = perm_group(4, {{{1, 2}}, {{3, 4}}});
  out.push_back({"V4 on F_2^4", perm_power_module(v4)});
  out.push_back({"V4 on F_2^2", trivial_module(v4, Modulus(2, 1), 2)});

  auto s3 = perm_group(3, {{{1, 2}}, {{2, 3}}});
  out.push_back({"S3 on F_2^3", perm_power_module(s3)});
  out.push_back({"S3 on calJ[2]", subset_quotient_module(s3)});
  out.push_back({"S3 on even subsets", even_submodule(s3)});
  out.push_back({"S3 on Z/2", trivial_module(s3, Modulus(2, 1))});
  out.push_back({"S3 on Z/3", trivial_module(s3, Modulus(3, 1))});
  out.push_back({"S3 on Z/3 by sign", scalar_module(s3, 3, 1, {-1, -1}, "Z/3 sign")});
  out.push_back({"S3 on F_3^3", perm_module_mod(s3, 3, "F_3^3 perm")});

  auto d4 = perm_group(4, {{{1, 2, 3, 4}}, {{1, 3}}});
  out.push_back({"D4 on F_2^4", perm_power_module(d4)});

  auto c6 = perm_group(5, {{{1, 2, 3}, {4, 5}}});
  out.push_back({"C6 on F_2^5", perm_power_module(c6)});

  Modulus f3(3, 1);
  auto i = GroupElement::matrix(ModMatrix(f3, 2, 2, {0, -1, 1, 0}));
  auto j = GroupElement::matrix(ModMatrix(f3, 2, 2, {1, 1, 1, -1}));
  out.push_back({"Q8 on F_3^2", elliptic_module(3, 1, {i, j})});
  return out;
}

unsigned h1_order_log_by_enumeration(const GModule& m) {
  const FiniteGroup& g = m.group();
  const Modulus mod = m.modulus();
  const std::size_t d = m.rank();
  const std::size_t k = g.num_generators();
  const auto vectors = all_vectors(mod.m(), d);
  const auto act = [&](std::size_t e, const Vec& v) { return apply(m.element_action(e), v); };
  const auto add = [&](const Vec& a, const Vec& b) {
    Vec c(d);
    for (std::size_t i = 0; i < d; ++i) c[i] = (a[i] + b[i]) % mod.m();
    return c;
  };
  // Values on generators determine a cochain through words; check all pairs.
  std::uint64_t z1 = 0;
  std::vector<std::size_t> choice(k, 0);
  while (true) {
    std::vector<Vec> xi(g.order(), Vec(d, 0));
    for (std::size_t e = 1; e < g.order(); ++e) {
      const auto word = g.element_word(e);
      Vec acc(d, 0);
      std::size_t prefix = 0;
      for (std::size_t s : word) {
        acc = add(acc, act(prefix, vectors[choice[s]]));
        prefix = g.times_generator(prefix, s);
      }
      xi[e] = acc;
    }
    bool ok = true;
    for (std::size_t a = 0; a < g.order() && ok; ++a)
      for (std::size_t b = 0; b < g.order() && ok; ++b) ok = xi[g.multiply(a, b)] == add(xi[a], act(a, xi[b]));
    if (ok) ++z1;
    std::size_t i = 0;
    while (i < k && ++choice[i] == vectors.size()) choice[i++] = 0;
    if (i == k) break;
  }
  std::set<std::vector<Vec>> b1;
  for (const auto& q : vectors) {
    std::vector<Vec> vals;
    for (std::size_t s = 0; s < k; ++s) {
      Vec gq = apply(m.generator_action(s), q);
      for (std::size_t i = 0; i < d; ++i) gq[i] = (gq[i] + mod.m() - q[i]) % mod.m();
      vals.push_back(gq);
    }
    b1.insert(vals);
  }
  const double ratio = static_cast<double>(z1) / static_cast<double>(b1.size());
  return static_cast<unsigned>(std::lround(std::log(ratio) / std::log(mod.p())));
}

bool restriction_trivial_by_enumeration(const Cocycle& xi, std::size_t g) {
  const GModule& m = *xi.module;
  const Vec target = to_vec(cocycle_value_at(xi, g));
  const std::uint32_t mm = m.modulus().m();
  for (const auto& q : all_vectors(mm, m.rank())) {
    Vec v = apply(m.element_action(g), q);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (v[i] + mm - q[i]) % mm;
    if (v == target) return true;
  }
  return false;
}

std::size_t cyclic_subgroup_classes(const FiniteGroup& g) {
  std::set<std::vector<std::size_t>> subgroups;
  for (std::size_t e = 0; e < g.order(); ++e) {
    std::vector<std::size_t> h{0};
    for (std::size_t x = e; x != 0; x = g.multiply(x, e)) h.push_back(x);
    std::sort(h.begin(), h.end());
    subgroups.insert(h);
  }
  std::set<std::vector<std::size_t>> seen;
  std::size_t classes = 0;
  for (const auto& h : subgroups) {
    if (seen.count(h)) continue;
    ++classes;
    for (std::size_t c = 0; c < g.order(); ++c) {
      std::vector<std::size_t> conj;
      for (std::size_t x : h) conj.push_back(g.conjugate(x, c));
      std::sort(conj.begin(), conj.end());
      seen.insert(conj);
    }
  }
  return classes;
}

LocalResult local_by_residues(const BinaryForm& f, std::uint64_t p, unsigned k) {
  std::uint64_t pk = 1;
  for (unsigned i = 0; i < k; ++i) pk *= p;
  std::vector<std::uint64_t> c;
  for (const auto& x : f.coeffs) {
    BigInt r = x % BigInt(static_cast<unsigned long>(pk));
    if (r < 0) r += static_cast<unsigned long>(pk);
    c.push_back(r.get_ui());
  }
  const std::size_t n = f.degree();
  bool undecided = false;
  for (std::uint64_t x = 0; x < pk; ++x) {
    for (std::uint64_t y = 0; y < pk; ++y) {
      if (x % p == 0 && y % p == 0) continue;
      // Horner in the homogeneous form: sum c_i x^{n-i} y^i.
      unsigned __int128 v = 0;
      for (std::size_t i = 0; i <= n; ++i) {
        unsigned __int128 term = c[i];
        for (std::size_t a = 0; a < n - i; ++a) term = term * x % pk;
        for (std::size_t b = 0; b < i; ++b) term = term * y % pk;
        v = (v + term) % pk;
      }
      std::uint64_t val = static_cast<std::uint64_t>(v);
      if (val == 0) {
        undecided = true;
        continue;
      }
      unsigned e = 0;
      while (val % p == 0) {
        val /= p;
        ++e;
      }
      if (e % 2 == 1) continue;
      const unsigned left = k - e;
      if (p == 2) {
        if (left < 3) {
          undecided = true;
          continue;
        }
        if (val % 8 == 1) return LocalResult::Solvable;
      } else {
        const std::uint64_t u = val % p;
        bool square = false;
        for (std::uint64_t s = 1; s < p && !square; ++s) square = s * s % p == u;
        if (square) return LocalResult::Solvable;
      }
    }
  }
  return undecided ? LocalResult::Undecided : LocalResult::Insolvable;
}

BinaryForm product_of_linear(const std::vector<long>& roots) {
  BinaryForm f(std::vector<BigInt>{1});
  for (long r : roots) f = multiply(f, BinaryForm(std::vector<BigInt>{1, BigInt(-r)}));
  return f;
}

BinaryForm multiply(const BinaryForm& a, const BinaryForm& b) {
  std::vector<BigInt> c(a.coeffs.size() + b.coeffs.size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) c[i + j] += a.coeffs[i] * b.coeffs[j];
  return BinaryForm(c);
}

BigInt pencil_value(const Pencil& p, long t) {
  const std::size_t n = p.n;
  // Rational Gaussian elimination.
  std::vector<mpq_class> m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = mpq_class(p.at_a(i, j) * t - p.at_b(i, j));
  mpq_class det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv * n + c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m[piv * n + j], m[c * n + j]);
      det = -det;
    }
    det *= m[c * n + c];
    for (std::size_t i = c + 1; i < n; ++i) {
      const mpq_class factor = m[i * n + c] / m[c * n + c];
      for (std::size_t j = c; j < n; ++j) m[i * n + j] -= factor * m[c * n + j];
    }
  }
  return det.get_num();
}

std::vector<std::vector<BigInt>> all_symmetric(std::size_t n, std::uint64_t p) {
  const std::size_t slots = n * (n + 1) / 2;
  std::vector<std::vector<BigInt>> out;
  std::vector<std::uint64_t> digits(slots, 0);
  while (true) {
    std::vector<BigInt> m(n * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j, ++k) m[i * n + j] = m[j * n + i] = static_cast<unsigned long>(digits[k]);
    out.push_back(m);
    std::size_t i = 0;
    while (i < slots && ++digits[i] == p) digits[i++] = 0;
    if (i == slots) break;
  }
  return out;
}

bool is_square(const BigInt& v) { return v >= 0 && mpz_perfect_square_p(v.get_mpz_t()); }

}  // namespace oracle
