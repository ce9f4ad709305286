#include "discform/arith.hpp"

#include <algorithm>
#include <numeric>

#include "discform/errors.hpp"
#include "discform/ring_linalg.hpp"

namespace discform {

std::vector<std::uint32_t> primes_up_to(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  if (n < 2) return out;
  std::vector<bool> composite(n + 1, false);
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

std::uint64_t next_prime_after(std::uint64_t x) {
  std::uint64_t c = x + 1;
  while (!is_prime_u64(c)) ++c;
  return c;
}

bool is_probable_prime(const BigInt& n) { return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0; }

unsigned valuation(const BigInt& n, std::uint64_t p) {
  if (n == 0) throw UsageError("valuation of zero");
  BigInt m = abs(n);
  unsigned v = 0;
  while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
    mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
    ++v;
  }
  return v;
}

namespace {

// Brent's cycle finding with batched gcds; returns a nontrivial factor or 0.
BigInt pollard_brent(const BigInt& n, std::uint64_t c_seed, std::uint64_t max_iter) {
  if (n % 2 == 0) return 2;
  const BigInt c = BigInt(c_seed % 1000 + 1);
  BigInt y = 2, x, ys, q = 1, g = 1;
  const std::uint64_t batch = 128;
  std::uint64_t r = 1, iter = 0;
  auto f = [&](BigInt& v) {
    v = v * v + c;
    v %= n;
  };
  while (g == 1) {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) f(y);
    std::uint64_t k = 0;
    while (k < r && g == 1) {
      ys = y;
      const std::uint64_t lim = std::min(batch, r - k);
      for (std::uint64_t i = 0; i < lim; ++i) {
        f(y);
        q = (q * abs(x - y)) % n;
      }
      g = gcd(q, n);
      k += lim;
      iter += lim;
      if (iter > max_iter) return 0;
    }
    r *= 2;
  }
  if (g == n) {
    do {
      f(ys);
      g = gcd(abs(x - ys), n);
    } while (g == 1);
  }
  return g == n ? BigInt(0) : g;
}

// Lenstra ECM on Montgomery curves B y^2 = x^3 + A x^2 + x with x-only
// arithmetic. Curves come from Suyama's parametrization with sigma = 6, 7, ...
// so results are deterministic.
class EcmCurve {
 public:
  struct Point {
    BigInt x, z;
  };

  EcmCurve(const BigInt& n) : n_(n) {}

  // Returns a factor of n found while setting up the curve, 0 otherwise.
  BigInt init(std::uint64_t sigma, Point& start) {
    BigInt s(static_cast<unsigned long>(sigma));
    BigInt u = (s * s - 5) % n_, v = (4 * s) % n_;
    BigInt u3 = u * u % n_ * u % n_;
    start.x = u3;
    start.z = v * v % n_ * v % n_;
    BigInt vu = (v - u) % n_;
    if (vu < 0) vu += n_;
    BigInt num = vu * vu % n_ * vu % n_ * ((3 * u + v) % n_) % n_;
    BigInt den = 16 * u3 % n_ * v % n_;
    BigInt g = gcd(den, n_);
    if (g != 1) return g == n_ ? BigInt(0) : g;
    BigInt inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), n_.get_mpz_t());
    a24_ = num * inv % n_;
    return 0;
  }

  void dbl(const Point& p, Point& r) {
    mpz_add(t1_.get_mpz_t(), p.x.get_mpz_t(), p.z.get_mpz_t());
    mpz_mul(t1_.get_mpz_t(), t1_.get_mpz_t(), t1_.get_mpz_t());
    mpz_mod(t1_.get_mpz_t(), t1_.get_mpz_t(), n_.get_mpz_t());
    mpz_sub(t2_.get_mpz_t(), p.x.get_mpz_t(), p.z.get_mpz_t());
    mpz_mul(t2_.get_mpz_t(), t2_.get_mpz_t(), t2_.get_mpz_t());
    mpz_mod(t2_.get_mpz_t(), t2_.get_mpz_t(), n_.get_mpz_t());
    mpz_sub(t3_.get_mpz_t(), t1_.get_mpz_t(), t2_.get_mpz_t());
    mpz_mul(r.x.get_mpz_t(), t1_.get_mpz_t(), t2_.get_mpz_t());
    mpz_mod(r.x.get_mpz_t(), r.x.get_mpz_t(), n_.get_mpz_t());
    mpz_mul(t4_.get_mpz_t(), a24_.get_mpz_t(), t3_.get_mpz_t());
    mpz_add(t4_.get_mpz_t(), t4_.get_mpz_t(), t2_.get_mpz_t());
    mpz_mul(r.z.get_mpz_t(), t3_.get_mpz_t(), t4_.get_mpz_t());
    mpz_mod(r.z.get_mpz_t(), r.z.get_mpz_t(), n_.get_mpz_t());
  }

  // r = p + q given diff = p - q; r may alias p or q but not diff.
  void add(const Point& p, const Point& q, const Point& diff, Point& r) {
    mpz_sub(t1_.get_mpz_t(), p.x.get_mpz_t(), p.z.get_mpz_t());
    mpz_add(t2_.get_mpz_t(), q.x.get_mpz_t(), q.z.get_mpz_t());
    mpz_mul(t1_.get_mpz_t(), t1_.get_mpz_t(), t2_.get_mpz_t());
    mpz_add(t3_.get_mpz_t(), p.x.get_mpz_t(), p.z.get_mpz_t());
    mpz_sub(t4_.get_mpz_t(), q.x.get_mpz_t(), q.z.get_mpz_t());
    mpz_mul(t3_.get_mpz_t(), t3_.get_mpz_t(), t4_.get_mpz_t());
    mpz_add(t2_.get_mpz_t(), t1_.get_mpz_t(), t3_.get_mpz_t());
    mpz_sub(t4_.get_mpz_t(), t1_.get_mpz_t(), t3_.get_mpz_t());
    mpz_mul(t2_.get_mpz_t(), t2_.get_mpz_t(), t2_.get_mpz_t());
    mpz_mod(t2_.get_mpz_t(), t2_.get_mpz_t(), n_.get_mpz_t());
    mpz_mul(t4_.get_mpz_t(), t4_.get_mpz_t(), t4_.get_mpz_t());
    mpz_mod(t4_.get_mpz_t(), t4_.get_mpz_t(), n_.get_mpz_t());
    mpz_mul(r.x.get_mpz_t(), diff.z.get_mpz_t(), t2_.get_mpz_t());
    mpz_mod(r.x.get_mpz_t(), r.x.get_mpz_t(), n_.get_mpz_t());
    mpz_mul(r.z.get_mpz_t(), diff.x.get_mpz_t(), t4_.get_mpz_t());
    mpz_mod(r.z.get_mpz_t(), r.z.get_mpz_t(), n_.get_mpz_t());
  }

  // Montgomery ladder.
  Point multiply(const Point& p, std::uint64_t k) {
    if (k == 1) return p;
    Point r0 = p, r1;
    dbl(p, r1);
    int bit = 63;
    while (!((k >> bit) & 1)) --bit;
    for (--bit; bit >= 0; --bit) {
      if ((k >> bit) & 1) {
        add(r0, r1, p, r0);
        dbl(r1, r1);
      } else {
        add(r1, r0, p, r1);
        dbl(r0, r0);
      }
    }
    return r0;
  }

 private:
  BigInt n_, a24_, t1_, t2_, t3_, t4_;
};

BigInt ecm_factor(const BigInt& n, std::uint32_t b1, std::uint64_t sigma, const std::vector<std::uint32_t>& primes) {
  EcmCurve curve(n);
  EcmCurve::Point q;
  BigInt g = curve.init(sigma, q);
  if (g != 0) return g;
  for (std::uint32_t p : primes) {
    if (p > b1) break;
    std::uint64_t pk = p;
    while (pk * p <= b1) pk *= p;
    q = curve.multiply(q, pk);
  }
  g = gcd(q.z, n);
  if (g != 1) return g == n ? BigInt(0) : g;

  // Stage 2: baby steps j Q (j odd, coprime to d, j < d/2), giant steps m d Q;
  // every prime in (b1, 100 b1] is m d +- j for some pair.
  const std::uint64_t d = 2310;
  const std::uint64_t b2 = std::uint64_t{b1} * 100;
  std::vector<EcmCurve::Point> baby;
  EcmCurve::Point q2, prev = q, cur;
  curve.dbl(q, q2);
  cur = curve.multiply(q, 3);
  baby.push_back(q);
  for (std::uint64_t j = 3; j < d / 2; j += 2) {
    if (std::gcd(j, d) == 1) baby.push_back(cur);
    EcmCurve::Point next;
    curve.add(cur, q2, prev, next);
    prev = cur;
    cur = next;
  }
  const EcmCurve::Point giant = curve.multiply(q, d);
  std::uint64_t m = std::max<std::uint64_t>(1, b1 / d);
  EcmCurve::Point gcur = curve.multiply(q, m * d), gprev;
  if (m > 1) gprev = curve.multiply(q, (m - 1) * d);
  BigInt acc = 1, t;
  for (; m * d <= b2 + d; ++m) {
    for (const auto& b : baby) {
      t = gcur.x * b.z - b.x * gcur.z;
      acc = acc * t % n;
    }
    EcmCurve::Point gnext;
    if (m == 1) curve.dbl(gcur, gnext);
    else curve.add(gcur, giant, gprev, gnext);
    gprev = gcur;
    gcur = gnext;
  }
  g = gcd(acc, n);
  return (g == 1 || g == n) ? BigInt(0) : g;
}

void split(const BigInt& n, const FactorLimits& limits, std::vector<BigInt>& primes, Factorization& out) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    primes.push_back(n);
    return;
  }
  BigInt root;
  if (mpz_perfect_power_p(n.get_mpz_t())) {
    for (unsigned k = 2; k < 128; ++k) {
      if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k)) {
        for (unsigned i = 0; i < k; ++i) split(root, limits, primes, out);
        return;
      }
    }
  }
  auto recurse = [&](const BigInt& d) {
    split(d, limits, primes, out);
    split(n / d, limits, primes, out);
  };
  BigInt d = pollard_brent(n, 0, limits.rho_iterations);
  if (d != 0 && d != 1 && d != n) return recurse(d);
  // Curve counts sized for factors of about 15, 20 and 25 digits.
  static const std::vector<std::uint32_t> small = primes_up_to(250'000);
  const std::pair<std::uint32_t, unsigned> schedule[] = {{2'000, 25}, {11'000, 90}, {50'000, 300}, {250'000, 700}};
  std::uint64_t sigma = 6;
  unsigned budget = limits.ecm_curves;
  for (const auto& [b1, curves] : schedule) {
    for (unsigned c = 0; c < curves && budget > 0; ++c, --budget) {
      d = ecm_factor(n, b1, sigma++, small);
      if (d != 0) return recurse(d);
    }
  }
  out.complete = false;
  out.unfactored.push_back(n);
}

}  // namespace

Factorization factor_integer(const BigInt& n, const FactorLimits& limits) {
  if (n == 0) throw UsageError("cannot factor zero");
  Factorization out;
  BigInt m = abs(n);
  std::vector<BigInt> primes;
  for (std::uint32_t p : primes_up_to(limits.trial_limit)) {
    if (BigInt(p) * p > m) break;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
      primes.push_back(BigInt(p));
    }
  }
  split(m, limits, primes, out);
  std::sort(primes.begin(), primes.end());
  for (const auto& p : primes) {
    if (!out.factors.empty() && out.factors.back().first == p)
      ++out.factors.back().second;
    else
      out.factors.emplace_back(p, 1);
  }
  return out;
}

std::uint64_t mod_pow(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  unsigned __int128 r = 1, x = b % p;
  while (e) {
    if (e & 1) r = r * x % p;
    x = x * x % p;
    e >>= 1;
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t p) {
  if (a % p == 0) throw UsageError("inverse of zero mod p");
  return mod_pow(a, p - 2, p);
}

namespace {
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}
}  // namespace

PolyFp poly_trim(PolyFp a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

PolyFp poly_from_integers(const std::vector<BigInt>& ascending, std::uint64_t p) {
  PolyFp out;
  for (const auto& c : ascending) {
    BigInt r = c % BigInt(static_cast<unsigned long>(p));
    if (r < 0) r += static_cast<unsigned long>(p);
    out.push_back(r.get_ui());
  }
  return poly_trim(out);
}

PolyFp poly_sub(const PolyFp& a, const PolyFp& b, std::uint64_t p) {
  PolyFp out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint64_t x = i < a.size() ? a[i] : 0;
    const std::uint64_t y = i < b.size() ? b[i] : 0;
    out[i] = (x + p - y) % p;
  }
  return poly_trim(out);
}

PolyFp poly_mul(const PolyFp& a, const PolyFp& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  PolyFp out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + mulmod(a[i], b[j], p)) % p;
  return poly_trim(out);
}

namespace {
// Long division; returns {quotient, remainder}.
std::pair<PolyFp, PolyFp> divmod(PolyFp a, const PolyFp& b, std::uint64_t p) {
  if (b.empty()) throw UsageError("polynomial division by zero");
  const std::uint64_t inv = mod_inverse(b.back(), p);
  a = poly_trim(a);
  if (a.size() < b.size()) return {{}, a};
  PolyFp q(a.size() - b.size() + 1, 0);
  for (std::size_t i = a.size(); i-- >= b.size();) {
    const std::uint64_t c = mulmod(a[i], inv, p);
    q[i - (b.size() - 1)] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      std::size_t k = i - (b.size() - 1) + j;
      a[k] = (a[k] + p - mulmod(c, b[j], p)) % p;
    }
  }
  a.resize(b.size() - 1);
  return {poly_trim(q), poly_trim(a)};
}
}  // namespace

PolyFp poly_rem(const PolyFp& a, const PolyFp& b, std::uint64_t p) { return divmod(a, b, p).second; }
PolyFp poly_div(const PolyFp& a, const PolyFp& b, std::uint64_t p) { return divmod(a, b, p).first; }

PolyFp poly_gcd(PolyFp a, PolyFp b, std::uint64_t p) {
  a = poly_trim(a);
  b = poly_trim(b);
  while (!b.empty()) {
    PolyFp r = poly_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.empty()) return a;
  const std::uint64_t inv = mod_inverse(a.back(), p);
  for (auto& c : a) c = mulmod(c, inv, p);
  return a;
}

PolyFp poly_derivative(const PolyFp& a, std::uint64_t p) {
  if (a.size() <= 1) return {};
  PolyFp out(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) out[i - 1] = mulmod(a[i], i % p, p);
  return poly_trim(out);
}

PolyFp poly_powmod(PolyFp base, std::uint64_t e, const PolyFp& m, std::uint64_t p) {
  PolyFp result{1};
  result = poly_rem(result, m, p);
  base = poly_rem(base, m, p);
  while (e) {
    if (e & 1) result = poly_rem(poly_mul(result, base, p), m, p);
    base = poly_rem(poly_mul(base, base, p), m, p);
    e >>= 1;
  }
  return result;
}

std::vector<unsigned> factor_degrees(const PolyFp& f_in, std::uint64_t p) {
  PolyFp f = poly_trim(f_in);
  if (f.size() < 2) throw UsageError("factor_degrees: degree must be >= 1");
  if (poly_gcd(f, poly_derivative(f, p), p).size() > 1) throw UsageError("factor_degrees: not squarefree mod p");
  std::vector<unsigned> degrees;
  const PolyFp x{0, 1};
  PolyFp h = poly_rem(x, f, p);  // x^{p^i} mod f
  for (unsigned i = 1; 2 * i <= f.size() - 1; ++i) {
    h = poly_powmod(h, p, f, p);
    PolyFp g = poly_gcd(f, poly_sub(h, x, p), p);
    if (g.size() > 1) {
      const unsigned deg = static_cast<unsigned>(g.size() - 1);
      for (unsigned k = 0; k < deg / i; ++k) degrees.push_back(i);
      f = poly_div(f, g, p);
      h = poly_rem(h, f, p);
    }
  }
  if (f.size() > 1) degrees.push_back(static_cast<unsigned>(f.size() - 1));
  std::sort(degrees.rbegin(), degrees.rend());
  return degrees;
}

std::vector<unsigned> factor_degrees_naive(const PolyFp& f_in, std::uint64_t p) {
  PolyFp f = poly_trim(f_in);
  if (f.size() < 2) throw UsageError("factor_degrees_naive: degree must be >= 1");
  std::vector<unsigned> degrees;
  for (unsigned d = 1; 2 * d <= f.size() - 1; ++d) {
    // Every monic polynomial of degree d, by counting in base p.
    PolyFp cand(d + 1, 0);
    cand[d] = 1;
    while (true) {
      while (f.size() - 1 >= d) {
        auto [q, r] = divmod(f, cand, p);
        if (!r.empty()) break;
        degrees.push_back(d);
        f = q;
      }
      std::size_t i = 0;
      while (i < d && ++cand[i] == p) cand[i++] = 0;
      if (i == d) break;
    }
  }
  if (f.size() > 1) degrees.push_back(static_cast<unsigned>(f.size() - 1));
  std::sort(degrees.rbegin(), degrees.rend());
  return degrees;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace discform
