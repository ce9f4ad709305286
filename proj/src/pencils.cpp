#include "discform/pencils.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "discform/errors.hpp"
#include "discform/ring_linalg.hpp"

namespace discform {

namespace {

BigInt reduce_mod(const BigInt& x, std::uint64_t p) {
  if (p == 0) return x;
  BigInt r = x % BigInt(static_cast<unsigned long>(p));
  if (r < 0) r += static_cast<unsigned long>(p);
  return r;
}

std::int64_t sign_of_disc(std::size_t n) { return ((n * (n - 1) / 2) % 2) ? -1 : 1; }

// det(A x - B y) as coefficients of x^{n-i} y^i.
template <typename T, typename Entry>
std::vector<T> pencil_determinant(std::size_t n, Entry entry) {
  if (n > 12) throw UsageError("pencil dimension above 12");
  std::vector<std::vector<T>> memo(std::size_t{1} << n);
  memo[0] = {T(1)};
  for (std::size_t s = 1; s < memo.size(); ++s) {
    const std::size_t k = static_cast<std::size_t>(__builtin_popcountll(s));
    std::vector<T> acc(k + 1, T(0));
    std::size_t pos = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!((s >> j) & 1u)) continue;
      const auto& minor = memo[s & ~(std::size_t{1} << j)];
      T a, b;
      entry(k - 1, j, a, b);  // entry = a x + b y
      const bool negative = (k - 1 + pos) % 2 == 1;
      for (std::size_t i = 0; i < minor.size(); ++i) {
        T ta = a * minor[i];
        T tb = b * minor[i];
        if (negative) {
          acc[i] -= ta;
          acc[i + 1] -= tb;
        } else {
          acc[i] += ta;
          acc[i + 1] += tb;
        }
      }
      ++pos;
    }
    memo[s] = std::move(acc);
  }
  return memo.back();
}

}  // namespace

BinaryForm::BinaryForm(std::vector<BigInt> coefficients, std::uint64_t prime) : coeffs(std::move(coefficients)), p(prime) {
  if (coeffs.empty()) throw UsageError("binary form needs at least one coefficient");
  if (p != 0 && !is_prime_u64(p)) throw UsageError("form modulus must be prime");
  for (auto& c : coeffs) c = reduce_mod(c, p);
}

bool BinaryForm::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](const BigInt& c) { return c == 0; });
}

BigInt BinaryForm::eval(const BigInt& x, const BigInt& y) const {
  const std::size_t n = degree();
  BigInt acc = 0;
  std::vector<BigInt> ypow(n + 1, 1);
  for (std::size_t i = 1; i <= n; ++i) ypow[i] = ypow[i - 1] * y;
  BigInt xpow = 1;
  for (std::size_t i = n + 1; i-- > 0;) {
    acc += coeffs[i] * xpow * ypow[i];
    xpow *= x;
  }
  return reduce_mod(acc, p);
}

BinaryForm BinaryForm::scaled(const BigInt& c) const {
  std::vector<BigInt> out;
  for (const auto& x : coeffs) out.push_back(x * c);
  return BinaryForm(std::move(out), p);
}

std::string BinaryForm::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < coeffs.size(); ++i) s += (i ? "," : "") + coeffs[i].get_str();
  s += "]";
  if (p) s += " mod " + std::to_string(p);
  return s;
}

Pencil::Pencil(std::size_t dim, std::vector<BigInt> a_in, std::vector<BigInt> b_in, std::uint64_t prime)
    : n(dim), a(std::move(a_in)), b(std::move(b_in)), p(prime) {
  if (n == 0 || a.size() != n * n || b.size() != n * n) throw UsageError("pencil matrices must be n x n");
  if (p != 0 && !is_prime_u64(p)) throw UsageError("pencil modulus must be prime");
  for (auto& x : a) x = reduce_mod(x, p);
  for (auto& x : b) x = reduce_mod(x, p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (a[i * n + j] != a[j * n + i] || b[i * n + j] != b[j * n + i])
        throw UsageError("pencil matrices must be symmetric");
}

BinaryForm disc_form(const Pencil& pencil) {
  auto det = pencil_determinant<BigInt>(pencil.n, [&](std::size_t i, std::size_t j, BigInt& x, BigInt& y) {
    x = pencil.at_a(i, j);
    y = -pencil.at_b(i, j);
  });
  const std::int64_t sign = sign_of_disc(pencil.n);
  for (auto& c : det) c *= sign;
  return BinaryForm(std::move(det), pencil.p);
}

BigInt determinant(std::vector<BigInt> m, std::size_t n) {
  if (m.size() != n * n) throw UsageError("determinant: shape mismatch");
  if (n == 0) return 1;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k * n + k] == 0) {
      std::size_t r = k + 1;
      while (r < n && m[r * n + k] == 0) ++r;
      if (r == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m[k * n + j], m[r * n + j]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        BigInt v = m[i * n + j] * m[k * n + k] - m[i * n + k] * m[k * n + j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m[i * n + j] = v;
      }
      m[i * n + k] = 0;
    }
    prev = m[k * n + k];
  }
  return sign * m[n * n - 1];
}

BigInt binary_discriminant(const BinaryForm& form) {
  const std::size_t n = form.degree();
  if (n < 1) throw UsageError("discriminant needs degree >= 1");
  if (form.is_zero()) return 0;
  std::vector<BigInt> f = form.coeffs;
  if (f[0] == 0) {
    // f(x, y + k x): coefficient of x^{n-j} y^j.
    BigInt k = 1;
    while (BinaryForm(f).eval(1, k) == 0) ++k;
    std::vector<BigInt> g(n + 1, 0);
    for (std::size_t i = 0; i <= n; ++i) {
      // f_i x^{n-i} (y + k x)^i = f_i sum_j C(i,j) k^{i-j} x^{n-j} y^j
      BigInt binom = 1;
      for (std::size_t j = 0; j <= i; ++j) {
        BigInt kp;
        mpz_pow_ui(kp.get_mpz_t(), k.get_mpz_t(), i - j);
        g[j] += f[i] * binom * kp;
        binom = binom * (i - j) / (j + 1);
      }
    }
    f = g;
  }
  // Sylvester matrix of F (degree n) and F' (degree n-1); F ascending in x is f reversed.
  const std::size_t size = 2 * n - 1;
  std::vector<BigInt> syl(size * size, 0);
  std::vector<BigInt> deriv(n);
  for (std::size_t i = 0; i < n; ++i) deriv[i] = f[i] * static_cast<unsigned long>(n - i);
  for (std::size_t r = 0; r < n - 1; ++r)
    for (std::size_t j = 0; j <= n; ++j) syl[r * size + r + j] = f[j];
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < n; ++j) syl[(n - 1 + r) * size + r + j] = deriv[j];
  BigInt res = determinant(std::move(syl), size);
  BigInt disc;
  mpz_divexact(disc.get_mpz_t(), res.get_mpz_t(), f[0].get_mpz_t());
  disc *= sign_of_disc(n);
  return reduce_mod(disc, form.p);
}

std::vector<std::vector<std::int64_t>> congruence_representatives(std::size_t n, std::uint64_t p) {
  if (!is_prime_u64(p)) throw UsageError("congruence representatives need a prime");
  std::vector<std::vector<std::int64_t>> out;
  out.emplace_back(n * n, 0);
  if (p == 2) {
    for (std::size_t r = 1; r <= n; ++r) {
      std::vector<std::int64_t> m(n * n, 0);
      for (std::size_t i = 0; i < r; ++i) m[i * n + i] = 1;
      out.push_back(m);
    }
    for (std::size_t k = 1; 2 * k <= n; ++k) {
      std::vector<std::int64_t> m(n * n, 0);
      for (std::size_t i = 0; i < k; ++i) {
        m[(2 * i) * n + 2 * i + 1] = 1;
        m[(2 * i + 1) * n + 2 * i] = 1;
      }
      out.push_back(m);
    }
    return out;
  }
  std::uint64_t nonsquare = 2;
  while (mod_pow(nonsquare, (p - 1) / 2, p) == 1) ++nonsquare;
  for (std::size_t r = 1; r <= n; ++r) {
    for (std::uint64_t d : {std::uint64_t{1}, nonsquare}) {
      std::vector<std::int64_t> m(n * n, 0);
      for (std::size_t i = 0; i + 1 < r; ++i) m[i * n + i] = 1;
      m[(r - 1) * n + r - 1] = static_cast<std::int64_t>(d);
      out.push_back(m);
    }
  }
  return out;
}

namespace {

std::int64_t det_mod(const std::vector<std::int64_t>& m, std::size_t n, std::uint64_t p) {
  std::vector<BigInt> big(m.begin(), m.end());
  BigInt d = determinant(big, n);
  return reduce_mod(d, p).get_si();
}

std::size_t rank_mod(const std::vector<std::int64_t>& m, std::size_t n, std::uint64_t p) {
  std::vector<std::int64_t> r(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) r[i] = static_cast<std::int64_t>(m[i] % static_cast<std::int64_t>(p));
  ModMatrix mm(Modulus(static_cast<std::uint32_t>(p), 1), n, n, r);
  return diagonalize(mm, false).rank;
}

bool is_square_mod(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0 || p == 2) return true;
  return mod_pow(a, (p - 1) / 2, p) == 1;
}

struct Hit {
  std::size_t rep = 0;
  std::vector<std::int64_t> b;
  std::uint64_t u = 1;
};

}  // namespace

std::optional<Pencil> pencil_search(const BinaryForm& f, const SearchLimits& limits) {
  const std::uint64_t p = f.p;
  const std::size_t n = f.degree();
  if (p == 0) throw UsageError("pencil_search works over F_p");
  if (f.is_zero()) throw UsageError("pencil_search: zero form");
  if (n < 1) throw UsageError("pencil_search: degree must be >= 1");
  if (p > limits.max_p || n > limits.max_n) throw ResourceError("pencil_search: p or n above the configured caps");

  const std::uint64_t f0 = f.coeffs[0].get_ui();
  const std::int64_t sign = sign_of_disc(n);
  std::vector<std::size_t> reps_ok;
  const auto reps = congruence_representatives(n, p);
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const std::size_t rk = rank_mod(reps[i], n, p);
    if (f0 == 0) {
      if (rk < n) reps_ok.push_back(i);
    } else if (rk == n) {
      const std::uint64_t lead = static_cast<std::uint64_t>(((sign * det_mod(reps[i], n, p)) % static_cast<std::int64_t>(p) + static_cast<std::int64_t>(p)) % static_cast<std::int64_t>(p));
      if (is_square_mod(lead, p) == is_square_mod(f0, p)) reps_ok.push_back(i);
    }
  }
  const std::size_t free = n * (n + 1) / 2;
  double space = static_cast<double>(reps_ok.size());
  for (std::size_t i = 0; i < free; ++i) space *= static_cast<double>(p);
  if (space > static_cast<double>(limits.max_candidates)) throw ResourceError("pencil_search: search space above cap");

  // u^2 f for every unit u, keyed by coefficients in base p.
  auto key_of = [p](const std::vector<std::int64_t>& c) {
    std::uint64_t k = 0;
    for (auto x : c) k = k * p + static_cast<std::uint64_t>(x);
    return k;
  };
  std::unordered_map<std::uint64_t, std::uint64_t> targets;
  for (std::uint64_t u = 1; u < p; ++u) {
    std::vector<std::int64_t> c;
    for (const auto& x : f.coeffs) c.push_back(static_cast<std::int64_t>((x.get_ui() * u % p) * u % p));
    targets.emplace(key_of(c), u);
  }

  auto search_rep = [&](std::size_t rep_index) -> std::optional<Hit> {
    const auto& a = reps[rep_index];
    std::vector<std::int64_t> b(n * n, 0), upper(free, 0);
    std::vector<std::int64_t> coeffs(n + 1);
    while (true) {
      std::size_t idx = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
          b[i * n + j] = upper[idx];
          b[j * n + i] = upper[idx];
          ++idx;
        }
      auto det = pencil_determinant<std::int64_t>(n, [&](std::size_t i, std::size_t j, std::int64_t& x, std::int64_t& y) {
        x = a[i * n + j];
        y = -b[i * n + j];
      });
      for (std::size_t i = 0; i <= n; ++i) {
        std::int64_t v = (sign * det[i]) % static_cast<std::int64_t>(p);
        coeffs[i] = v < 0 ? v + static_cast<std::int64_t>(p) : v;
      }
      auto it = targets.find(key_of(coeffs));
      if (it != targets.end()) return Hit{rep_index, b, it->second};
      std::size_t k = free;
      while (k > 0) {
        --k;
        if (++upper[k] < static_cast<std::int64_t>(p)) break;
        upper[k] = 0;
        if (k == 0) return std::nullopt;
      }
      if (free == 0) return std::nullopt;
    }
  };

  std::vector<std::optional<Hit>> hits(reps_ok.size());
  const unsigned threads = std::max(1u, std::min<unsigned>(limits.threads, static_cast<unsigned>(reps_ok.size())));
  if (threads <= 1) {
    for (std::size_t i = 0; i < reps_ok.size(); ++i) {
      hits[i] = search_rep(reps_ok[i]);
      if (hits[i]) break;
    }
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < reps_ok.size(); i += threads) hits[i] = search_rep(reps_ok[i]);
      });
    for (auto& th : pool) th.join();
  }
  for (const auto& h : hits) {
    if (!h) continue;
    // Congruence by T = diag(1/u, 1, ..., 1) turns u^2 f into f.
    const std::uint64_t uinv = mod_inverse(h->u, p);
    const auto& a = reps[h->rep];
    std::vector<BigInt> ta(n * n), tb(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::uint64_t scale = (i == 0 ? uinv : 1) * (j == 0 ? uinv : 1) % p;
        ta[i * n + j] = static_cast<unsigned long>(static_cast<std::uint64_t>(a[i * n + j]) * scale % p);
        tb[i * n + j] = static_cast<unsigned long>(static_cast<std::uint64_t>(h->b[i * n + j]) * scale % p);
      }
    Pencil witness(n, ta, tb, p);
    if (!(disc_form(witness) == f)) throw std::logic_error("pencil_search: witness does not reproduce the form");
    return witness;
  }
  return std::nullopt;
}

ScalingReport scaling_harness(const BinaryForm& f, std::uint64_t c, const SearchLimits& limits) {
  if (f.p == 0 || c % f.p == 0) throw UsageError("scaling_harness: c must be a unit mod p");
  ScalingReport r;
  r.base_found = pencil_search(f, limits).has_value();
  r.scaled_found = pencil_search(f.scaled(BigInt(static_cast<unsigned long>(c * c))), limits).has_value();
  return r;
}

}  // namespace discform
