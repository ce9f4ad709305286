#include "discform/local_global.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <thread>

#include "discform/errors.hpp"
#include "discform/ring_linalg.hpp"

namespace discform {

namespace {

using Poly = std::vector<BigInt>;  // ascending

// Coefficients of f(t0 + u) in u.
Poly taylor_shift(Poly f, const BigInt& t0) {
  const std::size_t n = f.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j-- > i;) f[j] += t0 * f[j + 1];
  return f;
}

// f(t, 1) and f(1, t) as univariate polynomials.
Poly affine_patch(const BinaryForm& f) {
  Poly out(f.coeffs.rbegin(), f.coeffs.rend());
  return out;
}
Poly infinity_patch(const BinaryForm& f) { return f.coeffs; }

BigInt pow_ui(std::uint64_t p, unsigned e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, e);
  return r;
}

unsigned v2_of_2(std::uint64_t p) { return p == 2 ? 1 : 0; }

// h0 != 0 is a square in Q_p.
bool is_padic_square(const BigInt& h0, std::uint64_t p) {
  const unsigned v = valuation(h0, p);
  if (v % 2) return false;
  BigInt u = h0 / pow_ui(p, v);
  if (p == 2) {
    BigInt r = u % 8;
    if (r < 0) r += 8;
    return r == 1;
  }
  BigInt r = u % BigInt(static_cast<unsigned long>(p));
  if (r < 0) r += static_cast<unsigned long>(p);
  return mod_pow(r.get_ui(), (p - 1) / 2, p) == 1;
}

void require_squarefree(const BinaryForm& f) {
  if (f.p != 0) throw UsageError("local tests need an integer form");
  if (f.degree() < 1 || f.is_zero()) throw UsageError("local tests need a nonzero form of degree >= 1");
  if (binary_discriminant(f) == 0) throw UsageError("form is not square-free (discriminant 0)");
}

struct DiscSearch {
  std::uint64_t p;
  unsigned bound;
  unsigned depth = 0;
  std::size_t undecided = 0;
};

// Returns true when some disc t0 + p^k Z_p (descending from the start node)
// contains a point with F a square.
bool search_patch(const Poly& f, std::uint64_t p, BigInt start, unsigned start_k, DiscSearch& st, std::string& how) {
  struct Node {
    BigInt t0;
    unsigned k;
  };
  std::vector<Node> stack{{std::move(start), start_k}};
  const unsigned slack = 1 + 2 * v2_of_2(p);
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    st.depth = std::max(st.depth, node.k);
    Poly shifted = taylor_shift(f, node.t0);
    const BigInt& h0 = shifted[0];
    if (h0 == 0) {
      how = "root at t=" + node.t0.get_str();
      return true;
    }
    const unsigned a = valuation(h0, p);
    if (shifted.size() > 1 && shifted[1] != 0 && a > 2 * valuation(shifted[1], p)) {
      how = "Hensel root near t=" + node.t0.get_str();
      return true;
    }
    // Valuations of the coefficients of h(s) = f(t0 + p^k s).
    bool decided = true;
    for (std::size_t i = 1; i < shifted.size(); ++i) {
      if (shifted[i] == 0) continue;
      const unsigned vi = valuation(shifted[i], p) + static_cast<unsigned>(i) * node.k;
      if (vi < a + slack) {
        decided = false;
        break;
      }
    }
    if (decided) {
      if (is_padic_square(h0, p)) {
        how = "square value at t=" + node.t0.get_str();
        return true;
      }
      continue;
    }
    if (node.k >= st.bound) {
      ++st.undecided;
      continue;
    }
    const BigInt step = pow_ui(p, node.k);
    for (std::uint64_t j = p; j-- > 0;) stack.push_back({node.t0 + step * static_cast<unsigned long>(j), node.k + 1});
  }
  return false;
}

// For f mod p = y^k g(x, y) with g(1, 0) = a != 0: returns a when k is even and
// g / a is the square of a monic form, nullopt when f mod p is not a constant
// times a square. p odd, f mod p nonzero.
std::optional<BigInt> square_reduction_constant(const std::vector<BigInt>& reduced, const BigInt& p) {
  std::size_t k = 0;
  while (reduced[k] == 0) ++k;
  if (k % 2 == 1) return std::nullopt;
  const std::size_t m = reduced.size() - 1 - k;
  if (m % 2 == 1) return std::nullopt;
  BigInt inv;
  mpz_invert(inv.get_mpz_t(), reduced[k].get_mpz_t(), p.get_mpz_t());
  std::vector<BigInt> monic(m + 1);
  for (std::size_t i = 0; i <= m; ++i) monic[i] = reduced[k + i] * inv % p;
  const BigInt half = (p + 1) / 2;
  // Square root by matching coefficients from the top.
  std::vector<BigInt> root(m / 2 + 1, 0);
  root[0] = 1;
  for (std::size_t i = 1; i <= m / 2; ++i) {
    BigInt acc = monic[i];
    for (std::size_t j = 1; j < i; ++j) acc -= root[j] * root[i - j];
    root[i] = acc * half % p;
    if (root[i] < 0) root[i] += p;
  }
  for (std::size_t i = 0; i <= m; ++i) {
    BigInt acc = 0;
    for (std::size_t j = (i > m / 2 ? i - m / 2 : 0); j <= std::min(i, m / 2); ++j) acc += root[j] * root[i - j];
    if ((acc - monic[i]) % p != 0) return std::nullopt;
  }
  return reduced[k];
}

}  // namespace

std::string to_string(LocalMethod m) {
  switch (m) {
    case LocalMethod::NegDefiniteTest: return "NegDefiniteTest";
    case LocalMethod::ResidueLift: return "ResidueLift";
    case LocalMethod::WeilBoundSkip: return "WeilBoundSkip";
  }
  return "?";
}

std::string to_string(ElsStatus s) {
  switch (s) {
    case ElsStatus::Solvable: return "solvable";
    case ElsStatus::NotSolvable: return "not_solvable";
    case ElsStatus::Unknown: return "unknown";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::DiscForm: return "DiscForm";
    case Verdict::LocalObstruction: return "LocalObstruction";
    case Verdict::Unknown: return "Unknown";
    case Verdict::NotSquareFree: return "NotSquareFree";
  }
  return "?";
}

std::string to_string(Reason r) {
  switch (r) {
    case Reason::None: return "none";
    case Reason::OddDegree: return "OddDegree";
    case Reason::RationalPoint: return "RationalPoint";
    case Reason::LocalGlobal: return "LocalGlobal";
  }
  return "?";
}

LocalVerdict real_obstruction(const BinaryForm& f) {
  require_squarefree(f);
  LocalVerdict v;
  v.place = Place{0};
  v.method = LocalMethod::NegDefiniteTest;
  const std::size_t n = f.degree();
  if (n % 2 == 1) {
    v.solvable = true;
    v.detail = "odd degree";
    return v;
  }
  if (f.coeffs[0] >= 0) {
    v.solvable = true;
    v.detail = f.coeffs[0] == 0 ? "root at infinity" : "positive leading coefficient";
    return v;
  }
  // Sturm sequence of F(x) = f(x, 1), degree n since f0 != 0.
  using Q = std::vector<mpq_class>;
  auto trim = [](Q& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
  };
  Q p0(n + 1), p1;
  for (std::size_t i = 0; i <= n; ++i) p0[i] = f.coeffs[n - i];
  for (std::size_t i = 1; i <= n; ++i) p1.push_back(p0[i] * static_cast<long>(i));
  trim(p1);
  std::vector<Q> seq{p0, p1};
  while (seq.back().size() > 1) {
    Q r = seq[seq.size() - 2];
    const Q& d = seq.back();
    while (r.size() >= d.size()) {
      mpq_class c = r.back() / d.back();
      const std::size_t shift = r.size() - d.size();
      for (std::size_t i = 0; i < d.size(); ++i) r[shift + i] -= c * d[i];
      r.pop_back();
      trim(r);
      if (r.empty()) break;
    }
    if (r.empty()) break;
    for (auto& x : r) x = -x;
    seq.push_back(r);
  }
  auto changes = [&](bool at_plus) {
    int last = 0, count = 0;
    for (const auto& q : seq) {
      if (q.empty()) continue;
      int s = sgn(q.back());
      if (!at_plus && (q.size() - 1) % 2 == 1) s = -s;
      if (s != 0 && last != 0 && s != last) ++count;
      if (s != 0) last = s;
    }
    return count;
  };
  const int roots = changes(false) - changes(true);
  v.solvable = roots > 0;
  v.detail = roots > 0 ? std::to_string(roots) + " real roots" : "negative definite";
  return v;
}

unsigned qp_depth_bound(const BinaryForm& f, std::uint64_t p) {
  return 2 * v2_of_2(p) + valuation(binary_discriminant(f), p) + 1;
}

LocalVerdict qp_solvable(const BinaryForm& f, std::uint64_t p, unsigned extra_depth) {
  require_squarefree(f);
  if (!is_prime_u64(p)) throw UsageError("qp_solvable: p must be prime");
  if (p > 1'000'000) throw ResourceError("qp_solvable: residue enumeration above 10^6");
  LocalVerdict v;
  v.place = Place{p};
  v.method = LocalMethod::ResidueLift;
  if (f.degree() % 2 == 1) {
    v.solvable = true;
    v.detail = "odd degree";
    return v;
  }
  DiscSearch st{p, qp_depth_bound(f, p) + extra_depth};
  std::string how;
  if (search_patch(affine_patch(f), p, 0, 0, st, how) ||
      search_patch(infinity_patch(f), p, 0, 1, st, how)) {
    v.solvable = true;
    v.detail = how;
  } else {
    v.solvable = false;
    v.detail = st.undecided ? "depth bound reached" : "no square value";
  }
  v.depth = st.depth;
  v.undecided = st.undecided;
  return v;
}

std::uint64_t weil_threshold(std::size_t n) {
  const std::uint64_t g = n >= 2 ? (n - 2) / 2 : 0;
  return next_prime_after((4 * g + 2) * (4 * g + 2));
}

std::optional<LocalVerdict> large_prime_check(const BinaryForm& f, const BigInt& p) {
  const std::size_t n = f.degree();
  if (p <= weil_threshold(n) || p <= n) throw UsageError("large_prime_check needs p above the threshold");
  std::vector<BigInt> red(f.coeffs.size());
  bool zero = true;
  for (std::size_t i = 0; i <= n; ++i) {
    mpz_fdiv_r(red[i].get_mpz_t(), f.coeffs[i].get_mpz_t(), p.get_mpz_t());
    zero = zero && red[i] == 0;
  }
  if (zero) return std::nullopt;
  LocalVerdict v;
  v.place = Place{p};
  v.method = LocalMethod::ResidueLift;
  const auto lead = square_reduction_constant(red, p);
  if (!lead) {
    v.solvable = true;
    v.detail = "smooth residue point (reduction not a square)";
    return v;
  }
  if (mpz_legendre(lead->get_mpz_t(), p.get_mpz_t()) == 1) {
    v.solvable = true;
    v.detail = "smooth residue point (square reduction)";
    return v;
  }
  return std::nullopt;
}

FactorCache::FactorCache(std::string directory) : dir_(std::move(directory)) {
  std::filesystem::create_directories(dir_);
}

std::optional<Factorization> FactorCache::lookup(const BigInt& n) const {
  std::lock_guard<std::mutex> lock(mutex_);
  const auto path = std::filesystem::path(dir_) / ("disc_" + BigInt(abs(n)).get_str() + ".json");
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    nlohmann::json j = nlohmann::json::parse(in);
    Factorization f;
    BigInt check = 1;
    for (const auto& e : j.at("factors")) {
      BigInt p(e.at(0).get<std::string>());
      unsigned k = e.at(1).get<unsigned>();
      f.factors.emplace_back(p, k);
      for (unsigned i = 0; i < k; ++i) check *= p;
    }
    if (check != abs(n)) return std::nullopt;
    return f;
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

void FactorCache::store(const BigInt& n, const Factorization& f) const {
  if (!f.complete) return;
  std::lock_guard<std::mutex> lock(mutex_);
  nlohmann::json j;
  j["n"] = BigInt(abs(n)).get_str();
  j["factors"] = nlohmann::json::array();
  for (const auto& [p, k] : f.factors) j["factors"].push_back({p.get_str(), k});
  const auto path = std::filesystem::path(dir_) / ("disc_" + BigInt(abs(n)).get_str() + ".json");
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    out << j.dump();
  }
  std::filesystem::rename(tmp, path);
}

ElsResult everywhere_locally_solvable(const BinaryForm& f, const CertifyOptions& options) {
  require_squarefree(f);
  ElsResult r;
  const std::size_t n = f.degree();
  r.weil_threshold = weil_threshold(n);
  LocalVerdict real = real_obstruction(f);
  r.audit.push_back(real);
  if (!real.solvable) {
    r.status = ElsStatus::NotSolvable;
    r.obstruction = Place{0};
    return r;
  }
  if (n % 2 == 1) {
    r.status = ElsStatus::Solvable;
    return r;
  }
  const BigInt disc2 = 2 * binary_discriminant(f);
  std::optional<Factorization> fac;
  if (options.cache) fac = options.cache->lookup(disc2);
  if (!fac) {
    fac = factor_integer(disc2, options.factor_limits);
    if (options.cache) options.cache->store(disc2, *fac);
  }
  std::set<std::uint64_t> small;
  for (std::uint32_t p : primes_up_to(static_cast<std::uint32_t>(r.weil_threshold))) small.insert(p);
  std::vector<BigInt> large;
  for (const auto& [p, k] : fac->factors) {
    if (p <= r.weil_threshold)
      small.insert(p.get_ui());
    else
      large.push_back(p);
  }
  bool unknown = !fac->complete;
  r.unfactored = fac->unfactored;
  for (std::uint64_t p : small) {
    LocalVerdict v = qp_solvable(f, p);
    r.audit.push_back(v);
    if (!v.solvable) {
      r.status = ElsStatus::NotSolvable;
      r.obstruction = Place{p};
      return r;
    }
  }
  for (const BigInt& p : large) {
    auto v = large_prime_check(f, p);
    if (!v && p <= 1'000'000) v = qp_solvable(f, p.get_ui());
    if (!v) {
      unknown = true;
      continue;
    }
    r.audit.push_back(*v);
    if (!v->solvable) {
      r.status = ElsStatus::NotSolvable;
      r.obstruction = Place{p};
      return r;
    }
  }
  r.status = unknown ? ElsStatus::Unknown : ElsStatus::Solvable;
  return r;
}

std::vector<unsigned> frobenius_cycle_type(const BinaryForm& f, std::uint64_t p) {
  if (f.p != 0) throw UsageError("frobenius_cycle_type needs an integer form");
  if (!is_prime_u64(p)) throw UsageError("frobenius_cycle_type: p must be prime");
  const BigInt pb(static_cast<unsigned long>(p));
  if (f.coeffs[0] % pb == 0 || binary_discriminant(f) % pb == 0)
    throw UsageError("frobenius_cycle_type: p divides f0 * disc(f)");
  return factor_degrees(poly_from_integers(affine_patch(f), p), p);
}

GaloisCertificate certify_sn(const BinaryForm& f, std::size_t max_primes) {
  require_squarefree(f);
  const std::size_t n = f.degree();
  if (n < 3) throw UsageError("certify_sn needs n >= 3");
  const BigInt bad = f.coeffs[0] * binary_discriminant(f);
  GaloisCertificate cert;
  std::optional<std::pair<std::uint64_t, std::vector<unsigned>>> full, almost, transposition;
  std::uint64_t p = 1;
  while (cert.primes_scanned < max_primes && !(full && almost && transposition)) {
    p = next_prime_after(p);
    ++cert.primes_scanned;
    if (bad % BigInt(static_cast<unsigned long>(p)) == 0) continue;
    auto type = frobenius_cycle_type(f, p);
    if (!full && type.size() == 1) full = {{p, type}};
    if (!almost && type.size() == 2 && type[0] == n - 1) almost = {{p, type}};
    if (!transposition) {
      const auto twos = std::count(type.begin(), type.end(), 2u);
      const bool others_odd = std::all_of(type.begin(), type.end(), [](unsigned c) { return c == 2 || c % 2 == 1; });
      if (twos == 1 && others_odd) transposition = {{p, type}};
    }
  }
  if (full && almost && transposition) {
    cert.certified = true;
    for (const auto& w : {*full, *almost, *transposition}) {
      cert.primes.push_back(w.first);
      cert.cycle_types.push_back(w.second);
    }
  }
  return cert;
}

std::optional<std::pair<BigInt, BigInt>> find_rational_point(const BinaryForm& f, int bound) {
  auto square = [](const BigInt& v) { return v >= 0 && mpz_perfect_square_p(v.get_mpz_t()); };
  if (square(f.coeffs.front())) return std::make_pair(BigInt(1), BigInt(0));
  if (square(f.coeffs.back())) return std::make_pair(BigInt(0), BigInt(1));
  for (int h = 1; h <= bound; ++h) {
    // Points with max(|a|, b) = h, b >= 1, in a fixed order.
    for (int b = 1; b <= h; ++b)
      for (int a = -h; a <= h; ++a) {
        if (std::max(std::abs(a), b) != h || std::gcd(a, b) != 1) continue;
        if (square(f.eval(a, b))) return std::make_pair(BigInt(a), BigInt(b));
      }
  }
  return std::nullopt;
}

GlobalCertificate certify_discriminant_form(const BinaryForm& f, const CertifyOptions& options) {
  if (f.p != 0) throw UsageError("certify needs an integer form");
  if (f.degree() < 1 || f.is_zero()) throw UsageError("certify needs a nonzero form of degree >= 1");
  GlobalCertificate c;
  if (binary_discriminant(f) == 0) {
    c.verdict = Verdict::NotSquareFree;
    return c;
  }
  if (f.degree() % 2 == 1) {
    c.verdict = Verdict::DiscForm;
    c.reason = Reason::OddDegree;
    return c;
  }
  if (auto pt = find_rational_point(f, options.point_search_bound)) {
    c.verdict = Verdict::DiscForm;
    c.reason = Reason::RationalPoint;
    c.point = pt;
    return c;
  }
  c.els = everywhere_locally_solvable(f, options);
  if (c.els->status == ElsStatus::NotSolvable) {
    c.verdict = Verdict::LocalObstruction;
    c.obstruction = c.els->obstruction;
    return c;
  }
  if (c.els->status == ElsStatus::Unknown || f.degree() < 3) {
    c.verdict = Verdict::Unknown;
    return c;
  }
  c.galois = certify_sn(f, options.max_primes);
  if (c.galois->certified) {
    c.verdict = Verdict::DiscForm;
    c.reason = Reason::LocalGlobal;
  } else {
    c.verdict = Verdict::Unknown;
  }
  return c;
}

nlohmann::json GlobalCertificate::to_json() const {
  nlohmann::json j;
  j["verdict"] = to_string(verdict);
  j["reason"] = to_string(reason);
  nlohmann::json w;
  w["primes"] = nlohmann::json::array();
  w["cycle_types"] = nlohmann::json::array();
  if (galois && galois->certified) {
    for (auto p : galois->primes) w["primes"].push_back(std::to_string(p));
    for (const auto& t : galois->cycle_types) w["cycle_types"].push_back(t);
  }
  w["point"] = point ? nlohmann::json::array({point->first.get_str(), point->second.get_str()}) : nlohmann::json();
  j["witnesses"] = w;
  j["obstruction"] = obstruction ? nlohmann::json(obstruction->to_string()) : nlohmann::json();
  j["audit"] = nlohmann::json::array();
  if (els) {
    for (const auto& v : els->audit)
      j["audit"].push_back({{"place", v.place.to_string()},
                            {"solvable", v.solvable},
                            {"method", to_string(v.method)},
                            {"depth", v.depth},
                            {"detail", v.detail}});
    j["els"] = to_string(els->status);
    j["weil_threshold"] = std::to_string(els->weil_threshold);
    j["weil_skip"] = {{"method", to_string(LocalMethod::WeilBoundSkip)},
                      {"primes", "p > " + std::to_string(els->weil_threshold) + " not dividing 2*disc"}};
    j["unfactored"] = nlohmann::json::array();
    for (const auto& u : els->unfactored) j["unfactored"].push_back(u.get_str());
  }
  if (galois) {
    j["galois"] = galois->certified ? "CertifiedSn" : "Inconclusive";
    j["galois_primes_scanned"] = galois->primes_scanned;
  }
  return j;
}

Proportion wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  Proportion p;
  p.successes = successes;
  p.trials = trials;
  if (trials == 0) return p;
  const double nn = static_cast<double>(trials);
  const double ph = static_cast<double>(successes) / nn;
  const double denom = 1 + z * z / nn;
  const double centre = (ph + z * z / (2 * nn)) / denom;
  const double half = z * std::sqrt(ph * (1 - ph) / nn + z * z / (4 * nn * nn)) / denom;
  p.estimate = ph;
  p.low = std::max(0.0, centre - half);
  p.high = std::min(1.0, centre + half);
  return p;
}

BinaryForm sample_form(std::size_t n, std::uint64_t height, std::uint64_t seed, std::uint64_t index) {
  std::mt19937_64 gen(splitmix64(splitmix64(seed) ^ index));
  const auto h = static_cast<std::int64_t>(height);
  std::vector<BigInt> c;
  for (std::size_t i = 0; i <= n; ++i) {
    // Rejection sampling keeps the draw independent of library distributions.
    const std::uint64_t range = 2 * height + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t x;
    do x = gen();
    while (x >= limit);
    c.push_back(BigInt(static_cast<long>(static_cast<std::int64_t>(x % range) - h)));
  }
  return BinaryForm(std::move(c));
}

DensityReport density_estimate(std::size_t n, std::uint64_t height, std::uint64_t samples, std::uint64_t seed,
                               unsigned threads, const CertifyOptions& options) {
  if (n < 3) throw UsageError("density needs n >= 3");
  if (height < 1) throw UsageError("density needs height >= 1");
  struct Outcome {
    bool squarefree = false;
    Verdict verdict = Verdict::Unknown;
    Reason reason = Reason::None;
    ElsStatus els = ElsStatus::Unknown;
  };
  std::vector<Outcome> outcomes(samples);
  auto work = [&](std::uint64_t i) {
    BinaryForm f = sample_form(n, height, seed, i);
    Outcome& o = outcomes[i];
    if (f.is_zero() || binary_discriminant(f) == 0) return;
    o.squarefree = true;
    GlobalCertificate c = certify_discriminant_form(f, options);
    o.verdict = c.verdict;
    o.reason = c.reason;
    if (c.reason == Reason::OddDegree || c.reason == Reason::RationalPoint)
      o.els = ElsStatus::Solvable;
    else if (c.els)
      o.els = c.els->status;
  };
  const unsigned t = std::max(1u, threads);
  if (t == 1) {
    for (std::uint64_t i = 0; i < samples; ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < t; ++k)
      pool.emplace_back([&, k] {
        for (std::uint64_t i = k; i < samples; i += t) work(i);
      });
    for (auto& th : pool) th.join();
  }
  DensityReport r;
  r.n = n;
  r.height = height;
  r.samples = samples;
  r.seed = seed;
  for (const auto& o : outcomes) {
    if (!o.squarefree) {
      ++r.not_squarefree;
      continue;
    }
    const bool certified = o.verdict == Verdict::DiscForm;
    r.certified += certified;
    if (certified) ++r.reasons[to_string(o.reason)];
    r.local_obstruction += o.verdict == Verdict::LocalObstruction;
    if (o.els == ElsStatus::Solvable) {
      ++r.els;
      r.els_certified += certified;
    }
    r.els_unknown += o.els == ElsStatus::Unknown;
  }
  const std::uint64_t used = samples - r.not_squarefree;
  r.proportion_certified = wilson_interval(r.certified, used);
  r.proportion_els = wilson_interval(r.els, used);
  r.certified_among_els = wilson_interval(r.els_certified, r.els);
  return r;
}

nlohmann::json DensityReport::to_json() const {
  auto prop = [](const Proportion& p) {
    return nlohmann::json{{"successes", p.successes},
                          {"trials", p.trials},
                          {"estimate", p.estimate},
                          {"wilson_ci", {p.low, p.high}},
                          {"half_width", p.half_width()}};
  };
  nlohmann::json j;
  j["n"] = n;
  j["height"] = height;
  j["samples"] = samples;
  j["seed"] = seed;
  j["not_squarefree"] = not_squarefree;
  j["certified"] = certified;
  j["els"] = els;
  j["els_unknown"] = els_unknown;
  j["local_obstruction"] = local_obstruction;
  j["els_certified"] = els_certified;
  j["reasons"] = reasons;
  j["proportion_certified"] = prop(proportion_certified);
  j["proportion_els"] = prop(proportion_els);
  j["certified_among_els"] = prop(certified_among_els);
  return j;
}

}  // namespace discform
