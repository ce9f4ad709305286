#include "discform/cohomology.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "discform/errors.hpp"

namespace discform {

namespace {

ModMatrix minus_identity(const ModMatrix& a) { return a - ModMatrix::identity(a.modulus(), a.rows()); }

std::vector<Cocycle> to_cocycles(const GModulePtr& m, const std::vector<ModVector>& vs) {
  std::vector<Cocycle> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(unflatten(m, v));
  return out;
}

void check_cocycle_shape(const Cocycle& xi) {
  if (!xi.module) throw UsageError("cocycle without module");
  const GModule& m = *xi.module;
  if (xi.gen_values.size() != m.group().num_generators()) throw UsageError("cocycle needs one value per generator");
  for (const auto& v : xi.gen_values) {
    if (!(v.modulus == m.modulus()) || v.size() != m.rank()) throw UsageError("cocycle values must lie in the module");
  }
}

}  // namespace

unsigned H1Report::order_log() const {
  QuotientStructure q{invariant_factors, {}};
  return q.order_log(module->modulus().p());
}

unsigned H1Report::hstar_order_log() const {
  QuotientStructure q{hstar_factors, {}};
  return q.order_log(module->modulus().p());
}

ModVector flatten(const Cocycle& xi) {
  check_cocycle_shape(xi);
  const std::size_t d = xi.module->rank();
  ModVector out(xi.module->modulus(), xi.gen_values.size() * d);
  for (std::size_t s = 0; s < xi.gen_values.size(); ++s)
    for (std::size_t i = 0; i < d; ++i) out[s * d + i] = xi.gen_values[s][i];
  return out;
}

Cocycle unflatten(const GModulePtr& m, const ModVector& v) {
  const std::size_t d = m->rank();
  const std::size_t k = m->group().num_generators();
  if (v.size() != k * d) throw UsageError("unflatten: length is not k*d");
  Cocycle xi{m, {}};
  for (std::size_t s = 0; s < k; ++s) {
    ModVector val(m->modulus(), d);
    for (std::size_t i = 0; i < d; ++i) val[i] = v[s * d + i];
    xi.gen_values.push_back(std::move(val));
  }
  return xi;
}

Cocycle zero_cocycle(const GModulePtr& m) {
  return Cocycle{m, std::vector<ModVector>(m->group().num_generators(), ModVector(m->modulus(), m->rank()))};
}

Cocycle add(const Cocycle& a, const Cocycle& b) {
  if (a.module != b.module) throw UsageError("cocycles on different modules");
  Cocycle out = a;
  for (std::size_t s = 0; s < out.gen_values.size(); ++s) out.gen_values[s] += b.gen_values[s];
  return out;
}

Cocycle scale(const Cocycle& a, Residue c) {
  Cocycle out = a;
  for (auto& v : out.gen_values) v = v.scaled(c);
  return out;
}

Cocycle coboundary_of(const GModulePtr& m, const ModVector& q) {
  if (q.size() != m->rank()) throw UsageError("coboundary: vector not in module");
  Cocycle xi{m, {}};
  for (std::size_t s = 0; s < m->group().num_generators(); ++s) xi.gen_values.push_back(m->generator_action(s) * q - q);
  return xi;
}

namespace detail {

std::vector<ModVector> z1_vectors_generic(const GModule& m) {
  const FiniteGroup& g = m.group();
  const Modulus& md = m.modulus();
  const std::size_t d = m.rank();
  const std::size_t k = g.num_generators();
  const std::size_t cols = k * d;
  const std::size_t stride = d * cols;
  // forms[e][i] is the linear form (in the generator values) of coordinate i of xi(e).
  std::vector<Residue> forms(g.order() * stride, 0);
  for (std::size_t e = 1; e < g.order(); ++e) {
    const TreeEdge& t = g.tree_edge(e);
    std::copy_n(forms.begin() + t.parent * stride, stride, forms.begin() + e * stride);
    const ModMatrix& rho = m.element_action(t.parent);
    for (std::size_t i = 0; i < d; ++i) {
      Residue* row = forms.data() + e * stride + i * cols;
      for (std::size_t j = 0; j < d; ++j) {
        Residue& x = row[t.generator * d + j];
        x = md.add(x, rho(i, j));
      }
    }
  }
  RowReducer reducer(md, cols);
  std::vector<Residue> row(cols);
  for (const CayleyEdge& c : g.cycle_edges()) {
    const std::size_t target = g.times_generator(c.element, c.generator);
    const ModMatrix& rho = m.element_action(c.element);
    for (std::size_t i = 0; i < d; ++i) {
      const Residue* ft = forms.data() + target * stride + i * cols;
      const Residue* fe = forms.data() + c.element * stride + i * cols;
      for (std::size_t j = 0; j < cols; ++j) row[j] = md.sub(ft[j], fe[j]);
      for (std::size_t j = 0; j < d; ++j) {
        Residue& x = row[c.generator * d + j];
        x = md.sub(x, rho(i, j));
      }
      reducer.add_row(row);
    }
  }
  return detail::kernel_generators_generic(reducer.matrix());
}

std::vector<ModVector> z1_vectors_f2(const GModule& m) {
  const FiniteGroup& g = m.group();
  const Modulus& md = m.modulus();
  if (md.m() != 2) throw UsageError("bit-packed cocycle solver needs modulus 2");
  const std::size_t d = m.rank();
  const std::size_t k = g.num_generators();
  const std::size_t cols = k * d;
  const std::size_t words = (cols + 63) / 64;
  const std::size_t stride = d * words;
  auto flip = [](std::uint64_t* row, std::size_t bit) { row[bit / 64] ^= std::uint64_t{1} << (bit % 64); };

  std::vector<std::uint64_t> forms(g.order() * stride, 0);
  for (std::size_t e = 1; e < g.order(); ++e) {
    const TreeEdge& t = g.tree_edge(e);
    std::copy_n(forms.begin() + t.parent * stride, stride, forms.begin() + e * stride);
    const ModMatrix& rho = m.element_action(t.parent);
    for (std::size_t i = 0; i < d; ++i) {
      std::uint64_t* row = forms.data() + e * stride + i * words;
      for (std::size_t j = 0; j < d; ++j)
        if (rho(i, j)) flip(row, t.generator * d + j);
    }
  }
  F2RowBasis basis(cols);
  std::vector<std::uint64_t> row(words);
  for (const CayleyEdge& c : g.cycle_edges()) {
    if (basis.rank() == cols) break;
    const std::size_t target = g.times_generator(c.element, c.generator);
    const ModMatrix& rho = m.element_action(c.element);
    for (std::size_t i = 0; i < d; ++i) {
      const std::uint64_t* ft = forms.data() + target * stride + i * words;
      const std::uint64_t* fe = forms.data() + c.element * stride + i * words;
      bool nonzero = false;
      for (std::size_t w = 0; w < words; ++w) {
        row[w] = ft[w] ^ fe[w];
      }
      for (std::size_t j = 0; j < d; ++j)
        if (rho(i, j)) flip(row.data(), c.generator * d + j);
      for (std::size_t w = 0; w < words; ++w) nonzero |= row[w] != 0;
      if (nonzero) basis.insert(row);
    }
  }
  std::vector<ModVector> out;
  for (auto& v : basis.null_space()) out.emplace_back(md, std::vector<Residue>(v.begin(), v.end()));
  return out;
}

}  // namespace detail

std::vector<Cocycle> z1_generators(const GModulePtr& m) {
  if (m->modulus().m() == 2) return to_cocycles(m, detail::z1_vectors_f2(*m));
  return to_cocycles(m, detail::z1_vectors_generic(*m));
}

std::vector<Cocycle> b1_generators(const GModulePtr& m) {
  std::vector<Cocycle> out;
  for (std::size_t i = 0; i < m->rank(); ++i) {
    ModVector e(m->modulus(), m->rank());
    e[i] = 1;
    out.push_back(coboundary_of(m, e));
  }
  return out;
}

namespace {

std::vector<ModVector> flatten_all(const std::vector<Cocycle>& cs) {
  std::vector<ModVector> out;
  out.reserve(cs.size());
  for (const auto& c : cs) out.push_back(flatten(c));
  return out;
}

}  // namespace

H1Report h1(const GModulePtr& m) {
  H1Report rep;
  rep.module = m;
  rep.z1_gens = z1_generators(m);
  rep.b1_gens = b1_generators(m);
  const std::size_t len = m->rank() * m->group().num_generators();
  auto z = flatten_all(rep.z1_gens);
  auto b = flatten_all(rep.b1_gens);
  std::vector<ModVector> sup = z;
  sup.insert(sup.end(), b.begin(), b.end());
  auto q = quotient_structure(m->modulus(), len, b, sup);
  rep.invariant_factors = q.invariant_factors;
  rep.representatives = to_cocycles(m, q.representatives);
  return rep;
}

H1Report h1_star(const GModulePtr& m) {
  H1Report rep = h1(m);
  const GModule& mod = *m;
  const Modulus& md = mod.modulus();
  const std::size_t d = mod.rank();
  const auto reps = cyclic_reps(mod.group());
  const std::size_t nz = rep.z1_gens.size();
  const std::size_t cols = nz + reps.size() * d;

  // Unknowns (a_j, y_g): sum_j a_j z_j(g) - (g - 1) y_g = 0 for every cyclic rep g.
  ModMatrix system(md, reps.size() * d, cols);
  for (std::size_t j = 0; j < nz; ++j) {
    for (std::size_t c = 0; c < reps.size(); ++c) {
      ModVector val = cocycle_value_at(rep.z1_gens[j], reps[c].element);
      for (std::size_t i = 0; i < d; ++i) system(c * d + i, j) = val[i];
    }
  }
  for (std::size_t c = 0; c < reps.size(); ++c) {
    ModMatrix gm1 = minus_identity(mod.element_action(reps[c].element));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) system(c * d + i, nz + c * d + j) = md.neg(gm1(i, j));
  }
  const std::size_t len = d * mod.group().num_generators();
  auto z = flatten_all(rep.z1_gens);
  auto b = flatten_all(rep.b1_gens);
  std::vector<ModVector> sup = b;
  for (const auto& kv : kernel_generators(system)) {
    ModVector comb(md, len);
    for (std::size_t j = 0; j < nz; ++j) comb += z[j].scaled(kv[j]);
    sup.push_back(std::move(comb));
  }
  auto q = quotient_structure(md, len, b, sup);
  rep.has_hstar = true;
  rep.hstar_factors = q.invariant_factors;
  rep.hstar_reps = to_cocycles(m, q.representatives);
  return rep;
}

std::vector<ModVector> cocycle_values(const Cocycle& xi) {
  check_cocycle_shape(xi);
  const GModule& m = *xi.module;
  const FiniteGroup& g = m.group();
  std::vector<ModVector> vals(g.order(), ModVector(m.modulus(), m.rank()));
  for (std::size_t e = 1; e < g.order(); ++e) {
    const TreeEdge& t = g.tree_edge(e);
    vals[e] = vals[t.parent] + m.element_action(t.parent) * xi.gen_values[t.generator];
  }
  return vals;
}

ModVector cocycle_value_at(const Cocycle& xi, std::size_t element) {
  check_cocycle_shape(xi);
  const GModule& m = *xi.module;
  const FiniteGroup& g = m.group();
  ModVector val(m.modulus(), m.rank());
  std::size_t cur = 0;
  for (std::size_t s : g.element_word(element)) {
    val += m.element_action(cur) * xi.gen_values[s];
    cur = g.times_generator(cur, s);
  }
  return val;
}

bool is_cocycle(const Cocycle& xi) {
  auto vals = cocycle_values(xi);
  const GModule& m = *xi.module;
  const FiniteGroup& g = m.group();
  for (const CayleyEdge& c : g.cycle_edges()) {
    const std::size_t t = g.times_generator(c.element, c.generator);
    if (!(vals[t] == vals[c.element] + m.element_action(c.element) * xi.gen_values[c.generator])) return false;
  }
  return true;
}

std::optional<ModVector> coboundary_witness(const Cocycle& xi) {
  check_cocycle_shape(xi);
  const GModule& m = *xi.module;
  const std::size_t d = m.rank();
  const std::size_t k = xi.gen_values.size();
  ModMatrix a(m.modulus(), k * d, d);
  ModVector rhs(m.modulus(), k * d);
  for (std::size_t s = 0; s < k; ++s) {
    ModMatrix gm1 = minus_identity(m.generator_action(s));
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) a(s * d + i, j) = gm1(i, j);
      rhs[s * d + i] = xi.gen_values[s][i];
    }
  }
  return solve(a, rhs);
}

bool is_coboundary(const Cocycle& xi) { return coboundary_witness(xi).has_value(); }

std::optional<ModVector> restriction_witness(const Cocycle& xi, std::size_t g) {
  const GModule& m = *xi.module;
  if (g >= m.group().order()) throw UsageError("restriction: element index out of range");
  return solve(minus_identity(m.element_action(g)), cocycle_value_at(xi, g));
}

bool restriction_trivial(const Cocycle& xi, std::size_t g) { return restriction_witness(xi, g).has_value(); }

Cocycle delta1_with_lift(const ExtensionRecord& ext, const ModVector& lift) {
  const GModule& w = *ext.total;
  const std::size_t d = ext.base->rank();
  if (lift.size() != d + 1 || lift[d] != 1) throw UsageError("delta1: lift must map to 1 in the quotient");
  Cocycle out{ext.base, {}};
  for (std::size_t s = 0; s < w.group().num_generators(); ++s) {
    ModVector diff = w.generator_action(s) * lift - lift;
    if (diff[d] != 0) throw PreconditionError("delta1: quotient is not a trivial module");
    ModVector v(ext.base->modulus(), d);
    for (std::size_t i = 0; i < d; ++i) v[i] = diff[i];
    out.gen_values.push_back(std::move(v));
  }
  return out;
}

Cocycle delta1(const ExtensionRecord& ext) { return delta1_with_lift(ext, ext.epsilon); }

Surjection::Surjection(std::shared_ptr<const FiniteGroup> source, std::shared_ptr<const FiniteGroup> target,
                       std::vector<std::size_t> generator_images)
    : source_(std::move(source)), target_(std::move(target)), generator_images_(std::move(generator_images)) {
  if (generator_images_.size() != source_->num_generators()) throw UsageError("surjection: one image per generator");
  for (std::size_t x : generator_images_)
    if (x >= target_->order()) throw UsageError("surjection: image index out of range");
  element_images_.assign(source_->order(), 0);
  for (std::size_t e = 1; e < source_->order(); ++e) {
    const TreeEdge& t = source_->tree_edge(e);
    element_images_[e] = target_->multiply(element_images_[t.parent], generator_images_[t.generator]);
  }
  for (const CayleyEdge& c : source_->cycle_edges()) {
    const std::size_t t = source_->times_generator(c.element, c.generator);
    if (element_images_[t] != target_->multiply(element_images_[c.element], generator_images_[c.generator]))
      throw UsageError("surjection: generator images violate a relation");
  }
  std::vector<bool> hit(target_->order(), false);
  for (std::size_t x : element_images_) hit[x] = true;
  if (std::find(hit.begin(), hit.end(), false) != hit.end()) throw UsageError("surjection: map is not onto");
}

std::vector<std::size_t> Surjection::kernel() const {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < element_images_.size(); ++e)
    if (element_images_[e] == 0) out.push_back(e);
  return out;
}

GModulePtr inflate_module(const GModule& m, const Surjection& q) {
  if (q.target().get() != &m.group()) throw UsageError("inflate: module lives on another group");
  std::vector<ModMatrix> action;
  for (std::size_t s = 0; s < q.source()->num_generators(); ++s)
    action.push_back(m.element_action(q.generator_image(s)));
  return std::make_shared<const GModule>(q.source(), m.modulus(), std::move(action), "inf(" + m.label() + ")");
}

Cocycle inflation(const Surjection& q, const Cocycle& xi, const GModulePtr& inflated) {
  if (&inflated->group() != q.source().get()) throw UsageError("inflation: module lives on another group");
  Cocycle out{inflated, {}};
  for (std::size_t s = 0; s < q.source()->num_generators(); ++s)
    out.gen_values.push_back(cocycle_value_at(xi, q.generator_image(s)));
  return out;
}

Subgroup restrict_module(const GModulePtr& m, const std::vector<std::size_t>& generator_elements) {
  const FiniteGroup& g = m->group();
  std::vector<GroupElement> gens;
  std::vector<ModMatrix> action;
  for (std::size_t x : generator_elements) {
    if (x >= g.order()) throw UsageError("restriction: element index out of range");
    gens.push_back(g.element(x));
    action.push_back(m->element_action(x));
  }
  auto h = make_group(std::move(gens));
  Subgroup out;
  out.group = h;
  for (std::size_t e = 0; e < h->order(); ++e) out.ambient_index.push_back(*g.index_of(h->element(e)));
  out.module = std::make_shared<const GModule>(h, m->modulus(), std::move(action), "res(" + m->label() + ")");
  return out;
}

Cocycle restriction(const Subgroup& h, const Cocycle& xi, const std::vector<std::size_t>& generator_elements) {
  if (generator_elements.size() != h.group->num_generators()) throw UsageError("restriction: generator mismatch");
  Cocycle out{h.module, {}};
  for (std::size_t x : generator_elements) out.gen_values.push_back(cocycle_value_at(xi, x));
  return out;
}

Cocycle pushforward(const Cocycle& xi, const ModMatrix& phi, const GModulePtr& target) {
  if (!intertwines(phi, *xi.module, *target)) throw UsageError("pushforward: map is not G-equivariant");
  Cocycle out{target, {}};
  for (const auto& v : xi.gen_values) out.gen_values.push_back(phi * v);
  return out;
}

std::optional<ModVector> transposition_witness(const Cocycle& xi) {
  const GModule& m = *xi.module;
  const std::size_t n = m.rank() + 1;
  if (m.modulus().m() != 2 || m.group().num_generators() != n - 1)
    throw UsageError("transposition_witness: expects calJ[2] with Coxeter generators");
  // e(P_t, Q_t) for the local witnesses, then Q from the Gram matrix.
  const ModMatrix gram = parity_pairing_matrix(n);
  ModVector target(m.modulus(), n - 1);
  for (std::size_t t = 0; t < n - 1; ++t) {
    auto qt = solve(minus_identity(m.generator_action(t)), xi.gen_values[t]);
    if (!qt) return std::nullopt;
    target[t] = (gram * *qt)[t];
  }
  return solve(gram, target);
}

std::vector<std::uint64_t> brute_force_h1(const GModule& m) {
  const FiniteGroup& g = m.group();
  const Modulus& md = m.modulus();
  const std::size_t order = g.order();
  std::uint64_t size = 1;
  for (std::size_t i = 0; i < m.rank(); ++i) size *= md.m();
  if (order > 8 || size > 81) throw ResourceError("brute_force_h1: needs |G| <= 8 and |M| <= 81");

  const auto vecs = enumerate_vectors(md, m.rank());
  const std::size_t nm = vecs.size();
  std::map<std::vector<Residue>, std::size_t> idx;
  for (std::size_t i = 0; i < nm; ++i) idx[vecs[i].entries] = i;
  std::vector<std::size_t> addt(nm * nm), subt(nm * nm), act(order * nm);
  for (std::size_t a = 0; a < nm; ++a)
    for (std::size_t b = 0; b < nm; ++b) {
      addt[a * nm + b] = idx.at((vecs[a] + vecs[b]).entries);
      subt[a * nm + b] = idx.at((vecs[a] - vecs[b]).entries);
    }
  for (std::size_t x = 0; x < order; ++x)
    for (std::size_t v = 0; v < nm; ++v) act[x * nm + v] = idx.at((m.element_action(x) * vecs[v]).entries);
  std::vector<std::size_t> mult(order * order);
  for (std::size_t a = 0; a < order; ++a)
    for (std::size_t b = 0; b < order; ++b) mult[a * order + b] = g.multiply(a, b);

  // Depth-first over functions, element by element; a pair (a, b) is checked
  // once a, b and ab are all assigned.
  std::vector<std::vector<std::size_t>> z1;
  std::vector<std::size_t> f(order, 0);
  auto consistent = [&](std::size_t e) {
    for (std::size_t a = 0; a <= e; ++a)
      for (std::size_t b = 0; b <= e; ++b) {
        const std::size_t ab = mult[a * order + b];
        if (ab > e || (a != e && b != e && ab != e)) continue;
        if (f[ab] != addt[f[a] * nm + act[a * nm + f[b]]]) return false;
      }
    return true;
  };
  auto recurse = [&](auto&& self, std::size_t e) -> void {
    if (e == order) {
      z1.push_back(f);
      return;
    }
    for (std::size_t v = 0; v < nm; ++v) {
      f[e] = v;
      if (consistent(e)) self(self, e + 1);
    }
  };
  recurse(recurse, 0);

  std::set<std::vector<std::size_t>> b1;
  for (std::size_t q = 0; q < nm; ++q) {
    std::vector<std::size_t> h(order);
    for (std::size_t x = 0; x < order; ++x) h[x] = subt[act[x * nm + q] * nm + q];
    b1.insert(h);
  }
  auto log_p = [&](std::uint64_t x) {
    unsigned l = 0;
    while (x > 1) {
      if (x % md.p() != 0) throw std::logic_error("brute_force_h1: non p-power count");
      x /= md.p();
      ++l;
    }
    return l;
  };
  const unsigned b_log = log_p(b1.size());
  // c[k] = log_p |H[p^k]|
  std::vector<unsigned> c(md.r() + 2, 0);
  for (unsigned k = 1; k <= md.r() + 1; ++k) {
    const unsigned kk = std::min(k, md.r());
    std::uint64_t count = 0;
    for (const auto& z : z1) {
      std::vector<std::size_t> w(order);
      for (std::size_t x = 0; x < order; ++x) {
        Residue scale = md.power_of_p(kk);
        w[x] = idx.at(vecs[z[x]].scaled(scale).entries);
      }
      if (b1.count(w)) ++count;
    }
    c[k] = log_p(count) - b_log;
  }
  std::vector<std::uint64_t> factors;
  for (unsigned k = 1; k <= md.r(); ++k) {
    const unsigned at_least_k = c[k] - c[k - 1];
    const unsigned at_least_next = k < md.r() ? c[k + 1] - c[k] : 0;
    std::uint64_t pk = 1;
    for (unsigned i = 0; i < k; ++i) pk *= md.p();
    for (unsigned i = 0; i < at_least_k - at_least_next; ++i) factors.push_back(pk);
  }
  return factors;
}

unsigned fixed_points_order_log(const GModule& m) {
  const Modulus& md = m.modulus();
  if (m.order_log() * std::log2(static_cast<double>(md.p())) > 22) throw ResourceError("fixed points: module too large");
  std::uint64_t count = 0;
  for (const auto& v : enumerate_vectors(md, m.rank())) {
    bool fixed = true;
    for (std::size_t s = 0; s < m.group().num_generators() && fixed; ++s) fixed = m.generator_action(s) * v == v;
    count += fixed;
  }
  unsigned l = 0;
  while (count > 1) {
    count /= md.p();
    ++l;
  }
  return l;
}

}  // namespace discform
