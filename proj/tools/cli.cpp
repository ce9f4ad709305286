#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "discform/cohomology.hpp"
#include "discform/errors.hpp"
#include "discform/local_global.hpp"
#include "discform/pencils.hpp"
#include "discform/verify.hpp"

namespace discform {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr const char* kCacheEnv = "DISCFORM_CACHE_DIR";

std::vector<BigInt> parse_integers(const std::string& text, const std::string& what) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError(what + ": not valid JSON");
  }
  if (!j.is_array() || j.empty()) throw UsageError(what + ": expected a non-empty JSON array");
  std::vector<BigInt> out;
  for (const auto& x : j) {
    if (x.is_number_integer())
      out.emplace_back(x.dump());
    else if (x.is_string()) {
      BigInt v;
      if (v.set_str(x.get<std::string>(), 10) != 0) throw UsageError(what + ": bad integer '" + x.get<std::string>() + "'");
      out.push_back(v);
    } else {
      throw UsageError(what + ": entries must be integers");
    }
  }
  return out;
}

json form_json(const BinaryForm& f) {
  json a = json::array();
  for (const auto& c : f.coeffs) a.push_back(c.get_str());
  return a;
}

json pencil_json(const Pencil& p) {
  json a = json::array(), b = json::array();
  for (const auto& x : p.a) a.push_back(x.get_str());
  for (const auto& x : p.b) b.push_back(x.get_str());
  return {{"n", p.n}, {"A", a}, {"B", b}, {"p", p.p}};
}

std::string timestamp_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::unique_ptr<FactorCache> cache_from_env() {
  const char* dir = std::getenv(kCacheEnv);
  if (!dir || !*dir) return nullptr;
  return std::make_unique<FactorCache>(dir);
}

GModulePtr build_module(const std::string& group, const std::string& module, std::size_t n, std::size_t g,
                        std::uint32_t p, std::uint32_t r) {
  std::shared_ptr<const FiniteGroup> grp;
  if (group == "sn") {
    grp = make_group(sn_coxeter(n));
    if (module == "perm") return perm_power_module(grp);
    if (module == "even") return even_submodule(grp);
    if (module == "calj") return subset_quotient_module(grp);
    if (module == "j") return even_quotient_module(grp);
    if (module == "trivial") return trivial_module(grp, Modulus(p ? p : 2, r));
    throw UsageError("module for sn must be perm, even, calj, j or trivial");
  }
  if (group == "sp") grp = make_group(sp2g_f2_generators(g));
  else if (group == "gl2") grp = make_group(gl2_generators(p, r));
  else if (group == "sl2") grp = make_group(sl2_generators(p, r));
  else throw UsageError("group must be sn, sp, gl2 or sl2");
  if (module == "natural") {
    std::vector<ModMatrix> action;
    for (const auto& x : grp->generators()) action.push_back(x.mat());
    return module_from_matrices(grp, action, group + " natural");
  }
  if (module == "dual") {
    std::vector<ModMatrix> action;
    for (const auto& x : grp->generators()) action.push_back(x.mat());
    return dual_module(*module_from_matrices(grp, action, group + " natural"));
  }
  if (module == "trivial") {
    const auto& m = grp->generators()[0].mat().modulus();
    return trivial_module(grp, m);
  }
  throw UsageError("module for matrix groups must be natural, dual or trivial");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discriminant forms: Galois-module cohomology checks and local-global certification"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_path;
  bool no_timestamp = false;
  unsigned threads = 1;
  app.add_option("--out", out_path, "Write the JSON document here instead of stdout");
  app.add_flag("--no-timestamp", no_timestamp, "Omit timestamp and timings (byte-stable output)");
  app.add_option("--threads", threads, "Worker threads (results do not depend on it)")->check(CLI::Range(1u, 256u));

  // verify
  auto* verify = app.add_subcommand(
      "verify",
      "Verification drivers:\n"
      "  case1       H1_star(S_n, calJ[2]) = 0\n"
      "  case2       dim H1(Sp_2g(F_2), F_2^2g) = 1, delta(1) != 0, H1_star of the extension = 0\n"
      "  case3       H1(G, F_2^2) = 0 for the subgroups of S_3\n"
      "  case4       H1(G, (Z/p^r)^2) = 0 for SL_2 and GL_2 over Z/p^r\n"
      "  lemma_h1ga  the locally trivial part of H1(G, J) surjects onto H1_star(G', W)");
  std::string case_id;
  std::size_t v_n = 6, v_g = 2;
  std::uint32_t v_p = 3, v_r = 1;
  std::string v_instance = "s4";
  bool allow_large = false;
  verify->add_option("case", case_id, "case1 | case2 | case3 | case4 | lemma_h1ga")->required();
  verify->add_option("--n", v_n, "Degree for case1");
  verify->add_option("--g", v_g, "Genus for case2");
  verify->add_option("--p", v_p, "Prime for case4");
  verify->add_option("--r", v_r, "Exponent for case4");
  verify->add_option("--instance", v_instance, "lemma_h1ga instance: s4, s6 or sp4");
  verify->add_flag("--allow-large", allow_large, "Permit Sp_6(F_2) and larger (slow)");

  // h1
  auto* h1cmd = app.add_subcommand("h1", "H1 (and optionally H1_star) of a standard group and module");
  std::string h_group = "sn", h_module = "calj";
  std::size_t h_n = 4, h_g = 2;
  std::uint32_t h_p = 2, h_r = 1;
  bool h_star = false;
  h1cmd->add_option("--group", h_group, "sn | sp | gl2 | sl2");
  h1cmd->add_option("--module", h_module, "sn: perm | even | calj | j | trivial; matrix groups: natural | dual | trivial");
  h1cmd->add_option("--n", h_n, "Degree of S_n");
  h1cmd->add_option("--g", h_g, "Genus for sp");
  h1cmd->add_option("--p", h_p, "Prime for gl2/sl2 (or trivial module modulus)");
  h1cmd->add_option("--r", h_r, "Exponent");
  h1cmd->add_flag("--star", h_star, "Also compute H1_star");

  // pencil-disc
  auto* pdisc = app.add_subcommand("pencil-disc", "Discriminant form of a pencil (A, B)");
  std::size_t pd_n = 0;
  std::string pd_a, pd_b;
  std::uint64_t pd_p = 0;
  pdisc->add_option("--n", pd_n, "Matrix size")->required();
  pdisc->add_option("--A", pd_a, "Row-major JSON array")->required();
  pdisc->add_option("--B", pd_b, "Row-major JSON array")->required();
  pdisc->add_option("--p", pd_p, "Reduce mod this prime (0 = integers)");

  // pencil-search
  auto* psearch = app.add_subcommand("pencil-search", "Exhaustive search for a pencil with a given discriminant form over F_p");
  std::string ps_form;
  std::uint64_t ps_p = 3, ps_cap = SearchLimits{}.max_candidates;
  psearch->add_option("--form", ps_form, "JSON array [f0, ..., fn]")->required();
  psearch->add_option("--p", ps_p, "Prime (<= 7 by default caps)");
  psearch->add_option("--max-candidates", ps_cap, "Search-space cap");

  // certify
  auto* certify = app.add_subcommand("certify", "Certify that an integer binary form is a discriminant form");
  std::string c_form;
  int c_bound = 20;
  std::size_t c_primes = 500;
  certify->add_option("--form", c_form, "JSON array [f0, ..., fn]")->required();
  certify->add_option("--point-bound", c_bound, "Rational point search bound on |a|, |b|");
  certify->add_option("--max-primes", c_primes, "Primes scanned for the S_n certificate");

  // cycle-type
  auto* ctype = app.add_subcommand("cycle-type", "Frobenius cycle type of f(x,1) at p");
  std::string ct_form;
  std::uint64_t ct_p = 0;
  ctype->add_option("--form", ct_form, "JSON array [f0, ..., fn]")->required();
  ctype->add_option("--p", ct_p, "Prime not dividing f0*disc(f)")->required();

  // density
  auto* density = app.add_subcommand("density", "Monte-Carlo density of certified forms in a height box");
  std::size_t d_n = 6;
  std::uint64_t d_height = 1000, d_samples = 400, d_seed = 42;
  density->add_option("--degree", d_n, "Degree n >= 3");
  density->add_option("--height", d_height, "Coefficients uniform in [-height, height]");
  density->add_option("--samples", d_samples, "Number of samples");
  density->add_option("--seed", d_seed, "Seed");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    err << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return 1;
  }

  json doc;
  json config = {{"threads", threads}};
  int code = 0;
  const auto start = Clock::now();
  try {
    if (*verify) {
      doc["command"] = "verify";
      json params;
      if (case_id == "case1") params = {{"n", v_n}};
      else if (case_id == "case2") params = {{"g", v_g}, {"allow_large", allow_large}};
      else if (case_id == "case4") params = {{"p", v_p}, {"r", v_r}};
      else if (case_id == "lemma_h1ga") params = {{"instance", v_instance}};
      else params = json::object();
      config["case"] = case_id;
      config["params"] = params;
      Certificate cert = verify_case(case_id, params);
      doc["result"] = cert.to_json(!no_timestamp);
      code = cert.passed() ? 0 : 2;
    } else if (*h1cmd) {
      doc["command"] = "h1";
      config.update({{"group", h_group}, {"module", h_module}, {"n", h_n}, {"g", h_g}, {"p", h_p}, {"r", h_r}, {"star", h_star}});
      auto m = build_module(h_group, h_module, h_n, h_g, h_p, h_r);
      H1Report rep = h_star ? h1_star(m) : h1(m);
      json res = {{"group_order", m->group().order()},
                  {"module", m->label()},
                  {"rank", m->rank()},
                  {"modulus", m->modulus().m()},
                  {"z1_generators", rep.z1_gens.size()},
                  {"invariant_factors", rep.invariant_factors}};
      if (h_star) res["hstar_factors"] = rep.hstar_factors;
      doc["result"] = res;
    } else if (*pdisc) {
      doc["command"] = "pencil-disc";
      config.update({{"n", pd_n}, {"A", pd_a}, {"B", pd_b}, {"p", pd_p}});
      Pencil pen(pd_n, parse_integers(pd_a, "--A"), parse_integers(pd_b, "--B"), pd_p);
      BinaryForm f = disc_form(pen);
      doc["result"] = {{"form", form_json(f)}, {"discriminant", binary_discriminant(f).get_str()}};
    } else if (*psearch) {
      doc["command"] = "pencil-search";
      config.update({{"form", ps_form}, {"p", ps_p}, {"max_candidates", ps_cap}});
      BinaryForm f(parse_integers(ps_form, "--form"), ps_p);
      SearchLimits lim;
      lim.max_candidates = ps_cap;
      lim.threads = threads;
      auto w = pencil_search(f, lim);
      doc["result"] = {{"form", form_json(f)}, {"found", w.has_value()}, {"pencil", w ? pencil_json(*w) : json()}};
    } else if (*certify) {
      doc["command"] = "certify";
      config.update({{"form", c_form}, {"point_bound", c_bound}, {"max_primes", c_primes}});
      BinaryForm f(parse_integers(c_form, "--form"));
      auto cache = cache_from_env();
      CertifyOptions opt;
      opt.point_search_bound = c_bound;
      opt.max_primes = c_primes;
      opt.cache = cache.get();
      GlobalCertificate cert = certify_discriminant_form(f, opt);
      doc["result"] = cert.to_json();
      doc["result"]["form"] = form_json(f);
      code = cert.verdict == Verdict::LocalObstruction ? 2 : 0;
    } else if (*ctype) {
      doc["command"] = "cycle-type";
      config.update({{"form", ct_form}, {"p", ct_p}});
      BinaryForm f(parse_integers(ct_form, "--form"));
      doc["result"] = {{"form", form_json(f)}, {"p", ct_p}, {"cycle_type", frobenius_cycle_type(f, ct_p)}};
    } else if (*density) {
      doc["command"] = "density";
      config.update({{"degree", d_n}, {"height", d_height}, {"samples", d_samples}, {"seed", d_seed}});
      auto cache = cache_from_env();
      CertifyOptions opt;
      opt.cache = cache.get();
      doc["result"] = density_estimate(d_n, d_height, d_samples, d_seed, threads, opt).to_json();
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  // Thread count is echoed but never part of the result.
  config.erase("threads");
  doc["config"] = config;
  if (!no_timestamp) {
    doc["timestamp"] = timestamp_now();
    doc["timings_ms"] = {{"total", std::chrono::duration<double, std::milli>(Clock::now() - start).count()}};
  } else {
    doc["timings_ms"] = json::object();
  }
  const std::string text = doc.dump(2) + "\n";
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) {
      err << "error: cannot write " << out_path << "\n";
      return 1;
    }
    f << text;
  } else {
    out << text;
  }
  return code;
}

}  // namespace discform
