#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "porth/factorization.hpp"
#include "porth/io.hpp"

using namespace porth;

namespace {

struct Report {
  std::string command;
  Json params = Json::object();
  std::uint64_t seed = 0;
  Json results = Json::object();
  Json assertions = Json::array();

  void check(const std::string& name, bool ok, const std::string& witness = {}) {
    Json a = {{"name", name}, {"ok", ok}};
    if (!ok && !witness.empty()) a["witness"] = witness;
    assertions.push_back(std::move(a));
  }
  bool ok() const {
    return std::all_of(assertions.begin(), assertions.end(), [](const Json& a) { return a.at("ok").get<bool>(); });
  }
  Json to_json() const {
    return {{"command", command}, {"params", params}, {"seed", seed}, {"results", results}, {"assertions", assertions}};
  }
};

struct Common {
  std::optional<std::uint64_t> seed;
  std::uint64_t budget = kDefaultBudget;
  std::string format = "json";
  std::string out;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void csv_rows(std::ostream& os, const std::string& prefix, const Json& v) {
  if (v.is_object()) {
    for (const auto& [k, x] : v.items()) csv_rows(os, prefix.empty() ? k : prefix + "." + k, x);
  } else if (v.is_array() && std::any_of(v.begin(), v.end(), [](const Json& x) { return x.is_structured(); })) {
    for (std::size_t i = 0; i < v.size(); ++i) csv_rows(os, prefix + "." + std::to_string(i), v[i]);
  } else {
    os << csv_field(prefix) << ',' << csv_field(v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  }
}

void emit(const Report& r, const Common& c) {
  std::ostringstream os;
  if (c.format == "csv") {
    os << "key,value\n";
    os << "command," << csv_field(r.command) << '\n';
    os << "seed," << r.seed << '\n';
    csv_rows(os, "params", r.params);
    csv_rows(os, "results", r.results);
    for (const auto& a : r.assertions) {
      const std::string key = "assertions." + a.at("name").get<std::string>();
      os << csv_field(key) << ',' << (a.at("ok").get<bool>() ? "true" : "false") << '\n';
      if (a.contains("witness")) os << csv_field(key + ".witness") << ',' << csv_field(a.at("witness")) << '\n';
    }
  } else {
    os << r.to_json().dump(2) << '\n';
  }
  if (c.out.empty()) {
    std::cout << os.str();
    return;
  }
  std::ofstream file(c.out);
  if (!file) throw ArgumentError("cannot write '" + c.out + "'");
  file << os.str();
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

std::string format_h(const std::vector<MultiIndex>& h) {
  std::string s;
  for (const auto& g : h) s += (s.empty() ? "(" : " (") + format_multi_index(g) + ")";
  return s;
}

void require_even(int p) {
  if (p < 2 || p % 2 != 0) throw ArgumentError("p must be an even integer >= 2");
}

// A spec file, with --seed and --p overriding its fields and relative
// paths resolved against the spec's directory.
FamilySpec load_spec(const std::string& path, const Common& c, std::optional<int> p) {
  FamilySpec spec = family_spec_from_json(load_json(path));
  if (c.seed) spec.seed = *c.seed;
  if (p) spec.p = *p;
  const auto dir = std::filesystem::path(path).parent_path();
  for (std::string* file : {&spec.path, &spec.words}) {
    if (!file->empty() && std::filesystem::path(*file).is_relative()) *file = (dir / *file).string();
  }
  return spec;
}

Json spec_json(const FamilySpec& s) {
  Json j = {{"kind", s.kind}, {"n", s.n}, {"d", s.d}, {"p", s.p}, {"dim", s.dim},
            {"coefficients", s.coefficients == CoefficientSource::kOnes ? "ones" : "random"}};
  if (!s.path.empty()) j["path"] = s.path;
  if (!s.words.empty()) j["words"] = s.words;
  return j;
}

Report run_mobius(int m, const Common&) {
  Report r{"mobius"};
  r.params = {{"m", m}};
  if (m < 1 || m > 10) throw SizeLimitError("mobius: m must be in 1..10");
  const auto id = verify_mobius_identities(m);
  r.results = {{"partitions", all_partitions(m).size()},
               {"abs_sum", id.abs_sum},
               {"factorial", id.factorial},
               {"intervals_checked", id.intervals_checked}};
  r.check("abs_sum_equals_factorial", id.abs_sum == id.factorial,
          std::to_string(id.abs_sum) + " != " + std::to_string(id.factorial));
  r.check("interval_sums_vanish", id.interval_sums_ok);
  if (m <= 5) {
    std::string witness;
    std::uint64_t pairs = 0;
    const auto all = all_partitions(m);
    for (const auto& sigma : all) {
      for (const auto& rho : refinements(sigma)) {
        ++pairs;
        if (witness.empty() && mobius(rho, sigma) != mobius_recursive(rho, sigma)) {
          witness = rho.to_string() + " <= " + sigma.to_string();
        }
      }
    }
    r.results["pairs_compared"] = pairs;
    r.check("closed_form_matches_recursive", witness.empty(), witness);
  }
  return r;
}

Report run_dissociate(const std::string& family, int p, const Common& c) {
  Report r{"dissociate"};
  r.params = {{"family", family}, {"p", p}};
  WordFamily words = [&] {
    const std::string prefix = "canonical:";
    if (family.rfind(prefix, 0) != 0) return word_family_from_json(load_json(family));
    int n = 0, d = 0;
    char comma = 0;
    std::istringstream in(family.substr(prefix.size()));
    if (!(in >> n >> comma >> d) || comma != ',' || !in.eof() || n < 1 || d < 1) {
      throw ArgumentError("dissociate: expected canonical:n,d");
    }
    return canonical_dissociate(n, d);
  }();
  if (p < 1) throw ArgumentError("p must be >= 1");
  const auto rep = is_p_dissociate(words, p, c.budget);
  r.results = {{"n", words.index.n()}, {"d", words.index.d()}, {"functions_checked", rep.functions_checked}};
  r.check("p_dissociate", rep.ok, rep.witness ? "h = " + format_h(*rep.witness) : "");
  return r;
}

Report run_ortho(const std::string& path, int p, double tol, const Common& c) {
  Report r{"ortho"};
  require_even(p);
  const auto spec = load_spec(path, c, p);
  r.seed = spec.seed;
  r.params = {{"spec", spec_json(spec)}, {"p", p}, {"tol", tol}};
  const auto f = make_family(spec, c.budget);
  const auto rep = is_p_orthogonal(f, p, tol, c.budget);
  r.results = {{"max_abs_violation", rep.max_abs_violation}, {"count_checked", rep.count_checked}};
  std::string witness;
  if (rep.worst_h) {
    r.results["worst_h"] = rep.worst_h->to_string();
    witness = "h = " + rep.worst_h->to_string() + ", |moment| = " + std::to_string(rep.max_abs_violation);
  }
  r.check("p_orthogonal", rep.ok, witness);
  return r;
}

Report run_decompose(const std::string& path, int p, const Common& c) {
  Report r{"decompose"};
  require_even(p);
  const auto spec = load_spec(path, c, p);
  r.seed = spec.seed;
  r.params = {{"spec", spec_json(spec)}, {"p", p}};
  const auto f = make_family(spec, c.budget);
  const auto rep = mobius_decomposition_check(f, p, c.budget);
  r.results = {{"lhs", complex_json(rep.lhs)},
               {"rhs", complex_json(rep.rhs)},
               {"abs_err", rep.abs_err},
               {"injective_part", complex_json(rep.injective_part)},
               {"mobius_part", complex_json(rep.mobius_part)},
               {"scale", rep.scale}};
  r.check("decomposition", rep.abs_err <= 1e-8 * rep.scale, "abs_err = " + std::to_string(rep.abs_err));
  return r;
}

// Every tuple with sigma_k > 0̇ for all k, first coordinate most significant.
std::vector<PartitionTuple> coarse_tuples(int p, int d) {
  std::vector<SetPartition> coarse;
  for (const auto& s : all_partitions(p)) {
    if (!s.is_finest()) coarse.push_back(s);
  }
  std::vector<PartitionTuple> out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  if (coarse.empty()) return out;
  while (true) {
    std::vector<SetPartition> parts;
    for (auto i : idx) parts.push_back(coarse[i]);
    out.emplace_back(std::move(parts));
    int k = d - 1;
    while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == coarse.size()) idx[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) break;
  }
  return out;
}

Report run_factorize(const std::string& path, int p, const std::string& sigmas_path, const Common& c) {
  Report r{"factorize"};
  require_even(p);
  const auto spec = load_spec(path, c, p);
  r.seed = spec.seed;
  r.params = {{"spec", spec_json(spec)}, {"p", p}};
  if (!sigmas_path.empty()) r.params["sigmas"] = sigmas_path;
  const auto f = make_family(spec, c.budget);
  std::vector<PartitionTuple> tuples;
  if (sigmas_path.empty()) {
    check_power_budget(all_partitions(p).size(), f.d(), c.budget, "factorize tuples");
    tuples = coarse_tuples(p, f.d());
  } else {
    tuples = sigmas_from_json(load_json(sigmas_path));
  }
  const double scale = family_scale(f, p, c.budget);
  double max_err = 0.0, common_err = 0.0, free_err = 0.0;
  std::string err_witness, holder_witness;
  Json rows = Json::array();
  for (const auto& sigmas : tuples) {
    const auto fc = factorization_check(f, sigmas, p, c.budget);
    const auto fn = factor_norm_report(f, sigmas, p, c.budget);
    if (fc.abs_err > max_err) {
      max_err = fc.abs_err;
      err_witness = "sigmas = " + sigmas.to_string() + ", abs_err = " + std::to_string(fc.abs_err);
    }
    common_err = std::max(common_err, fn.common_err);
    free_err = std::max(free_err, fn.free_err);
    if (!fn.holder_ok && holder_witness.empty()) holder_witness = "sigmas = " + sigmas.to_string();
    if (!sigmas_path.empty()) {
      Json norms = Json::array();
      for (const auto& x : fn.factors) norms.push_back({{"s", x.s}, {"q", x.q}, {"norm", x.norm}});
      rows.push_back({{"sigmas", sigmas.to_string()},
                      {"psi_direct", complex_json(fc.psi_direct)},
                      {"psi_factored", complex_json(fc.psi_factored)},
                      {"abs_err", fc.abs_err},
                      {"factor_norms", norms},
                      {"norm_product", fn.norm_product}});
    }
  }
  r.results = {{"tuples_checked", tuples.size()},
               {"max_abs_err", max_err},
               {"scale", scale},
               {"common_factor_rel_err", common_err},
               {"free_factor_rel_err", free_err}};
  if (!rows.empty()) r.results["tuples"] = rows;
  r.check("factorization", max_err <= 1e-8 * scale, err_witness);
  r.check("common_factor_norms", common_err <= 1e-10, "rel_err = " + std::to_string(common_err));
  r.check("free_factor_norms", free_err <= 1e-10, "rel_err = " + std::to_string(free_err));
  r.check("holder", holder_witness.empty(), holder_witness);
  return r;
}

Json quantities_json(const Quantities& q) {
  return {{"A", q.A}, {"B", q.B}, {"C", q.C}, {"D", q.D}, {"split_norms", q.split_norms}};
}

Report run_inequality(const std::string& path, int p, const Common& c) {
  Report r{"inequality"};
  require_even(p);
  const auto spec = load_spec(path, c, p);
  r.seed = spec.seed;
  r.params = {{"spec", spec_json(spec)}, {"p", p}};
  const auto f = make_family(spec, c.budget);
  try {
    const auto rep = main_inequality_report(f, p, c.budget);
    r.results = quantities_json(rep.q);
    r.results["ratio"] = rep.ratio;
    r.results["a_le_2pd"] = rep.a_le_2pd;
    r.results["orthogonality_checked"] = rep.orthogonality.count_checked;
    r.check("p_orthogonal", true);
    r.check("c_le_b", rep.q.c_le_b);
    r.check("b_le_2d_c", rep.q.b_le_2d_c);
    if (rep.pisier_ok) {
      r.results["pisier_ratio"] = rep.pisier_ratio;
      r.check("pisier", *rep.pisier_ok, "A / ((3 pi / 2) p C) = " + std::to_string(rep.pisier_ratio));
    }
  } catch (const PreconditionError& e) {
    r.check("p_orthogonal", false, e.witness());
  }
  return r;
}

Report run_khintchine(const std::string& path, const Common& c) {
  Report r{"khintchine"};
  const auto spec = load_spec(path, c, std::nullopt);
  require_even(spec.p);
  r.seed = spec.seed;
  r.params = {{"spec", spec_json(spec)}};
  const auto f = make_family(spec, c.budget);
  if (f.kind() != FamilyKind::kMatrix) throw KindError("khintchine: needs a matrix-valued family");
  const auto rep = khintchine_iteration_check(f.matrices(), f.n(), f.d(), spec.p, c.budget);
  r.results = {{"S_norm", rep.S_norm}, {"C", rep.C}, {"tol", rep.tol}};
  r.check("lower", rep.lower_ok, "C = " + std::to_string(rep.C) + " > S = " + std::to_string(rep.S_norm));
  r.check("upper", rep.upper_ok, "S = " + std::to_string(rep.S_norm) + " > 2^d C");
  return r;
}

Report run_sublemma(int p, double D, const Common&) {
  Report r{"sublemma"};
  r.params = {{"p", p}, {"D", D}};
  require_even(p);
  const auto rep = sublemma_root_check(p, D);
  r.results = {{"root", rep.root}, {"bound", rep.bound}};
  r.check("root_le_2pd", rep.bound_ok, "root = " + std::to_string(rep.root));
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partition-lattice and p-orthogonal sum laboratory"};
  app.require_subcommand(1);
  Common common;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "RNG seed (overrides the spec)");
    sub->add_option("--budget", common.budget, "enumeration budget");
    sub->add_option("--format", common.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", common.out, "write the report here instead of stdout");
  };

  int m = 0, p = 0;
  double tol = 1e-12, D = 1.0;
  std::string family, spec, sigmas;
  std::function<Report()> run;

  auto* mob = app.add_subcommand("mobius", "Moebius identities on P_m");
  mob->add_option("--m", m)->required();
  add_common(mob);
  mob->callback([&] { run = [&] { return run_mobius(m, common); }; });

  auto* dis = app.add_subcommand("dissociate", "check a word family for p-dissociation");
  dis->add_option("--family", family, "word family JSON or canonical:n,d")->required();
  dis->add_option("--p", p)->required();
  add_common(dis);
  dis->callback([&] { run = [&] { return run_dissociate(family, p, common); }; });

  auto* ort = app.add_subcommand("ortho", "check p-orthogonality");
  ort->add_option("--spec", spec)->required();
  ort->add_option("--p", p)->required();
  ort->add_option("--tol", tol);
  add_common(ort);
  ort->callback([&] { run = [&] { return run_ortho(spec, p, tol, common); }; });

  auto* dec = app.add_subcommand("decompose", "Moebius decomposition of the p-th moment");
  dec->add_option("--spec", spec)->required();
  dec->add_option("--p", p)->required();
  add_common(dec);
  dec->callback([&] { run = [&] { return run_decompose(spec, p, common); }; });

  auto* fac = app.add_subcommand("factorize", "factorization of Psi and its factor norms");
  fac->add_option("--spec", spec)->required();
  fac->add_option("--p", p)->required();
  fac->add_option("--sigmas", sigmas, "JSON list of partition tuples (default: all)");
  add_common(fac);
  fac->callback([&] { run = [&] { return run_factorize(spec, p, sigmas, common); }; });

  auto* ineq = app.add_subcommand("inequality", "A, B, C, D and the main inequality");
  ineq->add_option("--spec", spec)->required();
  ineq->add_option("--p", p)->required();
  add_common(ineq);
  ineq->callback([&] { run = [&] { return run_inequality(spec, p, common); }; });

  auto* kh = app.add_subcommand("khintchine", "iterated Khintchine sandwich");
  kh->add_option("--spec", spec)->required();
  add_common(kh);
  kh->callback([&] { run = [&] { return run_khintchine(spec, common); }; });

  auto* sub = app.add_subcommand("sublemma", "largest root of the scalar binomial polynomial");
  sub->add_option("--p", p)->required();
  sub->add_option("--D", D)->required();
  add_common(sub);
  sub->callback([&] { run = [&] { return run_sublemma(p, D, common); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  for (auto* s : app.get_subcommands()) {
    if (s->count("--seed") > 0) common.seed = seed;
  }
  try {
    Report report = run();
    if (common.seed && report.seed == 0) report.seed = *common.seed;
    emit(report, common);
    return report.ok() ? 0 : 1;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const SizeLimitError& e) {
    std::cerr << "size limit: " << e.what() << '\n';
  } catch (const KindError& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << " (" << e.witness() << ")\n";
  }
  return 2;
}
