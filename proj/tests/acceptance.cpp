// Acceptance suite: one PASS/FAIL line per criterion, exit code 1 if any fails.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "porth/factorization.hpp"
#include "porth/lab.hpp"

using namespace porth;

namespace {

using Size = std::array<int, 3>;  // n, d, p

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail << "first failure: " << what << "; ";
    ok = ok && cond;
  }
};

FamilySpec spec_of(const std::string& kind, int n, int d, int p, std::uint64_t seed, Index dim = 2) {
  FamilySpec s;
  s.kind = kind;
  s.n = n;
  s.d = d;
  s.p = p;
  s.seed = seed;
  s.dim = dim;
  return s;
}

std::string size_str(const Size& s) {
  return "(" + std::to_string(s[0]) + "," + std::to_string(s[1]) + "," + std::to_string(s[2]) + ")";
}

std::vector<PartitionTuple> coarse_tuples(int p, int d) {
  std::vector<SetPartition> coarse;
  for (const auto& s : all_partitions(p)) {
    if (!s.is_finest()) coarse.push_back(s);
  }
  std::vector<PartitionTuple> out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
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

void mobius_identities(Outcome& o) {
  std::int64_t intervals = 0;
  for (int m = 2; m <= 8; ++m) {
    const auto r = verify_mobius_identities(m);
    o.require(r.abs_sum == r.factorial, "sum |mu| != m! at m = " + std::to_string(m));
    if (m <= 6) {
      o.require(r.interval_sums_ok, "interval sum at m = " + std::to_string(m));
      intervals += r.intervals_checked;
    }
  }
  o.detail << "m = 2..8 factorial sums, " << intervals << " intervals (m <= 6)";
}

void mobius_oracles(Outcome& o) {
  std::int64_t pairs = 0;
  for (int m = 1; m <= 5; ++m) {
    for (const auto& sigma : all_partitions(m)) {
      for (const auto& rho : refinements(sigma)) {
        ++pairs;
        o.require(mobius(rho, sigma) == mobius_recursive(rho, sigma), rho.to_string() + " <= " + sigma.to_string());
      }
    }
  }
  o.detail << pairs << " pairs";
}

void dissociation(Outcome& o) {
  std::uint64_t stated = 0, extra = 0;
  for (const Size& s : std::vector<Size>{{2, 2, 4}, {3, 2, 4}, {2, 3, 4}, {2, 2, 6}}) {
    const auto r = is_p_dissociate(canonical_dissociate(s[0], s[1]), s[2]);
    o.require(r.ok, size_str(s));
    stated += r.functions_checked;
  }
  for (const Size& s : std::vector<Size>{{4, 2, 4}, {5, 2, 4}, {6, 1, 6}}) {
    const auto r = is_p_dissociate(canonical_dissociate(s[0], s[1]), s[2]);
    o.require(r.ok, size_str(s));
    extra += r.functions_checked;
  }
  o.detail << "injective h checked: " << stated << " at stated sizes, " << extra
           << " at (4,2,4) (5,2,4) (6,1,6)";
}

void orthogonality(Outcome& o) {
  const auto free = is_p_orthogonal(make_family(spec_of("free_generators", 2, 2, 4, 1)), 4, 0.0);
  o.require(free.ok, "free generators (2,2,4)");
  const auto rad = is_p_orthogonal(make_family(spec_of("rademacher", 2, 2, 4, 1)), 4, 1e-12);
  o.require(rad.ok, "rademacher (2,2,4)");
  o.detail << "(2,2,4): " << free.count_checked + rad.count_checked << " injective h (vacuous, p > n); ";

  std::uint64_t extra = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto f = is_p_orthogonal(make_family(spec_of("free_generators", 4, 2, 4, seed)), 4, 0.0);
    o.require(f.ok, "free generators (4,2,4)");
    extra += f.count_checked;
    for (const Size& s : std::vector<Size>{{4, 1, 4}, {3, 2, 2}, {6, 1, 4}}) {
      for (const char* kind : {"rademacher", "martingale_rademacher"}) {
        const auto r = is_p_orthogonal(make_family(spec_of(kind, s[0], s[1], s[2], seed)), s[2], 1e-12);
        o.require(r.ok, std::string(kind) + " " + size_str(s));
        worst = std::max(worst, r.max_abs_violation);
        extra += r.count_checked;
      }
    }
  }
  o.detail << "supplementary: " << extra << " injective h, max |moment| " << worst;
}

void decomposition(Outcome& o) {
  double worst = 0.0;
  int runs = 0;
  for (const Size& s : std::vector<Size>{{2, 1, 4}, {2, 2, 4}, {3, 1, 4}, {2, 2, 6}}) {
    for (const char* kind : {"random_matrix", "rademacher", "free_generators"}) {
      for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto r = mobius_decomposition_check(make_family(spec_of(kind, s[0], s[1], s[2], seed)), s[2]);
        worst = std::max(worst, r.abs_err / r.scale);
        o.require(r.abs_err <= 1e-8 * r.scale, std::string(kind) + " " + size_str(s));
        ++runs;
      }
    }
  }
  o.detail << runs << " runs, max abs_err/scale " << worst;
}

void factorization(Outcome& o) {
  // Traces of xi products vanish exactly off constant functions.
  std::uint64_t xi_checked = 0;
  for (int m = 2; m <= 4; ++m) {
    for (int n = 1; n <= 3; ++n) {
      const auto xi = xi_family(m, n);
      std::vector<int> g(static_cast<std::size_t>(m), 1);
      while (true) {
        std::vector<GroupAlgebraElement> factors;
        for (int r = 0; r < m; ++r) factors.push_back(xi[static_cast<std::size_t>(r)][static_cast<std::size_t>(g[static_cast<std::size_t>(r)] - 1)]);
        const bool constant = std::all_of(g.begin(), g.end(), [&](int v) { return v == g[0]; });
        o.require(ga_trace_product(factors) == Complex(constant ? 1.0 : 0.0), "xi trace, m = " + std::to_string(m));
        ++xi_checked;
        int r = m - 1;
        while (r >= 0 && ++g[static_cast<std::size_t>(r)] > n) g[static_cast<std::size_t>(r--)] = 1;
        if (r < 0) break;
      }
    }
  }

  const auto tuples = coarse_tuples(4, 2);
  o.require(tuples.size() == 196, "tuple count");
  double worst = 0.0, norm_err = 0.0;
  std::uint64_t checked = 0;
  for (const char* kind : {"random_matrix", "free_generators"}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto f = make_family(spec_of(kind, 2, 2, 4, seed));
      const double scale = family_scale(f, 4);
      for (const auto& sigmas : tuples) {
        const auto c = factorization_check(f, sigmas, 4);
        worst = std::max(worst, c.abs_err / scale);
        o.require(c.abs_err <= 1e-8 * scale, std::string(kind) + " " + sigmas.to_string());
        const auto n = factor_norm_report(f, sigmas, 4);
        norm_err = std::max({norm_err, n.common_err, n.free_err});
        o.require(n.common_err <= 1e-10 && n.free_err <= 1e-10, "factor norms " + sigmas.to_string());
        o.require(n.holder_ok, "holder " + sigmas.to_string());
        ++checked;
      }
    }
  }
  o.detail << xi_checked << " xi products; " << checked << " tuple checks, max abs_err/scale " << worst
           << ", max factor-norm rel err " << norm_err;
}

void khintchine(Outcome& o) {
  int runs = 0;
  for (const Size& s : std::vector<Size>{{2, 1, 4}, {3, 1, 4}, {2, 2, 4}, {2, 2, 6}}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto f = make_family(spec_of("random_matrix", s[0], s[1], s[2], seed));
      const auto r = khintchine_iteration_check(f.matrices(), s[0], s[1], s[2]);
      o.require(r.lower_ok && r.upper_ok, size_str(s) + " seed " + std::to_string(seed));
      ++runs;
    }
  }
  o.detail << runs << " runs";
}

void pisier(Outcome& o) {
  double worst = 0.0;
  int runs = 0;
  for (const char* kind : {"free_generators", "dissociate", "rademacher", "martingale_rademacher"}) {
    for (int p : {2, 4, 6, 8}) {
      for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto r = main_inequality_report(make_family(spec_of(kind, 3, 1, p, seed)), p);
        o.require(r.pisier_ok.value_or(false), std::string(kind) + " p = " + std::to_string(p));
        worst = std::max(worst, r.pisier_ratio);
        ++runs;
      }
    }
  }
  o.detail << runs << " runs, max A / ((3 pi / 2) p C) = " << worst;
}

void sublemma(Outcome& o) {
  for (int p : {2, 4, 6, 8, 10}) {
    for (double D : {0.5, 1.0, 3.0}) o.require(sublemma_root_check(p, D).bound_ok, "p = " + std::to_string(p));
  }
  const double root = sublemma_root_check(2, 1.0).root;
  o.require(std::abs(root - (1.0 + std::sqrt(3.0))) <= 1e-10, "root(2, 1)");
  o.detail << "root(2,1) - (1 + sqrt 3) = " << root - (1.0 + std::sqrt(3.0));
}

void phi_r(Outcome& o) {
  for (const auto& [p, d] : std::vector<std::array<int, 2>>{{4, 1}, {4, 2}, {6, 1}}) {
    for (int r = 0; r <= p; ++r) {
      const auto c = phi_r_bound_check(p, d, r);
      o.require(c.ok, "p = " + std::to_string(p) + ", d = " + std::to_string(d) + ", r = " + std::to_string(r));
      o.detail << "(" << p << "," << d << "," << r << ")=" << c.phi_r << "/" << c.bound << " ";
    }
  }
}

void absorption(Outcome& o) {
  double worst = 0.0;
  int runs = 0;
  const std::vector<Word> support = {Word(), Word::parse("g1"), Word::parse("g2"), Word::parse("g1 g2"),
                                     Word::parse("G1 g2 g1")};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto rng = stream_rng(seed, 0);
    WordFunction a;
    for (const auto& w : support) a.emplace_back(w, gaussian_matrix(rng, 2, 2));
    const Index dim = 1 + static_cast<Index>(seed % 4);
    const std::vector<Matrix> us = {random_unitary(rng, dim), random_unitary(rng, dim)};
    for (int p : {2, 4}) {
      const auto r = absorption_check(a, us, p);
      worst = std::max(worst, r.abs_err / r.scale);
      o.require(r.abs_err <= 1e-10 * r.scale, "seed " + std::to_string(seed));
      ++runs;
    }
  }
  o.detail << runs << " runs, max abs_err/scale " << worst;
}

void closed_form_norms(Outcome& o) {
  double worst = 0.0;
  for (int n = 1; n <= 4; ++n) {
    auto spec = spec_of("free_generators", n, 1, 4, 1, 1);
    spec.coefficients = CoefficientSource::kOnes;
    const auto f = make_family(spec);
    const double e2 = std::abs(sum_norm(f, 2) - std::sqrt(double(n)));
    const double e4 = std::abs(sum_norm(f, 4) - std::pow(2.0 * n * n - n, 0.25));
    worst = std::max({worst, e2, e4});
    o.require(e2 <= 1e-12 && e4 <= 1e-12, "n = " + std::to_string(n));
  }
  o.detail << "n = 1..4, max error " << worst;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double seconds;  // 0 = no time limit
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria = {
      {"Moebius identities", 5.0, mobius_identities},
      {"closed-form vs recursive Moebius", 0.0, mobius_oracles},
      {"canonical words are p-dissociate", 10.0, dissociation},
      {"p-orthogonality of generated families", 0.0, orthogonality},
      {"injective/Moebius decomposition", 60.0, decomposition},
      {"factorization of Psi", 0.0, factorization},
      {"iterated Khintchine sandwich", 0.0, khintchine},
      {"d = 1 bound (3 pi / 2) p C", 0.0, pisier},
      {"scalar root bound", 0.0, sublemma},
      {"phi_r counting bound", 0.0, phi_r},
      {"absorption equality", 0.0, absorption},
      {"closed-form generator norms", 0.0, closed_form_norms},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (criteria[i].seconds > 0.0) {
      o.require(elapsed < criteria[i].seconds, "time limit " + std::to_string(criteria[i].seconds) + " s");
    }
    failed += !o.ok;
    std::printf("%s %2zu %s [%.2f s]: %s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].name, elapsed,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
