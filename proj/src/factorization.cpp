#include "porth/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace porth {

namespace {

void check_sigmas(const PartitionTuple& sigmas, int d, int p) {
  require_even_p(p, "build_factors");
  if (static_cast<int>(sigmas.size()) != d) {
    throw ArgumentError("build_factors: expected " + std::to_string(d) + " partitions");
  }
  if (sigmas.ground_size() != p) {
    throw ArgumentError("build_factors: partitions must be of [" + std::to_string(p) + "]");
  }
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    if (sigmas[k].is_finest()) {
      throw ArgumentError("build_factors: sigma_" + std::to_string(k + 1) + " is the finest partition");
    }
  }
}

}  // namespace

BlockAnatomy BlockAnatomy::of(const PartitionTuple& sigmas) {
  BlockAnatomy a;
  a.sigmas = sigmas;
  a.p = sigmas.ground_size();
  a.d = static_cast<int>(sigmas.size());
  const auto p = static_cast<std::size_t>(a.p);
  const auto d = static_cast<std::size_t>(a.d);
  a.block.assign(p, std::vector<int>(d));
  a.position.assign(p, std::vector<int>(d));
  a.singleton_count.assign(p, 0);
  a.by_count.assign(d + 1, {});
  for (std::size_t k = 0; k < d; ++k) {
    const auto& sigma = sigmas[k];
    std::vector<int> sizes(static_cast<std::size_t>(sigma.block_count()), 0);
    for (std::size_t s = 0; s < p; ++s) {
      const int j = sigma.label(static_cast<int>(s));
      a.block[s][k] = j;
      a.position[s][k] = ++sizes[static_cast<std::size_t>(j)];
    }
    std::vector<std::size_t> offsets;
    for (int m : sizes) {
      offsets.push_back(a.slots);
      a.slots += static_cast<std::size_t>(m - 1);
    }
    for (std::size_t s = 0; s < p; ++s) {
      if (sizes[static_cast<std::size_t>(a.block[s][k])] == 1) ++a.singleton_count[s];
    }
    a.block_size.push_back(std::move(sizes));
    a.slot_offset.push_back(std::move(offsets));
  }
  for (std::size_t s = 0; s < p; ++s) {
    a.by_count[static_cast<std::size_t>(a.singleton_count[s])].push_back(static_cast<int>(s) + 1);
  }
  return a;
}

WordTuple xi_word(int m, int r, int i) {
  if (m < 2) throw ArgumentError("xi_word: need m >= 2");
  if (r < 1 || r > m) throw ArgumentError("xi_word: position out of range");
  if (i < 1) throw ArgumentError("xi_word: generator index must be >= 1");
  WordTuple w(static_cast<std::size_t>(m - 1));
  if (r >= 2) w[static_cast<std::size_t>(r - 2)] = Word::generator(i);
  if (r <= m - 1) w[static_cast<std::size_t>(r - 1)] = Word::generator(i, -1);
  return w;
}

std::vector<std::vector<GroupAlgebraElement>> xi_family(int m, int n) {
  if (n < 1) throw ArgumentError("xi_family: need n >= 1");
  std::vector<std::vector<GroupAlgebraElement>> out(static_cast<std::size_t>(m));
  for (int r = 1; r <= m; ++r) {
    for (int i = 1; i <= n; ++i) {
      out[static_cast<std::size_t>(r - 1)].push_back(
          GroupAlgebraElement::monomial(xi_word(m, r, i), Matrix::Identity(1, 1), n));
    }
  }
  return out;
}

std::vector<GroupAlgebraElement> build_factors(const OperatorFamily& f, const PartitionTuple& sigmas,
                                               int p) {
  check_sigmas(sigmas, f.d(), p);
  const auto anatomy = BlockAnatomy::of(sigmas);
  const IndexSpace& space = f.index();
  const bool matrix = f.kind() == FamilyKind::kMatrix;
  const int generators = matrix ? f.n() : std::max(f.n(), f.elements().front().generators());
  std::vector<GroupAlgebraElement> factors;
  for (int s = 1; s <= p; ++s) {
    const auto us = static_cast<std::size_t>(s - 1);
    const bool adjoint = adjoint_at(AdjointPattern::kAdjointFirst, us);
    GroupAlgebraElement F(anatomy.slots + f.group_arity(), generators, f.coeff_dim(), f.coeff_dim());
    for (std::size_t g = 0; g < space.size(); ++g) {
      WordTuple w(anatomy.slots);
      for (int k = 1; k <= f.d(); ++k) {
        const auto uk = static_cast<std::size_t>(k - 1);
        const int j = anatomy.block[us][uk];
        const int m = anatomy.block_size[uk][static_cast<std::size_t>(j)];
        if (m == 1) continue;
        const WordTuple xi = xi_word(m, anatomy.position[us][uk], space.coordinate(g, k));
        const std::size_t offset = anatomy.slot_offset[uk][static_cast<std::size_t>(j)];
        for (std::size_t t = 0; t < xi.arity(); ++t) w[offset + t] = xi[t];
      }
      if (matrix) {
        const auto& value = f.matrices()[g];
        F.add_term(w, adjoint ? value.adjoint().matrix() : value.matrix());
      } else {
        const GroupAlgebraElement value = adjoint ? f.adjoint_element(g) : f.element(g);
        for (const auto& [word, coeff] : value.terms()) F.add_term(concatenate(w, word), coeff);
      }
    }
    factors.push_back(std::move(F));
  }
  return factors;
}

FactorizationCheck factorization_check(const OperatorFamily& f, const PartitionTuple& sigmas, int p,
                                       std::uint64_t budget) {
  FactorizationCheck out;
  const auto factors = build_factors(f, sigmas, p);
  out.psi_direct = psi(f, sigmas, p, budget);
  // The half products have at most |terms|^{p/2} words.
  check_power_budget(factors.front().term_count(), (p + 1) / 2, budget, "factor product");
  out.psi_factored = ga_trace_product(factors);
  out.abs_err = std::abs(out.psi_direct - out.psi_factored);
  return out;
}

FactorNormReport factor_norm_report(const OperatorFamily& f, const PartitionTuple& sigmas, int p,
                                    std::uint64_t budget) {
  const auto anatomy = BlockAnatomy::of(sigmas);
  const auto factors = build_factors(f, sigmas, p);
  FactorNormReport report;
  report.sum_norm = sum_norm(f, p, budget);
  report.generator_norm = ga_even_norm(generator_sum(f), p, budget);
  report.psi = ga_trace_product(factors);
  report.norm_product = 1.0;
  const auto relative = [](double a, double b) { return b == 0.0 ? std::abs(a) : std::abs(a - b) / b; };
  for (int s = 1; s <= p; ++s) {
    FactorNorm entry{s, anatomy.q(s), ga_even_norm(factors[static_cast<std::size_t>(s - 1)], p, budget)};
    report.norm_product *= entry.norm;
    if (entry.q == f.d()) report.common_err = std::max(report.common_err, relative(entry.norm, report.sum_norm));
    if (entry.q == 0) report.free_err = std::max(report.free_err, relative(entry.norm, report.generator_norm));
    report.factors.push_back(entry);
  }
  report.holder_ok = std::abs(report.psi) <= report.norm_product * (1.0 + 1e-9) + 1e-12;
  return report;
}

}  // namespace porth
