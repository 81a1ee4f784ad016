#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "porth/factorization.hpp"

using namespace porth;

namespace {

Matrix random_matrix(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> g;
  Matrix out(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) out(i, j) = Complex(g(rng), g(rng));
  }
  return out;
}

OperatorFamily random_family(std::mt19937_64& rng, int n, int d, Index dim) {
  std::vector<TracialMatrix> values;
  for (std::size_t i = 0; i < IndexSpace(n, d).size(); ++i) values.emplace_back(random_matrix(rng, dim));
  return OperatorFamily::from_matrices(n, d, values);
}

OperatorFamily free_generator_family(int n, int d) {
  const IndexSpace space(n, d);
  std::vector<GroupAlgebraElement> values;
  for (std::size_t g = 0; g < space.size(); ++g) {
    WordTuple w(static_cast<std::size_t>(d));
    for (int k = 1; k <= d; ++k) w[static_cast<std::size_t>(k - 1)] = Word::generator(space.coordinate(g, k));
    values.push_back(GroupAlgebraElement::monomial(w, Matrix::Identity(1, 1), n));
  }
  return OperatorFamily::from_elements(n, d, values);
}

// Every sigma tuple in P_p^d with no entry equal to the finest partition.
std::vector<PartitionTuple> coarse_tuples(int p, int d) {
  std::vector<SetPartition> coarse;
  for (const auto& s : all_partitions(p)) {
    if (!s.is_finest()) coarse.push_back(s);
  }
  std::vector<PartitionTuple> out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  while (true) {
    std::vector<SetPartition> entries;
    for (auto i : idx) entries.push_back(coarse[i]);
    out.emplace_back(entries);
    int k = d - 1;
    while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == coarse.size()) idx[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) break;
  }
  return out;
}

}  // namespace

TEST_CASE("block anatomy") {
  const PartitionTuple sigmas({SetPartition::parse("1,3|2|4"), SetPartition::parse("1|2,3,4")});
  const auto a = BlockAnatomy::of(sigmas);
  CHECK(a.p == 4);
  CHECK(a.d == 2);
  CHECK(a.slots == 1 + 2);
  CHECK(a.block[2][0] == 0);
  CHECK(a.position[2][0] == 2);
  CHECK(a.position[3][1] == 3);
  CHECK(a.q(1) == 1);
  CHECK(a.q(2) == 1);
  CHECK(a.q(3) == 0);
  CHECK(a.q(4) == 1);
  CHECK(a.by_count[0] == std::vector<int>{3});
  CHECK(a.by_count[1] == std::vector<int>{1, 2, 4});
  CHECK(a.by_count[2].empty());
  CHECK(a.common_singletons() == 0);
  std::size_t total = 0;
  for (const auto& b : a.by_count) total += b.size();
  CHECK(total == 4);
}

TEST_CASE("xi family traces vanish off constant functions") {
  for (int m = 2; m <= 4; ++m) {
    for (int n = 1; n <= 3; ++n) {
      const auto xi = xi_family(m, n);
      std::vector<int> g(static_cast<std::size_t>(m), 1);
      while (true) {
        std::vector<GroupAlgebraElement> factors;
        for (int r = 0; r < m; ++r) factors.push_back(xi[static_cast<std::size_t>(r)][static_cast<std::size_t>(g[static_cast<std::size_t>(r)] - 1)]);
        const bool constant = std::all_of(g.begin(), g.end(), [&](int v) { return v == g[0]; });
        CHECK(ga_trace_product(factors) == Complex(constant ? 1.0 : 0.0));
        int r = m - 1;
        while (r >= 0 && ++g[static_cast<std::size_t>(r)] > n) g[static_cast<std::size_t>(r--)] = 1;
        if (r < 0) break;
      }
    }
  }
  CHECK_THROWS_AS(xi_family(1, 2), ArgumentError);
}

TEST_CASE("build_factors examples") {
  std::mt19937_64 rng(1);
  const auto f = random_family(rng, 3, 1, 2);

  SUBCASE("d = 1, p = 2 unfolds to the generator pair") {
    const auto F = build_factors(f, PartitionTuple({SetPartition::coarsest(2)}), 2);
    REQUIRE(F.size() == 2);
    for (int k = 1; k <= 3; ++k) {
      const Matrix& fk = f.matrices()[static_cast<std::size_t>(k - 1)].matrix();
      const Matrix* first = F[0].coefficient(WordTuple({Word::generator(k, -1)}));
      const Matrix* second = F[1].coefficient(WordTuple({Word::generator(k)}));
      REQUIRE(first != nullptr);
      REQUIRE(second != nullptr);
      CHECK((*first - fk.adjoint()).norm() == 0.0);
      CHECK((*second - fk).norm() == 0.0);
    }
    CHECK(F[0].term_count() == 3);
  }

  SUBCASE("coarsest tuple: one letter per slot and term") {
    const auto g = random_family(rng, 2, 2, 1);
    const auto F = build_factors(g, PartitionTuple({SetPartition::coarsest(4), SetPartition::coarsest(4)}), 4);
    for (const auto& Fs : F) {
      CHECK(Fs.arity() == 6);
      for (const auto& [w, c] : Fs.terms()) {
        for (const auto& word : w.components()) CHECK(word.length() <= 1);
      }
    }
  }

  SUBCASE("common singletons carry the identity word") {
    const auto F = build_factors(f, PartitionTuple({SetPartition::parse("1,2,3|4")}), 4);
    REQUIRE(F[3].term_count() == 1);
    const Matrix* c = F[3].coefficient(WordTuple(F[3].arity()));
    REQUIRE(c != nullptr);
    Matrix total = Matrix::Zero(2, 2);
    for (const auto& v : f.matrices()) total += v.matrix();
    CHECK((*c - total).norm() < 1e-12);
  }

  CHECK_THROWS_AS(build_factors(f, PartitionTuple({SetPartition::finest(4)}), 4), ArgumentError);
  CHECK_THROWS_AS(build_factors(f, PartitionTuple({SetPartition::coarsest(3)}), 4), ArgumentError);
  CHECK_THROWS_AS(build_factors(f, PartitionTuple({SetPartition::coarsest(4), SetPartition::coarsest(4)}), 4),
                  ArgumentError);
}

TEST_CASE("factorization identity") {
  SUBCASE("scalar d = 1, p = 2 gives the sum of squares") {
    std::vector<TracialMatrix> values = {TracialMatrix::scalar(1.0), TracialMatrix::scalar(Complex(0, 2)),
                                         TracialMatrix::scalar(-3.0)};
    const auto f = OperatorFamily::from_matrices(3, 1, values);
    const auto r = factorization_check(f, PartitionTuple({SetPartition::coarsest(2)}), 2);
    CHECK(std::abs(r.psi_direct - 14.0) < 1e-12);
    CHECK(std::abs(r.psi_factored - 14.0) < 1e-12);
  }
  SUBCASE("all 196 tuples at n = 2, d = 2, p = 4") {
    const auto tuples = coarse_tuples(4, 2);
    CHECK(tuples.size() == 196);
    std::mt19937_64 rng(2);
    for (int seed = 0; seed < 2; ++seed) {
      const auto f = random_family(rng, 2, 2, 2);
      const double scale = family_scale(f, 4);
      for (const auto& sigmas : tuples) CHECK(factorization_check(f, sigmas, 4).abs_err <= 1e-9 * scale);
    }
  }
  SUBCASE("group-algebra families") {
    const auto f = free_generator_family(2, 2);
    for (const auto& sigmas : coarse_tuples(4, 2)) {
      const auto r = factorization_check(f, sigmas, 4);
      CHECK(r.abs_err <= 1e-12);
    }
    const auto g = free_generator_family(3, 1);
    for (const auto& sigmas : coarse_tuples(6, 1)) CHECK(factorization_check(g, sigmas, 6).abs_err <= 1e-12);
  }
}

TEST_CASE("factor norms") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 3; ++trial) {
    const auto f = random_family(rng, 2, 2, 2);
    for (const auto& sigmas : coarse_tuples(4, 2)) {
      const auto r = factor_norm_report(f, sigmas, 4);
      CHECK(r.common_err <= 1e-10);
      CHECK(r.free_err <= 1e-10);
      CHECK(r.holder_ok);
      CHECK(r.factors.size() == 4);
    }
  }
  const auto g = free_generator_family(3, 1);
  for (const auto& sigmas : coarse_tuples(4, 1)) {
    const auto r = factor_norm_report(g, sigmas, 4);
    CHECK(r.common_err <= 1e-10);
    CHECK(r.free_err <= 1e-10);
    CHECK(r.holder_ok);
  }
}
