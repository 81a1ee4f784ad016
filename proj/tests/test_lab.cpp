#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <unsupported/Eigen/Polynomials>

#include "doctest.h"
#include "porth/lab.hpp"

using namespace porth;

namespace {

FamilySpec spec_of(const char* kind, int n, int d, int p, std::uint64_t seed = 1, Index dim = 1) {
  FamilySpec s;
  s.kind = kind;
  s.n = n;
  s.d = d;
  s.p = p;
  s.seed = seed;
  s.dim = dim;
  return s;
}

std::vector<TracialMatrix> random_coefficients(std::uint64_t seed, std::size_t count, Index dim) {
  std::vector<TracialMatrix> out;
  for (std::size_t g = 0; g < count; ++g) {
    auto rng = stream_rng(seed, g);
    out.emplace_back(gaussian_matrix(rng, dim, dim));
  }
  return out;
}

// Largest real root of z^p - sum_{r<p} p!/r! z^r from Eigen's companion-matrix solver.
double polynomial_oracle_root(int p) {
  Eigen::VectorXd coeffs(p + 1);
  double term = 1.0;
  coeffs(p) = 1.0;
  for (int r = p - 1; r >= 0; --r) {
    term *= r + 1;
    coeffs(r) = -term;
  }
  Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(coeffs);
  bool found = false;
  return solver.greatestRealRoot(found);
}

// phi_r straight from the partition API.
std::int64_t phi_r_oracle(int p, int d, int r) {
  std::vector<SetPartition> coarse;
  for (const auto& s : all_partitions(p)) {
    if (!s.is_finest()) coarse.push_back(s);
  }
  std::int64_t total = 0;
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  while (true) {
    int common = 0;
    for (int e = 1; e <= p; ++e) {
      bool all = true;
      for (auto i : idx) all = all && coarse[i].is_singleton(e);
      common += all;
    }
    if (common == r) {
      std::int64_t w = 1;
      for (auto i : idx) w *= std::abs(mobius(SetPartition::finest(p), coarse[i]));
      total += w;
    }
    int k = d - 1;
    while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == coarse.size()) idx[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) break;
  }
  return total;
}

}  // namespace

TEST_CASE("rng streams are reproducible and independent") {
  auto a = stream_rng(7, 3), b = stream_rng(7, 3), c = stream_rng(7, 4), e = stream_rng(8, 3);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(x != e());
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto rng = stream_rng(seed, 0);
    for (Index n : {1, 2, 4}) CHECK(unitarity_defect(random_unitary(rng, n)) <= 1e-12);
  }
}

TEST_CASE("compute_quantities examples") {
  auto ones = spec_of("free_generators", 4, 1, 2);
  ones.coefficients = CoefficientSource::kOnes;
  const auto q = compute_quantities(make_family(ones), 2);
  CHECK(q.A == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(q.C == doctest::Approx(2.0).epsilon(1e-12));

  std::vector<TracialMatrix> scalars(4, TracialMatrix::scalar(1.0));
  const auto f = OperatorFamily::from_matrices(2, 2, scalars);
  for (int p : {2, 4, 6}) {
    const auto r = compute_quantities(f, p);
    CHECK(r.C == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.split_norms.size() == 4);
    CHECK(r.c_le_b);
    CHECK(r.b_le_2d_c);
  }

  const auto zero = OperatorFamily::from_matrices(2, 2, std::vector<TracialMatrix>(4, TracialMatrix::zero(2)));
  const auto z = compute_quantities(zero, 4);
  CHECK(z.A == 0.0);
  CHECK(z.B == 0.0);
  CHECK(z.C == 0.0);
  CHECK(z.D == 0.0);
}

TEST_CASE("d_constant") {
  CHECK(d_constant(4, 1, 1.0) == doctest::Approx(1.0));
  // d = 2, p = 4: sup over m = 4, 3, 2 of m!^{1/m} is 24^{1/4}; times p^1.
  CHECK(d_constant(4, 2, 1.0) == doctest::Approx(std::pow(24.0, 0.25) * 4.0));
  for (int p : {2, 4, 6, 8}) {
    for (int d = 1; d <= 3; ++d) {
      CHECK(d_constant(p, d, 1.0) <= std::pow(double(p), (d + 2) * (d - 1) / 2.0) + 1e-12);
    }
  }
}

TEST_CASE("main inequality report") {
  SUBCASE("one nonzero value") {
    for (auto [n, d, p] : std::vector<std::array<int, 3>>{{3, 1, 4}, {2, 2, 4}, {2, 2, 2}}) {
      const IndexSpace space(n, d);
      std::vector<TracialMatrix> values(space.size(), TracialMatrix::zero(2));
      values[1] = random_coefficients(3, 1, 2)[0];
      const auto f = OperatorFamily::from_matrices(n, d, values);
      const auto r = main_inequality_report(f, p);
      CHECK(r.q.A == doctest::Approx(r.q.C).epsilon(1e-12));
      CHECK(r.ratio == doctest::Approx(std::pow(double(p), -d * (d + 1) / 2.0)).epsilon(1e-12));
    }
  }
  SUBCASE("pisier bound for 1-indexed families") {
    for (const char* kind : {"free_generators", "dissociate", "rademacher", "martingale_rademacher"}) {
      for (int p : {2, 4, 6}) {
        const auto f = make_family(spec_of(kind, 3, 1, p, 11, 2));
        const auto r = main_inequality_report(f, p);
        REQUIRE(r.pisier_ok.has_value());
        CHECK(*r.pisier_ok);
        if (p <= 3) CHECK(r.orthogonality.count_checked > 0);
      }
    }
  }
  SUBCASE("two-indexed families report a ratio only") {
    const auto r = main_inequality_report(make_family(spec_of("free_generators", 2, 2, 4)), 4);
    CHECK_FALSE(r.pisier_ok.has_value());
    CHECK(r.ratio <= 1.0);
  }
  SUBCASE("non-orthogonal input") {
    const auto f = make_family(spec_of("random_matrix", 2, 1, 2, 1, 2));
    try {
      main_inequality_report(f, 2);
      FAIL("expected PreconditionError");
    } catch (const PreconditionError& e) {
      CHECK(e.witness().find("h = ") == 0);
    }
  }
}

TEST_CASE("khintchine iteration") {
  SUBCASE("scalar d = 1") {
    const std::vector<TracialMatrix> a = {TracialMatrix::scalar(1.0), TracialMatrix::scalar(-2.0),
                                          TracialMatrix::scalar(Complex(0.5, 1.0))};
    const double l2 = std::sqrt(1.0 + 4.0 + 1.25);
    for (int p : {2, 4, 6}) {
      const auto r = khintchine_iteration_check(a, 3, 1, p);
      CHECK(r.S_norm >= l2 - 1e-12);
      CHECK(r.S_norm <= 2 * l2 + 1e-12);
      CHECK(r.C == doctest::Approx(l2).epsilon(1e-12));
      CHECK(r.lower_ok);
      CHECK(r.upper_ok);
    }
  }
  SUBCASE("single support point") {
    std::vector<TracialMatrix> a(4, TracialMatrix::zero(3));
    a[2] = random_coefficients(5, 1, 3)[0];
    const auto r = khintchine_iteration_check(a, 2, 2, 4);
    CHECK(r.S_norm == doctest::Approx(schatten_even_norm(a[2], 4)).epsilon(1e-12));
    CHECK(r.C == doctest::Approx(r.S_norm).epsilon(1e-12));
  }
  SUBCASE("random matrices") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto a = random_coefficients(seed, 4, 2);
      const auto r = khintchine_iteration_check(a, 2, 2, 4);
      CHECK(r.lower_ok);
      CHECK(r.upper_ok);
    }
  }
}

TEST_CASE("absorption") {
  auto rng = stream_rng(1, 0);
  const WordFunction a = {{Word::parse("g1"), gaussian_matrix(rng, 2, 2)},
                          {Word::parse("g2"), gaussian_matrix(rng, 2, 2)},
                          {Word::parse("g1 g2"), gaussian_matrix(rng, 2, 2)}};
  const std::vector<Matrix> identity(2, Matrix::Identity(3, 3));
  const auto t = absorption_check(a, identity, 4);
  CHECK(t.abs_err <= 1e-12 * t.scale);

  const WordFunction e = {{Word(), gaussian_matrix(rng, 2, 2)}};
  const std::vector<Matrix> us = {random_unitary(rng, 3), random_unitary(rng, 3)};
  const auto s = absorption_check(e, us, 4);
  CHECK(s.lhs == doctest::Approx(schatten_even_norm(TracialMatrix(e[0].second), 4)).epsilon(1e-12));
  CHECK(s.rhs == doctest::Approx(s.lhs).epsilon(1e-12));

  for (int p : {2, 4}) {
    const auto r = absorption_check(a, us, p);
    CHECK(r.abs_err <= 1e-10 * r.scale);
  }
  Matrix bad = Matrix::Identity(3, 3);
  bad(0, 0) = 1.1;
  CHECK_THROWS_AS(absorption_check(a, {bad, us[1]}, 4), ArgumentError);
  CHECK_THROWS_AS(absorption_check(a, {us[0]}, 4), ArgumentError);
}

TEST_CASE("sublemma root") {
  const auto r = sublemma_root_check(2, 1.0);
  CHECK(std::abs(r.root - (1.0 + std::sqrt(3.0))) <= 1e-10);
  CHECK(r.bound_ok);
  CHECK(sublemma_root_check(4, 1.0).root <= 8.0);
  for (int p : {2, 4, 6, 8, 10}) {
    const double oracle = polynomial_oracle_root(p);
    CHECK(std::abs(sublemma_root_check(p, 1.0).root - oracle) <= 1e-9 * oracle);
    for (double D : {0.5, 1.0, 3.0}) {
      const auto s = sublemma_root_check(p, D);
      CHECK(s.bound_ok);
      CHECK(s.root == doctest::Approx(D * sublemma_root_check(p, 1.0).root).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(sublemma_root_check(3, 1.0), ArgumentError);
  CHECK_THROWS_AS(sublemma_root_check(4, 0.0), ArgumentError);
}

TEST_CASE("phi_r bound") {
  CHECK(phi_r_bound_check(4, 2, 4).phi_r == 0);
  const auto base = phi_r_bound_check(2, 1, 0);
  CHECK(base.phi_r == 1);
  CHECK(base.bound == 2);
  CHECK(base.ok);
  for (auto [p, d] : std::vector<std::array<int, 2>>{{4, 1}, {4, 2}, {6, 1}, {3, 2}}) {
    std::int64_t total = 0;
    for (int r = 0; r <= p; ++r) {
      const auto c = phi_r_bound_check(p, d, r);
      CHECK(c.ok);
      CHECK(c.phi_r == phi_r_oracle(p, d, r));
      total += c.phi_r;
    }
    std::int64_t f = 1;
    for (int i = 2; i <= p; ++i) f *= i;
    CHECK(total == static_cast<std::int64_t>(std::pow(double(f - 1), d)));
  }
  CHECK_THROWS_AS(phi_r_bound_check(4, 1, 5), ArgumentError);
  CHECK_THROWS_AS(phi_r_bound_check(10, 2, 0, 1000), SizeLimitError);
}

TEST_CASE("make_family kinds") {
  const auto free = make_family(spec_of("free_generators", 2, 2, 4));
  CHECK(free.kind() == FamilyKind::kGroupAlgebra);
  CHECK(free.size() == 4);
  for (const auto& v : free.elements()) {
    REQUIRE(v.term_count() == 1);
    const auto& w = v.terms().begin()->first;
    CHECK(w[0].length() == 1);
    CHECK(w[1].length() == 1);
  }

  auto mart = spec_of("martingale_rademacher", 2, 1, 4);
  mart.coefficients = CoefficientSource::kOnes;
  const auto m = make_family(mart);
  CHECK(m.coeff_dim() == 4);
  for (const auto& v : m.matrices()) {
    CHECK((v.matrix() - Matrix(v.matrix().diagonal().asDiagonal())).norm() == 0.0);
    CHECK(v.matrix().cwiseAbs().diagonal().minCoeff() == 1.0);
  }
  CHECK(is_p_orthogonal(m, 4, 1e-12).ok);

  auto dis = spec_of("dissociate", 2, 2, 4);
  dis.coefficients = CoefficientSource::kOnes;
  CHECK(is_p_orthogonal(make_family(dis), 4, 0.0).ok);
  dis.n = 4;
  const auto wide = is_p_orthogonal(make_family(dis), 4, 0.0);
  CHECK(wide.ok);
  CHECK(wide.count_checked > 0);

  for (const char* kind : {"rademacher", "martingale_rademacher"}) {
    const auto r = is_p_orthogonal(make_family(spec_of(kind, 4, 1, 4, 3, 2)), 4, 1e-12);
    CHECK(r.ok);
    CHECK(r.count_checked > 0);
  }

  const auto x = make_family(spec_of("random_matrix", 2, 2, 4, 9, 3));
  const auto y = make_family(spec_of("random_matrix", 2, 2, 4, 9, 3));
  const auto z = make_family(spec_of("random_matrix", 2, 2, 4, 10, 3));
  CHECK(x.matrices()[3].matrix() == y.matrices()[3].matrix());
  CHECK(x.matrices()[3].matrix() != z.matrices()[3].matrix());

  CHECK_THROWS_AS(make_family(spec_of("nonsense", 2, 2, 4)), ArgumentError);
  CHECK_THROWS_AS(make_family(spec_of("rademacher", 6, 2, 4)), SizeLimitError);
}

TEST_CASE("decomposition on generated families") {
  for (const char* kind : {"free_generators", "dissociate", "rademacher", "martingale_rademacher"}) {
    for (auto [n, d, p] : std::vector<std::array<int, 3>>{{2, 1, 4}, {3, 1, 4}, {2, 2, 4}}) {
      const auto f = make_family(spec_of(kind, n, d, p, 4, 2));
      const auto r = mobius_decomposition_check(f, p);
      CHECK(r.abs_err <= 1e-8 * r.scale);
      CHECK(std::abs(std::pow(sum_norm(f, p), p) - r.mobius_part) <= 1e-8 * r.scale);
    }
  }
}

TEST_CASE("dissociate equivalence") {
  const std::vector<TracialMatrix> ones(4, TracialMatrix::scalar(1.0));
  CHECK(dissociate_equivalence_report(ones, 2, 2, 4).rhs == doctest::Approx(2.0).epsilon(1e-12));

  std::vector<TracialMatrix> single(4, TracialMatrix::zero(2));
  single[3] = random_coefficients(2, 1, 2)[0];
  const auto s = dissociate_equivalence_report(single, 2, 2, 4);
  const double norm = schatten_even_norm(single[3], 4);
  CHECK(s.lhs == doctest::Approx(norm).epsilon(1e-12));
  CHECK(s.rhs == doctest::Approx(norm).epsilon(1e-12));
  CHECK(s.rhs_all_splits == doctest::Approx(norm).epsilon(1e-12));

  const auto r = dissociate_equivalence_report(random_coefficients(4, 4, 2), 2, 2, 4);
  CHECK(r.lhs > 0.0);
  CHECK(r.rhs <= r.rhs_all_splits + 1e-12);
}

TEST_CASE("square function of commutative families") {
  for (auto [n, d] : std::vector<std::array<int, 2>>{{3, 1}, {2, 2}}) {
    for (int p : {2, 4, 6}) {
      const auto f = make_family(spec_of("rademacher", n, d, p, 6));
      SplitPair row;
      for (int k = 1; k <= d; ++k) row.beta.push_back(k);
      const double c = flattening_norm(f, row, p);
      CHECK(std::abs(c - square_function_norm(f, p)) <= 1e-9 * (1.0 + c));
    }
  }
}
