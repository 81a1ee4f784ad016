#include "porth/lab.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/QR>
#include <unsupported/Eigen/KroneckerProduct>

#include "porth/io.hpp"
#include "porth/partitions.hpp"

namespace porth {

namespace {

double max_split_norm(const OperatorFamily& f, int p, std::uint64_t budget, std::vector<double>* norms) {
  double best = 0.0;
  for (const auto& split : SplitPair::all(f.d())) {
    const double v = flattening_norm(f, split, p, budget);
    if (norms != nullptr) norms->push_back(v);
    best = std::max(best, v);
  }
  return best;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw SizeLimitError("phi_r_bound_check: bound overflows int64");
  return out;
}

std::int64_t factorial(int m) {
  std::int64_t out = 1;
  for (int i = 2; i <= m; ++i) out = checked_mul(out, i);
  return out;
}

std::int64_t binomial(int n, int k) {
  std::int64_t out = 1;
  for (int i = 1; i <= k; ++i) out = checked_mul(out, n - k + i) / i;
  return out;
}

// Diagonal of prod_k r_{k, i_k} on {+-1}^{nd}; r_{k,i} reads bit (k-1) n + (i-1).
std::vector<double> rademacher_signs(const IndexSpace& space, std::size_t gamma) {
  const Index dim = Index{1} << (space.n() * space.d());
  std::vector<double> out(static_cast<std::size_t>(dim));
  for (Index omega = 0; omega < dim; ++omega) {
    int parity = 0;
    for (int k = 1; k <= space.d(); ++k) {
      parity ^= static_cast<int>((omega >> ((k - 1) * space.n() + space.coordinate(gamma, k) - 1)) & 1);
    }
    out[static_cast<std::size_t>(omega)] = parity ? -1.0 : 1.0;
  }
  return out;
}

Index rademacher_dim(const FamilySpec& spec, Index coeff_dim) {
  const int bits = spec.n * spec.d;
  if (bits > 30 || (Index{1} << bits) * coeff_dim > kMaxRademacherDim) {
    throw SizeLimitError("make_family: Rademacher algebra dimension exceeds " +
                         std::to_string(kMaxRademacherDim));
  }
  return Index{1} << bits;
}

Matrix coefficient(const FamilySpec& spec, std::size_t gamma) {
  if (spec.coefficients == CoefficientSource::kOnes) return Matrix::Identity(spec.dim, spec.dim);
  auto rng = stream_rng(spec.seed, gamma);
  return gaussian_matrix(rng, spec.dim, spec.dim);
}

double scalar_coefficient(const FamilySpec& spec, std::size_t gamma) {
  if (spec.coefficients == CoefficientSource::kOnes) return 1.0;
  auto rng = stream_rng(spec.seed, gamma);
  return std::normal_distribution<double>()(rng);
}

std::string witness_text(const std::vector<MultiIndex>& h) {
  std::string out;
  for (std::size_t s = 0; s < h.size(); ++s) {
    if (s > 0) out += ' ';
    out += '(' + format_multi_index(h[s]) + ')';
  }
  return out;
}

}  // namespace

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

Matrix gaussian_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> g;
  Matrix out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const double re = g(rng);
      out(i, j) = Complex(re, g(rng));
    }
  }
  return out;
}

Matrix random_unitary(std::mt19937_64& rng, Index dim) {
  const Matrix z = gaussian_matrix(rng, dim, dim);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

double unitarity_defect(const Matrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

double d_constant(int p, int d, double C, double k_d) {
  require_even_p(p, "d_constant");
  double sup = 0.0;
  for (int r = 0; r <= p - 2; ++r) {
    const int m = p - r;
    sup = std::max(sup, std::exp((d - 1) * std::lgamma(m + 1.0) / m));
  }
  return k_d * sup * std::pow(static_cast<double>(p), d * (d - 1) / 2.0) * C;
}

Quantities compute_quantities(const OperatorFamily& f, int p, std::uint64_t budget) {
  require_even_p(p, "compute_quantities");
  Quantities q;
  q.p = p;
  q.n = f.n();
  q.d = f.d();
  q.A = sum_norm(f, p, budget);
  q.B = ga_even_norm(generator_sum(f), p, budget);
  q.C = max_split_norm(f, p, budget, &q.split_norms);
  q.D = d_constant(p, f.d(), q.C);
  q.tol = 1e-9 * family_scale(f, p, budget);
  q.c_le_b = q.C <= q.B + q.tol;
  q.b_le_2d_c = q.B <= std::ldexp(q.C, f.d()) + q.tol;
  return q;
}

MainInequalityReport main_inequality_report(const OperatorFamily& f, int p, std::uint64_t budget) {
  MainInequalityReport report;
  report.scale = family_scale(f, p, budget);
  report.orthogonality = is_p_orthogonal(f, p, 1e-9 * report.scale, budget);
  if (!report.orthogonality.ok) {
    std::ostringstream witness;
    witness << "h = " << report.orthogonality.worst_h->to_string()
            << ", |moment| = " << report.orthogonality.max_abs_violation;
    throw PreconditionError("main_inequality_report: family is not " + std::to_string(p) + "-orthogonal",
                            witness.str());
  }
  report.q = compute_quantities(f, p, budget);
  const auto& q = report.q;
  const double constant = std::pow(static_cast<double>(p), q.d * (q.d + 1) / 2.0);
  report.ratio = q.C > 0.0 ? q.A / (constant * q.C) : 0.0;
  if (q.d == 1) {
    const double pisier = 1.5 * std::numbers::pi * p;
    report.pisier_ratio = q.C > 0.0 ? q.A / (pisier * q.C) : 0.0;
    report.pisier_ok = q.A <= pisier * q.C + 1e-9 * report.scale;
  }
  report.a_le_2pd = q.A <= 2.0 * p * q.D + q.tol;
  return report;
}

KhintchineCheck khintchine_iteration_check(std::span<const TracialMatrix> a, int n, int d, int p,
                                           std::uint64_t budget) {
  require_even_p(p, "khintchine_iteration_check");
  const auto f = OperatorFamily::from_matrices(n, d, std::vector<TracialMatrix>(a.begin(), a.end()));
  KhintchineCheck out;
  out.S_norm = ga_even_norm(generator_sum(a, n, d), p, budget);
  out.C = max_split_norm(f, p, budget, nullptr);
  out.tol = 1e-9 * family_scale(f, p, budget);
  out.lower_ok = out.C <= out.S_norm + out.tol;
  out.upper_ok = out.S_norm <= std::ldexp(out.C, d) + out.tol;
  return out;
}

AbsorptionCheck absorption_check(const WordFunction& a, const std::vector<Matrix>& unitaries, int p,
                                 std::uint64_t budget) {
  require_even_p(p, "absorption_check");
  if (a.empty()) throw ArgumentError("absorption_check: empty support");
  if (unitaries.empty()) throw ArgumentError("absorption_check: no unitaries");
  const int n = static_cast<int>(unitaries.size());
  const Index rep_dim = unitaries.front().rows();
  for (const auto& u : unitaries) {
    if (u.rows() != rep_dim || u.cols() != rep_dim) throw ArgumentError("absorption_check: unitaries differ in size");
    if (unitarity_defect(u) > 1e-12) throw ArgumentError("absorption_check: matrix is not unitary to 1e-12");
  }
  const Index dim = a.front().second.rows();
  GroupAlgebraElement plain(1, n, dim, dim);
  GroupAlgebraElement twisted(1, n, dim * rep_dim, dim * rep_dim);
  AbsorptionCheck out;
  for (const auto& [word, coeff] : a) {
    if (word.max_generator() > n) throw ArgumentError("absorption_check: word uses a generator without a unitary");
    Matrix pi = Matrix::Identity(rep_dim, rep_dim);
    for (int letter : word.signed_letters()) {
      const Matrix& u = unitaries[static_cast<std::size_t>(std::abs(letter) - 1)];
      pi = letter > 0 ? Matrix(pi * u) : Matrix(pi * u.adjoint());
    }
    plain.add_term(WordTuple({word}), coeff);
    twisted.add_term(WordTuple({word}), Eigen::kroneckerProduct(coeff, pi).eval());
    out.scale += std::pow(schatten_even_norm(TracialMatrix(coeff), p), p);
  }
  out.lhs = ga_even_norm(twisted, p, budget);
  out.rhs = ga_even_norm(plain, p, budget);
  out.abs_err = std::abs(out.lhs - out.rhs);
  return out;
}

SublemmaCheck sublemma_root_check(int p, double D) {
  require_even_p(p, "sublemma_root_check");
  if (!(D > 0.0) || !std::isfinite(D)) throw ArgumentError("sublemma_root_check: D must be positive");
  // In z = A / D the equation is z^p = sum_{r<p} p!/r! z^r; one sign change,
  // so exactly one positive root.
  std::vector<double> c(static_cast<std::size_t>(p));
  double term = 1.0;  // p! / r! for r = p
  for (int r = p - 1; r >= 0; --r) {
    term *= r + 1;
    c[static_cast<std::size_t>(r)] = term;
  }
  const auto g = [&](double z) {
    double rhs = 0.0;
    for (int r = p - 1; r >= 0; --r) rhs = rhs * z + c[static_cast<std::size_t>(r)];
    return std::pow(z, p) - rhs;
  };
  double lo = 1.0, hi = 4.0 * p;
  while (g(hi) <= 0.0) hi *= 2.0;
  while (hi - lo > 1e-14 * hi) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? hi : lo) = mid;
  }
  SublemmaCheck out;
  out.root = 0.5 * (lo + hi) * D;
  out.bound = 2.0 * p * D;
  out.bound_ok = out.root <= out.bound;
  return out;
}

PhiRCheck phi_r_bound_check(int p, int d, int r, std::uint64_t budget) {
  if (p < 1 || d < 1) throw ArgumentError("phi_r_bound_check: need p, d >= 1");
  if (r < 0 || r > p) throw ArgumentError("phi_r_bound_check: r out of range");
  const PartitionLattice lattice(p);
  check_power_budget(lattice.size(), d, budget, "phi_r_bound_check");
  std::vector<std::uint32_t> masks;
  std::vector<std::int64_t> weights;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    if (i == lattice.finest_index()) continue;
    std::uint32_t mask = 0;
    for (int e = 1; e <= p; ++e) {
      if (lattice[i].is_singleton(e)) mask |= 1u << (e - 1);
    }
    masks.push_back(mask);
    weights.push_back(std::abs(lattice.mobius_from_finest(i)));
  }
  PhiRCheck out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  while (true) {
    std::uint32_t common = ~0u;
    std::int64_t weight = 1;
    for (auto i : idx) {
      common &= masks[i];
      weight = checked_mul(weight, weights[i]);
    }
    if (std::popcount(common & ((p >= 32 ? 0u : (1u << p)) - 1u)) == r) {
      out.phi_r += weight;
      ++out.tuples;
    }
    int k = d - 1;
    while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == masks.size()) idx[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) break;
  }
  out.bound = binomial(p, r);
  const std::int64_t f = factorial(p - r);
  for (int k = 0; k < d; ++k) out.bound = checked_mul(out.bound, f);
  out.ok = out.phi_r <= out.bound;
  return out;
}

OperatorFamily make_family(const FamilySpec& spec, std::uint64_t budget) {
  if (spec.kind == "file") {
    if (spec.path.empty()) throw ArgumentError("make_family: kind 'file' needs a path");
    return family_from_json(load_json(spec.path));
  }
  if (spec.n < 1 || spec.d < 1) throw ArgumentError("make_family: need n, d >= 1");
  if (spec.dim < 1) throw ArgumentError("make_family: need dim >= 1");
  const IndexSpace space(spec.n, spec.d);

  if (spec.kind == "free_generators") {
    std::vector<GroupAlgebraElement> values;
    for (std::size_t g = 0; g < space.size(); ++g) {
      WordTuple w(static_cast<std::size_t>(spec.d));
      for (int k = 1; k <= spec.d; ++k) w[static_cast<std::size_t>(k - 1)] = Word::generator(space.coordinate(g, k));
      values.push_back(GroupAlgebraElement::monomial(w, coefficient(spec, g), spec.n));
    }
    return OperatorFamily::from_elements(spec.n, spec.d, std::move(values));
  }
  if (spec.kind == "dissociate") {
    const WordFamily words = spec.words.empty() ? canonical_dissociate(spec.n, spec.d)
                                                : word_family_from_json(load_json(spec.words));
    if (words.index != space) throw ArgumentError("make_family: word family does not match n and d");
    const auto report = is_p_dissociate(words, spec.p, budget);
    if (!report.ok) {
      throw PreconditionError("make_family: word family is not " + std::to_string(spec.p) + "-dissociate",
                              "h = " + witness_text(*report.witness));
    }
    int generators = 1;
    for (const auto& w : words.words) generators = std::max(generators, w.max_generator());
    std::vector<GroupAlgebraElement> values;
    for (std::size_t g = 0; g < space.size(); ++g) {
      values.push_back(GroupAlgebraElement::monomial(WordTuple({words.words[g]}), coefficient(spec, g), generators));
    }
    return OperatorFamily::from_elements(spec.n, spec.d, std::move(values));
  }
  if (spec.kind == "rademacher") {
    const Index dim = rademacher_dim(spec, 1);
    std::vector<TracialMatrix> values;
    for (std::size_t g = 0; g < space.size(); ++g) {
      const auto signs = rademacher_signs(space, g);
      const double c = scalar_coefficient(spec, g);
      Matrix m = Matrix::Zero(dim, dim);
      for (Index w = 0; w < dim; ++w) m(w, w) = c * signs[static_cast<std::size_t>(w)];
      values.emplace_back(std::move(m));
    }
    return OperatorFamily::from_matrices(spec.n, spec.d, std::move(values));
  }
  if (spec.kind == "martingale_rademacher") {
    const Index dim = rademacher_dim(spec, spec.dim);
    std::vector<TracialMatrix> values;
    for (std::size_t g = 0; g < space.size(); ++g) {
      const auto signs = rademacher_signs(space, g);
      const Matrix a = coefficient(spec, g);
      Matrix m = Matrix::Zero(dim * spec.dim, dim * spec.dim);
      for (Index w = 0; w < dim; ++w) m.block(w * spec.dim, w * spec.dim, spec.dim, spec.dim) = signs[static_cast<std::size_t>(w)] * a;
      values.emplace_back(std::move(m));
    }
    return OperatorFamily::from_matrices(spec.n, spec.d, std::move(values));
  }
  if (spec.kind == "random_matrix") {
    std::vector<TracialMatrix> values;
    for (std::size_t g = 0; g < space.size(); ++g) values.emplace_back(coefficient(spec, g));
    return OperatorFamily::from_matrices(spec.n, spec.d, std::move(values));
  }
  throw ArgumentError("make_family: unknown kind '" + spec.kind + "'");
}

DissociateEquivalence dissociate_equivalence_report(std::span<const TracialMatrix> a, int n, int d, int p,
                                                    std::uint64_t budget) {
  const auto words = canonical_dissociate(n, d);
  if (a.size() != words.index.size()) throw ArgumentError("dissociate_equivalence_report: expected n^d coefficients");
  std::vector<GroupAlgebraElement> values;
  for (std::size_t g = 0; g < a.size(); ++g) {
    values.push_back(GroupAlgebraElement::monomial(WordTuple({words.words[g]}), a[g].matrix(), n));
  }
  const auto f = OperatorFamily::from_elements(n, d, std::move(values));
  const auto coeffs = OperatorFamily::from_matrices(n, d, std::vector<TracialMatrix>(a.begin(), a.end()));
  DissociateEquivalence out;
  out.lhs = sum_norm(f, p, budget);
  for (int k = 0; k <= d; ++k) out.rhs = std::max(out.rhs, vv_norm(flatten(coeffs, SplitPair::contiguous(d, k)), p));
  out.rhs_all_splits = max_split_norm(coeffs, p, budget, nullptr);
  return out;
}

double square_function_norm(const OperatorFamily& f, int p) {
  require_even_p(p, "square_function_norm");
  Matrix s = Matrix::Zero(f.coeff_dim(), f.coeff_dim());
  for (const auto& v : f.matrices()) s += v.matrix() * v.matrix().adjoint();
  Matrix acc = s;
  for (int i = 1; i < p / 2; ++i) acc = acc * s;
  const double moment = acc.trace().real() / static_cast<double>(f.coeff_dim());
  return std::pow(std::max(moment, 0.0), 1.0 / p);
}

}  // namespace porth
