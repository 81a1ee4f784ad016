#include "porth/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace porth {

namespace {

bool exactly_zero(const Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (m(i, j) != Complex(0.0, 0.0)) return false;
    }
  }
  return true;
}

// Tr(a b) without forming the product.
Complex trace_of_product(const Matrix& a, const Matrix& b) {
  return a.cwiseProduct(b.transpose()).sum();
}

double real_root(double moment, int p) {
  return std::pow(std::max(moment, 0.0), 1.0 / static_cast<double>(p));
}

void check_compatible(const GroupAlgebraElement& x, const GroupAlgebraElement& y, const char* what,
                      bool additive) {
  if (x.arity() != y.arity()) {
    throw ArgumentError(std::string(what) + ": arity mismatch (" + std::to_string(x.arity()) +
                        " vs " + std::to_string(y.arity()) + ")");
  }
  if (x.arity() > 0 && x.generators() != y.generators()) {
    throw ArgumentError(std::string(what) + ": generator count mismatch");
  }
  const bool ok = additive ? (x.rows() == y.rows() && x.cols() == y.cols()) : x.cols() == y.rows();
  if (!ok) throw ArgumentError(std::string(what) + ": coefficient dimension mismatch");
}

GroupAlgebraElement power(const GroupAlgebraElement& y, int k) {
  GroupAlgebraElement out = y;
  for (int i = 1; i < k; ++i) out = ga_multiply(out, y);
  return out;
}

// Tr-based pairing of l and r on inverse words: sum_w Tr(l_w r_{w^-1}).
Complex joined_trace(const GroupAlgebraElement& l, const GroupAlgebraElement& r) {
  Complex sum = 0.0;
  for (const auto& [w, c] : l.terms()) {
    if (const Matrix* other = r.coefficient(inverse(w))) sum += trace_of_product(c, *other);
  }
  return sum;
}

std::size_t projected_index(const IndexSpace& space, std::size_t linear,
                            const std::vector<int>& coords) {
  std::size_t out = 0;
  for (int k : coords) {
    out = out * static_cast<std::size_t>(space.n()) + static_cast<std::size_t>(space.coordinate(linear, k) - 1);
  }
  return out;
}

std::size_t power_of(int n, std::size_t e) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < e; ++i) out *= static_cast<std::size_t>(n);
  return out;
}

WordTuple generator_tuple(const IndexSpace& space, std::size_t linear) {
  WordTuple w(static_cast<std::size_t>(space.d()));
  for (int k = 1; k <= space.d(); ++k) {
    w[static_cast<std::size_t>(k - 1)] = Word::generator(space.coordinate(linear, k));
  }
  return w;
}

}  // namespace

void require_even_p(int p, const char* what) {
  if (p < 2 || p % 2 != 0) {
    throw ArgumentError(std::string(what) + ": p must be an even integer >= 2, got " +
                        std::to_string(p));
  }
}

TracialMatrix::TracialMatrix(Matrix value) : value_(std::move(value)) {
  if (value_.rows() != value_.cols() || value_.rows() == 0) {
    throw ArgumentError("TracialMatrix: matrix must be square and non-empty");
  }
}

TracialMatrix TracialMatrix::identity(Index dim) { return TracialMatrix(Matrix::Identity(dim, dim)); }
TracialMatrix TracialMatrix::zero(Index dim) { return TracialMatrix(Matrix::Zero(dim, dim)); }

TracialMatrix operator*(const TracialMatrix& a, const TracialMatrix& b) {
  if (a.dim() != b.dim()) throw ArgumentError("TracialMatrix: dimension mismatch");
  return TracialMatrix(a.value_ * b.value_);
}

TracialMatrix operator+(const TracialMatrix& a, const TracialMatrix& b) {
  if (a.dim() != b.dim()) throw ArgumentError("TracialMatrix: dimension mismatch");
  return TracialMatrix(a.value_ + b.value_);
}

Complex ntrace(const TracialMatrix& x) {
  return x.matrix().trace() / static_cast<double>(x.dim());
}

double schatten_even_norm(const TracialMatrix& x, int p) {
  require_even_p(p, "schatten_even_norm");
  const Matrix y = x.matrix().adjoint() * x.matrix();
  Matrix acc = y;
  for (int i = 1; i < p / 2; ++i) acc = acc * y;
  return real_root(acc.trace().real() / static_cast<double>(x.dim()), p);
}

SplitPair SplitPair::from_mask(int d, unsigned mask) {
  SplitPair s;
  for (int k = 1; k <= d; ++k) {
    if (mask & (1u << (k - 1))) {
      s.alpha.push_back(k);
    } else {
      s.beta.push_back(k);
    }
  }
  return s;
}

std::vector<SplitPair> SplitPair::all(int d) {
  if (d < 0 || d > 16) throw ArgumentError("SplitPair::all: d out of range");
  std::vector<SplitPair> out;
  for (unsigned mask = 0; mask < (1u << d); ++mask) out.push_back(from_mask(d, mask));
  return out;
}

SplitPair SplitPair::contiguous(int d, int k) {
  if (k < 0 || k > d) throw ArgumentError("SplitPair::contiguous: k out of range");
  SplitPair s;
  for (int i = 1; i <= d; ++i) (i <= k ? s.alpha : s.beta).push_back(i);
  return s;
}

void SplitPair::validate(int d) const {
  std::vector<int> seen(static_cast<std::size_t>(d) + 1, 0);
  for (int k : alpha) {
    if (k < 1 || k > d) throw ArgumentError("SplitPair: coordinate out of range");
    ++seen[static_cast<std::size_t>(k)];
  }
  for (int k : beta) {
    if (k < 1 || k > d) throw ArgumentError("SplitPair: coordinate out of range");
    ++seen[static_cast<std::size_t>(k)];
  }
  for (int k = 1; k <= d; ++k) {
    if (seen[static_cast<std::size_t>(k)] != 1) {
      throw ArgumentError("SplitPair: alpha and beta must partition [d]");
    }
  }
}

GroupAlgebraElement::GroupAlgebraElement(std::size_t arity, int generators, Index rows, Index cols)
    : arity_(arity), generators_(generators), rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) throw ArgumentError("GroupAlgebraElement: empty coefficients");
}

GroupAlgebraElement GroupAlgebraElement::identity(std::size_t arity, int generators, Index dim) {
  GroupAlgebraElement x(arity, generators, dim, dim);
  x.add_term(WordTuple(arity), Matrix::Identity(dim, dim));
  return x;
}

GroupAlgebraElement GroupAlgebraElement::lift(const TracialMatrix& a, std::size_t arity,
                                              int generators) {
  GroupAlgebraElement x(arity, generators, a.dim(), a.dim());
  x.add_term(WordTuple(arity), a.matrix());
  return x;
}

GroupAlgebraElement GroupAlgebraElement::monomial(const WordTuple& w, const Matrix& coeff,
                                                  int generators) {
  GroupAlgebraElement x(w.arity(), generators, coeff.rows(), coeff.cols());
  x.add_term(w, coeff);
  return x;
}

void GroupAlgebraElement::add_term(const WordTuple& w, const Matrix& coeff) {
  if (w.arity() != arity_) throw ArgumentError("GroupAlgebraElement: word arity mismatch");
  if (coeff.rows() != rows_ || coeff.cols() != cols_) {
    throw ArgumentError("GroupAlgebraElement: coefficient shape mismatch");
  }
  for (const auto& word : w.components()) {
    if (word.max_generator() > generators_) {
      throw ArgumentError("GroupAlgebraElement: word uses generator beyond n = " +
                          std::to_string(generators_));
    }
  }
  auto it = terms_.find(w);
  if (it == terms_.end()) {
    if (!exactly_zero(coeff)) terms_.emplace(w, coeff);
    return;
  }
  it->second += coeff;
  if (exactly_zero(it->second)) terms_.erase(it);
}

const Matrix* GroupAlgebraElement::coefficient(const WordTuple& w) const {
  const auto it = terms_.find(w);
  return it == terms_.end() ? nullptr : &it->second;
}

GroupAlgebraElement ga_multiply(const GroupAlgebraElement& x, const GroupAlgebraElement& y) {
  check_compatible(x, y, "ga_multiply", false);
  GroupAlgebraElement out(x.arity(), x.generators(), x.rows(), y.cols());
  for (const auto& [wx, cx] : x.terms()) {
    for (const auto& [wy, cy] : y.terms()) out.add_term(wx * wy, cx * cy);
  }
  return out;
}

GroupAlgebraElement ga_add(const GroupAlgebraElement& x, const GroupAlgebraElement& y) {
  check_compatible(x, y, "ga_add", true);
  GroupAlgebraElement out = x;
  for (const auto& [w, c] : y.terms()) out.add_term(w, c);
  return out;
}

GroupAlgebraElement ga_adjoint(const GroupAlgebraElement& x) {
  GroupAlgebraElement out(x.arity(), x.generators(), x.cols(), x.rows());
  for (const auto& [w, c] : x.terms()) out.add_term(inverse(w), c.adjoint());
  return out;
}

GroupAlgebraElement with_prefix(const WordTuple& prefix, const GroupAlgebraElement& x,
                                int prefix_generators) {
  GroupAlgebraElement out(prefix.arity() + x.arity(), std::max(prefix_generators, x.generators()),
                          x.rows(), x.cols());
  for (const auto& [w, c] : x.terms()) out.add_term(concatenate(prefix, w), c);
  return out;
}

Complex ga_trace(const GroupAlgebraElement& x) {
  if (x.rows() != x.cols()) throw ArgumentError("ga_trace: coefficients are not square");
  const Matrix* c = x.coefficient(WordTuple(x.arity()));
  return c == nullptr ? Complex(0.0) : c->trace() / static_cast<double>(x.rows());
}

Complex ga_trace_product(std::span<const GroupAlgebraElement> factors) {
  if (factors.empty()) throw ArgumentError("ga_trace_product: no factors");
  if (factors.size() == 1) return ga_trace(factors.front());
  const std::size_t mid = factors.size() / 2;
  GroupAlgebraElement left = factors[0];
  for (std::size_t i = 1; i < mid; ++i) left = ga_multiply(left, factors[i]);
  GroupAlgebraElement right = factors[mid];
  for (std::size_t i = mid + 1; i < factors.size(); ++i) right = ga_multiply(right, factors[i]);
  return ga_trace_pair(left, right);
}

Complex ga_trace_pair(const GroupAlgebraElement& x, const GroupAlgebraElement& y) {
  check_compatible(x, y, "ga_trace_pair", false);
  if (x.rows() != y.cols()) throw ArgumentError("ga_trace_pair: product is not square");
  return joined_trace(x, y) / static_cast<double>(x.rows());
}

double ga_even_moment(const GroupAlgebraElement& x, int p, double trace_divisor,
                      std::uint64_t budget) {
  require_even_p(p, "ga_even_norm");
  check_power_budget(x.term_count(), p, budget, "ga_even_norm");
  if (x.is_zero()) return 0.0;
  const GroupAlgebraElement y = ga_multiply(ga_adjoint(x), x);
  const int k = p / 2;
  if (k == 1) {
    const Matrix* c = y.coefficient(WordTuple(y.arity()));
    return c == nullptr ? 0.0 : c->trace().real() / trace_divisor;
  }
  const GroupAlgebraElement left = power(y, (k + 1) / 2);
  const GroupAlgebraElement right = power(y, k / 2);
  return joined_trace(left, right).real() / trace_divisor;
}

double ga_even_norm(const GroupAlgebraElement& x, int p, std::uint64_t budget) {
  if (x.rows() != x.cols()) throw ArgumentError("ga_even_norm: coefficients are not square");
  return real_root(ga_even_moment(x, p, static_cast<double>(x.rows()), budget), p);
}

OperatorFamily OperatorFamily::from_matrices(int n, int d, std::vector<TracialMatrix> values) {
  OperatorFamily f;
  f.kind_ = FamilyKind::kMatrix;
  f.index_ = IndexSpace(n, d);
  if (values.size() != f.index_.size()) {
    throw ArgumentError("OperatorFamily: expected " + std::to_string(f.index_.size()) + " values");
  }
  f.coeff_dim_ = values.front().dim();
  for (const auto& v : values) {
    if (v.dim() != f.coeff_dim_) throw ArgumentError("OperatorFamily: non-uniform dimensions");
  }
  f.matrices_ = std::move(values);
  return f;
}

OperatorFamily OperatorFamily::from_elements(int n, int d, std::vector<GroupAlgebraElement> values) {
  OperatorFamily f;
  f.kind_ = FamilyKind::kGroupAlgebra;
  f.index_ = IndexSpace(n, d);
  if (values.size() != f.index_.size()) {
    throw ArgumentError("OperatorFamily: expected " + std::to_string(f.index_.size()) + " values");
  }
  const auto& first = values.front();
  if (first.rows() != first.cols()) throw ArgumentError("OperatorFamily: coefficients not square");
  f.coeff_dim_ = first.rows();
  f.group_arity_ = first.arity();
  for (const auto& v : values) {
    if (v.rows() != f.coeff_dim_ || v.cols() != f.coeff_dim_ || v.arity() != f.group_arity_ ||
        v.generators() != first.generators()) {
      throw ArgumentError("OperatorFamily: non-uniform group-algebra values");
    }
  }
  f.elements_ = std::move(values);
  return f;
}

const std::vector<TracialMatrix>& OperatorFamily::matrices() const {
  if (kind_ != FamilyKind::kMatrix) throw KindError("OperatorFamily: not matrix-valued");
  return matrices_;
}

const std::vector<GroupAlgebraElement>& OperatorFamily::elements() const {
  if (kind_ != FamilyKind::kGroupAlgebra) throw KindError("OperatorFamily: not group-algebra-valued");
  return elements_;
}

GroupAlgebraElement OperatorFamily::element(std::size_t linear) const {
  if (kind_ == FamilyKind::kMatrix) return GroupAlgebraElement::lift(matrices_[linear]);
  return elements_[linear];
}

GroupAlgebraElement OperatorFamily::adjoint_element(std::size_t linear) const {
  if (kind_ == FamilyKind::kMatrix) return GroupAlgebraElement::lift(matrices_[linear].adjoint());
  return ga_adjoint(elements_[linear]);
}

GroupAlgebraElement OperatorFamily::total() const {
  GroupAlgebraElement out = element(0);
  for (std::size_t i = 1; i < size(); ++i) out = ga_add(out, element(i));
  return out;
}

double value_norm(const OperatorFamily& f, std::size_t linear, int p, std::uint64_t budget) {
  if (f.kind() == FamilyKind::kMatrix) return schatten_even_norm(f.matrices()[linear], p);
  return ga_even_norm(f.elements()[linear], p, budget);
}

double sum_norm(const OperatorFamily& f, int p, std::uint64_t budget) {
  if (f.kind() == FamilyKind::kMatrix) {
    Matrix total = Matrix::Zero(f.coeff_dim(), f.coeff_dim());
    for (const auto& m : f.matrices()) total += m.matrix();
    return schatten_even_norm(TracialMatrix(total), p);
  }
  return ga_even_norm(f.total(), p, budget);
}

double family_scale(const OperatorFamily& f, int p, std::uint64_t budget) {
  double scale = 1.0;
  for (std::size_t i = 0; i < f.size(); ++i) scale += std::pow(value_norm(f, i, p, budget), p);
  return scale;
}

BlockMatrix flatten(const OperatorFamily& f, const SplitPair& split) {
  if (f.kind() != FamilyKind::kMatrix) {
    throw KindError("flatten: group-algebra-valued family (use flatten_elements)");
  }
  split.validate(f.d());
  BlockMatrix out;
  out.coeff_dim = f.coeff_dim();
  out.block_rows = power_of(f.n(), split.alpha.size());
  out.block_cols = power_of(f.n(), split.beta.size());
  const Index nd = out.coeff_dim;
  out.entries = Matrix::Zero(static_cast<Index>(out.block_rows) * nd,
                             static_cast<Index>(out.block_cols) * nd);
  for (std::size_t g = 0; g < f.size(); ++g) {
    const auto r = static_cast<Index>(projected_index(f.index(), g, split.alpha));
    const auto c = static_cast<Index>(projected_index(f.index(), g, split.beta));
    out.entries.block(r * nd, c * nd, nd, nd) += f.matrices()[g].matrix();
  }
  return out;
}

double vv_norm(const BlockMatrix& x, int p) {
  require_even_p(p, "vv_norm");
  const Matrix y = x.entries.adjoint() * x.entries;
  Matrix acc = y;
  for (int i = 1; i < p / 2; ++i) acc = acc * y;
  return real_root(acc.trace().real() / static_cast<double>(x.coeff_dim), p);
}

GroupAlgebraElement flatten_elements(const OperatorFamily& f, const SplitPair& split) {
  split.validate(f.d());
  const Index nd = f.coeff_dim();
  const auto rows = static_cast<Index>(power_of(f.n(), split.alpha.size()));
  const auto cols = static_cast<Index>(power_of(f.n(), split.beta.size()));
  const GroupAlgebraElement first = f.element(0);
  GroupAlgebraElement out(first.arity(), first.generators(), rows * nd, cols * nd);
  for (std::size_t g = 0; g < f.size(); ++g) {
    const auto r = static_cast<Index>(projected_index(f.index(), g, split.alpha));
    const auto c = static_cast<Index>(projected_index(f.index(), g, split.beta));
    const GroupAlgebraElement value = f.element(g);
    for (const auto& [w, coeff] : value.terms()) {
      Matrix placed = Matrix::Zero(rows * nd, cols * nd);
      placed.block(r * nd, c * nd, nd, nd) = coeff;
      out.add_term(w, placed);
    }
  }
  return out;
}

double flattening_norm(const OperatorFamily& f, const SplitPair& split, int p,
                       std::uint64_t budget) {
  if (f.kind() == FamilyKind::kMatrix) return vv_norm(flatten(f, split), p);
  const GroupAlgebraElement x = flatten_elements(f, split);
  return real_root(ga_even_moment(x, p, static_cast<double>(f.coeff_dim()), budget), p);
}

GroupAlgebraElement generator_sum(std::span<const TracialMatrix> a, int n, int d) {
  const IndexSpace space(n, d);
  if (a.size() != space.size()) throw ArgumentError("generator_sum: expected n^d coefficients");
  GroupAlgebraElement out(static_cast<std::size_t>(d), n, a.front().dim(), a.front().dim());
  for (std::size_t g = 0; g < space.size(); ++g) out.add_term(generator_tuple(space, g), a[g].matrix());
  return out;
}

GroupAlgebraElement generator_sum(const OperatorFamily& f) {
  if (f.kind() == FamilyKind::kMatrix) return generator_sum(f.matrices(), f.n(), f.d());
  const auto& values = f.elements();
  GroupAlgebraElement out(static_cast<std::size_t>(f.d()) + f.group_arity(),
                          std::max(f.n(), values.front().generators()), f.coeff_dim(), f.coeff_dim());
  for (std::size_t g = 0; g < f.size(); ++g) {
    out = ga_add(out, with_prefix(generator_tuple(f.index(), g), values[g], f.n()));
  }
  return out;
}

}  // namespace porth
