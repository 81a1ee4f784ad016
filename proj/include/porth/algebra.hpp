#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "porth/errors.hpp"
#include "porth/freegroup.hpp"
#include "porth/index_space.hpp"

namespace porth {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

// Throws ArgumentError unless p is even and >= 2.
void require_even_p(int p, const char* what);

// Square complex matrix in M_N under the normalized trace Tr / N.
class TracialMatrix {
 public:
  TracialMatrix() : value_(Matrix::Zero(1, 1)) {}
  explicit TracialMatrix(Matrix value);

  static TracialMatrix identity(Index dim);
  static TracialMatrix zero(Index dim);
  static TracialMatrix scalar(Complex c) { return TracialMatrix(Matrix::Constant(1, 1, c)); }

  Index dim() const { return value_.rows(); }
  const Matrix& matrix() const { return value_; }
  TracialMatrix adjoint() const { return TracialMatrix(value_.adjoint()); }

  friend TracialMatrix operator*(const TracialMatrix& a, const TracialMatrix& b);
  friend TracialMatrix operator+(const TracialMatrix& a, const TracialMatrix& b);

 private:
  Matrix value_;
};

Complex ntrace(const TracialMatrix& x);
// (tau((x* x)^{p/2}))^{1/p} for even p.
double schatten_even_norm(const TracialMatrix& x, int p);

// (alpha, beta): disjoint 1-based coordinate sets covering [d].
struct SplitPair {
  std::vector<int> alpha;
  std::vector<int> beta;

  // Coordinate k + 1 goes to alpha iff bit k of mask is set.
  static SplitPair from_mask(int d, unsigned mask);
  // All 2^d splits, mask order.
  static std::vector<SplitPair> all(int d);
  // alpha = {1..k}, beta = {k+1..d}.
  static SplitPair contiguous(int d, int k);
  void validate(int d) const;
};

// Finite sum of matrix coefficients times lambda(w), w in F_n^arity. Terms
// are kept in WordTuple order; only exactly-zero coefficients are dropped.
// Coefficients may be rectangular (used for flattenings); traces require
// square coefficients.
class GroupAlgebraElement {
 public:
  using Terms = std::map<WordTuple, Matrix>;

  GroupAlgebraElement() = default;
  GroupAlgebraElement(std::size_t arity, int generators, Index rows, Index cols);

  static GroupAlgebraElement identity(std::size_t arity, int generators, Index dim);
  // The coefficient placed at the identity word tuple.
  static GroupAlgebraElement lift(const TracialMatrix& a, std::size_t arity = 0, int generators = 0);
  static GroupAlgebraElement monomial(const WordTuple& w, const Matrix& coeff, int generators);

  void add_term(const WordTuple& w, const Matrix& coeff);

  std::size_t arity() const { return arity_; }
  int generators() const { return generators_; }
  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  std::size_t term_count() const { return terms_.size(); }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // nullptr if absent.
  const Matrix* coefficient(const WordTuple& w) const;

 private:
  std::size_t arity_ = 0;
  int generators_ = 0;
  Index rows_ = 1;
  Index cols_ = 1;
  Terms terms_;
};

GroupAlgebraElement ga_multiply(const GroupAlgebraElement& x, const GroupAlgebraElement& y);
GroupAlgebraElement ga_add(const GroupAlgebraElement& x, const GroupAlgebraElement& y);
GroupAlgebraElement ga_adjoint(const GroupAlgebraElement& x);
inline GroupAlgebraElement operator*(const GroupAlgebraElement& x, const GroupAlgebraElement& y) {
  return ga_multiply(x, y);
}
inline GroupAlgebraElement operator+(const GroupAlgebraElement& x, const GroupAlgebraElement& y) {
  return ga_add(x, y);
}
// prefix (x) x: every word tuple w of x becomes (prefix, w).
GroupAlgebraElement with_prefix(const WordTuple& prefix, const GroupAlgebraElement& x,
                                int prefix_generators);

// ntrace of the coefficient at the identity tuple.
Complex ga_trace(const GroupAlgebraElement& x);
// (tau_G (x) tau)(x_1 x_2 ... x_k) without materializing the full product:
// the two halves are multiplied out and joined on inverse words.
Complex ga_trace_product(std::span<const GroupAlgebraElement> factors);
// ga_trace(x * y) by pairing terms on inverse words.
Complex ga_trace_pair(const GroupAlgebraElement& x, const GroupAlgebraElement& y);
// tau((x* x)^{p/2})^{1/p}. Throws SizeLimitError if term_count^p > budget.
double ga_even_norm(const GroupAlgebraElement& x, int p, std::uint64_t budget = kDefaultBudget);

// tau((x* x)^{p/2}) normalized by `trace_divisor` on the coefficient
// side; ga_even_norm uses the coefficient row count.
double ga_even_moment(const GroupAlgebraElement& x, int p, double trace_divisor,
                      std::uint64_t budget = kDefaultBudget);

enum class FamilyKind { kMatrix, kGroupAlgebra };

// Gamma = [n]^d indexed family of operators, all of one kind and size.
class OperatorFamily {
 public:
  OperatorFamily() = default;
  static OperatorFamily from_matrices(int n, int d, std::vector<TracialMatrix> values);
  static OperatorFamily from_elements(int n, int d, std::vector<GroupAlgebraElement> values);

  FamilyKind kind() const { return kind_; }
  const IndexSpace& index() const { return index_; }
  int n() const { return index_.n(); }
  int d() const { return index_.d(); }
  std::size_t size() const { return index_.size(); }
  Index coeff_dim() const { return coeff_dim_; }
  // Free-group arity of group-algebra values; 0 for matrices.
  std::size_t group_arity() const { return group_arity_; }

  const std::vector<TracialMatrix>& matrices() const;
  const std::vector<GroupAlgebraElement>& elements() const;
  // Value at linear index as a group-algebra element (matrices are lifted
  // to arity 0).
  GroupAlgebraElement element(std::size_t linear) const;
  // f_gamma^* as a group-algebra element.
  GroupAlgebraElement adjoint_element(std::size_t linear) const;
  // Sum of all values, lifted.
  GroupAlgebraElement total() const;

 private:
  FamilyKind kind_ = FamilyKind::kMatrix;
  IndexSpace index_;
  Index coeff_dim_ = 1;
  std::size_t group_arity_ = 0;
  std::vector<TracialMatrix> matrices_;
  std::vector<GroupAlgebraElement> elements_;
};

// ||f||_p for a single value of either kind.
double value_norm(const OperatorFamily& f, std::size_t linear, int p,
                  std::uint64_t budget = kDefaultBudget);
// ||sum_gamma f_gamma||_p.
double sum_norm(const OperatorFamily& f, int p, std::uint64_t budget = kDefaultBudget);
// 1 + sum_gamma ||f_gamma||_p^p; sets the magnitude of tolerances.
double family_scale(const OperatorFamily& f, int p, std::uint64_t budget = kDefaultBudget);

// n^{|alpha|} x n^{|beta|} array of N x N blocks stored block-major.
struct BlockMatrix {
  Matrix entries;
  Index coeff_dim = 1;
  std::size_t block_rows = 1;
  std::size_t block_cols = 1;

  Matrix block(std::size_t r, std::size_t c) const {
    return entries.block(static_cast<Index>(r) * coeff_dim, static_cast<Index>(c) * coeff_dim,
                         coeff_dim, coeff_dim);
  }
};

// sum_gamma f_gamma (x) e_{pi_alpha(gamma), pi_beta(gamma)}; matrix families only.
BlockMatrix flatten(const OperatorFamily& f, const SplitPair& split);
// ((tau (x) Tr)((X* X)^{p/2}))^{1/p}: normalized on the coefficient factor,
// un-normalized on the block factor.
double vv_norm(const BlockMatrix& x, int p);

// Same flattening for group-algebra families: one element whose
// coefficients are the rectangular block matrices.
GroupAlgebraElement flatten_elements(const OperatorFamily& f, const SplitPair& split);
// Dispatches on the family kind.
double flattening_norm(const OperatorFamily& f, const SplitPair& split, int p,
                       std::uint64_t budget = kDefaultBudget);

// S_d(a) = sum_gamma a_gamma (x) lambda(g_{i_1}) (x) ... (x) lambda(g_{i_d}).
GroupAlgebraElement generator_sum(std::span<const TracialMatrix> a, int n, int d);
// For group-algebra families the generator slots are prepended to each
// value's own word tuple.
GroupAlgebraElement generator_sum(const OperatorFamily& f);

}  // namespace porth
