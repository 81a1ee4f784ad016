#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "porth/algebra.hpp"
#include "porth/partitions.hpp"

namespace porth {

// Which factors of f_{h(1)} f_{h(2)} ... f_{h(p)} carry the adjoint.
enum class AdjointPattern {
  kAdjointFirst,   // f*, f, f*, f, ...
  kAdjointSecond,  // f, f*, f, f*, ...
};

// 0-based position s.
inline bool adjoint_at(AdjointPattern pattern, std::size_t s) {
  return (s % 2 == 0) == (pattern == AdjointPattern::kAdjointFirst);
}

// h : [p] -> [n]^d, stored as its images.
struct IndexFunction {
  std::vector<MultiIndex> images;

  int p() const { return static_cast<int>(images.size()); }
  static IndexFunction from_linear(const IndexSpace& space, std::span<const std::size_t> h);
  // Validates every image against the space.
  std::vector<std::size_t> linear(const IndexSpace& space) const;
  // "(1,2) (2,1) ..."
  std::string to_string() const;
};

bool has_injective_projection(const IndexFunction& h, int d);
// Kernel partition of pi_k o h, k 1-based.
SetPartition sigma_of(const IndexFunction& h, int k);
// (sigma_1(h), ..., sigma_d(h)).
PartitionTuple delta_of(const IndexFunction& h, int d);

// tau of the alternating adjoint product along h.
Complex alternating_moment(const OperatorFamily& f, const IndexFunction& h,
                           AdjointPattern pattern = AdjointPattern::kAdjointFirst);

// Calls visit(h, moment) for every h : [p] -> Gamma in lexicographic order
// of the linear image tuple. Prefix products are shared along the way.
// Throws SizeLimitError if |Gamma|^p > budget.
using MomentVisitor = std::function<void(std::span<const std::size_t>, Complex)>;
void for_each_moment(const OperatorFamily& f, int p, const MomentVisitor& visit,
                     std::uint64_t budget = kDefaultBudget,
                     AdjointPattern pattern = AdjointPattern::kAdjointFirst);

struct MomentReport {
  bool ok = true;
  double max_abs_violation = 0.0;
  std::optional<IndexFunction> worst_h;
  std::uint64_t count_checked = 0;
};

MomentReport is_p_orthogonal(const OperatorFamily& f, int p, double tol,
                             std::uint64_t budget = kDefaultBudget,
                             AdjointPattern pattern = AdjointPattern::kAdjointFirst);

// Sum of moments over h with delta(h) = eta.
Complex phi(const OperatorFamily& f, const PartitionTuple& eta, int p,
            std::uint64_t budget = kDefaultBudget,
            AdjointPattern pattern = AdjointPattern::kAdjointFirst);
// Sum of moments over h with sigma_k(h) >= sigmas[k] for every k.
Complex psi(const OperatorFamily& f, const PartitionTuple& sigmas, int p,
            std::uint64_t budget = kDefaultBudget,
            AdjointPattern pattern = AdjointPattern::kAdjointFirst);

// Phi over all of P_p^d from a single pass over the index functions, and Psi
// from Phi by a zeta transform one coordinate at a time.
class MomentTable {
 public:
  MomentTable(const OperatorFamily& f, int p, std::uint64_t budget = kDefaultBudget,
              AdjointPattern pattern = AdjointPattern::kAdjointFirst);

  int p() const { return p_; }
  int d() const { return d_; }
  const PartitionLattice& lattice() const { return lattice_; }
  // |P_p|^d; tuples are numbered with the first coordinate most significant.
  std::size_t tuple_count() const { return phi_.size(); }
  PartitionTuple tuple(std::size_t t) const;
  std::size_t index_of(const PartitionTuple& eta) const;

  Complex phi(const PartitionTuple& eta) const { return phi_[index_of(eta)]; }
  Complex psi(const PartitionTuple& sigmas) const { return psi_[index_of(sigmas)]; }
  Complex phi_at(std::size_t t) const { return phi_[t]; }
  Complex psi_at(std::size_t t) const { return psi_[t]; }
  // Sum over all h.
  Complex total() const { return total_; }
  // Sum over h with an injective projection.
  Complex injective_part() const { return injective_; }
  std::uint64_t functions() const { return functions_; }

 private:
  int p_;
  int d_;
  PartitionLattice lattice_;
  std::vector<Complex> phi_;
  std::vector<Complex> psi_;
  Complex total_ = 0.0;
  Complex injective_ = 0.0;
  std::uint64_t functions_ = 0;
};

struct DecompositionReport {
  Complex lhs = 0.0;             // sum over all h
  Complex rhs = 0.0;             // injective part + (-1)^d sum prod mu * Psi
  double abs_err = 0.0;
  Complex injective_part = 0.0;  // sum over h with an injective projection
  Complex mobius_part = 0.0;     // (-1)^d sum_{sigma_k > 0̇} prod mu(0̇, sigma_k) Psi
  double scale = 1.0;            // family_scale
};

DecompositionReport mobius_decomposition_check(const OperatorFamily& f, int p,
                                               std::uint64_t budget = kDefaultBudget,
                                               AdjointPattern pattern = AdjointPattern::kAdjointFirst);

}  // namespace porth
