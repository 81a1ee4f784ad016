#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "porth/algebra.hpp"
#include "porth/orthogonality.hpp"
#include "porth/partitions.hpp"

namespace porth {

// Where each position s in [p] sits inside the blocks of sigma_1..sigma_d.
// The group carrying the factors has one free-group slot per (k, block A,
// r) with 1 <= r < |A|; slots are laid out coordinate by coordinate and,
// inside a coordinate, block by block.
struct BlockAnatomy {
  PartitionTuple sigmas;
  int p = 0;
  int d = 0;
  std::vector<std::vector<int>> block;       // [s][k]: 0-based block label j_k(s)
  std::vector<std::vector<int>> position;    // [s][k]: 1-based position r_k(s) inside its block
  std::vector<std::vector<int>> block_size;  // [k][j]
  std::vector<std::vector<std::size_t>> slot_offset;  // [k][j]: first slot of block j
  std::vector<int> singleton_count;          // [s]: q(s)
  std::vector<std::vector<int>> by_count;    // [q]: B_q as 1-based positions, q = 0..d
  std::size_t slots = 0;

  static BlockAnatomy of(const PartitionTuple& sigmas);
  int q(int s) const { return singleton_count[static_cast<std::size_t>(s - 1)]; }
  // |B_d|, the number of common singletons.
  int common_singletons() const { return static_cast<int>(by_count[static_cast<std::size_t>(d)].size()); }
};

// The group word of xi_r(i) over F_n^{m-1}: slot r-1 carries g_i and slot r
// carries g_i^{-1} (1-based slots, out-of-range slots omitted).
WordTuple xi_word(int m, int r, int i);
// xi[r-1][i-1] as elements with 1x1 coefficient.
std::vector<std::vector<GroupAlgebraElement>> xi_family(int m, int n);

// F_1, ..., F_p for the given sigmas (all strictly coarser than 0̇). For
// group-algebra families the slots of f's own group follow the xi slots.
std::vector<GroupAlgebraElement> build_factors(const OperatorFamily& f, const PartitionTuple& sigmas,
                                               int p);

struct FactorizationCheck {
  Complex psi_direct = 0.0;
  Complex psi_factored = 0.0;
  double abs_err = 0.0;
};

FactorizationCheck factorization_check(const OperatorFamily& f, const PartitionTuple& sigmas, int p,
                                       std::uint64_t budget = kDefaultBudget);

struct FactorNorm {
  int s = 0;
  int q = 0;
  double norm = 0.0;
};

struct FactorNormReport {
  std::vector<FactorNorm> factors;
  double sum_norm = 0.0;        // ||sum f||_p
  double generator_norm = 0.0;  // ||S_d(f)||_p
  Complex psi = 0.0;            // trace of F_1 ... F_p
  double norm_product = 0.0;    // prod_s ||F_s||_p
  double common_err = 0.0;      // max over B_d of | ||F_s|| - ||sum f|| | / ||sum f||
  double free_err = 0.0;        // max over B_0 of | ||F_s|| - ||S_d(f)|| | / ||S_d(f)||
  bool holder_ok = true;        // |psi| <= norm_product (1e-9 relative slack)
};

FactorNormReport factor_norm_report(const OperatorFamily& f, const PartitionTuple& sigmas, int p,
                                    std::uint64_t budget = kDefaultBudget);

}  // namespace porth
