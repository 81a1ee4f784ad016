#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace porth {

// Hard caps: Bell(12) = 4,213,597 partitions is the enumeration ceiling,
// identity sweeps stop at m = 9.
inline constexpr int kMaxPartitionGround = 16;
inline constexpr int kMaxEnumerationGround = 12;
inline constexpr int kMaxIdentitySweepGround = 9;

// A partition of [m] stored as its restricted growth string: element e
// (0-based) carries the label of its block, blocks are numbered 0, 1, ...
// in order of their least element. This encoding is the canonical form, so
// equality and ordering are plain array comparisons.
class SetPartition {
 public:
  SetPartition() = default;

  // Any labelling is accepted and canonicalized; only equality of labels
  // matters. m = labels.size() must be in [1, kMaxPartitionGround].
  static SetPartition from_labels(std::span<const int> labels);
  // 1-based blocks; they must be disjoint, non-empty and cover [m].
  static SetPartition from_blocks(int m, const std::vector<std::vector<int>>& blocks);
  static SetPartition finest(int m);    // 0̇, all singletons
  static SetPartition coarsest(int m);  // 1̇ = {[m]}

  // Text format "1,3|2|4" or "m=4:1,3|2|4". With an explicit m, elements
  // not mentioned become singletons.
  static SetPartition parse(std::string_view text);
  std::string to_string() const;

  int ground_size() const { return size_; }
  int block_count() const { return blocks_; }
  // 0-based block label of the 1-based element.
  int block_of(int element) const { return labels_[static_cast<std::size_t>(element - 1)]; }
  int label(int zero_based) const { return labels_[static_cast<std::size_t>(zero_based)]; }
  std::vector<std::vector<int>> blocks() const;
  std::vector<int> block_sizes() const;
  bool is_finest() const { return blocks_ == size_; }
  bool is_coarsest() const { return blocks_ == 1; }
  bool is_singleton(int element) const;

  // Packs the labels into 4-bit digits; injective for a fixed ground size.
  std::uint64_t key() const;

  friend bool operator==(const SetPartition&, const SetPartition&) = default;
  friend auto operator<=>(const SetPartition&, const SetPartition&) = default;

 private:
  std::uint8_t size_ = 0;
  std::uint8_t blocks_ = 0;
  std::array<std::uint8_t, kMaxPartitionGround> labels_{};
};

// d partitions of a common ground set [p].
class PartitionTuple {
 public:
  PartitionTuple() = default;
  explicit PartitionTuple(std::vector<SetPartition> entries);

  std::size_t size() const { return entries_.size(); }
  int ground_size() const { return entries_.empty() ? 0 : entries_.front().ground_size(); }
  const SetPartition& operator[](std::size_t k) const { return entries_[k]; }
  const std::vector<SetPartition>& entries() const { return entries_; }
  std::string to_string() const;

  friend bool operator==(const PartitionTuple&, const PartitionTuple&) = default;

 private:
  std::vector<SetPartition> entries_;
};

// Every partition of [m], in reverse lexicographic order of restricted
// growth strings: 0̇ first and 1̇ last. Throws SizeLimitError for m > 12.
std::vector<SetPartition> all_partitions(int m);

// Every rho <= sigma.
std::vector<SetPartition> refinements(const SetPartition& sigma);
// Every pi >= rho.
std::vector<SetPartition> coarsenings(const SetPartition& rho);

// rho <= sigma in the refinement order.
bool refines(const SetPartition& rho, const SetPartition& sigma);

// Positions r, s share a block iff values[r] == values[s].
SetPartition kernel_partition(std::span<const int> values);

// Product formula over the blocks of sigma.
std::int64_t mobius(const SetPartition& rho, const SetPartition& sigma);
// Recursive definition mu(rho,rho) = 1, sum over [rho, sigma] vanishes;
// evaluated on the interval without the product formula.
std::int64_t mobius_recursive(const SetPartition& rho, const SetPartition& sigma);

struct MobiusIdentityReport {
  int m = 0;
  std::int64_t abs_sum = 0;          // sum over sigma of |mu(0̇, sigma)|
  std::int64_t factorial = 0;        // m!
  bool interval_sums_ok = true;      // sum_{rho <= sigma} mu(rho, sigma) = 0 for sigma > 0̇
  std::int64_t intervals_checked = 0;
};
MobiusIdentityReport verify_mobius_identities(int m);

// P_m with stable integer indices (all_partitions order) and the
// coarsening relation as adjacency lists.
class PartitionLattice {
 public:
  explicit PartitionLattice(int m);

  int ground_size() const { return m_; }
  std::size_t size() const { return elements_.size(); }
  const SetPartition& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<SetPartition>& elements() const { return elements_; }
  std::size_t index_of(const SetPartition& sigma) const;
  // Indices of every pi >= element i (including i).
  const std::vector<std::size_t>& coarser(std::size_t i) const;
  std::int64_t mobius_from_finest(std::size_t i) const { return mobius_bottom_[i]; }
  std::size_t finest_index() const { return 0; }

 private:
  int m_;
  std::vector<SetPartition> elements_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
  std::vector<std::int64_t> mobius_bottom_;
  mutable std::vector<std::vector<std::size_t>> coarser_;
};

}  // namespace porth
