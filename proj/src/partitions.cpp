#include "porth/partitions.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>

#include "porth/errors.hpp"

namespace porth {

namespace {

void check_ground(int m, int cap, const char* what) {
  if (m < 1) throw ArgumentError(std::string(what) + ": ground size must be >= 1");
  if (m > cap) {
    throw SizeLimitError(std::string(what) + ": ground size " + std::to_string(m) +
                         " exceeds cap " + std::to_string(cap));
  }
}

std::int64_t factorial(int k) {
  std::int64_t out = 1;
  for (int i = 2; i <= k; ++i) out *= i;
  return out;
}

int parse_int(std::string_view text) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto result = std::from_chars(text.data(), end, value);
  if (result.ec != std::errc() || result.ptr != end) {
    throw ArgumentError("malformed integer '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

SetPartition SetPartition::from_labels(std::span<const int> labels) {
  const int m = static_cast<int>(labels.size());
  check_ground(m, kMaxPartitionGround, "SetPartition");
  SetPartition out;
  out.size_ = static_cast<std::uint8_t>(m);
  std::array<int, kMaxPartitionGround> seen{};
  int count = 0;
  for (int e = 0; e < m; ++e) {
    const int value = labels[static_cast<std::size_t>(e)];
    int b = 0;
    while (b < count && seen[static_cast<std::size_t>(b)] != value) ++b;
    if (b == count) seen[static_cast<std::size_t>(count++)] = value;
    out.labels_[static_cast<std::size_t>(e)] = static_cast<std::uint8_t>(b);
  }
  out.blocks_ = static_cast<std::uint8_t>(count);
  return out;
}

SetPartition SetPartition::from_blocks(int m, const std::vector<std::vector<int>>& blocks) {
  check_ground(m, kMaxPartitionGround, "SetPartition");
  std::vector<int> labels(static_cast<std::size_t>(m), -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) throw ArgumentError("SetPartition: empty block");
    for (int e : blocks[b]) {
      if (e < 1 || e > m) {
        throw ArgumentError("SetPartition: element " + std::to_string(e) + " outside [1," +
                            std::to_string(m) + "]");
      }
      if (labels[static_cast<std::size_t>(e - 1)] != -1) {
        throw ArgumentError("SetPartition: element " + std::to_string(e) + " repeated");
      }
      labels[static_cast<std::size_t>(e - 1)] = static_cast<int>(b);
    }
  }
  for (int e = 0; e < m; ++e) {
    if (labels[static_cast<std::size_t>(e)] == -1) {
      throw ArgumentError("SetPartition: element " + std::to_string(e + 1) + " not covered");
    }
  }
  return from_labels(labels);
}

SetPartition SetPartition::finest(int m) {
  check_ground(m, kMaxPartitionGround, "SetPartition");
  std::vector<int> labels(static_cast<std::size_t>(m));
  for (int e = 0; e < m; ++e) labels[static_cast<std::size_t>(e)] = e;
  return from_labels(labels);
}

SetPartition SetPartition::coarsest(int m) {
  check_ground(m, kMaxPartitionGround, "SetPartition");
  return from_labels(std::vector<int>(static_cast<std::size_t>(m), 0));
}

SetPartition SetPartition::parse(std::string_view text) {
  int explicit_m = 0;
  if (text.starts_with("m=")) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
      throw ArgumentError("partition: expected ':' after m=<int>");
    }
    explicit_m = parse_int(text.substr(2, colon - 2));
    text = text.substr(colon + 1);
  }
  std::vector<std::vector<int>> blocks;
  int max_element = 0;
  if (!text.empty()) {
    for (auto block_text : split(text, '|')) {
      std::vector<int> block;
      for (auto element_text : split(block_text, ',')) {
        const int e = parse_int(element_text);
        block.push_back(e);
        max_element = std::max(max_element, e);
      }
      blocks.push_back(std::move(block));
    }
  }
  int m = max_element;
  if (explicit_m > 0) {
    if (max_element > explicit_m) {
      throw ArgumentError("partition: element exceeds explicit ground size");
    }
    m = explicit_m;
    std::vector<bool> seen(static_cast<std::size_t>(m + 1), false);
    for (const auto& block : blocks) {
      for (int e : block) {
        if (e >= 1) seen[static_cast<std::size_t>(e)] = true;
      }
    }
    for (int e = 1; e <= m; ++e) {
      if (!seen[static_cast<std::size_t>(e)]) blocks.push_back({e});
    }
  }
  return from_blocks(m, blocks);
}

std::string SetPartition::to_string() const {
  std::string out;
  const auto bs = blocks();
  for (std::size_t b = 0; b < bs.size(); ++b) {
    if (b > 0) out += '|';
    for (std::size_t i = 0; i < bs[b].size(); ++i) {
      if (i > 0) out += ',';
      out += std::to_string(bs[b][i]);
    }
  }
  return out;
}

std::vector<std::vector<int>> SetPartition::blocks() const {
  std::vector<std::vector<int>> out(blocks_);
  for (int e = 0; e < size_; ++e) out[labels_[static_cast<std::size_t>(e)]].push_back(e + 1);
  return out;
}

std::vector<int> SetPartition::block_sizes() const {
  std::vector<int> out(blocks_, 0);
  for (int e = 0; e < size_; ++e) ++out[labels_[static_cast<std::size_t>(e)]];
  return out;
}

bool SetPartition::is_singleton(int element) const {
  const int b = block_of(element);
  for (int e = 0; e < size_; ++e) {
    if (e != element - 1 && labels_[static_cast<std::size_t>(e)] == b) return false;
  }
  return true;
}

std::uint64_t SetPartition::key() const {
  std::uint64_t out = 0;
  for (int e = 0; e < size_; ++e) out = (out << 4) | labels_[static_cast<std::size_t>(e)];
  return out;
}

PartitionTuple::PartitionTuple(std::vector<SetPartition> entries) : entries_(std::move(entries)) {
  for (const auto& s : entries_) {
    if (s.ground_size() != entries_.front().ground_size()) {
      throw ArgumentError("PartitionTuple: entries have different ground sizes");
    }
  }
}

std::string PartitionTuple::to_string() const {
  std::string out = "(";
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (k > 0) out += ", ";
    out += entries_[k].to_string();
  }
  return out + ")";
}

std::vector<SetPartition> all_partitions(int m) {
  check_ground(m, kMaxEnumerationGround, "all_partitions");
  std::vector<SetPartition> out;
  // Start at the lexicographically largest growth string 0,1,...,m-1 and
  // step to the predecessor: decrement the rightmost positive entry, then
  // refill the suffix with its maximal continuation.
  std::vector<int> rgs(static_cast<std::size_t>(m));
  for (int e = 0; e < m; ++e) rgs[static_cast<std::size_t>(e)] = e;
  while (true) {
    out.push_back(SetPartition::from_labels(rgs));
    int i = m - 1;
    while (i > 0 && rgs[static_cast<std::size_t>(i)] == 0) --i;
    if (i == 0) break;
    --rgs[static_cast<std::size_t>(i)];
    int top = *std::max_element(rgs.begin(), rgs.begin() + i + 1);
    for (int j = i + 1; j < m; ++j) rgs[static_cast<std::size_t>(j)] = ++top;
  }
  return out;
}

bool refines(const SetPartition& rho, const SetPartition& sigma) {
  if (rho.ground_size() != sigma.ground_size()) {
    throw ArgumentError("refines: ground sizes differ");
  }
  std::array<int, kMaxPartitionGround> image;
  image.fill(-1);
  for (int e = 0; e < rho.ground_size(); ++e) {
    int& slot = image[static_cast<std::size_t>(rho.label(e))];
    if (slot == -1) {
      slot = sigma.label(e);
    } else if (slot != sigma.label(e)) {
      return false;
    }
  }
  return true;
}

std::vector<SetPartition> refinements(const SetPartition& sigma) {
  const int m = sigma.ground_size();
  std::vector<SetPartition> out;
  std::vector<int> labels(static_cast<std::size_t>(m), 0);
  // A new rho-block inherits the sigma-block of its first element; later
  // elements may only join rho-blocks sitting in their own sigma-block.
  std::vector<int> owner(static_cast<std::size_t>(m), -1);
  auto recurse = [&](auto&& self, int e, int open) -> void {
    if (e == m) {
      out.push_back(SetPartition::from_labels(labels));
      return;
    }
    for (int b = 0; b <= open; ++b) {
      if (b < open && owner[static_cast<std::size_t>(b)] != sigma.label(e)) continue;
      labels[static_cast<std::size_t>(e)] = b;
      if (b == open) owner[static_cast<std::size_t>(b)] = sigma.label(e);
      self(self, e + 1, b == open ? open + 1 : open);
      if (b == open) owner[static_cast<std::size_t>(b)] = -1;
    }
  };
  recurse(recurse, 0, 0);
  return out;
}

std::vector<SetPartition> coarsenings(const SetPartition& rho) {
  const int m = rho.ground_size();
  std::vector<SetPartition> out;
  std::vector<int> labels(static_cast<std::size_t>(m));
  for (const auto& merge : all_partitions(rho.block_count())) {
    for (int e = 0; e < m; ++e) labels[static_cast<std::size_t>(e)] = merge.label(rho.label(e));
    out.push_back(SetPartition::from_labels(labels));
  }
  return out;
}

SetPartition kernel_partition(std::span<const int> values) {
  if (values.empty()) throw ArgumentError("kernel_partition: empty list");
  if (values.size() > static_cast<std::size_t>(kMaxPartitionGround)) {
    throw SizeLimitError("kernel_partition: more than 16 positions");
  }
  return SetPartition::from_labels(values);
}

std::int64_t mobius(const SetPartition& rho, const SetPartition& sigma) {
  if (!refines(rho, sigma)) throw ArgumentError("mobius: rho does not refine sigma");
  // n_B = number of rho-blocks inside each sigma-block B.
  std::vector<int> inside(static_cast<std::size_t>(sigma.block_count()), 0);
  std::vector<bool> counted(static_cast<std::size_t>(rho.block_count()), false);
  for (int e = 0; e < rho.ground_size(); ++e) {
    const auto b = static_cast<std::size_t>(rho.label(e));
    if (!counted[b]) {
      counted[b] = true;
      ++inside[static_cast<std::size_t>(sigma.label(e))];
    }
  }
  std::int64_t out = 1;
  for (int n_b : inside) out *= (n_b % 2 == 1 ? 1 : -1) * factorial(n_b - 1);
  return out;
}

std::int64_t mobius_recursive(const SetPartition& rho, const SetPartition& sigma) {
  if (!refines(rho, sigma)) throw ArgumentError("mobius_recursive: rho does not refine sigma");
  // [rho, sigma] is isomorphic to [0̇, sigma'] in P_k where k counts the
  // rho-blocks and sigma' is sigma seen on rho-blocks.
  const int k = rho.block_count();
  std::vector<int> induced(static_cast<std::size_t>(k));
  for (int e = 0; e < rho.ground_size(); ++e) {
    induced[static_cast<std::size_t>(rho.label(e))] = sigma.label(e);
  }
  const SetPartition top = SetPartition::from_labels(induced);
  std::vector<SetPartition> interval = refinements(top);
  // Finer elements first so every strict lower bound is already known.
  std::stable_sort(interval.begin(), interval.end(), [](const auto& a, const auto& b) {
    return a.block_count() > b.block_count();
  });
  std::vector<std::int64_t> value(interval.size(), 0);
  for (std::size_t i = 0; i < interval.size(); ++i) {
    if (interval[i].is_finest()) {
      value[i] = 1;
      continue;
    }
    std::int64_t sum = 0;
    for (std::size_t j = 0; j < i; ++j) {
      if (interval[j] != interval[i] && refines(interval[j], interval[i])) sum += value[j];
    }
    value[i] = -sum;
  }
  for (std::size_t i = 0; i < interval.size(); ++i) {
    if (interval[i] == top) return value[i];
  }
  throw std::logic_error("mobius_recursive: top element missing from interval");
}

MobiusIdentityReport verify_mobius_identities(int m) {
  check_ground(m, kMaxIdentitySweepGround, "verify_mobius_identities");
  MobiusIdentityReport report;
  report.m = m;
  report.factorial = factorial(m);
  const SetPartition bottom = SetPartition::finest(m);
  for (const auto& sigma : all_partitions(m)) {
    report.abs_sum += std::llabs(mobius(bottom, sigma));
    if (sigma.is_finest()) continue;
    std::int64_t interval_sum = 0;
    for (const auto& rho : refinements(sigma)) interval_sum += mobius(rho, sigma);
    ++report.intervals_checked;
    if (interval_sum != 0) report.interval_sums_ok = false;
  }
  return report;
}

PartitionLattice::PartitionLattice(int m) : m_(m), elements_(all_partitions(m)) {
  const SetPartition bottom = SetPartition::finest(m);
  mobius_bottom_.reserve(elements_.size());
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    index_.emplace(elements_[i].key(), i);
    mobius_bottom_.push_back(mobius(bottom, elements_[i]));
  }
  coarser_.resize(elements_.size());
}

std::size_t PartitionLattice::index_of(const SetPartition& sigma) const {
  if (sigma.ground_size() != m_) throw ArgumentError("PartitionLattice: wrong ground size");
  return index_.at(sigma.key());
}

const std::vector<std::size_t>& PartitionLattice::coarser(std::size_t i) const {
  auto& slot = coarser_[i];
  if (slot.empty()) {
    for (const auto& pi : coarsenings(elements_[i])) slot.push_back(index_of(pi));
    std::sort(slot.begin(), slot.end());
  }
  return slot;
}

}  // namespace porth
