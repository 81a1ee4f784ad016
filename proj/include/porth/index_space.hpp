#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace porth {

// 1-based multi-index (i_1, ..., i_d) with 1 <= i_k <= n.
using MultiIndex = std::vector<int>;

// The product set [n]^d with lexicographic linear order: the first
// coordinate is the most significant digit.
class IndexSpace {
 public:
  IndexSpace() = default;
  IndexSpace(int n, int d);

  int n() const { return n_; }
  int d() const { return d_; }
  std::size_t size() const { return size_; }

  MultiIndex decode(std::size_t linear) const;
  std::size_t encode(const MultiIndex& index) const;
  // 1-based k-th coordinate of the element with the given linear index.
  int coordinate(std::size_t linear, int k) const;

  bool operator==(const IndexSpace&) const = default;

 private:
  int n_ = 1;
  int d_ = 0;
  std::size_t size_ = 1;
  std::vector<std::size_t> strides_;
};

std::string format_multi_index(const MultiIndex& index);
// Parses "1,2,3"; throws ArgumentError on malformed text.
MultiIndex parse_multi_index(const std::string& text);

}  // namespace porth
