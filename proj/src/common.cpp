#include "porth/errors.hpp"
#include "porth/index_space.hpp"

#include <limits>
#include <sstream>

namespace porth {

void check_power_budget(std::uint64_t base, int exponent, std::uint64_t budget,
                        const char* what) {
  std::uint64_t total = 1;
  for (int i = 0; i < exponent; ++i) {
    if (base != 0 && total > budget / base) {
      throw SizeLimitError(std::string(what) + ": " + std::to_string(base) +
                           "^" + std::to_string(exponent) +
                           " exceeds budget " + std::to_string(budget));
    }
    total *= base;
  }
  if (total > budget) {
    throw SizeLimitError(std::string(what) + ": exceeds budget " +
                         std::to_string(budget));
  }
}

IndexSpace::IndexSpace(int n, int d) : n_(n), d_(d) {
  if (n < 1 || d < 0) {
    throw ArgumentError("IndexSpace: need n >= 1 and d >= 0");
  }
  strides_.assign(static_cast<std::size_t>(d), 1);
  std::size_t size = 1;
  for (int k = d - 1; k >= 0; --k) {
    strides_[static_cast<std::size_t>(k)] = size;
    if (size > std::numeric_limits<std::size_t>::max() /
                   static_cast<std::size_t>(n)) {
      throw SizeLimitError("IndexSpace: n^d overflows");
    }
    size *= static_cast<std::size_t>(n);
  }
  size_ = size;
}

MultiIndex IndexSpace::decode(std::size_t linear) const {
  MultiIndex out(static_cast<std::size_t>(d_));
  for (int k = 0; k < d_; ++k) {
    out[static_cast<std::size_t>(k)] = coordinate(linear, k + 1);
  }
  return out;
}

std::size_t IndexSpace::encode(const MultiIndex& index) const {
  if (index.size() != static_cast<std::size_t>(d_)) {
    throw ArgumentError("IndexSpace::encode: wrong arity");
  }
  std::size_t linear = 0;
  for (int k = 0; k < d_; ++k) {
    const int c = index[static_cast<std::size_t>(k)];
    if (c < 1 || c > n_) {
      throw ArgumentError("IndexSpace::encode: coordinate out of range");
    }
    linear += static_cast<std::size_t>(c - 1) * strides_[static_cast<std::size_t>(k)];
  }
  return linear;
}

int IndexSpace::coordinate(std::size_t linear, int k) const {
  const std::size_t stride = strides_[static_cast<std::size_t>(k - 1)];
  return static_cast<int>((linear / stride) % static_cast<std::size_t>(n_)) + 1;
}

std::string format_multi_index(const MultiIndex& index) {
  std::string out;
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (k > 0) out += ',';
    out += std::to_string(index[k]);
  }
  return out;
}

MultiIndex parse_multi_index(const std::string& text) {
  MultiIndex out;
  std::stringstream in(text);
  std::string field;
  while (std::getline(in, field, ',')) {
    try {
      std::size_t used = 0;
      const int value = std::stoi(field, &used);
      if (used != field.size()) throw std::invalid_argument(field);
      out.push_back(value);
    } catch (const std::exception&) {
      throw ArgumentError("malformed multi-index '" + text + "'");
    }
  }
  if (out.empty()) throw ArgumentError("empty multi-index");
  return out;
}

}  // namespace porth
