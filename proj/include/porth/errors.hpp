#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace porth {

// Default cap on the number of enumerated configurations (index functions,
// term tuples, lattice cells) a single call may visit.
inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

// Bad arguments: mismatched sizes, violated preconditions on values.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An enumeration would exceed its configured budget or hard size cap.
class SizeLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Operation applied to the wrong family kind (matrix vs group algebra).
class KindError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A mathematical precondition failed; `witness` describes the violation.
class PreconditionError : public std::runtime_error {
 public:
  PreconditionError(const std::string& what, std::string witness)
      : std::runtime_error(what), witness_(std::move(witness)) {}
  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

// Throws SizeLimitError if base^exponent > budget, without overflowing.
void check_power_budget(std::uint64_t base, int exponent, std::uint64_t budget,
                        const char* what);

}  // namespace porth
