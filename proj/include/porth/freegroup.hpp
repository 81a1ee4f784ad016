#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "porth/errors.hpp"
#include "porth/index_space.hpp"

namespace porth {

struct Letter {
  int generator = 1;  // 1-based
  int exponent = 1;   // +1 or -1
  friend bool operator==(const Letter&, const Letter&) = default;
};

// Reduced word in a free group. Letters are stored as signed generator
// indices (+g for g_g, -g for its inverse) and kept freely reduced.
class Word {
 public:
  Word() = default;  // identity

  static Word generator(int g, int exponent = 1);
  // Reduces its input.
  static Word from_letters(std::span<const Letter> letters);
  static Word from_signed(std::span<const int> letters);
  // "g3 G1 g2": lowercase exponent +1, uppercase -1, "e" for the identity.
  static Word parse(std::string_view text);

  std::string to_string() const;
  std::vector<Letter> letters() const;
  std::span<const int> signed_letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }
  // Largest generator index used; 0 for the identity.
  int max_generator() const;

  // Appends one letter with cancellation against the last letter.
  void push_back(int signed_letter);

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

 private:
  std::vector<int> letters_;
};

Word word_multiply(const Word& a, const Word& b);
Word inverse(const Word& a);
inline Word operator*(const Word& a, const Word& b) { return word_multiply(a, b); }

// Element of the direct power F_n x ... x F_n.
class WordTuple {
 public:
  WordTuple() = default;
  explicit WordTuple(std::size_t arity) : components_(arity) {}
  explicit WordTuple(std::vector<Word> components) : components_(std::move(components)) {}

  std::size_t arity() const { return components_.size(); }
  const Word& operator[](std::size_t k) const { return components_[k]; }
  Word& operator[](std::size_t k) { return components_[k]; }
  const std::vector<Word>& components() const { return components_; }
  bool is_identity() const;
  std::string to_string() const;

  friend bool operator==(const WordTuple&, const WordTuple&) = default;
  friend auto operator<=>(const WordTuple&, const WordTuple&) = default;

 private:
  std::vector<Word> components_;
};

WordTuple word_multiply(const WordTuple& a, const WordTuple& b);
WordTuple inverse(const WordTuple& a);
inline WordTuple operator*(const WordTuple& a, const WordTuple& b) { return word_multiply(a, b); }
// (a_1, ..., a_k, b_1, ..., b_l)
WordTuple concatenate(const WordTuple& a, const WordTuple& b);

// A subset {t_gamma : gamma in [n']^{d'}} of one free group.
struct WordFamily {
  IndexSpace index;
  std::vector<Word> words;  // linear index order of `index`

  const Word& at(const MultiIndex& gamma) const { return words[index.encode(gamma)]; }
};

struct DissociateReport {
  bool ok = true;
  std::optional<std::vector<MultiIndex>> witness;  // violating h(1), ..., h(p)
  std::uint64_t functions_checked = 0;             // h with an injective projection
};

// Checks t_{h(1)}^{-1} t_{h(2)} t_{h(3)}^{-1} ... t_{h(p)} != e for every
// h : [p] -> Gamma having an injective coordinate. The witness, if any, is
// the lexicographically first violating h.
DissociateReport is_p_dissociate(const WordFamily& family, int p,
                                 std::uint64_t budget = kDefaultBudget);

// t_gamma = g_{i_1} g_{i_2} ... g_{i_d} over Gamma = [n]^d.
WordFamily canonical_dissociate(int n, int d);

// True iff some coordinate of the index function (linear indices into
// `space`) is injective.
bool has_injective_coordinate(const IndexSpace& space, std::span<const std::size_t> h);

}  // namespace porth
