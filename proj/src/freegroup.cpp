#include "porth/freegroup.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>

namespace porth {

Word Word::generator(int g, int exponent) {
  if (g < 1) throw ArgumentError("Word::generator: index must be >= 1");
  if (exponent != 1 && exponent != -1) throw ArgumentError("Word::generator: exponent must be +-1");
  Word w;
  w.letters_.push_back(exponent * g);
  return w;
}

Word Word::from_letters(std::span<const Letter> letters) {
  Word w;
  for (const auto& l : letters) {
    if (l.generator < 1 || (l.exponent != 1 && l.exponent != -1)) {
      throw ArgumentError("Word: invalid letter");
    }
    w.push_back(l.exponent * l.generator);
  }
  return w;
}

Word Word::from_signed(std::span<const int> letters) {
  Word w;
  for (int l : letters) {
    if (l == 0) throw ArgumentError("Word: zero letter");
    w.push_back(l);
  }
  return w;
}

Word Word::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string token;
  Word w;
  while (in >> token) {
    if (token == "e") continue;
    if (token.size() < 2 || (token[0] != 'g' && token[0] != 'G')) {
      throw ArgumentError("Word: bad letter '" + token + "'");
    }
    int g = 0;
    for (std::size_t i = 1; i < token.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(token[i]))) {
        throw ArgumentError("Word: bad letter '" + token + "'");
      }
      g = g * 10 + (token[i] - '0');
    }
    if (g < 1) throw ArgumentError("Word: generator index must be >= 1");
    w.push_back(token[0] == 'g' ? g : -g);
  }
  return w;
}

std::string Word::to_string() const {
  if (letters_.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i > 0) out += ' ';
    out += letters_[i] > 0 ? 'g' : 'G';
    out += std::to_string(std::abs(letters_[i]));
  }
  return out;
}

std::vector<Letter> Word::letters() const {
  std::vector<Letter> out;
  out.reserve(letters_.size());
  for (int l : letters_) out.push_back({std::abs(l), l > 0 ? 1 : -1});
  return out;
}

int Word::max_generator() const {
  int out = 0;
  for (int l : letters_) out = std::max(out, std::abs(l));
  return out;
}

void Word::push_back(int signed_letter) {
  if (!letters_.empty() && letters_.back() == -signed_letter) {
    letters_.pop_back();
  } else {
    letters_.push_back(signed_letter);
  }
}

Word word_multiply(const Word& a, const Word& b) {
  const auto la = a.signed_letters();
  const auto lb = b.signed_letters();
  // Cancel the longest suffix of a against the prefix of b.
  std::size_t k = 0;
  while (k < la.size() && k < lb.size() && la[la.size() - 1 - k] == -lb[k]) ++k;
  std::vector<int> letters(la.begin(), la.end() - static_cast<std::ptrdiff_t>(k));
  letters.insert(letters.end(), lb.begin() + static_cast<std::ptrdiff_t>(k), lb.end());
  return Word::from_signed(letters);
}

Word inverse(const Word& a) {
  const auto la = a.signed_letters();
  std::vector<int> letters(la.rbegin(), la.rend());
  for (int& l : letters) l = -l;
  return Word::from_signed(letters);
}

bool WordTuple::is_identity() const {
  return std::all_of(components_.begin(), components_.end(),
                     [](const Word& w) { return w.is_identity(); });
}

std::string WordTuple::to_string() const {
  std::string out = "(";
  for (std::size_t k = 0; k < components_.size(); ++k) {
    if (k > 0) out += ", ";
    out += components_[k].to_string();
  }
  return out + ")";
}

WordTuple word_multiply(const WordTuple& a, const WordTuple& b) {
  if (a.arity() != b.arity()) throw ArgumentError("WordTuple: arity mismatch");
  WordTuple out(a.arity());
  for (std::size_t k = 0; k < a.arity(); ++k) out[k] = word_multiply(a[k], b[k]);
  return out;
}

WordTuple inverse(const WordTuple& a) {
  WordTuple out(a.arity());
  for (std::size_t k = 0; k < a.arity(); ++k) out[k] = inverse(a[k]);
  return out;
}

WordTuple concatenate(const WordTuple& a, const WordTuple& b) {
  std::vector<Word> parts = a.components();
  parts.insert(parts.end(), b.components().begin(), b.components().end());
  return WordTuple(std::move(parts));
}

bool has_injective_coordinate(const IndexSpace& space, std::span<const std::size_t> h) {
  const int n = space.n();
  if (static_cast<int>(h.size()) > n) return false;
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1);
  for (int k = 1; k <= space.d(); ++k) {
    std::fill(seen.begin(), seen.end(), false);
    bool injective = true;
    for (std::size_t s : h) {
      const auto c = static_cast<std::size_t>(space.coordinate(s, k));
      if (seen[c]) {
        injective = false;
        break;
      }
      seen[c] = true;
    }
    if (injective) return true;
  }
  return false;
}

DissociateReport is_p_dissociate(const WordFamily& family, int p, std::uint64_t budget) {
  if (p < 2 || p % 2 != 0) throw ArgumentError("is_p_dissociate: p must be even and >= 2");
  const IndexSpace& space = family.index;
  if (family.words.size() != space.size()) {
    throw ArgumentError("is_p_dissociate: family is not total on its index set");
  }
  check_power_budget(space.size(), p, budget, "is_p_dissociate");

  std::vector<Word> inverses;
  inverses.reserve(family.words.size());
  for (const auto& w : family.words) inverses.push_back(inverse(w));

  DissociateReport report;
  // Enumerate every h in lexicographic order and keep those with an
  // injective projection; prefix products are reused across the odometer.
  std::vector<std::size_t> h(static_cast<std::size_t>(p), 0);
  std::vector<Word> prefix(static_cast<std::size_t>(p) + 1);
  int dirty = 0;
  while (true) {
    for (int s = dirty; s < p; ++s) {
      const auto idx = h[static_cast<std::size_t>(s)];
      const Word& factor = s % 2 == 0 ? inverses[idx] : family.words[idx];
      prefix[static_cast<std::size_t>(s) + 1] = prefix[static_cast<std::size_t>(s)] * factor;
    }
    if (has_injective_coordinate(space, h)) {
      ++report.functions_checked;
      if (prefix[static_cast<std::size_t>(p)].is_identity()) {
        report.ok = false;
        std::vector<MultiIndex> witness;
        for (auto idx : h) witness.push_back(space.decode(idx));
        report.witness = std::move(witness);
        return report;
      }
    }
    int s = p - 1;
    while (s >= 0 && ++h[static_cast<std::size_t>(s)] == space.size()) h[static_cast<std::size_t>(s--)] = 0;
    if (s < 0) break;
    dirty = s;
  }
  return report;
}

WordFamily canonical_dissociate(int n, int d) {
  if (n < 1 || d < 1) throw ArgumentError("canonical_dissociate: need n, d >= 1");
  WordFamily family{IndexSpace(n, d), {}};
  family.words.reserve(family.index.size());
  for (std::size_t i = 0; i < family.index.size(); ++i) {
    Word w;
    for (int c : family.index.decode(i)) w.push_back(c);
    family.words.push_back(std::move(w));
  }
  return family;
}

}  // namespace porth
