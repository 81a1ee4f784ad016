#include "porth/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace porth {

namespace {

template <class T>
T required(const Json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) {
    throw ArgumentError(std::string(what) + ": missing key '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ArgumentError(std::string(what) + ": bad value for '" + key + "': " + e.what());
  }
}

Complex complex_from_json(const Json& v) {
  if (v.is_number()) return Complex(v.get<double>(), 0.0);
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return Complex(v[0].get<double>(), v[1].get<double>());
  }
  throw ArgumentError("matrix: entries must be numbers or [re, im] pairs");
}

GroupAlgebraElement word_sum_from_json(const Json& j, std::size_t arity, int generators, Index dim) {
  GroupAlgebraElement x(arity, generators, dim, dim);
  for (const auto& term : j.at("terms")) {
    std::vector<Word> words;
    for (const auto& w : required<std::vector<std::string>>(term, "words", "word-sum")) words.push_back(Word::parse(w));
    if (words.size() != arity) throw ArgumentError("word-sum: every term needs the same number of words");
    x.add_term(WordTuple(std::move(words)), matrix_from_json(term.at("coeff")));
  }
  return x;
}

// Arity, generator count and coefficient size of a word-sum value.
void word_sum_shape(const Json& j, std::size_t& arity, int& generators, Index& dim) {
  if (!j.contains("terms") || !j.at("terms").is_array() || j.at("terms").empty()) {
    throw ArgumentError("word-sum: needs a non-empty 'terms' list");
  }
  const auto& first = j.at("terms").front();
  arity = required<std::vector<std::string>>(first, "words", "word-sum").size();
  dim = matrix_from_json(first.at("coeff")).rows();
  for (const auto& term : j.at("terms")) {
    for (const auto& w : required<std::vector<std::string>>(term, "words", "word-sum")) {
      generators = std::max(generators, Word::parse(w).max_generator());
    }
  }
}

}  // namespace

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ArgumentError("'" + path + "': " + e.what());
  }
}

Matrix matrix_from_json(const Json& j) {
  const auto dim = required<Index>(j, "dim", "matrix");
  if (dim < 1) throw ArgumentError("matrix: dim must be >= 1");
  const auto& entries = j.at("entries");
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(dim * dim)) {
    throw ArgumentError("matrix: expected " + std::to_string(dim * dim) + " entries");
  }
  Matrix m(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    for (Index k = 0; k < dim; ++k) m(i, k) = complex_from_json(entries[static_cast<std::size_t>(i * dim + k)]);
  }
  return m;
}

Json matrix_to_json(const Matrix& m) {
  Json entries = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index k = 0; k < m.cols(); ++k) entries.push_back({m(i, k).real(), m(i, k).imag()});
  }
  return {{"dim", m.rows()}, {"entries", entries}};
}

OperatorFamily family_from_json(const Json& j) {
  const int n = required<int>(j, "n", "family");
  const int d = required<int>(j, "d", "family");
  if (n < 1 || d < 1) throw ArgumentError("family: need n, d >= 1");
  const IndexSpace space(n, d);
  const Json& values = j.at("values");
  if (!values.is_object() || values.size() != space.size()) {
    throw ArgumentError("family: 'values' must have one entry per index (" + std::to_string(space.size()) + ")");
  }
  const bool words = values.begin()->contains("terms");
  if (!words) {
    std::vector<TracialMatrix> out(space.size());
    std::vector<bool> seen(space.size(), false);
    for (const auto& [key, value] : values.items()) {
      const auto idx = space.encode(parse_multi_index(key));
      if (seen[idx]) throw ArgumentError("family: duplicate index '" + key + "'");
      seen[idx] = true;
      out[idx] = TracialMatrix(matrix_from_json(value));
    }
    return OperatorFamily::from_matrices(n, d, std::move(out));
  }
  std::size_t arity = 0;
  int generators = j.value("generators", 0);
  Index dim = 1;
  for (const auto& [key, value] : values.items()) {
    if (!value.contains("terms")) throw ArgumentError("family: mixed value kinds");
    word_sum_shape(value, arity, generators, dim);
  }
  generators = std::max(generators, 1);
  std::vector<GroupAlgebraElement> out(space.size());
  std::vector<bool> seen(space.size(), false);
  for (const auto& [key, value] : values.items()) {
    const auto idx = space.encode(parse_multi_index(key));
    if (seen[idx]) throw ArgumentError("family: duplicate index '" + key + "'");
    seen[idx] = true;
    out[idx] = word_sum_from_json(value, arity, generators, dim);
  }
  return OperatorFamily::from_elements(n, d, std::move(out));
}

Json family_to_json(const OperatorFamily& f) {
  Json values = Json::object();
  for (std::size_t g = 0; g < f.size(); ++g) {
    const std::string key = format_multi_index(f.index().decode(g));
    if (f.kind() == FamilyKind::kMatrix) {
      values[key] = matrix_to_json(f.matrices()[g].matrix());
      continue;
    }
    Json terms = Json::array();
    for (const auto& [w, c] : f.elements()[g].terms()) {
      Json words = Json::array();
      for (const auto& word : w.components()) words.push_back(word.to_string());
      terms.push_back({{"words", words}, {"coeff", matrix_to_json(c)}});
    }
    values[key] = {{"terms", terms}};
  }
  Json out = {{"n", f.n()}, {"d", f.d()}, {"values", values}};
  if (f.kind() == FamilyKind::kGroupAlgebra) out["generators"] = f.elements().front().generators();
  return out;
}

WordFamily word_family_from_json(const Json& j) {
  const Json& map = j.contains("words") ? j.at("words") : j;
  if (!map.is_object() || map.empty()) throw ArgumentError("word family: expected an object of words");
  int n = 0, d = -1;
  for (const auto& [key, value] : map.items()) {
    const auto idx = parse_multi_index(key);
    if (d >= 0 && static_cast<int>(idx.size()) != d) throw ArgumentError("word family: inconsistent index length");
    d = static_cast<int>(idx.size());
    for (int c : idx) n = std::max(n, c);
  }
  if (j.contains("words")) {
    n = required<int>(j, "n", "word family");
    d = required<int>(j, "d", "word family");
  }
  WordFamily family{IndexSpace(n, d), {}};
  if (map.size() != family.index.size()) throw ArgumentError("word family: not total on [n]^d");
  family.words.resize(family.index.size());
  for (const auto& [key, value] : map.items()) {
    family.words[family.index.encode(parse_multi_index(key))] = Word::parse(value.get<std::string>());
  }
  return family;
}

FamilySpec family_spec_from_json(const Json& j) {
  if (!j.is_object()) throw ArgumentError("family spec: expected an object");
  FamilySpec spec;
  spec.kind = required<std::string>(j, "kind", "family spec");
  spec.n = j.value("n", spec.n);
  spec.d = j.value("d", spec.d);
  spec.p = j.value("p", spec.p);
  spec.dim = j.value("dim", spec.dim);
  spec.seed = j.value("seed", spec.seed);
  spec.path = j.value("path", spec.path);
  spec.words = j.value("words", spec.words);
  const std::string coeffs = j.value("coefficients", std::string("random"));
  if (coeffs == "ones") {
    spec.coefficients = CoefficientSource::kOnes;
  } else if (coeffs == "random") {
    spec.coefficients = CoefficientSource::kRandom;
  } else {
    throw ArgumentError("family spec: coefficients must be 'ones' or 'random'");
  }
  return spec;
}

std::vector<PartitionTuple> sigmas_from_json(const Json& j) {
  if (!j.is_array()) throw ArgumentError("sigmas: expected a list");
  std::vector<PartitionTuple> out;
  for (const auto& entry : j) {
    std::vector<SetPartition> parts;
    if (entry.is_string()) {
      parts.push_back(SetPartition::parse(entry.get<std::string>()));
    } else if (entry.is_array()) {
      for (const auto& s : entry) {
        if (!s.is_string()) throw ArgumentError("sigmas: partitions must be strings");
        parts.push_back(SetPartition::parse(s.get<std::string>()));
      }
    } else {
      throw ArgumentError("sigmas: entries must be strings or lists of strings");
    }
    out.emplace_back(std::move(parts));
  }
  return out;
}

}  // namespace porth
