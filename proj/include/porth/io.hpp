#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "porth/algebra.hpp"
#include "porth/freegroup.hpp"
#include "porth/lab.hpp"
#include "porth/partitions.hpp"

namespace porth {

using Json = nlohmann::json;

// Reads and parses a JSON file; throws ArgumentError on I/O or parse errors.
Json load_json(const std::string& path);

// {"dim": N, "entries": [[re, im], ...]} row-major. Real entries may be
// given as plain numbers.
Matrix matrix_from_json(const Json& j);
Json matrix_to_json(const Matrix& m);

// {"n", "d", "values": {"i1,...,id": matrix | word-sum}} where a word-sum
// is {"terms": [{"words": ["g1 g2", "e"], "coeff": matrix}], "generators"?}.
// All values must be of one kind.
OperatorFamily family_from_json(const Json& j);
Json family_to_json(const OperatorFamily& f);

// {"n", "d", "words": {"i1,...,id": "g1 G2"}} or the bare map, in which
// case n and d are read off the keys.
WordFamily word_family_from_json(const Json& j);

// Keys as in FamilySpec; "coefficients" is "ones" or "random".
FamilySpec family_spec_from_json(const Json& j);

// A list whose entries are partition strings (d = 1) or lists of them.
std::vector<PartitionTuple> sigmas_from_json(const Json& j);

}  // namespace porth
