#pragma once

#include "divisikit/decompose.hpp"
#include "divisikit/matrix.hpp"
#include "divisikit/nptools.hpp"
#include "divisikit/sat.hpp"

#include "json.hpp"

#include <string>

namespace divisikit::io {

using Json = nlohmann::ordered_json;

// All parse functions throw Error(ParseError) on malformed input.
Json read_file(const std::string& path);
void write_file(const std::string& path, const Json& j);

Json to_json(const Rational& q);                 // "p/q" string
Rational rational_from_json(const Json& j);      // string or integer

Json to_json(const FiniteDistribution& d);       // {"pmf": [...]}
// Accepts any nonnegative weights; normalized exactly (leading/trailing zeros dropped).
FiniteDistribution dist_from_json(const Json& j);

Json to_json(const RationalMatrix& m);           // {"dim": d, "rows": [[...]]}
RationalMatrix matrix_from_json(const Json& j);
Json to_json(const NumericMatrix& m);            // shortest round-trip decimal strings
Json to_json(const ComplexRationalMatrix& m);    // entries {"re": .., "im": ..}
Json to_json(const ComplexMatrix& m);
// Entries may be plain rationals or {"re","im"} objects.
ComplexRationalMatrix complex_matrix_from_json(const Json& j);

Json to_json(const SubsetSumInstance& s);
SubsetSumInstance instance_from_json(const Json& j);
PartitionInstance partition_from_json(const Json& j);

Json to_json(const SatInstance& s);
SatInstance sat_from_json(const Json& j);

std::string format_double(double x);

} // namespace divisikit::io
