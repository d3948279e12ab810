#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "isoclass/analyze.hpp"
#include "isoclass/classify.hpp"
#include "isoclass/invariant.hpp"
#include "isoclass/synthesize.hpp"

namespace isoclass::json_io {

/// Insertion-ordered, so serialization is byte-stable.
using Json = nlohmann::ordered_json;

// Every reader throws InvalidInput naming the offending field.

Json to_json(const Rational& q);
Json to_json(const Poly& p);
Json to_json(const Mat& m);
Json to_json(const FactorClass& f);
Json to_json(const IsometryInvariant& inv);
Json to_json(const GLClassSpec& spec);
Json to_json(const ExactIsometry& iso);
/// Fields of a method that was not run are null.
Json to_json(const RigidityReport& r, bool closed_form, bool enumerative);
/// Invariant JSON with an extra "diagnostics" array.
Json to_json(const AnalysisReport& r);

Rational rational_from_json(const Json& j);
Poly poly_from_json(const Json& j);
Mat mat_from_json(const Json& j);
/// Accepts floats or Rational strings.
std::vector<std::vector<double>> float_mat_from_json(const Json& j);
FactorClass factor_from_json(const Json& j);
IsometryInvariant invariant_from_json(const Json& j);
GLClassSpec glclass_from_json(const Json& j);
/// Array of coefficient arrays.
std::vector<Poly> factors_from_json(const Json& j);

/// Throws InvalidInput on a syntax error.
Json parse(const std::string& text);
/// Two-space indented with a trailing newline.
std::string dump(const Json& j);

}  // namespace isoclass::json_io
