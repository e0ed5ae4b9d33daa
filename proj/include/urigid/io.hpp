#pragma once

#include <string>

#include <json.hpp>

#include "urigid/affine.hpp"
#include "urigid/certify.hpp"
#include "urigid/framework.hpp"
#include "urigid/stress.hpp"

namespace urigid {

using Json = nlohmann::json;

// Files use 1-based node labels; everything in memory is 0-based. Doubles
// are written in shortest round-trip form, so parse(serialize(x)) is exact.

/// {"dimension": r, "points": [[...r...] x n], "edges": [[i,j] x m]}.
/// Throws Error with a field path ("framework.points[2]: ...") on schema
/// violations and with the failed invariant on graph errors.
Framework framework_from_json(const Json& j);
Json framework_to_json(const Framework& fw);
Framework parse_framework(const std::string& text);
std::string serialize_framework(const Framework& fw);

/// {"omega": [{"edge": [i,j], "value": w}, ...]} covering every edge exactly once.
EquilibriumStress stress_from_json(const Json& j, const Framework& fw);
Json stress_to_json(const Framework& fw, const EquilibriumStress& w);

/// {"phi": [[..]], "t": t, "A": [[..]], "flexed_points": [[..] x n]}.
Json flex_to_json(const FlexWitness& f);
FlexWitness flex_from_json(const Json& j);

Json certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const Json& j);
std::string serialize_certificate(const Certificate& cert);
Certificate parse_certificate(const std::string& text);

/// Rows of `m` as nested arrays.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& path);

/// Reads a whole file; throws Error naming the path on failure.
std::string read_file(const std::string& path);

/// Writes through a temporary sibling and renames it into place.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace urigid
