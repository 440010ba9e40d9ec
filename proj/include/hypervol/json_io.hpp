#pragma once

#include <json.hpp>
#include <memory>
#include <string>

#include "hypervol/forms.hpp"
#include "hypervol/polytope.hpp"
#include "hypervol/psh.hpp"
#include "hypervol/valuations.hpp"
#include "hypervol/weak_measure.hpp"

namespace hypervol {

// Ordered JSON keeps report key order stable, so identical jobs serialize to
// identical bytes.
using Json = nlohmann::ordered_json;

// Throws ParseError on unreadable files or malformed JSON.
Json load_json_file(const std::string& path);

// Scalars parse as real quaternions; otherwise [t, x, y, z].
Quaternion parse_quaternion(const Json& j);
Json dump_quaternion(const Quaternion& q);

// Square array of quaternion entries, hyperhermitian up to 1e-9.
HyperHermitian parse_hyperhermitian(const Json& j);
Json dump_hyperhermitian(const HyperHermitian& a);

// {"n": .., "k": .., "terms": [{"coef": .., "factors": [matrix, ..]}, ..]}
FormClass parse_form(const Json& j);

// {"box": [[lo, hi], ..], "spacing": h}
GridSpec parse_grid(const Json& j);

// {"center": [..], "radius": r, "height": h?, "indicator": bool?,
//  "form": form?}; n is the quaternionic dimension of the ambient space.
TestDensity parse_density(const Json& j, int n);

// {"ambient": {"kind": "quaternionic"|"complex"|"real", "n": ..},
//  "vertices": [[..], ..]} or {"generator": "box"|"simplex"|"zonotope"|
//  "product", ..}.
Polytope parse_polytope(const Json& j);

// {"kind": "polynomial"|"max-affine"|"mollified"|"smoothed-max"|
//  "smoothed-min"|"support", ..}
std::shared_ptr<const PshModel> parse_model(const Json& j);

Json dump_valuation_report(const ValuationReport& r);
Json dump_cone_pieces(const ConePieces& m);

}  // namespace hypervol
