#pragma once

#include <string>

#include "json.hpp"

#include "freelat/convexity.hpp"
#include "freelat/expr.hpp"
#include "freelat/geometry.hpp"
#include "freelat/norms.hpp"
#include "freelat/universal.hpp"

namespace fbl {

using Json = nlohmann::json;

/// Parses a file, decorating parse errors with the path. Throws
/// std::invalid_argument on anything wrong.
Json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

/// p serializes as a number, with the string "inf" for the sup endpoint.
Json p_to_json(double p);
double p_from_json(const Json& j);

PreorderedSpace space_from_json(const Json& j);
Json space_to_json(const PreorderedSpace& space);

/// Expression nodes are single-key objects: {"gen":[...]},
/// {"scale":{"c":c,"of":node}}, {"add":[...]}, {"sup":[...]}, {"inf":[...]},
/// {"abs":node}, {"pos_part":node}, {"neg_part":node}.
ExprPtr expr_from_json(const Json& j);
Json expr_to_json(const LatticeExpr& e);

NormalForm normal_form_from_json(const Json& j);
Json normal_form_to_json(const NormalForm& nf);

FeasibleTuple tuple_from_json(const Json& j);
Json tuple_to_json(const FeasibleTuple& t);

/// Homogeneous functions: {"arity":n,"expr":node} or
/// {"arity":n,"builtin":"c_p","p":p}.
HomogeneousFunction homogeneous_from_json(const Json& j);
Json homogeneous_to_json(const HomogeneousFunction& h);

ConvexityType convexity_type_from_json(const Json& j);
Json convexity_type_to_json(const ConvexityType& ct);

Json estimate_to_json(const NormEstimate& est, const Json& tolerances);
Json diagnostics_to_json(const SpaceDiagnostics& d);

}  // namespace fbl
