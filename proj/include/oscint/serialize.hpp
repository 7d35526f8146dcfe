#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "oscint/cubic22.hpp"
#include "oscint/genericity.hpp"
#include "oscint/hessmap.hpp"
#include "oscint/newton.hpp"
#include "oscint/normest.hpp"
#include "oscint/pencil.hpp"
#include "oscint/predict.hpp"

namespace oscint {

using json = nlohmann::ordered_json;

/// {"nx", "nz", "m", "terms": [{"alpha", "beta", "coef"}]}, terms in the
/// canonical order, coefficients as "p/q" strings.
json to_json(const HomPoly& p);
json to_json(const PhasePoly& s);
HomPoly hom_poly_from_json(const json& j);
PhasePoly phase_from_json(const json& j);
/// Parses text first; JSON syntax errors become ParseError with line/column.
json parse_json_text(std::string_view text);

/// {"nx", "nz", "degree", "entries": [[poly, ...], ...]}.
json to_json(const HessianMatrix& h);
HessianMatrix hessian_from_json(const json& j);

json to_json(const RatMatrix& m);
json to_json(const BinaryForm& f);
json to_json(const CheckStatus& c);
json to_json(const Thm14Report& r);
json to_json(const GeometryReport& g);
json to_json(const NewtonData& n);
json to_json(const ModifiedNewtonResult& r);
json to_json(const DecayPrediction& d);
json to_json(const PencilPhase& p, const PencilRate& r);
json to_json(const FitResult& f);
json to_json(const NormSweepResult& r);
json to_json(const GenericityResult& g);

/// Two-space indentation, trailing newline.
std::string dump(const json& j);

}  // namespace oscint
