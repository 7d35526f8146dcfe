#pragma once

#include <string_view>

#include "oscint/poly.hpp"

namespace oscint {

/// Parses a polynomial expression such as "x1^2*z1 + 2*x1*z2^2" or
/// "(x*z^2 + x^2*z)/3". Variables are x<k>, z<k> (1-based); a bare x or z
/// means x1 or z1. Division is allowed by numeric constants only.
///
/// nx/nz of -1 are inferred from the largest index used. The result must be
/// homogeneous; `degree` of -1 means "whatever the terms have" (0 for the
/// zero polynomial). Throws ParseError with line and column.
HomPoly parse_hom_poly(std::string_view text, int nx = -1, int nz = -1,
                       int degree = -1);

/// parse_hom_poly followed by the phase-space membership check.
PhasePoly parse_phase(std::string_view text, int nx = -1, int nz = -1);

}  // namespace oscint
