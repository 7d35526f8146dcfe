#pragma once

#include <vector>

#include "oscint/linalg.hpp"

namespace oscint {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  Rational objective;
  std::vector<Rational> x;
};

/// Exact dense two-phase simplex with Bland's rule:
/// minimize c.x subject to A x = b, x >= 0.
LpResult solve_lp(const RatMatrix& a, std::vector<Rational> b,
                  const std::vector<Rational>& c);

}  // namespace oscint
