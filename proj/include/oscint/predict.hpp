#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oscint/poly.hpp"

namespace oscint {

enum class CheckMethod { kExact, kSampled, kCertified };
enum class CheckOutcome { kHolds, kFails, kUnknown };

const char* to_string(CheckMethod m);
const char* to_string(CheckOutcome o);

struct CheckStatus {
  std::string condition;
  CheckOutcome outcome = CheckOutcome::kUnknown;
  CheckMethod method = CheckMethod::kExact;
  std::string detail;
  /// Sampled checks: the minimum of the tested quantity over the grid.
  std::optional<double> sampled_min;
  std::optional<std::vector<double>> witness;  // point where the condition fails

  bool holds() const { return outcome == CheckOutcome::kHolds; }
};

struct CheckOptions {
  int grid_points = 10'000;
  bool certify = false;
  double cell_tol = 1e-6;
  std::int64_t max_cells = 2'000'000;
};

/// rank S''_xz = min(nx, nz) off the origin.
CheckStatus check_hormander(const PhasePoly& s, const CheckOptions& opt = {});

/// Some entry of S''_xz is nonzero at every point off the origin.
CheckStatus check_rank_one(const PhasePoly& s, const CheckOptions& opt = {});

/// Where a predicted rate comes from. Wire tags via to_wire().
enum class RateSource {
  kNone,
  kConstantHessian,     // m = 2: r = rank / 2
  kPhongSteinCubic,     // (1+1), two-sided coefficient support: r = 1/m
  kTang21,              // (2+1), nondegenerate extreme forms
  kNewtonPolygon11,     // (1+1): r = 1/(2 delta)
  kFullRank,            // full rank Hessian off the origin
  kRankOne,             // rank-one condition
  kCubic22,             // (2+2) cubic nondegeneracy hypotheses
  kPencil,              // x1 phi1(z) + x2 phi2(z)
};

const char* to_wire(RateSource s);

struct RateCandidate {
  RateSource source = RateSource::kNone;
  Rational r;
  int p = 0;
};

struct DecayPrediction {
  bool theorem_applies = false;
  Rational r;
  int p = 0;
  RateSource source = RateSource::kNone;
  std::vector<CheckStatus> hypotheses;
  std::vector<RateCandidate> candidates;  // every theorem that fired
  Rational lower_bound_r;                 // (nx + nz) / (2m)
  bool swapped = false;                   // analysed through the adjoint (nx < nz)
};

DecayPrediction predict_decay(const PhasePoly& s, const CheckOptions& opt = {});

}  // namespace oscint
