#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oscint/predict.hpp"

namespace oscint {

struct GenericityOptions {
  int nx = 2;
  int nz = 2;
  int m = 3;
  int trials = 100;
  std::uint64_t seed = 1;
  int threads = 0;
  CheckOptions check;
};

struct GenericityFailure {
  int trial = 0;
  std::string condition;
  std::string detail;
};

/// Random phases with independent rational coefficients, one stream per
/// trial. The cubic hypotheses are only counted for (2+2) cubics.
struct GenericityResult {
  GenericityOptions options;
  int trials = 0;
  int rank_one_pass = 0;
  int hormander_pass = 0;
  bool thm14_counted = false;
  int thm14_pass = 0;
  std::vector<GenericityFailure> failures;

  double rank_one_fraction() const { return trials ? double(rank_one_pass) / trials : 0.0; }
  double thm14_fraction() const { return trials ? double(thm14_pass) / trials : 0.0; }
};

GenericityResult run_genericity(const GenericityOptions& opt);

}  // namespace oscint
