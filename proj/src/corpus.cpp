#include "oscint/corpus.hpp"

#include "oscint/error.hpp"
#include "oscint/parse.hpp"

namespace oscint {

PhasePoly CorpusEntry::phase() const { return parse_phase(expr, nx, nz); }

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> entries = {
      {"s0", "(2+2) cubic meeting every nondegeneracy hypothesis, rate 2/3",
       "x1*z1^2 + x1*z2^2 + x2*z1*z2 + 2*x1^2*z1 - x2^2*z1 + x1^2*z2 + 3*x2^2*z2", 2, 2},
      {"direct_sum", "x1 z1^2 + x1^2 z1 + x2 z2^2 + x2^2 z2, a tensor product of two (1+1) cubics",
       "x1*z1^2 + x1^2*z1 + x2*z2^2 + x2^2*z2", 2, 2},
      {"cubic11", "(1+1) cubic x^2 z + x z^2, rate 1/3", "x^2*z + x*z^2", 1, 1},
      {"rank_one_m4", "(2+2) quartic satisfying the rank-one condition, rate 1/2 with a log",
       "(x1^3*z1 + x2*z1^3 + x2^3*z2 + x2*z2^3)/3", 2, 2},
      {"pencil_d3", "pencil x1 z1^2 z2 + x2 z1 z2^2 with d = 3, s = 1", "x1*z1^2*z2 + x2*z1*z2^2",
       2, 2},
  };
  return entries;
}

const CorpusEntry& corpus_entry(const std::string& name) {
  for (const auto& e : corpus())
    if (e.name == name) return e;
  throw DomainError("unknown example '" + name + "'");
}

}  // namespace oscint
