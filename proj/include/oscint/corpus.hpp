#pragma once

#include <string>
#include <vector>

#include "oscint/poly.hpp"

namespace oscint {

struct CorpusEntry {
  std::string name;
  std::string description;
  std::string expr;
  int nx = 0;
  int nz = 0;

  PhasePoly phase() const;
};

/// Built-in reference phases, in a fixed order.
const std::vector<CorpusEntry>& corpus();

/// Throws DomainError for an unknown name.
const CorpusEntry& corpus_entry(const std::string& name);

}  // namespace oscint
