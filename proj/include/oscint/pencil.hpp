#pragma once

#include <optional>

#include "oscint/binres.hpp"
#include "oscint/poly.hpp"

namespace oscint {

/// S = x1 phi1(z) + x2 phi2(z) with phi1, phi2 nonzero binary forms of degree d.
struct PencilPhase {
  int d = 0;
  BinaryForm phi1, phi2;
  PencilS s;

  PhasePoly synthesize() const;
};

/// Succeeds iff nx = nz = 2, every term is linear in x and both
/// coefficient forms are nonzero.
std::optional<PencilPhase> detect_pencil(const PhasePoly& s);

PencilPhase make_pencil(const BinaryForm& phi1, const BinaryForm& phi2);

struct PencilRate {
  Rational r;          // min(1/d, 1/(2s)), with 1/(2*0) read as infinity
  int p = 1;
  Rational delta_mod;  // max(d/2, s)
  bool sharp = true;
};

PencilRate pencil_rate(const PencilPhase& p);

}  // namespace oscint
