#include "oscint/pencil.hpp"

#include <algorithm>

#include "oscint/error.hpp"

namespace oscint {

PhasePoly PencilPhase::synthesize() const {
  HomPoly s(2, 2, d + 1);
  const BinaryForm* forms[2] = {&phi1, &phi2};
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k <= d; ++k) {
      MultiIndex mi{{0, 0}, {d - k, k}};
      mi.alpha[i] = 1;
      s.add_term(mi, forms[i]->coeffs[k]);
    }
  return PhasePoly(std::move(s));
}

PencilPhase make_pencil(const BinaryForm& phi1, const BinaryForm& phi2) {
  if (phi1.is_zero() || phi2.is_zero())
    throw DomainError("pencil forms must both be nonzero");
  if (phi1.degree() != phi2.degree() || phi1.degree() < 1)
    throw DimensionError("pencil forms must share a degree d >= 1");
  PencilPhase p;
  p.d = phi1.degree();
  p.phi1 = phi1;
  p.phi2 = phi2;
  p.s = pencil_s(phi1, phi2);
  return p;
}

std::optional<PencilPhase> detect_pencil(const PhasePoly& s) {
  if (s.nx() != 2 || s.nz() != 2 || s.degree() < 2 || s.is_zero()) return std::nullopt;
  const int d = s.degree() - 1;
  std::vector<Rational> c1(d + 1), c2(d + 1);
  for (const auto& [mi, c] : s.poly().terms()) {
    if (mi.x_degree() != 1) return std::nullopt;
    (mi.alpha[0] ? c1 : c2)[mi.beta[1]] = c;
  }
  BinaryForm f1(std::move(c1)), f2(std::move(c2));
  if (f1.is_zero() || f2.is_zero()) return std::nullopt;
  return make_pencil(f1, f2);
}

PencilRate pencil_rate(const PencilPhase& p) {
  PencilRate r;
  const Rational inv_d = frac(1, p.d);
  r.r = p.s.s == 0 ? inv_d : std::min(inv_d, frac(1, 2 * p.s.s));
  r.delta_mod = std::max(frac(p.d, 2), Rational(p.s.s));
  return r;
}

}  // namespace oscint
