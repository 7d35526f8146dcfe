#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "oscint/linalg.hpp"
#include "oscint/poly.hpp"

namespace oscint {

/// det S''_xz = 1/2 x^t P x + x^t Q z + 1/2 z^t R z for a (2+2) cubic.
struct QuadraticFormPQR {
  RatMatrix p{2, 2};
  RatMatrix q{2, 2};
  RatMatrix r{2, 2};

  /// The 4x4 symmetric matrix [[P, Q], [Q^t, R]] of the form 2*Phi.
  RatMatrix block() const;
  /// Rebuilds Phi as a polynomial in (x1, x2, z1, z2).
  HomPoly synthesize() const;
};

/// Throws PreconditionError unless nx = nz = 2 and m = 3.
QuadraticFormPQR extract_pqr(const PhasePoly& s);

/// Result of testing the four nondegeneracy hypotheses of the (2+2) cubic
/// theorem. Names follow the equation labels used on the wire.
struct Thm14Report {
  QuadraticFormPQR pqr;
  bool cond_18 = false;   // P, R nonsingular
  bool cond_19 = false;   // Schur complements nonsingular
  bool cond_111 = false;  // two resultants nonzero
  bool cond_112 = true;   // only required when P and R are both indefinite
  bool applicable_112 = false;

  Rational det_p, det_r;
  std::optional<Rational> det_schur_p;  // det(P - Q R^-1 Q^t)
  std::optional<Rational> det_schur_r;  // det(R - Q^t P^-1 Q)
  std::optional<Rational> res_111_x, res_111_z;
  std::optional<Rational> res_112_x, res_112_z;
  std::optional<RatMatrix> schur_p, schur_r;
  std::vector<std::string> notes;

  bool all_pass() const { return cond_18 && cond_19 && cond_111 && cond_112; }
};

Thm14Report check_thm14(const PhasePoly& s);

/// Same checks starting from the blocks directly.
Thm14Report check_thm14(const QuadraticFormPQR& pqr);

struct GeometryReport {
  Inertia phi_inertia;     // of [[P, Q], [Q^t, R]]
  bool phi_definite = false;
  Definiteness schur_r;    // R - Q^t P^-1 Q: Gamma_R conic type
  Definiteness schur_p;    // P - Q R^-1 Q^t: Gamma_L conic type
  std::string gamma_r;     // "ellipse" or "hyperbola"
  std::string gamma_l;
  /// Real null directions of the binary quadratics, as unit vectors.
  std::vector<std::array<double, 2>> null_p, null_r, null_schur_r, null_schur_p;
};

/// Requires the first two hypotheses to hold (PreconditionError otherwise).
GeometryReport classify_geometry(const PhasePoly& s);

struct SigmaDiagnostic {
  double sigma1;  // smallest singular value of S''_xz
  double sigma2;
  double abs_phi;
};

SigmaDiagnostic sigma1_diagnostic(const PhasePoly& s, const std::array<double, 4>& point);

}  // namespace oscint
