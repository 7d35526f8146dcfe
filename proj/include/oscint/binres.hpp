#pragma once

#include <utility>
#include <vector>

#include "oscint/linalg.hpp"
#include "oscint/poly.hpp"
#include "oscint/rational.hpp"

namespace oscint {

/// Binary form sum_k coeffs[k] u^(d-k) v^k.
struct BinaryForm {
  std::vector<Rational> coeffs;

  BinaryForm() = default;
  explicit BinaryForm(std::vector<Rational> c) : coeffs(std::move(c)) {}

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool is_zero() const;
  Rational eval(const Rational& u, const Rational& v) const;
  double eval(double u, double v) const;

  friend bool operator==(const BinaryForm&, const BinaryForm&) = default;
};

/// x^t M x written as a binary form in (x1, x2).
BinaryForm quadratic_form(const RatMatrix& m);

/// Reads a homogeneous polynomial in exactly two variables of one side
/// (e.g. z1, z2 with nx = 0, or x, z for a (1+1) polynomial) as a form.
BinaryForm to_binary_form(const HomPoly& p);

/// Parses "1,0,-1" (descending powers of u) or an expression in z1, z2.
BinaryForm parse_binary_form(std::string_view text);

/// Sylvester resultant. Throws DomainError on a zero form.
Rational resultant(const BinaryForm& f, const BinaryForm& g);

/// Gcd over Q, scaled so the first nonzero coefficient is 1.
BinaryForm gcd_form(const BinaryForm& f, const BinaryForm& g);

/// Largest k with (a u + b v)^k dividing f.
int real_linear_multiplicity(const BinaryForm& f, const Rational& a,
                             const Rational& b);

/// Number of distinct real points (u:v) of P^1 where f vanishes.
int count_real_projective_roots(const BinaryForm& f);

struct PencilS {
  int s = 0;
  /// Linear form a u + b v achieving s (zero vector when s == 0). Exact when
  /// the root is rational; otherwise a floating approximation.
  std::pair<double, double> direction{0.0, 0.0};
  bool direction_exact = false;
};

/// max over real linear forms l of min(mult_l(phi1), mult_l(phi2)).
PencilS pencil_s(const BinaryForm& phi1, const BinaryForm& phi2);

/// True iff the partials of f have no common zero off the origin, i.e. f
/// splits over C into distinct linear factors.
bool is_nondegenerate(const BinaryForm& f);

}  // namespace oscint
