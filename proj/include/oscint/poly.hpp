#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "oscint/linalg.hpp"
#include "oscint/rational.hpp"

namespace oscint {

/// A variable of the split space: x_i (side X) or z_j (side Z), 0-based.
struct Var {
  enum class Side : std::uint8_t { kX, kZ };
  Side side;
  int index;

  static Var x(int i) { return {Side::kX, i}; }
  static Var z(int j) { return {Side::kZ, j}; }
  auto operator<=>(const Var&) const = default;
};

/// Exponent pair (alpha for x, beta for z) of a monomial x^alpha z^beta.
struct MultiIndex {
  std::vector<int> alpha;
  std::vector<int> beta;

  int x_degree() const;
  int z_degree() const;
  int degree() const { return x_degree() + z_degree(); }
  auto operator<=>(const MultiIndex&) const = default;
};

/// Homogeneous polynomial in (x, z) with exact rational coefficients.
///
/// Terms are kept in a map sorted lexicographically by (alpha, beta); no
/// stored coefficient is zero. The degree is carried explicitly so that the
/// zero polynomial still knows which space it lives in.
class HomPoly {
 public:
  using TermMap = std::map<MultiIndex, Rational>;

  HomPoly() = default;
  HomPoly(int nx, int nz, int degree);

  int nx() const { return nx_; }
  int nz() const { return nz_; }
  int degree() const { return degree_; }
  int num_vars() const { return nx_ + nz_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Rational coefficient(const MultiIndex& mi) const;

  /// Adds c * x^alpha z^beta. Throws on shape or degree mismatch.
  HomPoly& add_term(const MultiIndex& mi, const Rational& c);

  double eval(std::span<const double> point) const;
  Rational eval(std::span<const Rational> point) const;

  HomPoly& operator+=(const HomPoly& o);
  HomPoly& operator-=(const HomPoly& o);
  HomPoly& operator*=(const Rational& s);

  friend HomPoly operator+(HomPoly a, const HomPoly& b) { return a += b; }
  friend HomPoly operator-(HomPoly a, const HomPoly& b) { return a -= b; }
  friend HomPoly operator*(const Rational& s, HomPoly a) { return a *= s; }
  friend HomPoly operator*(const HomPoly& a, const HomPoly& b);
  friend bool operator==(const HomPoly& a, const HomPoly& b) {
    return a.nx_ == b.nx_ && a.nz_ == b.nz_ && a.degree_ == b.degree_ &&
           a.terms_ == b.terms_;
  }

  /// Human-readable form, e.g. "x1^2*z1 + 2*x1*z2^2".
  std::string to_expr() const;

 private:
  void check_shape(const HomPoly& o) const;

  int nx_ = 0;
  int nz_ = 0;
  int degree_ = 0;
  TermMap terms_;
};

/// Exact partial derivative; the result has degree max(m - 1, 0).
HomPoly partial(const HomPoly& p, Var v);

/// p(A x, B z) for square rational A (nx x nx) and B (nz x nz).
HomPoly linear_substitute(const HomPoly& p, const RatMatrix& a,
                          const RatMatrix& b);

/// Exchanges the roles of x and z: q(x', z') = p(z', x').
HomPoly swap_sides(const HomPoly& p);

/// Element of the phase space: homogeneous, no pure-x and no pure-z terms.
class PhasePoly {
 public:
  PhasePoly() = default;
  /// Throws DomainError if a term is pure in x or in z.
  explicit PhasePoly(HomPoly p);

  const HomPoly& poly() const { return poly_; }
  int nx() const { return poly_.nx(); }
  int nz() const { return poly_.nz(); }
  int degree() const { return poly_.degree(); }
  bool is_zero() const { return poly_.is_zero(); }

  friend bool operator==(const PhasePoly& a, const PhasePoly& b) {
    return a.poly_ == b.poly_;
  }

 private:
  HomPoly poly_;
};

/// All exponent vectors of length `parts` summing to `total`, in
/// lexicographically decreasing order of the first entry.
std::vector<std::vector<int>> compositions(int total, int parts);

/// Monomials x^alpha z^beta with |alpha|, |beta| > 0 and total degree m,
/// i.e. a basis of the phase space.
std::vector<MultiIndex> phase_monomials(int m, int nx, int nz);

/// Closed-form dimension of the phase space.
long long dim_phase_space(int m, int nx, int nz);

}  // namespace oscint
