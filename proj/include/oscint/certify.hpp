#pragma once

#include <cstdint>
#include <vector>

#include "oscint/poly.hpp"

namespace oscint {

/// Closed interval with outward-rounded arithmetic.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval point(double v) { return {v, v}; }
  bool contains_zero() const { return lo <= 0.0 && hi >= 0.0; }
  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
};

Interval operator+(Interval a, Interval b);
Interval operator-(Interval a, Interval b);
Interval operator*(Interval a, Interval b);
Interval ipow(Interval a, int e);
Interval intersect(Interval a, Interval b);

/// Polynomial prepared for repeated enclosure over boxes. Encloses with the
/// natural interval extension intersected with the mean-value form.
class IntervalPoly {
 public:
  explicit IntervalPoly(const HomPoly& p);
  Interval enclose(const std::vector<Interval>& box) const;
  double eval(const std::vector<double>& x) const;

 private:
  struct Term {
    Interval coef;
    std::vector<int> exps;
  };
  static Interval natural(const std::vector<Term>& terms, const std::vector<Interval>& box);

  std::vector<Term> terms_;
  std::vector<std::vector<Term>> grad_;
};

struct CertifyResult {
  enum class Outcome { kCertified, kWitness, kBudgetExhausted };
  Outcome outcome = Outcome::kCertified;
  std::int64_t cells = 0;
  std::vector<double> witness;  // cell center on the unit cube surface
};

/// Proves that at every point of the cube surface max|x_i| = 1 at least one
/// of `polys` is nonzero, by depth-first bisection. A cell is discharged once
/// some enclosure excludes 0. A cell narrower than `tol` that cannot be
/// discharged is returned as a witness of a (near) common zero.
CertifyResult certify_no_common_zero(const std::vector<HomPoly>& polys, double tol = 1e-6,
                                     std::int64_t max_cells = 2'000'000);

/// Roughly `target` points covering the cube surface max|x_i| = 1 in
/// dimension n, on per-face tensor grids that include the face edges.
std::vector<std::vector<double>> cube_surface_grid(int n, int target);

}  // namespace oscint
