#pragma once

#include <vector>

#include "oscint/poly.hpp"

namespace oscint {

/// n_x by n_z grid of homogeneous polynomials sharing shape and degree.
class HessianMatrix {
 public:
  HessianMatrix() = default;
  /// Zero matrix whose entries have the given degree.
  HessianMatrix(int nx, int nz, int entry_degree);
  /// Throws DimensionError if the entries disagree in shape or degree.
  explicit HessianMatrix(std::vector<std::vector<HomPoly>> rows);

  int nx() const { return nx_; }
  int nz() const { return nz_; }
  int entry_degree() const { return degree_; }

  const HomPoly& operator()(int i, int j) const { return e_[i * nz_ + j]; }
  HomPoly& operator()(int i, int j) { return e_[i * nz_ + j]; }

  bool is_zero() const;
  RatMatrix constant_matrix() const;  // only for entry_degree() == 0

  friend bool operator==(const HessianMatrix&, const HessianMatrix&) = default;

 private:
  int nx_ = 0;
  int nz_ = 0;
  int degree_ = 0;
  std::vector<HomPoly> e_;
};

/// S''_xz; requires m >= 2.
HessianMatrix mixed_hessian(const PhasePoly& s);

/// A failed compatibility identity. For kX: (H_{a,j})_{x_b} != (H_{b,j})_{x_a}
/// with a < b. For kZ: (H_{i,a})_{z_b} != (H_{i,b})_{z_a}.
struct CompatViolation {
  Var::Side side;
  int i;   // row (kZ) or first row a (kX)
  int j;   // column (kX) or first column a (kZ)
  int k;   // second index b
};

struct CompatResult {
  bool ok = true;
  std::vector<CompatViolation> violations;
};

CompatResult is_compatible(const HessianMatrix& h);

/// The unique phase S with mixed_hessian(S) == h. Throws IncompatibleMatrix
/// if h fails the compatibility test.
PhasePoly hessian_inverse(const HessianMatrix& h);

}  // namespace oscint
