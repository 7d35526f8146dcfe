#pragma once

#include <initializer_list>
#include <optional>
#include <vector>

#include "oscint/rational.hpp"

namespace oscint {

/// Small dense matrix over the rationals. Row-major.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static RatMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& operator()(int r, int c) { return a_[r * cols_ + c]; }
  const Rational& operator()(int r, int c) const { return a_[r * cols_ + c]; }

  RatMatrix transpose() const;
  bool is_symmetric() const;
  bool is_zero() const;

  friend RatMatrix operator+(const RatMatrix& a, const RatMatrix& b);
  friend RatMatrix operator-(const RatMatrix& a, const RatMatrix& b);
  friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
  friend RatMatrix operator*(const Rational& s, const RatMatrix& a);
  friend bool operator==(const RatMatrix& a, const RatMatrix& b);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> a_;
};

Rational determinant(const RatMatrix& m);
int rank(const RatMatrix& m);
std::optional<RatMatrix> inverse(const RatMatrix& m);

/// Basis of {v : m v = 0}, in reduced-echelon parametrization.
std::vector<std::vector<Rational>> null_space(const RatMatrix& m);

/// Coefficients of det(t I - m), highest power first (leading 1).
std::vector<Rational> characteristic_polynomial(const RatMatrix& m);

struct Inertia {
  int positive = 0;
  int negative = 0;
  int zero = 0;
};

/// Exact inertia of a symmetric matrix (Descartes' rule on the
/// characteristic polynomial, which is real-rooted for symmetric input).
Inertia inertia(const RatMatrix& symmetric);

enum class Definiteness {
  kPositiveDefinite,
  kNegativeDefinite,
  kPositiveSemidefinite,
  kNegativeSemidefinite,
  kIndefinite,
  kZero,
};

Definiteness definiteness(const RatMatrix& symmetric);
const char* to_string(Definiteness d);

}  // namespace oscint
