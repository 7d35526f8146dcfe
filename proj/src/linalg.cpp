#include "oscint/linalg.hpp"

#include <utility>

#include "oscint/error.hpp"

namespace oscint {

RatMatrix::RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows)
    : rows_(static_cast<int>(rows.size())),
      cols_(rows.size() ? static_cast<int>(rows.begin()->size()) : 0) {
  a_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_)
      throw DimensionError("ragged matrix initializer");
    for (const auto& v : r) a_.push_back(v);
  }
}

RatMatrix RatMatrix::identity(int n) {
  RatMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool RatMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (int r = 0; r < rows_; ++r)
    for (int c = r + 1; c < cols_; ++c)
      if ((*this)(r, c) != (*this)(c, r)) return false;
  return true;
}

bool RatMatrix::is_zero() const {
  for (const auto& v : a_)
    if (v != 0) return false;
  return true;
}

RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw DimensionError("matrix sum shape mismatch");
  RatMatrix s = a;
  for (std::size_t i = 0; i < s.a_.size(); ++i) s.a_[i] += b.a_[i];
  return s;
}

RatMatrix operator-(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw DimensionError("matrix difference shape mismatch");
  RatMatrix s = a;
  for (std::size_t i = 0; i < s.a_.size(); ++i) s.a_[i] -= b.a_[i];
  return s;
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
  RatMatrix p(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int k = 0; k < a.cols_; ++k) {
      const Rational& aik = a(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < b.cols_; ++j) p(i, j) += aik * b(k, j);
    }
  return p;
}

RatMatrix operator*(const Rational& s, const RatMatrix& a) {
  RatMatrix p = a;
  for (auto& v : p.a_) v *= s;
  return p;
}

bool operator==(const RatMatrix& a, const RatMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
}

namespace {

// Row-reduces in place; returns pivot columns. Tracks the determinant sign
// and pivot product when requested.
std::vector<int> row_reduce(RatMatrix& m, bool reduced, Rational* det) {
  std::vector<int> pivots;
  int row = 0;
  Rational d = 1;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int p = -1;
    for (int r = row; r < m.rows(); ++r)
      if (m(r, col) != 0) {
        p = r;
        break;
      }
    if (p < 0) {
      d = 0;
      continue;
    }
    if (p != row) {
      for (int c = 0; c < m.cols(); ++c) std::swap(m(p, c), m(row, c));
      d = -d;
    }
    Rational piv = m(row, col);
    d *= piv;
    for (int c = col; c < m.cols(); ++c) m(row, c) /= piv;
    for (int r = reduced ? 0 : row + 1; r < m.rows(); ++r) {
      if (r == row || m(r, col) == 0) continue;
      Rational f = m(r, col);
      for (int c = col; c < m.cols(); ++c) m(r, c) -= f * m(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  if (det) *det = (row == m.rows()) ? d : Rational(0);
  return pivots;
}

}  // namespace

Rational determinant(const RatMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("determinant of non-square");
  if (m.rows() == 0) return 1;
  RatMatrix w = m;
  Rational d;
  row_reduce(w, false, &d);
  return d;
}

int rank(const RatMatrix& m) {
  RatMatrix w = m;
  return static_cast<int>(row_reduce(w, false, nullptr).size());
}

std::optional<RatMatrix> inverse(const RatMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("inverse of non-square");
  const int n = m.rows();
  RatMatrix aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  auto piv = row_reduce(aug, true, nullptr);
  if (static_cast<int>(piv.size()) < n || piv[n - 1] != n - 1) return std::nullopt;
  RatMatrix inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

std::vector<std::vector<Rational>> null_space(const RatMatrix& m) {
  RatMatrix w = m;
  auto piv = row_reduce(w, true, nullptr);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int c : piv) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (int free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(m.cols());
    v[free] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -w(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<Rational> characteristic_polynomial(const RatMatrix& m) {
  // Faddeev-LeVerrier.
  if (m.rows() != m.cols()) throw DimensionError("char poly of non-square");
  const int n = m.rows();
  std::vector<Rational> c(n + 1);
  c[0] = 1;
  RatMatrix mk(n, n);  // M_0 = 0
  RatMatrix id = RatMatrix::identity(n);
  for (int k = 1; k <= n; ++k) {
    mk = m * mk + c[k - 1] * id;
    RatMatrix amk = m * mk;
    Rational tr = 0;
    for (int i = 0; i < n; ++i) tr += amk(i, i);
    c[k] = -tr / k;
  }
  return c;
}

Inertia inertia(const RatMatrix& s) {
  if (!s.is_symmetric()) throw DomainError("inertia requires a symmetric matrix");
  auto c = characteristic_polynomial(s);
  const int n = s.rows();
  Inertia in;
  int trailing = 0;
  for (int k = n; k >= 0 && c[k] == 0; --k) ++trailing;
  in.zero = trailing;
  auto changes = [&](bool negate) {
    int count = 0, last = 0;
    for (int k = 0; k <= n - trailing; ++k) {
      int sg = sign(c[k]);
      // p(-t): coefficient of t^(n-k) picks up (-1)^(n-k)
      if (negate && ((n - k) % 2)) sg = -sg;
      if (sg == 0) continue;
      if (last != 0 && sg != last) ++count;
      last = sg;
    }
    return count;
  };
  in.positive = changes(false);
  in.negative = changes(true);
  return in;
}

Definiteness definiteness(const RatMatrix& s) {
  Inertia in = inertia(s);
  const int n = s.rows();
  if (in.zero == n) return Definiteness::kZero;
  if (in.positive == n) return Definiteness::kPositiveDefinite;
  if (in.negative == n) return Definiteness::kNegativeDefinite;
  if (in.negative == 0) return Definiteness::kPositiveSemidefinite;
  if (in.positive == 0) return Definiteness::kNegativeSemidefinite;
  return Definiteness::kIndefinite;
}

const char* to_string(Definiteness d) {
  switch (d) {
    case Definiteness::kPositiveDefinite: return "positive definite";
    case Definiteness::kNegativeDefinite: return "negative definite";
    case Definiteness::kPositiveSemidefinite: return "positive semidefinite";
    case Definiteness::kNegativeSemidefinite: return "negative semidefinite";
    case Definiteness::kIndefinite: return "indefinite";
    case Definiteness::kZero: return "zero";
  }
  return "?";
}

}  // namespace oscint
