#include "oscint/simplex.hpp"

#include "oscint/error.hpp"

namespace oscint {

namespace {

class Tableau {
 public:
  // Columns: n structural, then m artificials, then the right-hand side.
  Tableau(const RatMatrix& a, const std::vector<Rational>& b)
      : m_(a.rows()), n_(a.cols()), t_(a.rows(), a.cols() + a.rows() + 1), basis_(m_) {
    for (int r = 0; r < m_; ++r) {
      const bool flip = b[r] < 0;
      for (int c = 0; c < n_; ++c) t_(r, c) = flip ? Rational(-a(r, c)) : a(r, c);
      t_(r, n_ + r) = 1;
      t_(r, rhs()) = flip ? Rational(-b[r]) : b[r];
      basis_[r] = n_ + r;
    }
  }

  int rhs() const { return n_ + m_; }

  void pivot(int row, int col) {
    Rational p = t_(row, col);
    for (int c = 0; c <= rhs(); ++c) t_(row, c) /= p;
    for (int r = 0; r < m_; ++r) {
      if (r == row || t_(r, col) == 0) continue;
      Rational f = t_(r, col);
      for (int c = 0; c <= rhs(); ++c) t_(r, c) -= f * t_(row, c);
    }
    basis_[row] = col;
  }

  // Minimizes cost over columns [0, ncols). Returns false if unbounded.
  bool optimize(const std::vector<Rational>& cost, int ncols) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < ncols && enter < 0; ++j) {
        if (is_basic(j)) continue;
        Rational rc = cost[j];
        for (int r = 0; r < m_; ++r) rc -= cost[basis_[r]] * t_(r, j);
        if (rc < 0) enter = j;
      }
      if (enter < 0) return true;
      int leave = -1;
      Rational best;
      for (int r = 0; r < m_; ++r) {
        if (t_(r, enter) <= 0) continue;
        Rational ratio = t_(r, rhs()) / t_(r, enter);
        if (leave < 0 || ratio < best ||
            (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  bool is_basic(int col) const {
    for (int b : basis_)
      if (b == col) return true;
    return false;
  }

  // After phase one: pivot artificials out of the basis where possible.
  void expel_artificials() {
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      for (int c = 0; c < n_; ++c)
        if (t_(r, c) != 0 && !is_basic(c)) {
          pivot(r, c);
          break;
        }
      // A row with no structural entry is redundant; its artificial stays at 0.
    }
  }

  std::vector<Rational> solution() const {
    std::vector<Rational> x(n_);
    for (int r = 0; r < m_; ++r)
      if (basis_[r] < n_) x[basis_[r]] = t_(r, rhs());
    return x;
  }

  Rational value(const std::vector<Rational>& cost) const {
    Rational v = 0;
    for (int r = 0; r < m_; ++r) v += cost[basis_[r]] * t_(r, rhs());
    return v;
  }

 private:
  int m_, n_;
  RatMatrix t_;
  std::vector<int> basis_;
};

}  // namespace

LpResult solve_lp(const RatMatrix& a, std::vector<Rational> b,
                  const std::vector<Rational>& c) {
  if (static_cast<int>(b.size()) != a.rows() || static_cast<int>(c.size()) != a.cols())
    throw DimensionError("LP data shape mismatch");
  const int m = a.rows(), n = a.cols();
  Tableau tab(a, b);

  std::vector<Rational> phase1(n + m, 0);
  for (int r = 0; r < m; ++r) phase1[n + r] = 1;
  tab.optimize(phase1, n + m);
  LpResult res;
  if (tab.value(phase1) != 0) {
    res.status = LpStatus::kInfeasible;
    return res;
  }
  tab.expel_artificials();

  std::vector<Rational> phase2(n + m, 0);
  for (int j = 0; j < n; ++j) phase2[j] = c[j];
  // Only structural columns may enter in phase two.
  if (!tab.optimize(phase2, n)) {
    res.status = LpStatus::kUnbounded;
    return res;
  }
  res.status = LpStatus::kOptimal;
  res.x = tab.solution();
  res.objective = tab.value(phase2);
  return res;
}

}  // namespace oscint
