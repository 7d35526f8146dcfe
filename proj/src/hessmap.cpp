#include "oscint/hessmap.hpp"

#include <cassert>

#include "oscint/error.hpp"

namespace oscint {

HessianMatrix::HessianMatrix(int nx, int nz, int entry_degree)
    : nx_(nx), nz_(nz), degree_(entry_degree),
      e_(static_cast<std::size_t>(nx * nz), HomPoly(nx, nz, entry_degree)) {}

HessianMatrix::HessianMatrix(std::vector<std::vector<HomPoly>> rows) {
  nx_ = static_cast<int>(rows.size());
  nz_ = nx_ ? static_cast<int>(rows[0].size()) : 0;
  if (nx_ == 0 || nz_ == 0) throw DimensionError("empty Hessian matrix");
  degree_ = rows[0][0].degree();
  for (auto& r : rows) {
    if (static_cast<int>(r.size()) != nz_) throw DimensionError("ragged Hessian matrix");
    for (auto& p : r) {
      if (p.nx() != nx_ || p.nz() != nz_)
        throw DimensionError("Hessian entry variables do not match the matrix shape");
      if (p.degree() != degree_) throw DimensionError("Hessian entries differ in degree");
      e_.push_back(std::move(p));
    }
  }
}

bool HessianMatrix::is_zero() const {
  for (const auto& p : e_)
    if (!p.is_zero()) return false;
  return true;
}

RatMatrix HessianMatrix::constant_matrix() const {
  if (degree_ != 0) throw DomainError("Hessian entries are not constants");
  RatMatrix m(nx_, nz_);
  const MultiIndex zero{std::vector<int>(nx_, 0), std::vector<int>(nz_, 0)};
  for (int i = 0; i < nx_; ++i)
    for (int j = 0; j < nz_; ++j) m(i, j) = (*this)(i, j).coefficient(zero);
  return m;
}

HessianMatrix mixed_hessian(const PhasePoly& s) {
  if (s.degree() < 2) throw DomainError("mixed Hessian needs degree m >= 2");
  HessianMatrix h(s.nx(), s.nz(), s.degree() - 2);
  for (int i = 0; i < s.nx(); ++i) {
    HomPoly dx = partial(s.poly(), Var::x(i));
    for (int j = 0; j < s.nz(); ++j) h(i, j) = partial(dx, Var::z(j));
  }
  return h;
}

CompatResult is_compatible(const HessianMatrix& h) {
  CompatResult res;
  for (int j = 0; j < h.nz(); ++j)
    for (int a = 0; a < h.nx(); ++a)
      for (int b = a + 1; b < h.nx(); ++b)
        if (partial(h(a, j), Var::x(b)) != partial(h(b, j), Var::x(a)))
          res.violations.push_back({Var::Side::kX, a, j, b});
  for (int i = 0; i < h.nx(); ++i)
    for (int a = 0; a < h.nz(); ++a)
      for (int b = a + 1; b < h.nz(); ++b)
        if (partial(h(i, a), Var::z(b)) != partial(h(i, b), Var::z(a)))
          res.violations.push_back({Var::Side::kZ, i, a, b});
  res.ok = res.violations.empty();
  return res;
}

PhasePoly hessian_inverse(const HessianMatrix& h) {
  auto compat = is_compatible(h);
  if (!compat.ok)
    throw IncompatibleMatrix("matrix violates " +
                             std::to_string(compat.violations.size()) +
                             " compatibility identities; it is not a mixed Hessian");
  const int nx = h.nx(), nz = h.nz(), m = h.entry_degree() + 2;
  HomPoly s(nx, nz, m);
  for (const MultiIndex& mi : phase_monomials(m, nx, nz)) {
    Rational a;
    bool found = false;
    for (int i = 0; i < nx && !found; ++i) {
      if (mi.alpha[i] == 0) continue;
      for (int j = 0; j < nz && !found; ++j) {
        if (mi.beta[j] == 0) continue;
        MultiIndex lower = mi;
        --lower.alpha[i];
        --lower.beta[j];
        a = h(i, j).coefficient(lower) / (mi.alpha[i] * mi.beta[j]);
        found = true;
#ifndef NDEBUG
        // Every admissible (i, j) must give the same coefficient.
        for (int i2 = 0; i2 < nx; ++i2)
          for (int j2 = 0; j2 < nz; ++j2) {
            if (mi.alpha[i2] == 0 || mi.beta[j2] == 0) continue;
            MultiIndex l2 = mi;
            --l2.alpha[i2];
            --l2.beta[j2];
            assert(h(i2, j2).coefficient(l2) / (mi.alpha[i2] * mi.beta[j2]) == a);
          }
#endif
      }
    }
    if (found && a != 0) s.add_term(mi, a);
  }
  return PhasePoly(std::move(s));
}

}  // namespace oscint
