#include "oscint/poly.hpp"

#include <numeric>
#include <sstream>

#include "oscint/error.hpp"

namespace oscint {

int MultiIndex::x_degree() const {
  return std::accumulate(alpha.begin(), alpha.end(), 0);
}
int MultiIndex::z_degree() const {
  return std::accumulate(beta.begin(), beta.end(), 0);
}

HomPoly::HomPoly(int nx, int nz, int degree)
    : nx_(nx), nz_(nz), degree_(degree) {
  if (nx < 0 || nz < 0 || degree < 0)
    throw DimensionError("negative polynomial shape");
}

Rational HomPoly::coefficient(const MultiIndex& mi) const {
  auto it = terms_.find(mi);
  return it == terms_.end() ? Rational(0) : it->second;
}

HomPoly& HomPoly::add_term(const MultiIndex& mi, const Rational& c) {
  if (static_cast<int>(mi.alpha.size()) != nx_ ||
      static_cast<int>(mi.beta.size()) != nz_)
    throw DimensionError("multi-index length does not match (nx, nz)");
  for (int a : mi.alpha)
    if (a < 0) throw DomainError("negative exponent");
  for (int b : mi.beta)
    if (b < 0) throw DomainError("negative exponent");
  if (mi.degree() != degree_)
    throw DomainError("term degree " + std::to_string(mi.degree()) +
                      " differs from polynomial degree " +
                      std::to_string(degree_));
  if (c == 0) return *this;
  auto [it, inserted] = terms_.try_emplace(mi, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
  return *this;
}

double HomPoly::eval(std::span<const double> point) const {
  const int n = num_vars();
  if (static_cast<int>(point.size()) != n)
    throw DimensionError("evaluation point has length " +
                         std::to_string(point.size()) + ", expected " +
                         std::to_string(n));
  // powers[v][e] = point[v]^e
  std::vector<std::vector<double>> powers(n, std::vector<double>(degree_ + 1, 1.0));
  for (int v = 0; v < n; ++v)
    for (int e = 1; e <= degree_; ++e) powers[v][e] = powers[v][e - 1] * point[v];
  double sum = 0.0;
  for (const auto& [mi, c] : terms_) {
    double t = c.get_d();
    for (int i = 0; i < nx_; ++i) t *= powers[i][mi.alpha[i]];
    for (int j = 0; j < nz_; ++j) t *= powers[nx_ + j][mi.beta[j]];
    sum += t;
  }
  return sum;
}

Rational HomPoly::eval(std::span<const Rational> point) const {
  if (static_cast<int>(point.size()) != num_vars())
    throw DimensionError("evaluation point has wrong length");
  Rational sum = 0;
  for (const auto& [mi, c] : terms_) {
    Rational t = c;
    for (int i = 0; i < nx_; ++i) t *= pow(point[i], mi.alpha[i]);
    for (int j = 0; j < nz_; ++j) t *= pow(point[nx_ + j], mi.beta[j]);
    sum += t;
  }
  return sum;
}

void HomPoly::check_shape(const HomPoly& o) const {
  if (nx_ != o.nx_ || nz_ != o.nz_ || degree_ != o.degree_)
    throw DimensionError("polynomial shapes differ");
}

HomPoly& HomPoly::operator+=(const HomPoly& o) {
  check_shape(o);
  for (const auto& [mi, c] : o.terms_) add_term(mi, c);
  return *this;
}

HomPoly& HomPoly::operator-=(const HomPoly& o) {
  check_shape(o);
  for (const auto& [mi, c] : o.terms_) add_term(mi, -c);
  return *this;
}

HomPoly& HomPoly::operator*=(const Rational& s) {
  if (s == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [mi, c] : terms_) c *= s;
  return *this;
}

HomPoly operator*(const HomPoly& a, const HomPoly& b) {
  if (a.nx_ != b.nx_ || a.nz_ != b.nz_)
    throw DimensionError("polynomial variable counts differ");
  HomPoly p(a.nx_, a.nz_, a.degree_ + b.degree_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      MultiIndex mi = ma;
      for (int i = 0; i < a.nx_; ++i) mi.alpha[i] += mb.alpha[i];
      for (int j = 0; j < a.nz_; ++j) mi.beta[j] += mb.beta[j];
      p.add_term(mi, ca * cb);
    }
  return p;
}

std::string HomPoly::to_expr() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Print in descending order, which reads more naturally.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [mi, c] = *it;
    Rational mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool any_var = mi.degree() > 0;
    bool wrote = false;
    if (mag != 1 || !any_var) {
      os << to_string(mag);
      wrote = true;
    }
    auto emit = [&](char name, int idx, int e) {
      if (e == 0) return;
      if (wrote) os << "*";
      os << name << (idx + 1);
      if (e > 1) os << "^" << e;
      wrote = true;
    };
    for (int i = 0; i < nx_; ++i) emit('x', i, mi.alpha[i]);
    for (int j = 0; j < nz_; ++j) emit('z', j, mi.beta[j]);
  }
  return os.str();
}

HomPoly partial(const HomPoly& p, Var v) {
  const int limit = v.side == Var::Side::kX ? p.nx() : p.nz();
  if (v.index < 0 || v.index >= limit)
    throw DimensionError("variable index out of range");
  HomPoly d(p.nx(), p.nz(), p.degree() > 0 ? p.degree() - 1 : 0);
  if (p.degree() == 0) return d;
  for (const auto& [mi, c] : p.terms()) {
    const int e = v.side == Var::Side::kX ? mi.alpha[v.index] : mi.beta[v.index];
    if (e == 0) continue;
    MultiIndex m2 = mi;
    (v.side == Var::Side::kX ? m2.alpha[v.index] : m2.beta[v.index]) -= 1;
    d.add_term(m2, c * e);
  }
  return d;
}

namespace {

HomPoly constant_one(int nx, int nz) {
  HomPoly one(nx, nz, 0);
  one.add_term({std::vector<int>(nx, 0), std::vector<int>(nz, 0)}, 1);
  return one;
}

}  // namespace

HomPoly linear_substitute(const HomPoly& p, const RatMatrix& a,
                          const RatMatrix& b) {
  const int nx = p.nx(), nz = p.nz();
  if (a.rows() != nx || a.cols() != nx || b.rows() != nz || b.cols() != nz)
    throw DimensionError("substitution matrices must be nx x nx and nz x nz");
  // Linear forms: old x_i = sum_k a(i,k) x_k, old z_j = sum_l b(j,l) z_l.
  std::vector<std::vector<HomPoly>> xpow(nx), zpow(nz);
  auto build = [&](std::vector<HomPoly>& pw, bool is_x, int row) {
    HomPoly lin(nx, nz, 1);
    const int n = is_x ? nx : nz;
    for (int k = 0; k < n; ++k) {
      Rational c = is_x ? a(row, k) : b(row, k);
      if (c == 0) continue;
      MultiIndex mi{std::vector<int>(nx, 0), std::vector<int>(nz, 0)};
      (is_x ? mi.alpha[k] : mi.beta[k]) = 1;
      lin.add_term(mi, c);
    }
    pw.push_back(constant_one(nx, nz));
    for (int e = 1; e <= p.degree(); ++e) pw.push_back(pw.back() * lin);
  };
  for (int i = 0; i < nx; ++i) build(xpow[i], true, i);
  for (int j = 0; j < nz; ++j) build(zpow[j], false, j);

  HomPoly out(nx, nz, p.degree());
  for (const auto& [mi, c] : p.terms()) {
    HomPoly t = constant_one(nx, nz);
    for (int i = 0; i < nx; ++i)
      if (mi.alpha[i]) t = t * xpow[i][mi.alpha[i]];
    for (int j = 0; j < nz; ++j)
      if (mi.beta[j]) t = t * zpow[j][mi.beta[j]];
    t *= c;
    out += t;
  }
  return out;
}

HomPoly swap_sides(const HomPoly& p) {
  HomPoly q(p.nz(), p.nx(), p.degree());
  for (const auto& [mi, c] : p.terms()) q.add_term({mi.beta, mi.alpha}, c);
  return q;
}

PhasePoly::PhasePoly(HomPoly p) : poly_(std::move(p)) {
  for (const auto& [mi, c] : poly_.terms()) {
    if (mi.x_degree() == 0 || mi.z_degree() == 0)
      throw DomainError("phase contains a pure-" +
                        std::string(mi.x_degree() == 0 ? "z" : "x") +
                        " monomial; such terms do not affect the operator norm "
                        "and are not allowed");
  }
}

std::vector<std::vector<int>> compositions(int total, int parts) {
  std::vector<std::vector<int>> out;
  if (parts <= 0) {
    if (total == 0) out.emplace_back();
    return out;
  }
  std::vector<int> cur(parts, 0);
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == parts - 1) {
      cur[pos] = remaining;
      out.push_back(cur);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      cur[pos] = e;
      self(self, pos + 1, remaining - e);
    }
  };
  rec(rec, 0, total);
  return out;
}

std::vector<MultiIndex> phase_monomials(int m, int nx, int nz) {
  std::vector<MultiIndex> out;
  for (int dx = 1; dx < m; ++dx)
    for (const auto& a : compositions(dx, nx))
      for (const auto& b : compositions(m - dx, nz)) out.push_back({a, b});
  return out;
}

namespace {

long long binom(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

long long dim_phase_space(int m, int nx, int nz) {
  return binom(m + nx + nz - 1, m) - binom(m + nx - 1, m) -
         binom(m + nz - 1, m);
}

}  // namespace oscint
