#include "oscint/binres.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oscint/error.hpp"
#include "oscint/parse.hpp"

namespace oscint {

namespace {

// Univariate polynomial, ascending coefficients, no trailing zeros.
using UPoly = std::vector<Rational>;

void trim(UPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int deg(const UPoly& p) { return static_cast<int>(p.size()) - 1; }

UPoly derivative(const UPoly& p) {
  UPoly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<long>(k));
  trim(d);
  return d;
}

// Returns quotient; p becomes the remainder.
UPoly divmod(UPoly& p, const UPoly& q) {
  if (q.empty()) throw DomainError("polynomial division by zero");
  UPoly quot(std::max(0, deg(p) - deg(q) + 1));
  while (!p.empty() && deg(p) >= deg(q)) {
    int shift = deg(p) - deg(q);
    Rational c = p.back() / q.back();
    quot[shift] = c;
    for (int k = 0; k <= deg(q); ++k) p[k + shift] -= c * q[k];
    p.pop_back();
    trim(p);
  }
  trim(quot);
  return quot;
}

UPoly exact_div(const UPoly& p, const UPoly& q) {
  UPoly r = p;
  UPoly quot = divmod(r, q);
  if (!r.empty()) throw Error(ErrorCode::kInternal, "inexact polynomial division");
  return quot;
}

void make_monic(UPoly& p) {
  if (p.empty()) return;
  Rational lc = p.back();
  for (auto& c : p) c /= lc;
}

UPoly upoly_gcd(UPoly a, UPoly b) {
  while (!b.empty()) {
    UPoly r = a;
    divmod(r, b);
    a = std::move(b);
    b = std::move(r);
  }
  make_monic(a);
  return a;
}

int sign_at(const UPoly& p, const Rational& t) {
  Rational v = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * t + *it;
  return sign(v);
}

std::vector<UPoly> sturm_chain(const UPoly& p) {
  std::vector<UPoly> chain{p, derivative(p)};
  while (!chain.back().empty()) {
    UPoly r = chain[chain.size() - 2];
    divmod(r, chain.back());
    for (auto& c : r) c = -c;
    if (r.empty()) break;
    chain.push_back(std::move(r));
  }
  if (chain.back().empty()) chain.pop_back();
  return chain;
}

int sign_changes(const std::vector<int>& signs) {
  int count = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last && s != last) ++count;
    last = s;
  }
  return count;
}

int changes_at_infinity(const std::vector<UPoly>& chain, bool positive) {
  std::vector<int> s;
  for (const auto& q : chain) {
    int sg = sign(q.back());
    if (!positive && deg(q) % 2) sg = -sg;
    s.push_back(sg);
  }
  return sign_changes(s);
}

int changes_at(const std::vector<UPoly>& chain, const Rational& t) {
  std::vector<int> s;
  for (const auto& q : chain) s.push_back(sign_at(q, t));
  return sign_changes(s);
}

// Distinct real roots of a square-free polynomial.
int count_real_roots_squarefree(const UPoly& p) {
  if (deg(p) < 1) return 0;
  auto chain = sturm_chain(p);
  return changes_at_infinity(chain, false) - changes_at_infinity(chain, true);
}

// Cauchy bound: all roots lie in (-B, B).
Rational root_bound(const UPoly& p) {
  Rational m = 0;
  for (int k = 0; k < deg(p); ++k) m = std::max(m, Rational(abs(p[k] / p.back())));
  return m + 1;
}

// Some real root of a square-free p known to have one, by Sturm bisection.
double some_real_root(const UPoly& p) {
  auto chain = sturm_chain(p);
  Rational lo = -root_bound(p), hi = root_bound(p);
  auto count = [&](const Rational& a, const Rational& b) {
    return changes_at(chain, a) - changes_at(chain, b);
  };
  // Narrow to an interval with exactly one root.
  while (count(lo, hi) > 1) {
    Rational mid = (lo + hi) / 2;
    if (sign_at(p, mid) == 0) return mid.get_d();
    if (count(lo, mid) >= 1) hi = mid; else lo = mid;
  }
  for (int it = 0; it < 80; ++it) {
    Rational mid = (lo + hi) / 2;
    int sm = sign_at(p, mid);
    if (sm == 0) return mid.get_d();
    if (count(lo, mid) >= 1) hi = mid; else lo = mid;
  }
  return Rational((lo + hi) / 2).get_d();
}

// Yun's square-free decomposition: p = c * prod a_i^i; entry i-1 holds a_i.
std::vector<UPoly> square_free_decomposition(const UPoly& p) {
  std::vector<UPoly> out;
  if (deg(p) < 1) return out;
  UPoly dp = derivative(p);
  UPoly a0 = upoly_gcd(p, dp);
  UPoly b = exact_div(p, a0);
  UPoly c = exact_div(dp, a0);
  UPoly d = c;
  {
    UPoly db = derivative(b);
    d.resize(std::max(d.size(), db.size()));
    for (std::size_t k = 0; k < db.size(); ++k) d[k] -= db[k];
    trim(d);
  }
  while (deg(b) >= 1) {
    UPoly a = upoly_gcd(b, d);
    out.push_back(a);
    b = exact_div(b, a);
    c = exact_div(d, a);
    UPoly db = derivative(b);
    d = c;
    d.resize(std::max(d.size(), db.size()));
    for (std::size_t k = 0; k < db.size(); ++k) d[k] -= db[k];
    trim(d);
  }
  return out;
}

// Number of leading zero coefficients, i.e. the power of v dividing f.
int v_power(const BinaryForm& f) {
  int k = 0;
  while (k < static_cast<int>(f.coeffs.size()) && f.coeffs[k] == 0) ++k;
  return k;
}

// f(t, 1) with the v-power removed.
UPoly dehomogenize(const BinaryForm& f) {
  UPoly p(f.coeffs.size());
  const int d = f.degree();
  for (int k = 0; k <= d; ++k) p[d - k] = f.coeffs[k];
  trim(p);
  return p;
}

void require_nonzero(const BinaryForm& f, const char* what) {
  if (f.coeffs.empty() || f.is_zero())
    throw DomainError(std::string(what) + ": zero binary form is not allowed");
}

}  // namespace

bool BinaryForm::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](const Rational& c) { return c == 0; });
}

Rational BinaryForm::eval(const Rational& u, const Rational& v) const {
  Rational s = 0;
  const int d = degree();
  for (int k = 0; k <= d; ++k) s += coeffs[k] * pow(u, d - k) * pow(v, k);
  return s;
}

double BinaryForm::eval(double u, double v) const {
  double s = 0;
  const int d = degree();
  for (int k = 0; k <= d; ++k) s += coeffs[k].get_d() * std::pow(u, d - k) * std::pow(v, k);
  return s;
}

BinaryForm quadratic_form(const RatMatrix& m) {
  if (m.rows() != 2 || m.cols() != 2) throw DimensionError("quadratic_form needs a 2x2 matrix");
  return BinaryForm({m(0, 0), m(0, 1) + m(1, 0), m(1, 1)});
}

BinaryForm to_binary_form(const HomPoly& p) {
  if (p.num_vars() != 2)
    throw DimensionError("binary form needs exactly two variables, got " +
                         std::to_string(p.num_vars()));
  std::vector<Rational> c(p.degree() + 1);
  for (const auto& [mi, v] : p.terms()) {
    std::vector<int> e = mi.alpha;
    e.insert(e.end(), mi.beta.begin(), mi.beta.end());
    c[e[1]] = v;
  }
  return BinaryForm(std::move(c));
}

BinaryForm parse_binary_form(std::string_view text) {
  const bool has_x = text.find('x') != std::string_view::npos;
  const bool has_z = text.find('z') != std::string_view::npos;
  if (has_x || has_z) {
    int nx = has_x ? (has_z ? 1 : 2) : 0;
    int nz = has_z ? (has_x ? 1 : 2) : 0;
    return to_binary_form(parse_hom_poly(text, nx, nz));
  }
  std::vector<Rational> c;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string_view item = text.substr(start, comma == std::string_view::npos
                                                    ? std::string_view::npos
                                                    : comma - start);
    try {
      c.push_back(parse_rational(item));
    } catch (const ParseError&) {
      throw ParseError("malformed coefficient '" + std::string(item) + "'", 1,
                       static_cast<int>(start) + 1);
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return BinaryForm(std::move(c));
}

Rational resultant(const BinaryForm& f, const BinaryForm& g) {
  require_nonzero(f, "resultant");
  require_nonzero(g, "resultant");
  const int d1 = f.degree(), d2 = g.degree(), n = d1 + d2;
  if (n == 0) return 1;
  RatMatrix s(n, n);
  for (int r = 0; r < d2; ++r)
    for (int k = 0; k <= d1; ++k) s(r, r + k) = f.coeffs[k];
  for (int r = 0; r < d1; ++r)
    for (int k = 0; k <= d2; ++k) s(d2 + r, r + k) = g.coeffs[k];
  return determinant(s);
}

BinaryForm gcd_form(const BinaryForm& f, const BinaryForm& g) {
  require_nonzero(f, "gcd_form");
  require_nonzero(g, "gcd_form");
  const int common_v = std::min(v_power(f), v_power(g));
  UPoly h = upoly_gcd(dehomogenize(f), dehomogenize(g));
  const int e = deg(h);
  // v^common_v * v^e h(u/v): coefficient of u^(e-j) v^(common_v + j) is h[e-j].
  std::vector<Rational> c(e + common_v + 1);
  for (int j = 0; j <= e; ++j) c[common_v + j] = h[e - j];
  Rational lead = c[common_v];
  for (auto& x : c) x /= lead;
  return BinaryForm(std::move(c));
}

int real_linear_multiplicity(const BinaryForm& f, const Rational& a,
                             const Rational& b) {
  require_nonzero(f, "real_linear_multiplicity");
  if (a == 0 && b == 0) throw DomainError("direction (a, b) must be nonzero");
  // Synthetic division of the coefficient list by (a, b).
  std::vector<Rational> c = f.coeffs;
  int mult = 0;
  while (c.size() > 1) {
    const int d = static_cast<int>(c.size()) - 1;
    std::vector<Rational> q(d);
    std::vector<Rational> r = c;
    if (a != 0) {
      for (int k = 0; k < d; ++k) {
        q[k] = r[k] / a;
        r[k] = 0;
        r[k + 1] -= q[k] * b;
      }
      if (r[d] != 0) break;
    } else {
      // Dividing by v: the leading coefficient must vanish.
      if (c[0] != 0) break;
      for (int k = 0; k < d; ++k) q[k] = c[k + 1] / b;
    }
    c = std::move(q);
    ++mult;
  }
  return mult;
}

int count_real_projective_roots(const BinaryForm& f) {
  require_nonzero(f, "count_real_projective_roots");
  int n = v_power(f) > 0 ? 1 : 0;
  UPoly h = dehomogenize(f);
  if (deg(h) < 1) return n;
  UPoly sf = exact_div(h, upoly_gcd(h, derivative(h)));
  return n + count_real_roots_squarefree(sf);
}

PencilS pencil_s(const BinaryForm& phi1, const BinaryForm& phi2) {
  require_nonzero(phi1, "pencil_s");
  require_nonzero(phi2, "pencil_s");
  if (phi1.degree() != phi2.degree())
    throw DimensionError("pencil forms must have equal degree");
  BinaryForm g = gcd_form(phi1, phi2);
  PencilS res;
  const int kv = v_power(g);
  if (kv > 0) {
    res.s = kv;
    res.direction = {0.0, 1.0};
    res.direction_exact = true;
  }
  auto parts = square_free_decomposition(dehomogenize(g));
  for (int i = static_cast<int>(parts.size()); i >= 1; --i) {
    if (i <= res.s) break;
    const UPoly& a = parts[i - 1];
    if (count_real_roots_squarefree(a) == 0) continue;
    res.s = i;
    if (deg(a) == 1) {
      res.direction = {1.0, Rational(a[0] / a[1]).get_d()};  // u - t v with t = -a0/a1
      res.direction_exact = true;
    } else {
      res.direction = {1.0, -some_real_root(a)};
      res.direction_exact = false;
    }
    break;
  }
  return res;
}

bool is_nondegenerate(const BinaryForm& f) {
  require_nonzero(f, "is_nondegenerate");
  const int d = f.degree();
  if (d == 0) return false;
  if (d == 1) return true;
  std::vector<Rational> fu(d), fv(d);
  for (int k = 0; k < d; ++k) {
    fu[k] = f.coeffs[k] * (d - k);
    fv[k] = f.coeffs[k + 1] * (k + 1);
  }
  BinaryForm du(fu), dv(fv);
  if (du.is_zero() || dv.is_zero()) return false;
  return gcd_form(du, dv).degree() == 0;
}

}  // namespace oscint
