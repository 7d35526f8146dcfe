#include "oscint/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oscint/error.hpp"

namespace oscint {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Interval widen(double lo, double hi) { return {std::nextafter(lo, -kInf), std::nextafter(hi, kInf)}; }

Interval coefficient_interval(const Rational& c) {
  double d = c.get_d();
  if (Rational(d) == c) return Interval::point(d);
  return widen(d, d);
}

}  // namespace

Interval operator+(Interval a, Interval b) { return widen(a.lo + b.lo, a.hi + b.hi); }
Interval operator-(Interval a, Interval b) { return widen(a.lo - b.hi, a.hi - b.lo); }

Interval operator*(Interval a, Interval b) {
  const double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return widen(*std::min_element(p, p + 4), *std::max_element(p, p + 4));
}

Interval ipow(Interval a, int e) {
  if (e == 0) return Interval::point(1.0);
  if (e % 2 == 0 && a.contains_zero()) {
    Interval m = Interval::point(std::max(-a.lo, a.hi));
    Interval r = m;
    for (int k = 1; k < e; ++k) r = r * m;
    return {0.0, r.hi};
  }
  if (e % 2 == 0 && a.hi < 0) a = {-a.hi, -a.lo};
  // Monotone on a: bound each endpoint separately.
  Interval lo = Interval::point(a.lo), hi = Interval::point(a.hi);
  Interval rl = lo, rh = hi;
  for (int k = 1; k < e; ++k) {
    rl = rl * lo;
    rh = rh * hi;
  }
  return {rl.lo, rh.hi};
}

Interval intersect(Interval a, Interval b) { return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)}; }

IntervalPoly::IntervalPoly(const HomPoly& p) {
  const int n = p.num_vars();
  auto exps_of = [](const MultiIndex& mi) {
    std::vector<int> e = mi.alpha;
    e.insert(e.end(), mi.beta.begin(), mi.beta.end());
    return e;
  };
  for (const auto& [mi, c] : p.terms()) terms_.push_back({coefficient_interval(c), exps_of(mi)});
  grad_.resize(n);
  for (int v = 0; v < n; ++v) {
    Var var = v < p.nx() ? Var::x(v) : Var::z(v - p.nx());
    HomPoly d = partial(p, var);
    for (const auto& [mi, c] : d.terms()) grad_[v].push_back({coefficient_interval(c), exps_of(mi)});
  }
}

Interval IntervalPoly::natural(const std::vector<Term>& terms, const std::vector<Interval>& box) {
  Interval sum = Interval::point(0.0);
  for (const auto& t : terms) {
    Interval prod = t.coef;
    for (std::size_t i = 0; i < t.exps.size(); ++i)
      if (t.exps[i]) prod = prod * ipow(box[i], t.exps[i]);
    sum = sum + prod;
  }
  return sum;
}

Interval IntervalPoly::enclose(const std::vector<Interval>& box) const {
  Interval nat = natural(terms_, box);
  std::vector<Interval> center(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) center[i] = Interval::point(box[i].mid());
  Interval mv = natural(terms_, center);
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (box[i].width() == 0.0) continue;
    Interval g = natural(grad_[i], box);
    mv = mv + g * (box[i] - center[i]);
  }
  return intersect(nat, mv);
}

double IntervalPoly::eval(const std::vector<double>& x) const {
  double s = 0.0;
  for (const auto& t : terms_) {
    double v = t.coef.mid();
    for (std::size_t i = 0; i < t.exps.size(); ++i)
      for (int k = 0; k < t.exps[i]; ++k) v *= x[i];
    s += v;
  }
  return s;
}

CertifyResult certify_no_common_zero(const std::vector<HomPoly>& polys, double tol,
                                     std::int64_t max_cells) {
  if (polys.empty()) throw DomainError("certification needs at least one polynomial");
  const int n = polys.front().num_vars();
  std::vector<IntervalPoly> ips;
  for (const auto& p : polys) ips.emplace_back(p);

  CertifyResult res;
  std::vector<std::vector<Interval>> stack;
  for (int face = 0; face < 2 * n; ++face) {
    std::vector<Interval> box(n, Interval{-1.0, 1.0});
    const double v = face % 2 ? -1.0 : 1.0;
    box[face / 2] = Interval::point(v);
    stack.push_back(std::move(box));
  }
  while (!stack.empty()) {
    std::vector<Interval> box = std::move(stack.back());
    stack.pop_back();
    if (++res.cells > max_cells) {
      res.outcome = CertifyResult::Outcome::kBudgetExhausted;
      return res;
    }
    bool discharged = false;
    for (const auto& ip : ips)
      if (!ip.enclose(box).contains_zero()) {
        discharged = true;
        break;
      }
    if (discharged) continue;
    int widest = 0;
    for (int i = 1; i < n; ++i)
      if (box[i].width() > box[widest].width()) widest = i;
    if (box[widest].width() < tol) {
      res.outcome = CertifyResult::Outcome::kWitness;
      for (const auto& iv : box) res.witness.push_back(iv.mid());
      return res;
    }
    const double mid = box[widest].mid();
    std::vector<Interval> left = box, right = box;
    left[widest].hi = mid;
    right[widest].lo = mid;
    stack.push_back(std::move(right));
    stack.push_back(std::move(left));
  }
  return res;
}

std::vector<std::vector<double>> cube_surface_grid(int n, int target) {
  std::vector<std::vector<double>> pts;
  if (n <= 0) return pts;
  if (n == 1) return {{1.0}, {-1.0}};
  const double per_face = std::max(1.0, static_cast<double>(target) / (2 * n));
  const int g = std::max(2, static_cast<int>(std::lround(std::pow(per_face, 1.0 / (n - 1)))));
  std::vector<int> idx(n - 1, 0);
  for (int face = 0; face < 2 * n; ++face) {
    const int fixed = face / 2;
    const double v = face % 2 ? -1.0 : 1.0;
    std::fill(idx.begin(), idx.end(), 0);
    for (;;) {
      std::vector<double> p(n);
      for (int i = 0, k = 0; i < n; ++i)
        p[i] = i == fixed ? v : -1.0 + 2.0 * idx[k++] / (g - 1);
      pts.push_back(std::move(p));
      int k = 0;
      while (k < n - 1 && ++idx[k] == g) idx[k++] = 0;
      if (k == n - 1) break;
    }
  }
  return pts;
}

}  // namespace oscint
