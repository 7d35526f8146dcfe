#include "oscint/newton.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <thread>

#include "oscint/error.hpp"
#include "oscint/pencil.hpp"
#include "oscint/random.hpp"
#include "oscint/simplex.hpp"

namespace oscint {

namespace {

std::vector<int> point_of(const MultiIndex& mi) {
  std::vector<int> p = mi.alpha;
  p.insert(p.end(), mi.beta.begin(), mi.beta.end());
  return p;
}

// Constraint matrix for sum_i w_i p_i + s = t * 1, sum w = 1.
// Column layout: w (k), t, s (N). When t is fixed the t column is dropped
// and moved to the right-hand side.
LpResult newton_lp(const std::vector<MultiIndex>& support, const Rational* fixed_t) {
  const int k = static_cast<int>(support.size());
  const int n = static_cast<int>(support.front().alpha.size() + support.front().beta.size());
  const int tcols = fixed_t ? 0 : 1;
  RatMatrix a(n + 1, k + tcols + n);
  std::vector<Rational> b(n + 1, 0), c(k + tcols + n, 0);
  for (int i = 0; i < k; ++i) {
    auto p = point_of(support[i]);
    for (int j = 0; j < n; ++j) a(j, i) = p[j];
    a(n, i) = 1;
  }
  for (int j = 0; j < n; ++j) {
    if (fixed_t) {
      b[j] = *fixed_t;
    } else {
      a(j, k) = -1;
    }
    a(j, k + tcols + j) = 1;
  }
  b[n] = 1;
  if (!fixed_t) c[k] = 1;
  return solve_lp(a, b, c);
}

std::vector<MultiIndex> support_of(const PhasePoly& s) {
  if (s.is_zero()) throw DomainError("Newton distance of the zero polynomial is undefined");
  std::vector<MultiIndex> sup;
  for (const auto& [mi, c] : s.poly().terms()) sup.push_back(mi);
  return sup;
}

Rational delta_of(const HomPoly& p) { return newton_distance(PhasePoly(p)).delta; }

// Directions v with sum_i v_i dS/dx_i == 0 (or the z analogue).
std::vector<std::vector<Rational>> null_directions(const HomPoly& s, Var::Side side) {
  const int n = side == Var::Side::kX ? s.nx() : s.nz();
  std::vector<HomPoly> d;
  std::set<MultiIndex> monos;
  for (int i = 0; i < n; ++i) {
    d.push_back(partial(s, {side, i}));
    for (const auto& [mi, c] : d.back().terms()) monos.insert(mi);
  }
  RatMatrix a(static_cast<int>(monos.size()), n);
  int r = 0;
  for (const auto& mi : monos) {
    for (int i = 0; i < n; ++i) a(r, i) = d[i].coefficient(mi);
    ++r;
  }
  if (monos.empty()) return {};
  return null_space(a);
}

// Invertible matrix whose trailing columns are `cols`, completed with unit vectors.
std::optional<RatMatrix> complete_basis(int n, const std::vector<std::vector<Rational>>& cols) {
  const int k = static_cast<int>(cols.size());
  if (k == 0 || k >= n) return std::nullopt;
  std::vector<std::vector<Rational>> chosen;
  for (int e = 0; e < n && static_cast<int>(chosen.size()) < n - k; ++e) {
    std::vector<Rational> u(n, 0);
    u[e] = 1;
    RatMatrix m(n, static_cast<int>(chosen.size()) + 1 + k);
    int c = 0;
    for (const auto& v : chosen) { for (int i = 0; i < n; ++i) m(i, c) = v[i]; ++c; }
    for (int i = 0; i < n; ++i) m(i, c) = u[i];
    ++c;
    for (const auto& v : cols) { for (int i = 0; i < n; ++i) m(i, c) = v[i]; ++c; }
    if (rank(m) == c) chosen.push_back(u);
  }
  RatMatrix a(n, n);
  int c = 0;
  for (const auto& v : chosen) { for (int i = 0; i < n; ++i) a(i, c) = v[i]; ++c; }
  for (const auto& v : cols) { for (int i = 0; i < n; ++i) a(i, c) = v[i]; ++c; }
  return a;
}

std::vector<RatMatrix> permutation_matrices(int n) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<RatMatrix> out;
  do {
    RatMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, perm[i]) = 1;
    out.push_back(std::move(m));
  } while (std::next_permutation(perm.begin(), perm.end()) && out.size() < 720);
  return out;
}

std::vector<RatMatrix> side_candidates(const HomPoly& s, Var::Side side) {
  const int n = side == Var::Side::kX ? s.nx() : s.nz();
  auto out = permutation_matrices(n);  // identity first
  if (auto a = complete_basis(n, null_directions(s, side))) out.push_back(*a);
  return out;
}

}  // namespace

NewtonData newton_distance(const PhasePoly& s) {
  NewtonData nd;
  nd.support = support_of(s);
  LpResult lp = newton_lp(nd.support, nullptr);
  if (lp.status != LpStatus::kOptimal)
    throw Error(ErrorCode::kInternal, "Newton LP did not reach an optimum");
  nd.delta = lp.objective;
  nd.weights.assign(lp.x.begin(), lp.x.begin() + static_cast<long>(nd.support.size()));
  return nd;
}

bool diagonal_in_polyhedron(const PhasePoly& s, const Rational& t) {
  auto sup = support_of(s);
  return newton_lp(sup, &t).status == LpStatus::kOptimal;
}

RatMatrix random_gl(int n, std::uint64_t seed, std::uint64_t index) {
  auto rng = make_stream(seed, index);
  std::uniform_int_distribution<int> entry(-64, 64);
  for (;;) {
    RatMatrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = frac(entry(rng), 64);
    if (abs(determinant(m)) > frac(1, 10)) return m;
  }
}

ModifiedNewtonResult modified_newton_distance(const PhasePoly& s, int samples,
                                              std::uint64_t seed, int threads) {
  if (s.is_zero()) throw DomainError("modified Newton distance of the zero polynomial");
  if (samples < 1) throw Error(ErrorCode::kArgument, "samples must be >= 1");
  const HomPoly& p = s.poly();
  const int nx = s.nx(), nz = s.nz();

  ModifiedNewtonResult best;
  best.a = RatMatrix::identity(nx);
  best.b = RatMatrix::identity(nz);
  best.delta = newton_distance(s).delta;
  best.method = "identity";
  best.candidates = 1;

  if (auto pen = detect_pencil(s)) {
    best.delta = pencil_rate(*pen).delta_mod;
    best.exact = true;
    best.method = "pencil";
    return best;
  }

  auto consider = [&](const RatMatrix& a, const RatMatrix& b, const char* method) {
    Rational d = delta_of(linear_substitute(p, a, b));
    ++best.candidates;
    if (d > best.delta) {
      best.delta = d;
      best.a = a;
      best.b = b;
      best.method = method;
    }
  };
  auto xs = side_candidates(p, Var::Side::kX);
  auto zs = side_candidates(p, Var::Side::kZ);
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < zs.size(); ++j)
      if (i || j) consider(xs[i], zs[j], "structured");

  // Random transforms: each index owns its stream; merge by (delta, -index).
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, samples);
  struct Best { Rational d; int index = -1; };
  std::vector<Best> local(threads);
  auto work = [&](int tid) {
    for (int k = tid; k < samples; k += threads) {
      RatMatrix a = random_gl(nx, seed, 2 * static_cast<std::uint64_t>(k));
      RatMatrix b = random_gl(nz, seed, 2 * static_cast<std::uint64_t>(k) + 1);
      Rational d = delta_of(linear_substitute(p, a, b));
      if (local[tid].index < 0 || d > local[tid].d) local[tid] = {d, k};
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  Best merged;
  for (const auto& l : local)
    if (l.index >= 0 && (merged.index < 0 || l.d > merged.d ||
                         (l.d == merged.d && l.index < merged.index)))
      merged = l;
  best.candidates += samples;
  if (merged.index >= 0 && merged.d > best.delta) {
    best.delta = merged.d;
    best.a = random_gl(nx, seed, 2 * static_cast<std::uint64_t>(merged.index));
    best.b = random_gl(nz, seed, 2 * static_cast<std::uint64_t>(merged.index) + 1);
    best.method = "random";
  }
  return best;
}

}  // namespace oscint
