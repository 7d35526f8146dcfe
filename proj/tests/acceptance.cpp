// Acceptance harness: one PASS/FAIL line per criterion. `--only N` runs a
// single criterion. Exit status is nonzero if any selected criterion fails.
//
// All tolerances and configurations are pinned below. Numeric lines carry
// the seed, grid and tolerance that produced them.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oracles.hpp"
#include "oscint/binres.hpp"
#include "oscint/cubic22.hpp"
#include "oscint/genericity.hpp"
#include "oscint/hessmap.hpp"
#include "oscint/newton.hpp"
#include "oscint/normest.hpp"
#include "oscint/parse.hpp"
#include "oscint/pencil.hpp"
#include "oscint/random.hpp"

using namespace oscint;

namespace {

// Pinned configuration.
constexpr std::uint64_t kSeedHessian = 101;
constexpr std::uint64_t kSeedResultant = 103;
constexpr std::uint64_t kSeedIdentity = 107;
constexpr std::uint64_t kSeedGenericity = 1;
constexpr std::uint64_t kSeedNorm = 1;
constexpr double kNormTol = 1e-6;       // relative change of sigma^2
constexpr double kRefineTol = 0.005;    // adjacent-grid agreement
constexpr double kGridDoublingTol = 0.01;
constexpr double kTensorTol = 1e-3;
constexpr int kTensorGrid = 64;
constexpr int kSweepPoints = 8;
constexpr double kDrop = 0.25;

// Amplitude half-widths. A phase of degree m on the box [-w, w] at lambda is
// the unit box at lambda w^m, so these choices slide the same lambda window
// further into the oscillatory regime without changing the grid budget.
constexpr double kBoxXz = 1.0;
constexpr double kBoxCubic = 2.0;
constexpr double kBoxS0 = 1.3;
constexpr double kBoxPencil = 1.0;
constexpr int kS0GridCap = 128;
constexpr int kPencilGridCap = 128;

const char* kS0 = "x1*z1^2 + x1*z2^2 + x2*z1*z2 + 2*x1^2*z1 - x2^2*z1 + x1^2*z2 + 3*x2^2*z2";
const char* kDirectSum = "x1*z1^2 + x1^2*z1 + x2*z2^2 + x2^2*z2";
const char* kCubic11 = "x^2*z + x*z^2";
const char* kPencil = "x1*z1^2*z2 + x2*z1*z2^2";

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

// ---------------------------------------------------------------------------

void criterion1(Outcome& o) {
  struct Shape {
    int nx, nz, m;
  };
  std::vector<Shape> shapes;
  for (int m = 3; m <= 6; ++m) shapes.push_back({1, 1, m});
  for (int m = 3; m <= 5; ++m) shapes.push_back({2, 2, m});
  for (int m = 3; m <= 4; ++m) shapes.push_back({3, 2, m});
  const auto t0 = Clock::now();
  int ok = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const Shape sh = shapes[k % shapes.size()];
    auto rng = make_stream(kSeedHessian, k);
    const PhasePoly s = random_phase(sh.nx, sh.nz, sh.m, rng);
    if (hessian_inverse(mixed_hessian(s)) == s) ++ok;
  }
  const double t = seconds_since(t0);
  o.detail << ok << "/100 exact round trips in " << fmt(t, 3) << " s (seed=" << kSeedHessian << ")";
  o.require(ok == 100, "every round trip exact");
  o.require(t < 5.0, "runtime < 5 s");
}

void criterion2(Outcome& o) {
  int cases = 0, bad = 0;
  for (int m = 2; m <= 6; ++m)
    for (int nx = 1; nx <= 3; ++nx)
      for (int nz = 1; nz <= 3; ++nz) {
        ++cases;
        if (dim_phase_space(m, nx, nz) != oracle::count_phase_monomials(m, nx, nz)) ++bad;
      }
  o.detail << cases - bad << "/" << cases << " (m, nx, nz) agree with monomial enumeration";
  o.require(bad == 0, "all cases agree");
}

BinaryForm random_form(std::mt19937_64& rng, int d) {
  std::vector<Rational> c;
  for (int k = 0; k <= d; ++k) c.push_back(random_rational(rng, 9, 4));
  if (c[0] == 0 && c[d] == 0) c[0] = 1;
  return BinaryForm(c);
}

RatMatrix random_sym(std::mt19937_64& rng) {
  RatMatrix m(2, 2);
  m(0, 0) = random_rational(rng);
  m(1, 1) = random_rational(rng);
  m(0, 1) = m(1, 0) = random_rational(rng);
  return m;
}

void criterion3(Outcome& o) {
  int agree = 0, zero_res = 0;
  for (std::uint64_t k = 0; k < 500; ++k) {
    auto rng = make_stream(kSeedResultant, k);
    const int e = k % 2 == 0 ? 1 + static_cast<int>(rng() % 2) : 0;
    const int d1 = 1 + static_cast<int>(rng() % (6 - e)), d2 = 1 + static_cast<int>(rng() % (6 - e));
    BinaryForm f = random_form(rng, d1), g = random_form(rng, d2);
    if (e > 0) {
      const BinaryForm h = random_form(rng, e);
      f.coeffs = oracle::form_mul(f.coeffs, h.coeffs);
      g.coeffs = oracle::form_mul(g.coeffs, h.coeffs);
    }
    const bool vanishes = resultant(f, g) == 0;
    zero_res += vanishes;
    if (vanishes == (gcd_form(f, g).degree() >= 1)) ++agree;
  }
  int tested = 0, minus_holds = 0, plus_holds = 0;
  for (std::uint64_t k = 0; tested < 100; ++k) {
    auto rng = make_stream(kSeedIdentity, k);
    const RatMatrix p = random_sym(rng), r = random_sym(rng);
    RatMatrix q(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) q(i, j) = random_rational(rng);
    const auto pi = inverse(p);
    if (!pi) continue;
    ++tested;
    const RatMatrix qpq = q.transpose() * *pi * q;
    const Rational lhs = resultant(quadratic_form(r), quadratic_form(r - qpq));
    const Rational rhs = resultant(quadratic_form(r), quadratic_form(qpq));
    minus_holds += lhs == -rhs;
    plus_holds += lhs == rhs;
  }
  o.detail << "res=0 <=> gcd>=1 on " << agree << "/500 pairs (" << zero_res
           << " with vanishing resultant, seed=" << kSeedResultant << "); Res[R, R-Q'P^-1Q] = -Res[R, Q'P^-1Q] on "
           << minus_holds << "/100 (seed=" << kSeedIdentity << "), with + sign on " << plus_holds << "/100";
  o.require(agree == 500, "resultant/gcd equivalence");
  o.require(minus_holds == 100, "identity with minus sign");
}

void criterion4(Outcome& o) {
  const Thm14Report s0 = check_thm14(parse_phase(kS0, 2, 2));
  const Thm14Report ds = check_thm14(parse_phase(kDirectSum, 2, 2));
  const bool schur_zero = ds.schur_r && ds.schur_r->is_zero();
  o.detail << "S0: cond_18=" << s0.cond_18 << " cond_19=" << s0.cond_19 << " cond_111=" << s0.cond_111
           << " cond_112=" << s0.cond_112 << " (applicable=" << s0.applicable_112 << "); direct sum: cond_18="
           << ds.cond_18 << " cond_19=" << ds.cond_19 << " R-Q'P^-1Q zero=" << schur_zero;
  o.require(s0.all_pass(), "S0 passes all applicable hypotheses");
  o.require(ds.cond_18 && !ds.cond_19 && schur_zero, "direct sum has nonsingular P, R and a zero, singular Schur block");
}

void criterion5(Outcome& o) {
  const RatMatrix rot{{frac(3, 5), frac(-4, 5)}, {frac(4, 5), frac(3, 5)}};  // angle atan(4/3)
  const PhasePoly base = parse_phase("x1^2*z1 + x1*z1^2", 2, 2);
  struct Case {
    std::string name;
    PhasePoly s;
    Rational want;
  };
  const std::vector<Case> cases = {
      {"x1^2 z1 + x1 z1^2", base, frac(3, 2)},
      {"rotated", PhasePoly(linear_substitute(base.poly(), rot, rot)), frac(3, 4)},
      {"S0", parse_phase(kS0, 2, 2), frac(3, 4)},
      {"(x^3 z + x z^3)/3", parse_phase("(x^3*z + x*z^3)/3"), 2},
      {"rank-one m=4", parse_phase("(x1^3*z1 + x2*z1^3 + x2^3*z2 + x2*z2^3)/3", 2, 2), 1},
  };
  double worst_ms = 0;
  for (const auto& c : cases) {
    const auto t0 = Clock::now();
    const NewtonData n = newton_distance(c.s);
    const double ms = seconds_since(t0) * 1e3;
    worst_ms = std::max(worst_ms, ms);
    o.detail << c.name << "=" << to_string(n.delta) << "; ";
    o.require(n.delta == c.want, c.name + " delta = " + to_string(c.want));
  }
  o.detail << "slowest LP " << fmt(worst_ms, 3) << " ms";
  o.require(worst_ms < 10.0, "each LP < 10 ms");
}

void criterion6(Outcome& o) {
  GenericityOptions g;
  g.trials = 100;
  g.seed = kSeedGenericity;
  const auto t0 = Clock::now();
  const GenericityResult r = run_genericity(g);
  const double t = seconds_since(t0);
  o.detail << "rank-one " << r.rank_one_pass << "/100, cubic hypotheses " << r.thm14_pass << "/100 in " << fmt(t, 3)
           << " s (seed=" << g.seed << ", grid_points=" << g.check.grid_points << ")";
  o.require(r.rank_one_pass >= 99, "rank-one >= 99/100");
  o.require(r.thm14_pass >= 99, "cubic hypotheses >= 99/100");
  o.require(t < 30.0, "runtime < 30 s");
}

// --- numerics --------------------------------------------------------------

SweepOptions sweep_options(int axes, double box, double lo, double hi, int n_max, bool witness) {
  SweepOptions s;
  s.lambdas = geometric_lambdas(lo, hi, kSweepPoints);
  s.amp = AmplitudeSpec::cube(axes, box);
  s.norm.tol = kNormTol;
  s.norm.seed = kSeedNorm;
  s.n_max = n_max;
  s.refine_tol = kRefineTol;
  s.drop_fraction = kDrop;
  s.witness = witness;
  return s;
}

std::string grids(const NormSweepResult& r) {
  std::ostringstream os;
  for (std::size_t k = 0; k < r.rows.size(); ++k) os << (k ? "," : "") << r.rows[k].n;
  return os.str();
}

std::string sweep_ctx(const NormSweepResult& r, double box) {
  std::ostringstream os;
  os << "seed=" << r.seed << " tol=" << r.tol << " refine_tol=" << kRefineTol << " box=" << box << " grids=" << grids(r);
  return os.str();
}

int unresolved(const NormSweepResult& r) {
  int u = 0;
  for (const auto& row : r.rows) u += !row.resolved;
  return u;
}

// Slope band check plus a grid-doubling check at the largest lambda.
void slope_case(Outcome& o, const std::string& label, const char* expr, double box, double lo, double hi,
                double target, double tol, double budget_s, bool doubling) {
  const PhasePoly s = parse_phase(expr);
  const auto t0 = Clock::now();
  const NormSweepResult r = sweep_and_fit(s, sweep_options(s.nx() + s.nz(), box, lo, hi, 0, false));
  const double t = seconds_since(t0);
  o.detail << label << ": slope " << fmt(r.fit.slope) << " +- " << fmt(r.fit.stderr_slope, 2) << " (target "
           << fmt(target) << " +- " << tol << ") in " << fmt(t, 3) << " s, " << sweep_ctx(r, box) << "; ";
  o.require(std::abs(r.fit.slope - target) <= tol, label + " slope in band");
  o.require(unresolved(r) == 0, label + " all rows resolved");
  o.require(t < budget_s, label + " runtime < " + fmt(budget_s) + " s");
  if (doubling) {
    const SweepRow& last = r.rows.back();
    NormOptions no;
    no.tol = kNormTol;
    no.seed = kSeedNorm;
    no.n = 2 * last.n;
    const double fine = estimate_norm(s, last.lambda, AmplitudeSpec::cube(2, box), no).norm;
    const double d = std::abs(fine - last.norm) / fine;
    o.detail << label << " doubling n=" << last.n << "->" << no.n << " at lambda=" << fmt(last.lambda)
             << " changes the norm by " << fmt(d, 3) << " (tol " << kGridDoublingTol << "); ";
    o.require(d < kGridDoublingTol, label + " grid doubling < 1%");
  }
}

void tensor_case(Outcome& o) {
  // Both sides use the same per-axis grid, so the discretized 4D operator is
  // exactly the tensor square of the 1D one.
  const PhasePoly four = parse_phase(kDirectSum, 2, 2);
  const PhasePoly one = parse_phase(kCubic11);
  const std::vector<double> lambdas = {5, 10, 20, 40, 80};
  const int n = kTensorGrid;
  const auto t0 = Clock::now();
  double worst = 0;
  for (double lambda : lambdas) {
    NormOptions no;
    no.tol = 1e-10;
    no.seed = kSeedNorm;
    no.n = n;
    const double a = estimate_norm(one, lambda, AmplitudeSpec::cube(2, 1.0), no).norm;
    const double b = estimate_norm(four, lambda, AmplitudeSpec::cube(4, 1.0), no).norm;
    worst = std::max(worst, std::abs(b - a * a) / (a * a));
  }
  const double t = seconds_since(t0);
  o.detail << "tensor oracle: worst relative gap " << fmt(worst, 3) << " over lambda=5,10,20,40,80 (tol " << kTensorTol
           << ", seed=" << kSeedNorm << " norm_tol=1e-10 n=" << n << ") in " << fmt(t, 3) << " s; ";
  o.require(worst < kTensorTol, "4D norm equals product of 1D norms");
  o.require(t < 300.0, "tensor oracle < 5 min");
}

NormSweepResult s0_sweep(double& seconds, bool witness) {
  const PhasePoly s = parse_phase(kS0, 2, 2);
  const auto t0 = Clock::now();
  NormSweepResult r = sweep_and_fit(s, sweep_options(4, kBoxS0, 10, 80, kS0GridCap, witness));
  seconds = seconds_since(t0);
  return r;
}

void criterion7(Outcome& o) {
  slope_case(o, "xz", "x*z", kBoxXz, 50, 800, -0.5, 0.05, 10.0, true);
  slope_case(o, "x^2z+xz^2", kCubic11, kBoxCubic, 50, 800, -1.0 / 3.0, 0.05, 30.0, true);
  tensor_case(o);
  double t = 0;
  const NormSweepResult r = s0_sweep(t, false);
  int max_n = 0;
  for (const auto& row : r.rows) max_n = std::max(max_n, row.n);
  o.detail << "S0: slope " << fmt(r.fit.slope) << " +- " << fmt(r.fit.stderr_slope, 2)
           << " (target -0.6667 +- 0.12) in " << fmt(t, 4) << " s, " << sweep_ctx(r, kBoxS0);
  o.require(std::abs(r.fit.slope + 2.0 / 3.0) <= 0.12, "S0 slope in band");
  o.require(unresolved(r) == 0, "S0 all rows resolved");
  o.require(max_n <= kS0GridCap, "S0 grid <= 128");
  o.require(t < 1800.0, "S0 runtime < 30 min");
}

void criterion8(Outcome& o) {
  const PhasePoly c = parse_phase(kCubic11);
  NormSweepResult r = sweep_and_fit(c, sweep_options(2, kBoxCubic, 50, 800, 0, true));
  bool below = true;
  for (const auto& row : r.rows) below = below && row.witness_ratio <= row.norm;
  const double bound1 = -1.0 / 3.0 - 0.05;
  o.detail << "x^2z+xz^2 witness slope " << fmt(r.witness_fit->slope) << " (>= " << fmt(bound1) << "), "
           << sweep_ctx(r, kBoxCubic) << "; ";
  o.require(r.witness_fit && r.witness_fit->slope >= bound1, "1D witness slope");
  o.require(below, "1D witness <= norm at every lambda");

  double t = 0;
  const NormSweepResult s = s0_sweep(t, true);
  bool below0 = true;
  for (const auto& row : s.rows) below0 = below0 && row.witness_ratio <= row.norm;
  const double bound0 = -2.0 / 3.0 - 0.1;
  o.detail << "S0 witness slope " << fmt(s.witness_fit->slope) << " (>= " << fmt(bound0) << ") in " << fmt(t, 4)
           << " s, " << sweep_ctx(s, kBoxS0);
  o.require(s.witness_fit && s.witness_fit->slope >= bound0, "S0 witness slope");
  o.require(below0, "S0 witness <= norm at every lambda");
}

void criterion9(Outcome& o) {
  const PhasePoly s = parse_phase(kPencil, 2, 2);
  const auto pen = detect_pencil(s);
  o.require(pen.has_value(), "pencil detected");
  if (!pen) return;
  const PencilRate rate = pencil_rate(*pen);
  const ModifiedNewtonResult mod = modified_newton_distance(s, 16, 7);
  o.detail << "d=" << pen->d << " s=" << pen->s.s << " r=" << to_string(rate.r) << " p=" << rate.p
           << " delta_mod=" << to_string(mod.delta) << (mod.exact ? " (exact)" : "") << "; ";
  o.require(pen->d == 3 && pen->s.s == 1, "d = 3, s = 1");
  o.require(rate.r == frac(1, 3), "r = 1/3");
  o.require(rate.delta_mod == frac(3, 2) && mod.delta == frac(3, 2) && mod.exact, "delta_mod = 3/2 exactly");

  const double lo = 50, hi = 400, base_tol = 0.1;
  const double bias = log_factor_slope_bias(lo, hi);
  const double band_lo = -1.0 / 3.0 - base_tol, band_hi = -1.0 / 3.0 + base_tol + bias;
  const auto t0 = Clock::now();
  const NormSweepResult r = sweep_and_fit(s, sweep_options(4, kBoxPencil, lo, hi, kPencilGridCap, false));
  const double t = seconds_since(t0);
  o.detail << "slope " << fmt(r.fit.slope) << " +- " << fmt(r.fit.stderr_slope, 2) << " in band [" << fmt(band_lo)
           << ", " << fmt(band_hi) << "] (log bias " << fmt(bias, 3) << ") in " << fmt(t, 4) << " s, "
           << sweep_ctx(r, kBoxPencil);
  o.require(r.fit.slope >= band_lo && r.fit.slope <= band_hi, "pencil slope in log-widened band");
  o.require(unresolved(r) == 0, "pencil rows resolved");
}

void criterion10(Outcome& o) {
  // The property suites are separate executables; they must run headless
  // and succeed. Their numeric checks log seed, grid and tolerance.
  int failures = 0;
  for (const char* exe : {OSCINT_UNIT_TESTS, OSCINT_CAPI_TESTS}) {
    const std::string cmd = std::string(exe) + " --no-colors=true --minimal=true > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    o.detail << exe << " exit " << rc << "; ";
    failures += rc != 0;
  }
  o.require(failures == 0, "property suites pass");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"oscint acceptance criteria"};
  int only = 0;
  app.add_option("--only", only, "Run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"Hessian isomorphism", criterion1},
      {"phase space dimension", criterion2},
      {"resultant correctness", criterion3},
      {"cubic (2+2) hypothesis checker", criterion4},
      {"Newton distances", criterion5},
      {"genericity", criterion6},
      {"numerical decay slopes", criterion7},
      {"lower-bound witnesses", criterion8},
      {"pencil pipeline", criterion9},
      {"property suites", criterion10},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (only && static_cast<int>(k + 1) != only) continue;
    Outcome o;
    try {
      criteria[k].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    failed += !o.pass;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
