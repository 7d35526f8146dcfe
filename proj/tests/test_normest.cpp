#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "oscint/error.hpp"
#include "oscint/normest.hpp"
#include "oscint/parse.hpp"

using namespace oscint;

namespace {

AmplitudeSpec cube(int axes, double w = 1.0) { return AmplitudeSpec::cube(axes, w); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

NormOptions tight(int n, double tol = 1e-12) {
  NormOptions o;
  o.n = n;
  o.tol = tol;
  o.max_iter = 2000;
  o.seed = 3;
  return o;
}

}  // namespace

TEST_SUITE("normest") {
  TEST_CASE("kernel entries match a directly built kernel") {
    const PhasePoly s = parse_phase("x^2*z + x*z^2");
    const double lambda = 37.0;
    const int n = 20;
    for (std::int64_t limit : {std::int64_t{0}, std::int64_t{1} << 30}) {
      KernelOperator k(s, lambda, cube(2), n, limit, 2);
      CHECK(k.cached() == (limit > 0));
      const Eigen::MatrixXcd want =
          oracle::kernel_1x1([](double x, double z) { return x * x * z + x * z * z; }, lambda, n, 1.0);
      const double err = (k.dense() - want).cwiseAbs().maxCoeff();
      INFO(oracle::ctx(0, std::to_string(n), 1e-6) << " dense_limit=" << limit);
      CHECK(err < 1e-6 * want.cwiseAbs().maxCoeff());
    }
  }

  TEST_CASE("apply and apply_adjoint agree with the dense matrix") {
    const PhasePoly s = parse_phase("x1*z1^2 + x2*z1*z2 - 2*x1^2*z2", 2, 2);
    KernelOperator k(s, 11.0, cube(4), 9, 0, 3);
    const Eigen::MatrixXcd d = k.dense();
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    cvec f(k.cols()), y(k.rows());
    for (auto& c : f) c = {g(rng), g(rng)};
    for (auto& c : y) c = {g(rng), g(rng)};
    cvec mf, my;
    k.apply(f, mf);
    k.apply_adjoint(y, my);
    Eigen::VectorXcd ef = Eigen::Map<Eigen::VectorXcd>(f.data(), f.size());
    Eigen::VectorXcd ey = Eigen::Map<Eigen::VectorXcd>(y.data(), y.size());
    const Eigen::VectorXcd wf = d * ef, wy = d.adjoint() * ey;
    INFO(oracle::ctx(5, "9^4", 1e-10));
    for (Eigen::Index i = 0; i < wf.size(); ++i) CHECK(std::abs(mf[i] - wf(i)) < 1e-10 * wf.norm());
    for (Eigen::Index i = 0; i < wy.size(); ++i) CHECK(std::abs(my[i] - wy(i)) < 1e-10 * wy.norm());
  }

  TEST_CASE("grid points are cell midpoints") {
    const PhasePoly s = parse_phase("x*z");
    AmplitudeSpec a;
    a.box = {{0.0, 2.0}, {-1.0, 3.0}};
    KernelOperator k(s, 1.0, a, 4, 0, 1);
    CHECK(k.x_point(0)[0] == doctest::Approx(0.25));
    CHECK(k.z_point(3)[0] == doctest::Approx(2.5));
  }

  TEST_CASE("lambda = 0 matches a dense SVD of the amplitude kernel") {
    const PhasePoly s = parse_phase("x1*z1^2 + x2^2*z1", 2, 1);
    for (int n : {8, 12, 24}) {
      const NormEstimate e = estimate_norm(s, 0.0, cube(3), [&] {
        NormOptions o = tight(n, 1e-15);
        o.dense_limit = 0;
        return o;
      }());
      // The amplitude kernel built from scratch.
      const auto t = oracle::midpoints(-1, 1, n);
      const double h = std::pow(2.0 / n, 1.5);
      Eigen::MatrixXcd k(n * n, n);
      for (int i1 = 0; i1 < n; ++i1)
        for (int i2 = 0; i2 < n; ++i2)
          for (int j = 0; j < n; ++j)
            k(i1 * n + i2, j) = oracle::bump(t[i1], -1, 1) * oracle::bump(t[i2], -1, 1) * oracle::bump(t[j], -1, 1) * h;
      INFO(oracle::ctx(3, std::to_string(n), 1e-8));
      CHECK(rel(e.norm, oracle::largest_singular_value(k)) < 1e-8);
    }
  }

  TEST_CASE("zero phase with separable amplitude is rank one") {
    const PhasePoly zero(HomPoly(1, 1, 2));
    const int n = 50;
    const auto t = oracle::midpoints(-1, 1, n);
    double g2 = 0;
    for (double v : t) g2 += oracle::bump(v, -1, 1) * oracle::bump(v, -1, 1) * (2.0 / n);
    for (double lambda : {0.0, 10.0, 1000.0}) {
      const NormEstimate e = estimate_norm(zero, lambda, cube(2), tight(n));
      INFO(oracle::ctx(3, std::to_string(n), 1e-6) << " lambda=" << lambda);
      CHECK(rel(e.norm, g2) < 1e-6);
    }
  }

  TEST_CASE("norm matches a dense SVD at moderate lambda") {
    const PhasePoly s = parse_phase("x^2*z + x*z^2");
    const int n = 60;
    for (double lambda : {5.0, 50.0, 150.0}) {
      NormOptions o = tight(n);
      o.dense_limit = 0;
      const NormEstimate e = estimate_norm(s, lambda, cube(2), o);
      const double want = oracle::largest_singular_value(
          oracle::kernel_1x1([](double x, double z) { return x * x * z + x * z * z; }, lambda, n, 1.0));
      INFO(oracle::ctx(o.seed, std::to_string(n), 1e-8) << " lambda=" << lambda);
      CHECK(e.converged);
      CHECK(rel(e.norm, want) < 1e-8);
    }
  }

  TEST_CASE("power method and Lanczos agree") {
    const PhasePoly s = parse_phase("x^2*z + x*z^2");
    NormOptions o = tight(80, 1e-10);
    const NormEstimate l = estimate_norm(s, 120.0, cube(2), o);
    o.method = NormMethod::kPower;
    o.max_iter = 20000;
    const NormEstimate p = estimate_norm(s, 120.0, cube(2), o);
    INFO(oracle::ctx(o.seed, "80", 1e-10));
    CHECK(l.converged);
    CHECK(p.converged);
    CHECK(rel(l.norm, p.norm) < 1e-6);
    CHECK(l.iterations <= p.iterations);
  }

  TEST_CASE("adjoint symmetry on identical grids") {
    const PhasePoly s = parse_phase("x^2*z + 2*x*z^2");
    const PhasePoly t(swap_sides(s.poly()));
    const NormOptions o = tight(96);
    for (double lambda : {30.0, 90.0}) {
      const double a = estimate_norm(s, lambda, cube(2), o).norm;
      const double b = estimate_norm(t, lambda, cube(2), o).norm;
      INFO(oracle::ctx(o.seed, "96", 1e-6) << " lambda=" << lambda);
      CHECK(rel(a, b) < 1e-6);
    }
    const PhasePoly u = parse_phase("x1*z1^2 + x2^2*z1 + 3*x1*x2*z1", 2, 1);
    const PhasePoly v(swap_sides(u.poly()));
    NormOptions o3 = tight(20);
    const double a = estimate_norm(u, 15.0, cube(3), o3).norm;
    const double b = estimate_norm(v, 15.0, cube(3), o3).norm;
    INFO(oracle::ctx(o3.seed, "20^3", 1e-6));
    CHECK(rel(a, b) < 1e-6);
  }

  TEST_CASE("doubling the grid changes a resolved norm by under 1%") {
    const PhasePoly s = parse_phase("x*z");
    for (double lambda : {50.0, 200.0}) {
      const int n = 2 * static_cast<int>(std::ceil(lambda / 2.0));
      const double a = estimate_norm(s, lambda, cube(2), tight(n, 1e-10)).norm;
      const double b = estimate_norm(s, lambda, cube(2), tight(2 * n, 1e-10)).norm;
      INFO(oracle::ctx(3, std::to_string(n) + "->" + std::to_string(2 * n), 0.01) << " lambda=" << lambda);
      CHECK(rel(a, b) < 0.01);
    }
  }

  TEST_CASE("tensor factorization of the direct sum") {
    const PhasePoly sum = parse_phase("x1*z1^2 + x1^2*z1 + x2*z2^2 + x2^2*z2", 2, 2);
    const PhasePoly one = parse_phase("x*z^2 + x^2*z");
    const int n = 14;
    for (double lambda : {3.0, 25.0}) {
      const double four = estimate_norm(sum, lambda, cube(4), tight(n)).norm;
      const double single = estimate_norm(one, lambda, cube(2), tight(n)).norm;
      INFO(oracle::ctx(3, std::to_string(n), 1e-6) << " lambda=" << lambda);
      CHECK(rel(four, single * single) < 1e-6);
    }
  }

  TEST_CASE("determinism for a fixed seed") {
    const PhasePoly s = parse_phase("x1*z1^2 + x2*z1*z2 + x1^2*z2", 2, 2);
    for (NormMethod m : {NormMethod::kLanczos, NormMethod::kPower}) {
      NormOptions o;
      o.n = 12;
      o.method = m;
      o.seed = 17;
      o.threads = 1;
      const NormEstimate a = estimate_norm(s, 20.0, cube(4), o);
      const NormEstimate b = estimate_norm(s, 20.0, cube(4), o);
      o.threads = 4;
      const NormEstimate c = estimate_norm(s, 20.0, cube(4), o);
      INFO(oracle::ctx(17, "12^4", 1e-12) << " method=" << static_cast<int>(m));
      CHECK(a.iterations == b.iterations);
      CHECK(a.norm == b.norm);
      CHECK(a.iterations == c.iterations);
      CHECK(rel(a.norm, c.norm) < 1e-12);
    }
  }

  TEST_CASE("oscillation rule grows with lambda") {
    const PhasePoly s = parse_phase("x^2*z + x*z^2");
    const int a = oscillation_rule_n(s, 10.0, cube(2), 10.0);
    const int b = oscillation_rule_n(s, 100.0, cube(2), 10.0);
    CHECK(a >= 1);
    CHECK(b > a);
    // Rule: n >= (ppw / 2 pi) lambda L G with L = 2 and G = 3 for this phase.
    CHECK(b >= static_cast<int>(10.0 / (2 * M_PI) * 100.0 * 2.0 * 3.0) - 1);
  }

  TEST_CASE("log-log fit") {
    std::vector<double> l = geometric_lambdas(10, 1000, 9);
    CHECK(l.front() == doctest::Approx(10));
    CHECK(l.back() == doctest::Approx(1000));
    std::vector<double> y;
    for (double v : l) y.push_back(3.0 * std::pow(v, -0.4));
    FitResult f = fit_loglog(l, y, 0.25);
    CHECK(f.slope == doctest::Approx(-0.4).epsilon(1e-12));
    CHECK(f.points == 7);
    CHECK(f.lambda_lo == doctest::Approx(l[2]));
    CHECK(f.stderr_slope < 1e-10);

    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(0, 0.05);
    for (auto& v : y) v *= std::exp(g(rng));
    f = fit_loglog(l, y, 0.0);
    CHECK(f.slope == doctest::Approx(oracle::loglog_slope(l, y)).epsilon(1e-12));
    CHECK(f.stderr_slope > 0);
    CHECK_THROWS(fit_loglog({1.0}, {1.0}, 0.0));
  }

  TEST_CASE("log factor bias is the secant slope of log log") {
    const double a = 50, b = 400;
    CHECK(log_factor_slope_bias(a, b) ==
          doctest::Approx(std::log(std::log(b) / std::log(a)) / std::log(b / a)));
    CHECK(log_factor_slope_bias(a, b) < 1.0 / std::log(a));
    CHECK(log_factor_slope_bias(a, b) > 1.0 / std::log(b));
    CHECK_THROWS(log_factor_slope_bias(0.5, 2));
  }

  TEST_CASE("small sweep: resolved rows, fit consistency, CSV round trip") {
    const PhasePoly s = parse_phase("x*z");
    SweepOptions o;
    o.lambdas = geometric_lambdas(20, 160, 6);
    o.amp = cube(2);
    o.norm.seed = 4;
    o.witness = true;
    const NormSweepResult r = sweep_and_fit(s, o);
    REQUIRE(r.rows.size() == 6);
    std::vector<double> l, y;
    for (const auto& row : r.rows) {
      INFO(oracle::ctx(4, std::to_string(row.n), o.norm.tol) << " lambda=" << row.lambda);
      CHECK(row.resolved);
      CHECK(row.norm > 0);
      CHECK(row.witness_ratio <= row.norm);
      l.push_back(row.lambda);
      y.push_back(row.norm);
    }
    CHECK(r.excluded.empty());
    CHECK(r.witness_fit);
    const std::vector<double> kl(l.begin() + 1, l.end()), ky(y.begin() + 1, y.end());
    CHECK(r.fit.slope == doctest::Approx(oracle::loglog_slope(kl, ky)).epsilon(1e-10));

    const auto back = sweep_from_csv(sweep_to_csv(r));
    REQUIRE(back.size() == r.rows.size());
    for (std::size_t k = 0; k < back.size(); ++k) {
      CHECK(back[k].lambda == r.rows[k].lambda);
      CHECK(back[k].norm == r.rows[k].norm);
      CHECK(back[k].n == r.rows[k].n);
      CHECK(back[k].resolved == r.rows[k].resolved);
    }
    CHECK(fit_rows(back).slope == doctest::Approx(r.fit.slope).epsilon(1e-12));
    CHECK(sweep_plot_data(r).find('\n') != std::string::npos);
  }

  TEST_CASE("under-resolved rows are excluded and reported") {
    const PhasePoly s = parse_phase("x^2*z + x*z^2");
    SweepOptions o;
    o.lambdas = {10, 20, 2000, 4000};
    o.amp = cube(2);
    o.n_min = 16;
    o.n_max = 16;
    const NormSweepResult r = sweep_and_fit(s, o);
    int unresolved = 0;
    for (const auto& row : r.rows) unresolved += !row.resolved;
    CHECK(unresolved >= 2);
    CHECK(r.excluded.size() == static_cast<std::size_t>(unresolved));
  }

  TEST_CASE("witness sits on its scaled support and below the norm") {
    const PhasePoly s = parse_phase("x^2*z + x*z^2");
    for (double lambda : {50.0, 400.0}) {
      const int n = 400;
      KernelOperator k(s, lambda, cube(2), n);
      const WitnessResult w = lower_bound_witness(k, s, lambda);
      const double norm = spectral_norm(k, tight(n, 1e-10)).norm;
      INFO(oracle::ctx(3, std::to_string(n), 1e-10) << " lambda=" << lambda);
      CHECK(w.support_points > 0);
      CHECK(w.ratio > 0);
      CHECK(w.ratio <= norm);
    }
    KernelOperator k(s, 10.0, cube(2), 32);
    CHECK_THROWS_AS(lower_bound_witness(k, s, 0.5), DomainError);
  }

  TEST_CASE("argument errors") {
    const PhasePoly s = parse_phase("x*z");
    CHECK_THROWS_AS(KernelOperator(s, -1.0, cube(2), 16), DomainError);
    CHECK_THROWS_AS(KernelOperator(s, 1.0, cube(2), 1), DomainError);
    CHECK_THROWS_AS(KernelOperator(s, 1.0, cube(3), 16), DimensionError);
  }
}
