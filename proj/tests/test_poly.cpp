#include "doctest.h"
#include "oracles.hpp"
#include "oscint/error.hpp"
#include "oscint/hessmap.hpp"
#include "oscint/parse.hpp"
#include "oscint/poly.hpp"
#include "oscint/random.hpp"

using namespace oscint;

namespace {

const char* kS0 =
    "x1*z1^2 + x1*z2^2 + x2*z1*z2 + 2*x1^2*z1 - x2^2*z1 + x1^2*z2 + 3*x2^2*z2";

MultiIndex mi(std::vector<int> a, std::vector<int> b) { return {std::move(a), std::move(b)}; }

}  // namespace

TEST_SUITE("poly") {
  TEST_CASE("eval of a single monomial and of zero") {
    HomPoly p(2, 2, 3);
    p.add_term(mi({2, 0}, {1, 0}), 1);
    std::vector<double> pt{2, 0, 3, 0};
    CHECK(p.eval(pt) == doctest::Approx(12.0));
    HomPoly zero(2, 2, 3);
    CHECK(zero.eval(pt) == 0.0);
  }

  TEST_CASE("eval of S0 against term-by-term summation") {
    const PhasePoly s = parse_phase(kS0, 2, 2);
    // Terms written out by hand in (x1, x2, z1, z2) order.
    const std::vector<oracle::Term> terms = {
        {1, {1, 0, 2, 0}}, {1, {1, 0, 0, 2}},  {1, {0, 1, 1, 1}}, {2, {2, 0, 1, 0}},
        {-1, {0, 2, 1, 0}}, {1, {2, 0, 0, 1}}, {3, {0, 2, 0, 1}}};
    for (const auto& pt : std::vector<std::vector<double>>{{1, 1, 1, 1}, {0.3, -1.7, 2.5, 0.125}}) {
      CHECK(s.poly().eval(pt) == doctest::Approx(oracle::eval_terms(terms, pt)).epsilon(1e-14));
    }
    std::vector<Rational> one(4, Rational(1));
    CHECK(s.poly().eval(one) == 8);
  }

  TEST_CASE("eval rejects a point of the wrong length") {
    HomPoly p(1, 1, 2);
    p.add_term(mi({1}, {1}), 1);
    std::vector<double> pt{1, 2, 3};
    CHECK_THROWS_AS(p.eval(pt), DimensionError);
  }

  TEST_CASE("partial derivatives") {
    HomPoly p(2, 2, 3);
    p.add_term(mi({2, 0}, {1, 0}), 1);
    HomPoly want(2, 2, 2);
    want.add_term(mi({1, 0}, {1, 0}), 2);
    CHECK(partial(p, Var::x(0)) == want);
    CHECK(partial(p, Var::z(1)).is_zero());
    CHECK(partial(p, Var::z(1)).degree() == 2);

    const PhasePoly s = parse_phase(kS0, 2, 2);
    CHECK(partial(partial(s.poly(), Var::x(0)), Var::z(0)) == parse_hom_poly("4*x1 + 2*z1", 2, 2));
  }

  TEST_CASE("mixed partials commute on random phases") {
    for (std::uint64_t k = 0; k < 100; ++k) {
      auto rng = make_stream(11, k);
      const int m = 3 + static_cast<int>(k % 3);
      const PhasePoly s = random_phase(2, 2, m, rng);
      INFO("seed=11 stream=" << k << " m=" << m);
      for (int i = 0; i < 2; ++i)
        for (int i2 = 0; i2 < 2; ++i2)
          for (int j = 0; j < 2; ++j) {
            const HomPoly a = partial(partial(partial(s.poly(), Var::x(i)), Var::x(i2)), Var::z(j));
            const HomPoly b = partial(partial(partial(s.poly(), Var::z(j)), Var::x(i2)), Var::x(i));
            CHECK(a == b);
          }
    }
  }

  TEST_CASE("eval is linear in the coefficients at rational points") {
    for (std::uint64_t k = 0; k < 50; ++k) {
      auto rng = make_stream(12, k);
      const PhasePoly p = random_phase(2, 1, 4, rng), q = random_phase(2, 1, 4, rng);
      std::vector<Rational> pt;
      for (int a = 0; a < 3; ++a) pt.push_back(random_rational(rng));
      INFO("seed=12 stream=" << k);
      CHECK((p.poly() + q.poly()).eval(pt) == p.poly().eval(pt) + q.poly().eval(pt));
    }
  }

  TEST_CASE("phase space dimension") {
    CHECK(dim_phase_space(3, 2, 2) == 12);
    CHECK(dim_phase_space(2, 1, 1) == 1);
    CHECK(dim_phase_space(3, 1, 1) == 2);
    for (int m = 2; m <= 6; ++m)
      for (int nx = 1; nx <= 3; ++nx)
        for (int nz = 1; nz <= 3; ++nz) {
          INFO("m=" << m << " nx=" << nx << " nz=" << nz);
          CHECK(dim_phase_space(m, nx, nz) == oracle::count_phase_monomials(m, nx, nz));
          CHECK(static_cast<long long>(phase_monomials(m, nx, nz).size()) ==
                oracle::count_phase_monomials(m, nx, nz));
        }
  }

  TEST_CASE("phase membership rejects pure monomials") {
    HomPoly p(1, 1, 3);
    p.add_term(mi({3}, {0}), 1);
    CHECK_THROWS_AS(PhasePoly{p}, DomainError);
  }

  TEST_CASE("add_term checks degree and stored coefficients stay nonzero") {
    HomPoly p(1, 1, 3);
    CHECK_THROWS(p.add_term(mi({1}, {1}), 1));
    p.add_term(mi({2}, {1}), 1);
    p.add_term(mi({2}, {1}), -1);
    CHECK(p.is_zero());
  }

  TEST_CASE("swap_sides is an involution") {
    auto rng = make_stream(13, 0);
    const PhasePoly s = random_phase(2, 3, 4, rng);
    const HomPoly t = swap_sides(s.poly());
    CHECK(t.nx() == 3);
    CHECK(t.nz() == 2);
    CHECK(swap_sides(t) == s.poly());
  }

  TEST_CASE("linear substitution by the identity is a no-op") {
    auto rng = make_stream(14, 0);
    const PhasePoly s = random_phase(2, 2, 3, rng);
    CHECK(linear_substitute(s.poly(), RatMatrix::identity(2), RatMatrix::identity(2)) == s.poly());
  }
}

TEST_SUITE("parse") {
  TEST_CASE("expressions with constants, parentheses and division") {
    const HomPoly p = parse_hom_poly("(x*z^3 + x^3*z)/3");
    CHECK(p.nx() == 1);
    CHECK(p.nz() == 1);
    CHECK(p.degree() == 4);
    CHECK(p.coefficient(mi({3}, {1})) == Rational(1, 3));
    CHECK(parse_hom_poly("2*x1*z1 - x1*z1", 1, 1) == parse_hom_poly("x1*z1", 1, 1));
  }

  TEST_CASE("round trip through to_expr") {
    const PhasePoly s = parse_phase(kS0, 2, 2);
    CHECK(parse_phase(s.poly().to_expr(), 2, 2) == s);
  }

  TEST_CASE("errors carry a position") {
    CHECK_THROWS_AS(parse_hom_poly("x1*z1 +"), ParseError);
    CHECK_THROWS_AS(parse_hom_poly("x1^2*z1 + x1*z1"), ParseError);
    CHECK_THROWS_AS(parse_hom_poly("x1 / z1"), ParseError);
    try {
      parse_hom_poly("x1*z1 + $");
      FAIL("no exception");
    } catch (const ParseError& e) {
      CHECK(e.line() == 1);
      CHECK(e.column() == 9);
    }
  }

  TEST_CASE("parse_phase rejects pure monomials") {
    CHECK_THROWS_AS(parse_phase("x^3 + x*z^2"), DomainError);
  }

  TEST_CASE("rational literals") {
    CHECK(parse_rational("-3/7") == Rational(-3, 7));
    CHECK(parse_rational("0.25") == Rational(1, 4));
    CHECK(parse_rational("1.5e-3") == Rational(3, 2000));
    CHECK(to_string(frac(4, 8)) == "1/2");
    CHECK(to_string(frac(3, -6)) == "-1/2");
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(frac(1, 0), DomainError);
  }
}
