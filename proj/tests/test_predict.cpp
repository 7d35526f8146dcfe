#include "doctest.h"
#include "oscint/certify.hpp"
#include "oscint/corpus.hpp"
#include "oscint/error.hpp"
#include "oscint/hessmap.hpp"
#include "oscint/newton.hpp"
#include "oscint/parse.hpp"
#include "oscint/pencil.hpp"
#include "oscint/predict.hpp"
#include "oscint/random.hpp"

using namespace oscint;

namespace {

const char* kS0 =
    "x1*z1^2 + x1*z2^2 + x2*z1*z2 + 2*x1^2*z1 - x2^2*z1 + x1^2*z2 + 3*x2^2*z2";
const char* kRankOne = "(x1^3*z1 + x2*z1^3 + x2^3*z2 + x2*z2^3)/3";

}  // namespace

TEST_SUITE("predict") {
  TEST_CASE("Hormander condition") {
    const CheckStatus a = check_hormander(parse_phase("(x^3*z + x*z^3)/3"));
    CHECK(a.holds());
    CHECK(a.method == CheckMethod::kExact);
    const CheckStatus b = check_hormander(parse_phase("x^2*z + x*z^2"));
    CHECK(b.outcome == CheckOutcome::kFails);
    const CheckStatus c = check_hormander(parse_phase(kS0, 2, 2));
    CHECK(c.outcome == CheckOutcome::kFails);
    CHECK(c.method == CheckMethod::kExact);
  }

  TEST_CASE("rank-one condition") {
    CHECK(check_rank_one(parse_phase(kS0, 2, 2)).holds());
    CHECK(check_rank_one(parse_phase(kRankOne, 2, 2)).holds());
    const CheckStatus f = check_rank_one(parse_phase("x1*z1^2 + x1^2*z1", 2, 2));
    CHECK(f.outcome == CheckOutcome::kFails);
  }

  TEST_CASE("rank-one failure carries a witness") {
    CheckOptions opt;
    const CheckStatus f = check_rank_one(parse_phase("x1*z1^2 + x1^2*z1", 2, 2), opt);
    CHECK(f.outcome == CheckOutcome::kFails);
    REQUIRE(f.witness);
    // Every Hessian entry is tiny at the witness.
    const HessianMatrix h = mixed_hessian(parse_phase("x1*z1^2 + x1^2*z1", 2, 2));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(std::abs(h(i, j).eval(*f.witness)) < 1e-4);
  }

  TEST_CASE("rank-one for m = 4 is sampled, then certified on request") {
    const PhasePoly s = parse_phase(kRankOne, 2, 2);
    CHECK(check_rank_one(s).method == CheckMethod::kSampled);
    CheckOptions opt;
    opt.certify = true;
    const CheckStatus c = check_rank_one(s, opt);
    CHECK(c.holds());
    CHECK(c.method == CheckMethod::kCertified);
    const CheckStatus f = check_rank_one(parse_phase("x1^3*z1 + x1*z1^3", 2, 2), opt);
    CHECK(f.outcome == CheckOutcome::kFails);
  }

  TEST_CASE("predictions for the corpus") {
    struct Want {
      const char* name;
      bool applies;
      Rational r;
      int p;
      RateSource source;
    };
    const std::vector<Want> wants = {
        {"s0", true, frac(2, 3), 0, RateSource::kCubic22},
        {"direct_sum", false, 0, 0, RateSource::kNone},
        {"cubic11", true, frac(1, 3), 0, RateSource::kPhongSteinCubic},
        {"rank_one_m4", true, frac(1, 2), 1, RateSource::kRankOne},
        {"pencil_d3", true, frac(1, 3), 1, RateSource::kPencil},
    };
    for (const auto& w : wants) {
      INFO(w.name);
      const DecayPrediction d = predict_decay(corpus_entry(w.name).phase());
      CHECK(d.theorem_applies == w.applies);
      if (!w.applies) continue;
      CHECK(d.r == w.r);
      CHECK(d.p == w.p);
      CHECK(d.source == w.source);
    }
  }

  TEST_CASE("quadratic phases use the rank") {
    const DecayPrediction d = predict_decay(parse_phase("x1*z1 + x2*z1", 2, 2));
    CHECK(d.source == RateSource::kConstantHessian);
    CHECK(d.r == frac(1, 2));
    CHECK(predict_decay(parse_phase("x1*z1 + x2*z2", 2, 2)).r == 1);
  }

  TEST_CASE("lower bound exponent") {
    const DecayPrediction d = predict_decay(parse_phase(kS0, 2, 2));
    CHECK(d.lower_bound_r == frac(2, 3));
    CHECK(predict_decay(parse_phase("x^2*z + x*z^2")).lower_bound_r == frac(1, 3));
  }

  TEST_CASE("(1+1) consistency: 1/(2 delta) = 1/m under two-sided support") {
    for (std::uint64_t k = 0; k < 50; ++k) {
      auto rng = make_stream(61, k);
      const int m = 3 + static_cast<int>(k % 4);
      const PhasePoly s = random_phase(1, 1, m, rng);
      HomPoly p = s.poly();
      // Force both extreme monomials x^{m-1} z and x z^{m-1} to be present.
      p.add_term({{m - 1}, {1}}, 1 - p.coefficient({{m - 1}, {1}}));
      p.add_term({{1}, {m - 1}}, 1 - p.coefficient({{1}, {m - 1}}));
      const PhasePoly t(p);
      INFO("seed=61 stream=" << k << " m=" << m);
      CHECK(newton_distance(t).delta == frac(m, 2));
      const DecayPrediction d = predict_decay(t);
      CHECK(d.r == frac(1, m));
    }
  }

  TEST_CASE("(2+2) cubics passing the hypotheses have delta 3/4") {
    int seen = 0;
    for (std::uint64_t k = 0; k < 30; ++k) {
      auto rng = make_stream(62, k);
      const PhasePoly s = random_phase(2, 2, 3, rng);
      const DecayPrediction d = predict_decay(s);
      if (d.source != RateSource::kCubic22) continue;
      ++seen;
      INFO("seed=62 stream=" << k);
      CHECK(newton_distance(s).delta == frac(3, 4));
      CHECK(d.r == frac(2, 3));
    }
    CHECK(seen >= 25);
  }

  TEST_CASE("prediction is invariant under exchanging x and z") {
    for (std::uint64_t k = 0; k < 20; ++k) {
      auto rng = make_stream(63, k);
      const PhasePoly s = random_phase(2, 2, 3 + static_cast<int>(k % 2), rng);
      const PhasePoly t(swap_sides(s.poly()));
      INFO("seed=63 stream=" << k);
      const DecayPrediction a = predict_decay(s), b = predict_decay(t);
      CHECK(a.theorem_applies == b.theorem_applies);
      CHECK(a.r == b.r);
      CHECK(a.p == b.p);
    }
  }

  TEST_CASE("Hormander implies rank one and r never exceeds nz/2") {
    for (std::uint64_t k = 0; k < 40; ++k) {
      auto rng = make_stream(64, k);
      const int nx = 1 + static_cast<int>(k % 2), nz = 1 + static_cast<int>((k / 2) % 2);
      const PhasePoly s = random_phase(nx, nz, 3 + static_cast<int>(k % 3), rng);
      INFO("seed=64 stream=" << k);
      if (check_hormander(s).holds()) CHECK(check_rank_one(s).holds());
      const DecayPrediction d = predict_decay(s);
      if (d.theorem_applies) CHECK(d.r <= frac(std::min(nx, nz), 2));
    }
  }

  TEST_CASE("zero phase is rejected") {
    CHECK_THROWS_AS(predict_decay(PhasePoly(HomPoly(1, 1, 3))), DomainError);
  }
}

TEST_SUITE("pencil") {
  TEST_CASE("detection and rate") {
    const auto p = detect_pencil(parse_phase("x1*z1^2*z2 + x2*z1*z2^2", 2, 2));
    REQUIRE(p);
    CHECK(p->d == 3);
    CHECK(p->s.s == 1);
    const PencilRate r = pencil_rate(*p);
    CHECK(r.r == frac(1, 3));
    CHECK(r.p == 1);
    CHECK(r.delta_mod == frac(3, 2));
    CHECK(p->synthesize() == parse_phase("x1*z1^2*z2 + x2*z1*z2^2", 2, 2));
  }

  TEST_CASE("s = 0 reads 1/(2s) as infinity") {
    const PencilPhase p = make_pencil(parse_binary_form("1,0,0"), parse_binary_form("0,0,1"));
    CHECK(p.s.s == 0);
    CHECK(pencil_rate(p).r == frac(1, 2));
    CHECK(pencil_rate(p).delta_mod == 1);
  }

  TEST_CASE("large s dominates") {
    const PencilPhase p = make_pencil(parse_binary_form("1,0,0,0"), parse_binary_form("0,1,0,0"));
    CHECK(p.s.s == 2);
    CHECK(pencil_rate(p).r == frac(1, 4));
    const PencilPhase q = make_pencil(parse_binary_form("1,0,0,0,0"), parse_binary_form("1,1,0,0,0"));
    CHECK(q.s.s == 3);
    CHECK(pencil_rate(q).r == frac(1, 6));
    CHECK(pencil_rate(q).delta_mod == 3);
  }

  TEST_CASE("non-pencils are not detected") {
    CHECK_FALSE(detect_pencil(parse_phase(kS0, 2, 2)));
    CHECK_FALSE(detect_pencil(parse_phase("x1*z1^2*z2", 2, 2)));
  }
}

TEST_SUITE("certify") {
  TEST_CASE("interval arithmetic encloses sampled values") {
    const HomPoly p = parse_hom_poly("x1^2*z1 - 3*x1*z1*z2 + x2*z2^2", 2, 2);
    const IntervalPoly ip(p);
    auto rng = make_stream(71, 0);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 200; ++k) {
      std::vector<Interval> box;
      std::vector<double> pt;
      for (int a = 0; a < 4; ++a) {
        double lo = u(rng), hi = u(rng);
        if (lo > hi) std::swap(lo, hi);
        box.push_back({lo, hi});
        pt.push_back(lo + (hi - lo) * 0.37);
      }
      const Interval e = ip.enclose(box);
      const double v = p.eval(pt);
      CHECK(e.lo <= v);
      CHECK(v <= e.hi);
    }
  }

  TEST_CASE("no common zero of independent linear forms") {
    std::vector<HomPoly> forms = {parse_hom_poly("x1", 2, 0), parse_hom_poly("x2", 2, 0)};
    const CertifyResult r = certify_no_common_zero(forms);
    CHECK(r.outcome == CertifyResult::Outcome::kCertified);
  }

  TEST_CASE("common zero is found") {
    std::vector<HomPoly> same = {parse_hom_poly("x1 + x2", 2, 0), parse_hom_poly("2*x1 + 2*x2", 2, 0)};
    const CertifyResult r = certify_no_common_zero(same);
    REQUIRE(r.outcome == CertifyResult::Outcome::kWitness);
    CHECK(std::abs(r.witness[0] + r.witness[1]) < 1e-5);
  }

  TEST_CASE("cube surface grid lies on the surface") {
    for (const auto& p : cube_surface_grid(3, 500)) {
      double m = 0;
      for (double c : p) m = std::max(m, std::abs(c));
      CHECK(m == doctest::Approx(1.0));
    }
  }
}
