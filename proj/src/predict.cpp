#include "oscint/predict.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <future>

#include "oscint/binres.hpp"
#include "oscint/certify.hpp"
#include "oscint/cubic22.hpp"
#include "oscint/error.hpp"
#include "oscint/hessmap.hpp"
#include "oscint/newton.hpp"
#include "oscint/pencil.hpp"

namespace oscint {

const char* to_string(CheckMethod m) {
  switch (m) {
    case CheckMethod::kExact: return "exact";
    case CheckMethod::kSampled: return "sampled";
    case CheckMethod::kCertified: return "certified";
  }
  return "?";
}

const char* to_string(CheckOutcome o) {
  switch (o) {
    case CheckOutcome::kHolds: return "holds";
    case CheckOutcome::kFails: return "fails";
    case CheckOutcome::kUnknown: return "unknown";
  }
  return "?";
}

const char* to_wire(RateSource s) {
  switch (s) {
    case RateSource::kNone: return "none";
    case RateSource::kConstantHessian: return "Hormander-m2";
    case RateSource::kPhongSteinCubic: return "ThmA";
    case RateSource::kTang21: return "ThmB";
    case RateSource::kNewtonPolygon11: return "ThmC";
    case RateSource::kFullRank: return "Thm1.1";
    case RateSource::kRankOne: return "Thm1.2";
    case RateSource::kCubic22: return "Thm1.4";
    case RateSource::kPencil: return "Prop4.5";
  }
  return "?";
}

namespace {

// Below this fraction of the largest sampled value a sample counts as a zero.
constexpr double kZeroFraction = 1e-9;
// Between the two fractions the sampled verdict is left open.
constexpr double kMarginFraction = 1e-3;

std::vector<double> to_doubles(const std::vector<Rational>& v) {
  std::vector<double> out;
  double norm = 0;
  for (const auto& q : v) norm = std::max(norm, std::abs(q.get_d()));
  for (const auto& q : v) out.push_back(norm > 0 ? q.get_d() / norm : 0.0);
  return out;
}

HomPoly poly_det(std::vector<std::vector<HomPoly>> m) {
  const int k = static_cast<int>(m.size());
  if (k == 1) return m[0][0];
  HomPoly acc(m[0][0].nx(), m[0][0].nz(), m[0][0].degree() * k);
  for (int c = 0; c < k; ++c) {
    if (m[0][c].is_zero()) continue;
    std::vector<std::vector<HomPoly>> sub;
    for (int r = 1; r < k; ++r) {
      std::vector<HomPoly> row;
      for (int cc = 0; cc < k; ++cc)
        if (cc != c) row.push_back(m[r][cc]);
      sub.push_back(std::move(row));
    }
    HomPoly term = m[0][c] * poly_det(std::move(sub));
    if (c % 2) acc -= term; else acc += term;
  }
  return acc;
}

// All maximal minors (k = min(nx, nz)) of the Hessian.
std::vector<HomPoly> maximal_minors(const HessianMatrix& h) {
  const bool rows_wide = h.nx() >= h.nz();
  const int n = rows_wide ? h.nx() : h.nz(), k = rows_wide ? h.nz() : h.nx();
  std::vector<HomPoly> out;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + k, true);
  do {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (pick[i]) idx.push_back(i);
    std::vector<std::vector<HomPoly>> m(k);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        m[a].push_back(rows_wide ? h(idx[a], b) : h(b, idx[a]));
    HomPoly d = poly_det(std::move(m));
    if (!d.is_zero()) out.push_back(std::move(d));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

Eigen::MatrixXd eval_hessian(const HessianMatrix& h, const std::vector<double>& pt) {
  Eigen::MatrixXd m(h.nx(), h.nz());
  for (int i = 0; i < h.nx(); ++i)
    for (int j = 0; j < h.nz(); ++j) m(i, j) = h(i, j).eval(std::span<const double>(pt));
  return m;
}

// Runs the sampled check and, if requested, the interval certification.
// `quantity` maps a Hessian value to the nonnegative number that must stay
// away from zero.
template <class Quantity>
CheckStatus sampled_check(const std::string& name, const HessianMatrix& h,
                          const std::vector<HomPoly>& certify_polys, const CheckOptions& opt,
                          Quantity quantity, bool square_det_sign) {
  CheckStatus st;
  st.condition = name;
  st.method = CheckMethod::kSampled;
  const int n = h.nx() + h.nz();
  double vmin = INFINITY, vmax = 0;
  std::vector<double> argmin;
  int pos = 0, neg = 0;
  for (const auto& pt : cube_surface_grid(n, opt.grid_points)) {
    Eigen::MatrixXd m = eval_hessian(h, pt);
    double q = quantity(m);
    if (q < vmin) {
      vmin = q;
      argmin = pt;
    }
    vmax = std::max(vmax, q);
    if (square_det_sign) {
      double d = m.determinant();
      if (d > 0) ++pos;
      if (d < 0) ++neg;
    }
  }
  st.sampled_min = vmin;
  if (square_det_sign && pos && neg) {
    st.outcome = CheckOutcome::kFails;
    st.detail = "determinant changes sign on the unit cube surface";
    st.witness = argmin;
  } else if (vmax == 0 || vmin <= kZeroFraction * vmax) {
    st.outcome = CheckOutcome::kFails;
    st.detail = "sampled zero";
    st.witness = argmin;
  } else if (vmin <= kMarginFraction * vmax) {
    st.outcome = CheckOutcome::kUnknown;
    st.detail = "sampled minimum is small; certification recommended";
  } else {
    st.outcome = CheckOutcome::kHolds;
    st.detail = "minimum over " + std::to_string(cube_surface_grid(n, opt.grid_points).size()) +
                " cube-surface samples";
  }
  if (!opt.certify || st.outcome == CheckOutcome::kFails) return st;

  if (certify_polys.empty()) {
    st.outcome = CheckOutcome::kFails;
    st.method = CheckMethod::kExact;
    st.detail = "all relevant polynomials vanish identically";
    return st;
  }
  CertifyResult cr = certify_no_common_zero(certify_polys, opt.cell_tol, opt.max_cells);
  switch (cr.outcome) {
    case CertifyResult::Outcome::kCertified:
      st.outcome = CheckOutcome::kHolds;
      st.method = CheckMethod::kCertified;
      st.detail = "interval branch-and-bound discharged " + std::to_string(cr.cells) + " cells";
      break;
    case CertifyResult::Outcome::kWitness:
      st.outcome = CheckOutcome::kFails;
      st.method = CheckMethod::kCertified;
      st.detail = "cell of width below " + std::to_string(opt.cell_tol) +
                  " where no polynomial is provably nonzero";
      st.witness = cr.witness;
      break;
    case CertifyResult::Outcome::kBudgetExhausted:
      st.detail += "; certification budget exhausted after " + std::to_string(cr.cells) + " cells";
      break;
  }
  return st;
}

CheckStatus exact_status(const std::string& name, bool holds, std::string detail,
                         std::optional<std::vector<double>> witness = std::nullopt) {
  CheckStatus st;
  st.condition = name;
  st.method = CheckMethod::kExact;
  st.outcome = holds ? CheckOutcome::kHolds : CheckOutcome::kFails;
  st.detail = std::move(detail);
  if (!holds) st.witness = std::move(witness);
  return st;
}

std::optional<CheckStatus> binary_11_check(const std::string& name, const HessianMatrix& h) {
  if (h.nx() != 1 || h.nz() != 1) return std::nullopt;
  const HomPoly& e = h(0, 0);
  if (e.is_zero()) return exact_status(name, false, "mixed Hessian vanishes identically");
  BinaryForm f = to_binary_form(e);
  int roots = count_real_projective_roots(f);
  return exact_status(name, roots == 0,
                      std::to_string(roots) + " real projective root(s) of S_xz (Sturm count)");
}

CheckStatus rank_one_impl(const PhasePoly& s, const CheckOptions& opt, const std::string& name) {
  HessianMatrix h = mixed_hessian(s);
  const int nx = s.nx(), nz = s.nz(), n = nx + nz;
  if (s.degree() == 2) {
    bool nonzero = !h.constant_matrix().is_zero();
    return exact_status(name, nonzero, "constant mixed Hessian");
  }
  if (auto st = binary_11_check(name, h)) return *st;
  if (s.degree() == 3) {
    // Entries are linear forms; a common zero off the origin exists iff the
    // stacked coefficient matrix has a kernel.
    RatMatrix a(nx * nz, n);
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < nz; ++j)
        for (const auto& [mi, c] : h(i, j).terms()) {
          int v = 0;
          for (int k = 0; k < nx; ++k)
            if (mi.alpha[k]) v = k;
          for (int k = 0; k < nz; ++k)
            if (mi.beta[k]) v = nx + k;
          a(i * nz + j, v) = c;
        }
    int rk = rank(a);
    std::optional<std::vector<double>> w;
    if (rk < n) w = to_doubles(null_space(a).front());
    return exact_status(name, rk == n,
                        "rank " + std::to_string(rk) + " of the " + std::to_string(nx * nz) + "x" +
                            std::to_string(n) + " matrix of linear entries",
                        w);
  }
  std::vector<HomPoly> entries;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nz; ++j)
      if (!h(i, j).is_zero()) entries.push_back(h(i, j));
  return sampled_check(
      name, h, entries, opt, [](const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); },
      false);
}

}  // namespace

CheckStatus check_rank_one(const PhasePoly& s, const CheckOptions& opt) {
  if (s.degree() < 2) throw DomainError("rank-one check needs m >= 2");
  return rank_one_impl(s, opt, "rank-one");
}

CheckStatus check_hormander(const PhasePoly& s, const CheckOptions& opt) {
  const std::string name = "Hormander full rank";
  if (s.degree() < 2) throw DomainError("Hormander check needs m >= 2");
  HessianMatrix h = mixed_hessian(s);
  const int k = std::min(s.nx(), s.nz());
  if (s.degree() == 2) {
    int rk = rank(h.constant_matrix());
    return exact_status(name, rk == k, "constant mixed Hessian of rank " + std::to_string(rk));
  }
  if (k == 1) {
    CheckStatus st = rank_one_impl(s, opt, name);
    return st;
  }
  if (s.nx() == 2 && s.nz() == 2 && s.degree() == 3) {
    QuadraticFormPQR f = extract_pqr(s);
    Inertia in = inertia(f.block());
    bool definite = in.positive == 4 || in.negative == 4;
    return exact_status(name, definite,
                        "inertia of det S_xz: (+" + std::to_string(in.positive) + ", -" +
                            std::to_string(in.negative) + ", 0:" + std::to_string(in.zero) + ")");
  }
  const bool square = s.nx() == s.nz();
  auto minors = maximal_minors(h);
  return sampled_check(
      name, h, minors, opt,
      [k](const Eigen::MatrixXd& m) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
        return svd.singularValues()(k - 1);
      },
      square);
}

DecayPrediction predict_decay(const PhasePoly& input, const CheckOptions& opt) {
  if (input.is_zero()) throw DomainError("cannot predict decay for the zero phase");
  if (input.degree() < 2) throw DomainError("phase degree must be at least 2");
  DecayPrediction out;
  PhasePoly s = input;
  if (s.nx() < s.nz()) {
    s = PhasePoly(swap_sides(s.poly()));
    out.swapped = true;
  }
  const int nx = s.nx(), nz = s.nz(), m = s.degree(), n = nx + nz;
  out.lower_bound_r = frac(n, 2 * m);
  auto add = [&](RateSource src, Rational r, int p) { out.candidates.push_back({src, std::move(r), p}); };

  // Expensive checks run concurrently; the ledger order stays fixed.
  std::future<CheckStatus> hor, r1;
  if (m >= 3) {
    hor = std::async(std::launch::async, [&] { return check_hormander(s, opt); });
    r1 = std::async(std::launch::async, [&] { return check_rank_one(s, opt); });
  }

  if (m == 2) {
    int rk = rank(mixed_hessian(s).constant_matrix());
    out.hypotheses.push_back(exact_status("constant mixed Hessian", true,
                                          "rank " + std::to_string(rk)));
    if (rk > 0) add(RateSource::kConstantHessian, frac(rk, 2), 0);
  }

  if (nx == 1 && nz == 1) {
    bool low = false, high = false;
    for (const auto& [mi, c] : s.poly().terms()) {
      if (2 * mi.alpha[0] <= m) low = true;
      if (2 * mi.alpha[0] >= m) high = true;
    }
    out.hypotheses.push_back(exact_status(
        "coefficients on both sides of the diagonal", low && high,
        "need a_j, a_k != 0 with j <= m/2 <= k (j = power of x)"));
    if (low && high) add(RateSource::kPhongSteinCubic, frac(1, m), 0);
    Rational delta = newton_distance(s).delta;
    out.hypotheses.push_back(exact_status("(1+1) real-analytic phase", true,
                                          "Newton distance " + to_string(delta)));
    add(RateSource::kNewtonPolygon11, 1 / (2 * delta), 0);
  }

  if (m >= 3) {
    CheckStatus h = hor.get();
    out.hypotheses.push_back(h);
    if (h.holds()) {
      Rational thr = frac(n, nz);
      if (m > thr) add(RateSource::kFullRank, frac(n, 2 * m), 0);
      else if (m == thr) add(RateSource::kFullRank, frac(nz, 2), 1);
      else add(RateSource::kFullRank, frac(nz, 2), 0);
    }
    CheckStatus r = r1.get();
    out.hypotheses.push_back(r);
    if (r.holds()) {
      if (m > n) add(RateSource::kRankOne, frac(n, 2 * m), 0);
      else if (m == n) add(RateSource::kRankOne, frac(1, 2), 1);
      else add(RateSource::kRankOne, frac(1, 2), 0);
    }
  }

  if (nx == 2 && nz == 2 && m == 3) {
    Thm14Report rep = check_thm14(s);
    auto cond = [&](const char* name, bool ok, std::string detail) {
      out.hypotheses.push_back(exact_status(name, ok, std::move(detail)));
    };
    cond("P and R nonsingular", rep.cond_18,
         "det P = " + to_string(rep.det_p) + ", det R = " + to_string(rep.det_r));
    cond("Schur complements nonsingular", rep.cond_19,
         rep.det_schur_p ? "det = " + to_string(*rep.det_schur_p) + ", " +
                               to_string(*rep.det_schur_r)
                         : "not evaluable");
    cond("resultant conditions", rep.cond_111,
         rep.res_111_x ? "Res = " + to_string(*rep.res_111_x) + ", " + to_string(*rep.res_111_z)
                       : "not evaluable");
    if (rep.applicable_112) {
      cond("indefinite-case resultant conditions", rep.cond_112,
           "Res = " + to_string(*rep.res_112_x) + ", " + to_string(*rep.res_112_z));
    } else {
      CheckStatus st = exact_status("indefinite-case resultant conditions", true,
                                    "not required: P and R are not both indefinite");
      out.hypotheses.push_back(st);
    }
    if (rep.all_pass()) add(RateSource::kCubic22, frac(2, 3), 0);
  }

  if (nx == 2 && nz == 2) {
    auto pen = detect_pencil(s);
    if (!pen) pen = detect_pencil(PhasePoly(swap_sides(s.poly())));
    out.hypotheses.push_back(exact_status("pencil structure", pen.has_value(),
                                          pen ? "d = " + std::to_string(pen->d) +
                                                    ", s = " + std::to_string(pen->s.s)
                                              : "not linear in x (or z) with two nonzero forms"));
    if (pen) {
      PencilRate pr = pencil_rate(*pen);
      add(RateSource::kPencil, pr.r, pr.p);
    }
  }

  if (nx == 2 && nz == 1) {
    // S = sum_j P_j(x) z^(m-j), j = degree in x.
    std::vector<std::vector<Rational>> forms(m + 1);
    for (int j = 0; j <= m; ++j) forms[j].assign(j + 1, Rational(0));
    for (const auto& [mi, c] : s.poly().terms()) forms[mi.x_degree()][mi.alpha[1]] = c;
    int jmin = -1, jmax = -1;
    for (int j = 1; j < m; ++j)
      if (!BinaryForm(forms[j]).is_zero()) {
        if (jmin < 0) jmin = j;
        jmax = j;
      }
    bool ok = jmin > 0 && 3 * jmin <= 2 * m && 3 * jmax >= 2 * m &&
              is_nondegenerate(BinaryForm(forms[jmin])) &&
              is_nondegenerate(BinaryForm(forms[jmax]));
    out.hypotheses.push_back(exact_status(
        "(2+1) extreme forms nondegenerate", ok,
        "j_min = " + std::to_string(jmin) + ", j_max = " + std::to_string(jmax)));
    if (ok) {
      if (m >= 4) add(RateSource::kTang21, frac(3, 2 * m), 0);
      else if (m == 3) add(RateSource::kTang21, frac(1, 2), 1);
      else add(RateSource::kTang21, frac(1, 2), 0);
    }
  }

  const RateCandidate* best = nullptr;
  for (const auto& c : out.candidates)
    if (!best || c.r > best->r || (c.r == best->r && c.p < best->p)) best = &c;
  if (best) {
    out.theorem_applies = true;
    out.r = best->r;
    out.p = best->p;
    out.source = best->source;
  }
  return out;
}

}  // namespace oscint
