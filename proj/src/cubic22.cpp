#include "oscint/cubic22.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "oscint/binres.hpp"
#include "oscint/error.hpp"
#include "oscint/hessmap.hpp"

namespace oscint {

namespace {

MultiIndex mono(int a1, int a2, int b1, int b2) { return {{a1, a2}, {b1, b2}}; }

void require_22_cubic(const PhasePoly& s) {
  if (s.nx() != 2 || s.nz() != 2 || s.degree() != 3)
    throw PreconditionError("expected a cubic phase in (2+2) dimensions, got (" +
                            std::to_string(s.nx()) + "+" + std::to_string(s.nz()) +
                            ") of degree " + std::to_string(s.degree()));
}

bool indefinite_2x2(const RatMatrix& m) { return determinant(m) < 0; }

// Resultant that treats a zero form as sharing every root.
Rational safe_resultant(const BinaryForm& f, const BinaryForm& g,
                        std::vector<std::string>& notes, const char* label) {
  if (f.is_zero() || g.is_zero()) {
    notes.push_back(std::string(label) + ": a zero quadratic form occurs; resultant taken as 0");
    return 0;
  }
  return resultant(f, g);
}

std::vector<std::array<double, 2>> null_directions(const RatMatrix& m) {
  BinaryForm f = quadratic_form(m);
  std::vector<std::array<double, 2>> out;
  const double a = f.coeffs[0].get_d(), b = f.coeffs[1].get_d(), c = f.coeffs[2].get_d();
  auto push = [&](double u, double v) {
    double n = std::hypot(u, v);
    out.push_back({u / n, v / n});
  };
  if (f.is_zero()) return out;
  if (f.coeffs[0] == 0) {
    push(1.0, 0.0);
    if (f.coeffs[1] != 0) push(-c, b);
    return out;
  }
  Rational disc = f.coeffs[1] * f.coeffs[1] - 4 * f.coeffs[0] * f.coeffs[2];
  if (disc < 0) return out;
  double sq = std::sqrt(disc.get_d());
  push((-b + sq) / (2 * a), 1.0);
  if (disc > 0) push((-b - sq) / (2 * a), 1.0);
  return out;
}

}  // namespace

RatMatrix QuadraticFormPQR::block() const {
  RatMatrix b(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      b(i, j) = p(i, j);
      b(i, j + 2) = q(i, j);
      b(i + 2, j) = q(j, i);
      b(i + 2, j + 2) = r(i, j);
    }
  return b;
}

HomPoly QuadraticFormPQR::synthesize() const {
  // 1/2 v^t B v with v = (x1, x2, z1, z2).
  HomPoly phi(2, 2, 2);
  RatMatrix b = block();
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l) {
      std::vector<int> e(4, 0);
      ++e[k];
      ++e[l];
      phi.add_term(mono(e[0], e[1], e[2], e[3]), b(k, l) / 2);
    }
  return phi;
}

QuadraticFormPQR extract_pqr(const PhasePoly& s) {
  require_22_cubic(s);
  HessianMatrix h = mixed_hessian(s);
  HomPoly phi = h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0);
  QuadraticFormPQR f;
  f.p(0, 0) = 2 * phi.coefficient(mono(2, 0, 0, 0));
  f.p(1, 1) = 2 * phi.coefficient(mono(0, 2, 0, 0));
  f.p(0, 1) = f.p(1, 0) = phi.coefficient(mono(1, 1, 0, 0));
  f.r(0, 0) = 2 * phi.coefficient(mono(0, 0, 2, 0));
  f.r(1, 1) = 2 * phi.coefficient(mono(0, 0, 0, 2));
  f.r(0, 1) = f.r(1, 0) = phi.coefficient(mono(0, 0, 1, 1));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      MultiIndex mi = mono(0, 0, 0, 0);
      mi.alpha[i] = 1;
      mi.beta[j] = 1;
      f.q(i, j) = phi.coefficient(mi);
    }
  return f;
}

Thm14Report check_thm14(const PhasePoly& s) {
  require_22_cubic(s);
  return check_thm14(extract_pqr(s));
}

Thm14Report check_thm14(const QuadraticFormPQR& pqr) {
  Thm14Report rep;
  rep.pqr = pqr;
  const RatMatrix &P = pqr.p, &Q = pqr.q, &R = pqr.r;
  rep.det_p = determinant(P);
  rep.det_r = determinant(R);
  rep.cond_18 = rep.det_p != 0 && rep.det_r != 0;
  if (!rep.cond_18) {
    rep.cond_19 = rep.cond_111 = false;
    rep.cond_112 = false;
    rep.notes.push_back("P or R is singular; the remaining conditions are not evaluable");
    return rep;
  }
  const RatMatrix pinv = *inverse(P), rinv = *inverse(R);
  const RatMatrix qt = Q.transpose();
  RatMatrix sp = P - Q * rinv * qt;
  RatMatrix sr = R - qt * pinv * Q;
  rep.schur_p = sp;
  rep.schur_r = sr;
  rep.det_schur_p = determinant(sp);
  rep.det_schur_r = determinant(sr);
  rep.cond_19 = *rep.det_schur_p != 0 && *rep.det_schur_r != 0;

  rep.res_111_x = safe_resultant(quadratic_form(sp),
                                 quadratic_form(Q * rinv * sr * rinv * qt), rep.notes,
                                 "resultant (x side)");
  rep.res_111_z = safe_resultant(quadratic_form(sr),
                                 quadratic_form(qt * pinv * sp * pinv * Q), rep.notes,
                                 "resultant (z side)");
  rep.cond_111 = *rep.res_111_x != 0 && *rep.res_111_z != 0;

  rep.applicable_112 = indefinite_2x2(P) && indefinite_2x2(R);
  rep.res_112_x = safe_resultant(quadratic_form(P), quadratic_form(sp), rep.notes,
                                 "indefinite-case resultant (x side)");
  rep.res_112_z = safe_resultant(quadratic_form(R), quadratic_form(sr), rep.notes,
                                 "indefinite-case resultant (z side)");
  rep.cond_112 = !rep.applicable_112 || (*rep.res_112_x != 0 && *rep.res_112_z != 0);
  return rep;
}

GeometryReport classify_geometry(const PhasePoly& s) {
  Thm14Report rep = check_thm14(s);
  if (!rep.cond_18 || !rep.cond_19)
    throw PreconditionError(
        "geometry classification needs P, R and both Schur complements nonsingular");
  GeometryReport g;
  const QuadraticFormPQR& f = rep.pqr;
  g.phi_inertia = inertia(f.block());
  g.phi_definite = g.phi_inertia.positive == 4 || g.phi_inertia.negative == 4;
  g.schur_r = definiteness(*rep.schur_r);
  g.schur_p = definiteness(*rep.schur_p);
  auto conic = [](Definiteness d) {
    return d == Definiteness::kIndefinite ? "hyperbola" : "ellipse";
  };
  g.gamma_r = conic(g.schur_r);
  g.gamma_l = conic(g.schur_p);
  g.null_p = null_directions(f.p);
  g.null_r = null_directions(f.r);
  g.null_schur_r = null_directions(*rep.schur_r);
  g.null_schur_p = null_directions(*rep.schur_p);
  return g;
}

SigmaDiagnostic sigma1_diagnostic(const PhasePoly& s, const std::array<double, 4>& point) {
  require_22_cubic(s);
  if (point[0] == 0 && point[1] == 0 && point[2] == 0 && point[3] == 0)
    throw DomainError("sigma1_diagnostic needs a nonzero point");
  HessianMatrix h = mixed_hessian(s);
  Eigen::Matrix2d m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = h(i, j).eval(std::span<const double>(point));
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(m);
  auto sv = svd.singularValues();  // descending
  return {sv(1), sv(0), std::abs(m.determinant())};
}

}  // namespace oscint
