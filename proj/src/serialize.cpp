#include "oscint/serialize.hpp"

#include <algorithm>

#include "oscint/error.hpp"

namespace oscint {

namespace {

std::string str(const Rational& q) { return to_string(q); }

Rational coef_from_json(const json& c) {
  if (c.is_string()) return parse_rational(c.get<std::string>());
  if (c.is_number_integer()) return Rational(c.get<long>());
  throw DomainError("coefficients must be strings like \"-3/7\" or integers");
}

int int_field(const json& j, const char* key, int min) {
  if (!j.contains(key) || !j.at(key).is_number_integer())
    throw DomainError(std::string("missing integer field '") + key + "'");
  const int v = j.at(key).get<int>();
  if (v < min) throw DomainError(std::string("field '") + key + "' must be >= " + std::to_string(min));
  return v;
}

std::vector<int> exps_from_json(const json& j, std::size_t len, const char* key) {
  if (!j.is_array() || j.size() != len)
    throw DimensionError(std::string("'") + key + "' must have length " + std::to_string(len));
  std::vector<int> e;
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<int>() < 0)
      throw DomainError(std::string("'") + key + "' entries must be nonnegative integers");
    e.push_back(v.get<int>());
  }
  return e;
}

json optional_rat(const std::optional<Rational>& q) { return q ? json(str(*q)) : json(nullptr); }

json directions(const std::vector<std::array<double, 2>>& dirs) {
  json a = json::array();
  for (const auto& d : dirs) a.push_back({d[0], d[1]});
  return a;
}

}  // namespace

json to_json(const HomPoly& p) {
  json terms = json::array();
  for (const auto& [mi, c] : p.terms())
    terms.push_back({{"alpha", mi.alpha}, {"beta", mi.beta}, {"coef", str(c)}});
  return {{"nx", p.nx()}, {"nz", p.nz()}, {"m", p.degree()}, {"terms", terms}};
}

json to_json(const PhasePoly& s) { return to_json(s.poly()); }

HomPoly hom_poly_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("polynomial JSON must be an object");
  const int nx = int_field(j, "nx", 0), nz = int_field(j, "nz", 0), m = int_field(j, "m", 0);
  HomPoly p(nx, nz, m);
  if (!j.contains("terms") || !j.at("terms").is_array())
    throw DomainError("missing array field 'terms'");
  for (const auto& t : j.at("terms")) {
    if (!t.is_object() || !t.contains("alpha") || !t.contains("beta") || !t.contains("coef"))
      throw DomainError("each term needs alpha, beta and coef");
    MultiIndex mi{exps_from_json(t.at("alpha"), nx, "alpha"), exps_from_json(t.at("beta"), nz, "beta")};
    if (mi.degree() != m)
      throw DomainError("term of degree " + std::to_string(mi.degree()) + " in a polynomial of degree " +
                        std::to_string(m));
    p.add_term(mi, coef_from_json(t.at("coef")));
  }
  return p;
}

PhasePoly phase_from_json(const json& j) {
  HomPoly p = hom_poly_from_json(j);
  if (p.nx() < 1 || p.nz() < 1) throw DomainError("a phase needs nx, nz >= 1");
  return PhasePoly(std::move(p));
}

json parse_json_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    int line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t k = 0; k < end; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("malformed JSON", line, col);
  }
}

json to_json(const HessianMatrix& h) {
  json rows = json::array();
  for (int i = 0; i < h.nx(); ++i) {
    json row = json::array();
    for (int j = 0; j < h.nz(); ++j) row.push_back(to_json(h(i, j)));
    rows.push_back(row);
  }
  return {{"nx", h.nx()}, {"nz", h.nz()}, {"degree", h.entry_degree()}, {"entries", rows}};
}

HessianMatrix hessian_from_json(const json& j) {
  const int nx = int_field(j, "nx", 1), nz = int_field(j, "nz", 1);
  if (!j.contains("entries") || !j.at("entries").is_array() || j.at("entries").size() != std::size_t(nx))
    throw DimensionError("'entries' must have nx rows");
  std::vector<std::vector<HomPoly>> rows;
  for (const auto& r : j.at("entries")) {
    if (!r.is_array() || r.size() != std::size_t(nz)) throw DimensionError("each row must have nz entries");
    std::vector<HomPoly> row;
    for (const auto& e : r) row.push_back(hom_poly_from_json(e));
    rows.push_back(std::move(row));
  }
  return HessianMatrix(std::move(rows));
}

json to_json(const RatMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(str(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

json to_json(const BinaryForm& f) {
  json a = json::array();
  for (const auto& c : f.coeffs) a.push_back(str(c));
  return a;
}

json to_json(const CheckStatus& c) {
  json j = {{"condition", c.condition},
            {"outcome", to_string(c.outcome)},
            {"method", to_string(c.method)},
            {"detail", c.detail}};
  if (c.sampled_min) j["sampled_min"] = *c.sampled_min;
  if (c.witness) j["witness"] = *c.witness;
  return j;
}

json to_json(const Thm14Report& r) {
  json notes = r.notes;
  return {{"P", to_json(r.pqr.p)},
          {"Q", to_json(r.pqr.q)},
          {"R", to_json(r.pqr.r)},
          {"cond_18", r.cond_18},
          {"cond_19", r.cond_19},
          {"cond_111", r.cond_111},
          {"cond_112", r.cond_112},
          {"applicable_112", r.applicable_112},
          {"all_pass", r.all_pass()},
          {"det_P", str(r.det_p)},
          {"det_R", str(r.det_r)},
          {"det_P_minus_QRinvQt", optional_rat(r.det_schur_p)},
          {"det_R_minus_QtPinvQ", optional_rat(r.det_schur_r)},
          {"res_111_x", optional_rat(r.res_111_x)},
          {"res_111_z", optional_rat(r.res_111_z)},
          {"res_112_x", optional_rat(r.res_112_x)},
          {"res_112_z", optional_rat(r.res_112_z)},
          {"P_minus_QRinvQt", r.schur_p ? to_json(*r.schur_p) : json(nullptr)},
          {"R_minus_QtPinvQ", r.schur_r ? to_json(*r.schur_r) : json(nullptr)},
          {"notes", notes}};
}

json to_json(const GeometryReport& g) {
  return {{"phi_inertia",
           {{"positive", g.phi_inertia.positive},
            {"negative", g.phi_inertia.negative},
            {"zero", g.phi_inertia.zero}}},
          {"phi_definite", g.phi_definite},
          {"critical_variety", g.phi_definite ? "empty off the origin" : "nonempty"},
          {"R_minus_QtPinvQ", to_string(g.schur_r)},
          {"P_minus_QRinvQt", to_string(g.schur_p)},
          {"gamma_R", g.gamma_r},
          {"gamma_L", g.gamma_l},
          {"null_P", directions(g.null_p)},
          {"null_R", directions(g.null_r)},
          {"null_R_minus_QtPinvQ", directions(g.null_schur_r)},
          {"null_P_minus_QRinvQt", directions(g.null_schur_p)}};
}

json to_json(const NewtonData& n) {
  json cert = json::array();
  for (std::size_t k = 0; k < n.support.size(); ++k) {
    if (n.weights[k] == 0) continue;
    cert.push_back({{"alpha", n.support[k].alpha}, {"beta", n.support[k].beta}, {"weight", str(n.weights[k])}});
  }
  return {{"delta", str(n.delta)}, {"exact", true}, {"certificate", cert}};
}

json to_json(const ModifiedNewtonResult& r) {
  return {{"delta", str(r.delta)},
          {"exact", r.exact},
          {"method", r.method},
          {"candidates", r.candidates},
          {"transform_A", to_json(r.a)},
          {"transform_B", to_json(r.b)}};
}

json to_json(const DecayPrediction& d) {
  json hyps = json::array();
  for (const auto& h : d.hypotheses) hyps.push_back(to_json(h));
  json cands = json::array();
  for (const auto& c : d.candidates)
    cands.push_back({{"source", to_wire(c.source)}, {"r", str(c.r)}, {"p", c.p}});
  json j = {{"theorem_applies", d.theorem_applies}};
  if (d.theorem_applies) {
    j["r"] = str(d.r);
    j["p"] = d.p;
  } else {
    j["r"] = nullptr;
    j["p"] = nullptr;
  }
  j["source"] = to_wire(d.source);
  j["lower_bound_r"] = str(d.lower_bound_r);
  j["swapped"] = d.swapped;
  j["candidates"] = cands;
  j["hypotheses"] = hyps;
  return j;
}

json to_json(const PencilPhase& p, const PencilRate& r) {
  return {{"d", p.d},
          {"phi1", to_json(p.phi1)},
          {"phi2", to_json(p.phi2)},
          {"s", p.s.s},
          {"direction", {p.s.direction.first, p.s.direction.second}},
          {"direction_exact", p.s.direction_exact},
          {"r", str(r.r)},
          {"p", r.p},
          {"delta_mod", str(r.delta_mod)},
          {"sharp", r.sharp}};
}

json to_json(const FitResult& f) {
  return {{"slope", f.slope},
          {"stderr", f.stderr_slope},
          {"intercept", f.intercept},
          {"window", {f.lambda_lo, f.lambda_hi}},
          {"points", f.points}};
}

json to_json(const NormSweepResult& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"lambda", row.lambda},
                    {"norm", row.norm},
                    {"grid_n", row.n},
                    {"iters", row.iterations},
                    {"residual", row.residual},
                    {"converged", row.converged},
                    {"rule_n", row.rule_n},
                    {"rule_resolved", row.rule_resolved},
                    {"coarse_norm", row.coarse_norm},
                    {"refine_rel_diff", row.refine_rel_diff},
                    {"resolved", row.resolved},
                    {"witness_ratio", row.witness_ratio}});
  return {{"seed", r.seed},
          {"tol", r.tol},
          {"grid_cap", r.n_cap},
          {"rows", rows},
          {"excluded", r.excluded},
          {"fit", to_json(r.fit)},
          {"witness_fit", r.witness_fit ? to_json(*r.witness_fit) : json(nullptr)}};
}

json to_json(const GenericityResult& g) {
  json fails = json::array();
  for (const auto& f : g.failures)
    fails.push_back({{"trial", f.trial}, {"condition", f.condition}, {"detail", f.detail}});
  json j = {{"nx", g.options.nx},
            {"nz", g.options.nz},
            {"m", g.options.m},
            {"trials", g.trials},
            {"seed", g.options.seed},
            {"rank_one_pass", g.rank_one_pass},
            {"rank_one_fraction", g.rank_one_fraction()},
            {"hormander_pass", g.hormander_pass}};
  if (g.thm14_counted) {
    j["thm14_pass"] = g.thm14_pass;
    j["thm14_fraction"] = g.thm14_fraction();
  }
  j["failures"] = fails;
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace oscint
