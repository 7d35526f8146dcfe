#include "oscint.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "oscint/corpus.hpp"
#include "oscint/error.hpp"
#include "oscint/genericity.hpp"
#include "oscint/parse.hpp"
#include "oscint/serialize.hpp"

struct oscint_phase {
  oscint::PhasePoly s;
};

namespace {

using oscint::json;

thread_local std::string g_last_error;

oscint_status fail(oscint_status st, const std::string& msg) {
  g_last_error = msg;
  return st;
}

// Runs f, translating exceptions into status codes.
template <class F>
oscint_status guard(F&& f) {
  try {
    g_last_error.clear();
    f();
    return OSCINT_OK;
  } catch (const oscint::Error& e) {
    return fail(static_cast<oscint_status>(e.code()), e.what());
  } catch (const json::exception& e) {
    return fail(OSCINT_ERR_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(OSCINT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(OSCINT_ERR_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

json options_of(const char* text) {
  if (!text || !*text) return json::object();
  json j = oscint::parse_json_text(text);
  if (!j.is_object()) throw oscint::DomainError("options must be a JSON object");
  return j;
}

template <class T>
T opt_get(const json& j, const char* key, T def) {
  return j.contains(key) && !j.at(key).is_null() ? j.at(key).get<T>() : def;
}

void require(const void* p, const char* what) {
  if (!p) throw oscint::Error(oscint::ErrorCode::kArgument, std::string(what) + " is null");
}

oscint::CheckOptions check_options(const json& o) {
  oscint::CheckOptions c;
  c.grid_points = opt_get(o, "grid_points", c.grid_points);
  c.certify = opt_get(o, "certify", c.certify);
  c.cell_tol = opt_get(o, "cell_tol", c.cell_tol);
  c.max_cells = opt_get<std::int64_t>(o, "max_cells", c.max_cells);
  if (c.grid_points < 1) throw oscint::DomainError("grid_points must be positive");
  return c;
}

oscint::AmplitudeSpec amplitude_of(const json& o, int axes) {
  oscint::AmplitudeSpec a;
  const std::string kind = opt_get<std::string>(o, "amplitude", "bump");
  if (kind == "constant") {
    a.kind = oscint::AmplitudeSpec::Kind::kConstant;
  } else if (kind != "bump") {
    throw oscint::DomainError("amplitude must be 'bump' or 'constant'");
  }
  if (!o.contains("box")) {
    a.box.assign(axes, {-1.0, 1.0});
  } else if (o.at("box").is_number()) {
    const double h = o.at("box").get<double>();
    a.box.assign(axes, {-h, h});
  } else {
    for (const auto& iv : o.at("box")) a.box.emplace_back(iv.at(0).get<double>(), iv.at(1).get<double>());
    if (static_cast<int>(a.box.size()) != axes)
      throw oscint::DimensionError("box needs one [lo, hi] pair per axis");
  }
  return a;
}

oscint::NormOptions norm_options(const json& o) {
  oscint::NormOptions n;
  n.n = opt_get(o, "n", n.n);
  n.tol = opt_get(o, "tol", n.tol);
  n.max_iter = opt_get(o, "max_iter", n.max_iter);
  const std::string method = opt_get<std::string>(o, "method", "lanczos");
  if (method == "power") {
    n.method = oscint::NormMethod::kPower;
  } else if (method != "lanczos") {
    throw oscint::DomainError("method must be 'lanczos' or 'power'");
  }
  n.seed = opt_get<std::uint64_t>(o, "seed", n.seed);
  n.threads = opt_get(o, "threads", n.threads);
  n.dense_limit = opt_get<std::int64_t>(o, "max_entries", n.dense_limit);
  if (!(n.tol > 0) || n.max_iter < 1) throw oscint::DomainError("need tol > 0 and max_iter >= 1");
  return n;
}

oscint::WitnessOptions witness_options(const json& o) {
  oscint::WitnessOptions w;
  w.eps = opt_get(o, "witness_eps", w.eps);
  if (o.contains("witness_z0")) w.z0 = o.at("witness_z0").get<std::vector<double>>();
  return w;
}

json check_report(const oscint::PhasePoly& s, const oscint::CheckOptions& c) {
  using namespace oscint;
  json j;
  j["phase"] = s.poly().to_expr();
  j["nx"] = s.nx();
  j["nz"] = s.nz();
  j["m"] = s.degree();
  j["dim_phase_space"] = dim_phase_space(s.degree(), s.nx(), s.nz());
  if (s.degree() >= 2) {
    j["hormander"] = to_json(check_hormander(s, c));
    j["rank_one"] = to_json(check_rank_one(s, c));
  }
  if (s.nx() == 2 && s.nz() == 2 && s.degree() == 3) {
    Thm14Report rep = check_thm14(s);
    j["thm14"] = to_json(rep);
    j["geometry"] = rep.cond_18 && rep.cond_19 ? to_json(classify_geometry(s)) : json(nullptr);
  }
  if (auto pen = detect_pencil(s)) j["pencil"] = to_json(*pen, pencil_rate(*pen));
  return j;
}

}  // namespace

extern "C" {

const char* oscint_version(void) { return "1.0.0"; }

const char* oscint_last_error(void) { return g_last_error.c_str(); }

void oscint_string_free(char* s) { std::free(s); }

oscint_status oscint_phase_from_json(const char* text, oscint_phase** out) {
  return guard([&] {
    require(text, "json");
    require(out, "out");
    *out = new oscint_phase{oscint::phase_from_json(oscint::parse_json_text(text))};
  });
}

oscint_status oscint_phase_from_expr(const char* expr, int nx, int nz, oscint_phase** out) {
  return guard([&] {
    require(expr, "expr");
    require(out, "out");
    *out = new oscint_phase{oscint::parse_phase(expr, nx, nz)};
  });
}

oscint_status oscint_phase_example(const char* name, oscint_phase** out) {
  return guard([&] {
    require(name, "name");
    require(out, "out");
    *out = new oscint_phase{oscint::corpus_entry(name).phase()};
  });
}

void oscint_phase_free(oscint_phase* p) { delete p; }

oscint_status oscint_phase_dims(const oscint_phase* p, int* nx, int* nz, int* m) {
  return guard([&] {
    require(p, "phase");
    if (nx) *nx = p->s.nx();
    if (nz) *nz = p->s.nz();
    if (m) *m = p->s.degree();
  });
}

oscint_status oscint_phase_to_json(const oscint_phase* p, char** out) {
  return guard([&] {
    require(p, "phase");
    require(out, "out");
    *out = dup(oscint::dump(oscint::to_json(p->s)));
  });
}

oscint_status oscint_phase_to_expr(const oscint_phase* p, char** out) {
  return guard([&] {
    require(p, "phase");
    require(out, "out");
    *out = dup(p->s.poly().to_expr());
  });
}

int oscint_phase_equal(const oscint_phase* a, const oscint_phase* b) {
  return a && b && a->s == b->s ? 1 : 0;
}

oscint_status oscint_hessian(const oscint_phase* p, char** out_json) {
  return guard([&] {
    require(p, "phase");
    require(out_json, "out");
    *out_json = dup(oscint::dump(oscint::to_json(oscint::mixed_hessian(p->s))));
  });
}

oscint_status oscint_hessian_inverse(const char* hessian_json, oscint_phase** out) {
  return guard([&] {
    require(hessian_json, "json");
    require(out, "out");
    auto h = oscint::hessian_from_json(oscint::parse_json_text(hessian_json));
    *out = new oscint_phase{oscint::hessian_inverse(h)};
  });
}

oscint_status oscint_check(const oscint_phase* p, const char* options, char** out_json) {
  return guard([&] {
    require(p, "phase");
    require(out_json, "out");
    *out_json = dup(oscint::dump(check_report(p->s, check_options(options_of(options)))));
  });
}

oscint_status oscint_newton(const oscint_phase* p, const char* options, char** out_json) {
  return guard([&] {
    require(p, "phase");
    require(out_json, "out");
    json o = options_of(options);
    json j = oscint::to_json(oscint::newton_distance(p->s));
    if (opt_get(o, "modified", false)) {
      const int samples = opt_get(o, "samples", 200);
      const auto seed = opt_get<std::uint64_t>(o, "seed", 7);
      if (samples < 1) throw oscint::DomainError("samples must be at least 1");
      auto mod = oscint::modified_newton_distance(p->s, samples, seed, opt_get(o, "threads", 0));
      json mj = oscint::to_json(mod);
      mj["samples"] = samples;
      mj["seed"] = seed;
      mj["newton_distance"] = j["delta"];
      mj["certificate"] = j["certificate"];
      j = mj;
    }
    *out_json = dup(oscint::dump(j));
  });
}

oscint_status oscint_predict(const oscint_phase* p, const char* options, char** out_json) {
  return guard([&] {
    require(p, "phase");
    require(out_json, "out");
    json j = oscint::to_json(oscint::predict_decay(p->s, check_options(options_of(options))));
    *out_json = dup(oscint::dump(j));
  });
}

oscint_status oscint_pencil(const char* phi1, const char* phi2, char** out_json) {
  return guard([&] {
    require(phi1, "phi1");
    require(phi2, "phi2");
    require(out_json, "out");
    auto pen = oscint::make_pencil(oscint::parse_binary_form(phi1), oscint::parse_binary_form(phi2));
    json j = oscint::to_json(pen, oscint::pencil_rate(pen));
    j["phase"] = pen.synthesize().poly().to_expr();
    *out_json = dup(oscint::dump(j));
  });
}

oscint_status oscint_norm(const oscint_phase* p, double lambda, const char* options, char** out_json) {
  return guard([&] {
    require(p, "phase");
    require(out_json, "out");
    json o = options_of(options);
    auto amp = amplitude_of(o, p->s.nx() + p->s.nz());
    auto no = norm_options(o);
    if (no.n < 8) throw oscint::DomainError("grid size per axis must be at least 8");
    oscint::KernelOperator k(p->s, lambda, amp, no.n, no.dense_limit, no.threads);
    auto est = oscint::spectral_norm(k, no);
    const int rule = oscint::oscillation_rule_n(p->s, lambda, amp, no.ppw);
    json j = {{"lambda", lambda},         {"norm", est.norm},
              {"grid_n", no.n},           {"iters", est.iterations},
              {"residual", est.residual}, {"converged", est.converged},
              {"rule_n", rule},           {"rule_resolved", no.n >= rule},
              {"seed", no.seed},          {"tol", no.tol}};
    if (opt_get(o, "witness", false))
      j["witness_ratio"] = oscint::lower_bound_witness(k, p->s, lambda, witness_options(o)).ratio;
    *out_json = dup(oscint::dump(j));
  });
}

oscint_status oscint_sweep(const oscint_phase* p, const char* options, char** out_json, char** out_csv,
                           char** out_plot, int* unresolved) {
  return guard([&] {
    require(p, "phase");
    require(out_json, "out");
    json o = options_of(options);
    oscint::SweepOptions so;
    so.amp = amplitude_of(o, p->s.nx() + p->s.nz());
    so.norm = norm_options(o);
    if (o.contains("lambdas")) {
      so.lambdas = o.at("lambdas").get<std::vector<double>>();
    } else {
      so.lambdas = oscint::geometric_lambdas(opt_get(o, "lambda_min", 50.0), opt_get(o, "lambda_max", 800.0),
                                             opt_get(o, "points", 8));
    }
    if (o.contains("grid") && o.at("grid").is_number_integer()) {
      so.auto_grid = false;
      so.norm.n = o.at("grid").get<int>();
    } else if (o.contains("grid") && o.at("grid") != "auto") {
      throw oscint::DomainError("grid must be \"auto\" or an integer");
    }
    so.n_min = opt_get(o, "n_min", so.n_min);
    so.n_max = opt_get(o, "n_max", so.n_max);
    so.max_kernel_entries = opt_get<std::int64_t>(o, "max_entries", so.max_kernel_entries);
    so.refine_check = opt_get(o, "refine", so.refine_check);
    so.drop_fraction = opt_get(o, "drop", so.drop_fraction);
    so.witness = opt_get(o, "witness", false);
    so.witness_opt = witness_options(o);
    auto res = oscint::sweep_and_fit(p->s, so);
    json j = oscint::to_json(res);
    j["phase"] = p->s.poly().to_expr();
    *out_json = dup(oscint::dump(j));
    if (out_csv) *out_csv = dup(oscint::sweep_to_csv(res));
    if (out_plot) *out_plot = dup(oscint::sweep_plot_data(res));
    if (unresolved) *unresolved = static_cast<int>(res.excluded.size());
  });
}

oscint_status oscint_fit_csv(const char* csv, double drop_fraction, char** out_json) {
  return guard([&] {
    require(csv, "csv");
    require(out_json, "out");
    if (!(drop_fraction >= 0.0 && drop_fraction < 1.0)) throw oscint::DomainError("drop must be in [0, 1)");
    auto rows = oscint::sweep_from_csv(csv);
    *out_json = dup(oscint::dump(oscint::to_json(oscint::fit_rows(rows, drop_fraction))));
  });
}

oscint_status oscint_genericity(const char* options, char** out_json) {
  return guard([&] {
    require(out_json, "out");
    json o = options_of(options);
    oscint::GenericityOptions g;
    g.nx = opt_get(o, "nx", g.nx);
    g.nz = opt_get(o, "nz", g.nz);
    g.m = opt_get(o, "m", g.m);
    g.trials = opt_get(o, "trials", g.trials);
    g.seed = opt_get<std::uint64_t>(o, "seed", g.seed);
    g.threads = opt_get(o, "threads", g.threads);
    g.check = check_options(o);
    *out_json = dup(oscint::dump(oscint::to_json(oscint::run_genericity(g))));
  });
}

oscint_status oscint_examples(char** out_json) {
  return guard([&] {
    require(out_json, "out");
    json arr = json::array();
    for (const auto& e : oscint::corpus()) {
      auto s = e.phase();
      auto pred = oscint::predict_decay(s);
      arr.push_back({{"name", e.name},
                     {"description", e.description},
                     {"expr", s.poly().to_expr()},
                     {"phase", oscint::to_json(s)},
                     {"r", pred.theorem_applies ? json(oscint::to_string(pred.r)) : json(nullptr)},
                     {"p", pred.p},
                     {"source", oscint::to_wire(pred.source)}});
    }
    *out_json = dup(oscint::dump(arr));
  });
}

}  // extern "C"
