#include "oscint/normest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "oscint/error.hpp"

namespace oscint {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
// Exact sincos restarts for the exponential recurrence.
constexpr int kRestart = 32;

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

template <class F>
void parallel_for(std::int64_t count, int threads, F&& f) {
  threads = static_cast<int>(std::min<std::int64_t>(threads, std::max<std::int64_t>(count, 1)));
  if (threads <= 1) {
    f(std::int64_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  const std::int64_t chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    std::int64_t b = t * chunk, e = std::min(count, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&f, b, e] { f(b, e); });
  }
  for (auto& th : pool) th.join();
}

struct AxisGrid {
  double lo = -1.0;
  double step = 0.0;
  int n = 0;
  double at(int i) const { return lo + (i + 0.5) * step; }
};

// Decodes a flat index (last axis fastest) into grid coordinates.
void decode(std::int64_t idx, const std::vector<AxisGrid>& g, double* out) {
  for (int k = static_cast<int>(g.size()) - 1; k >= 0; --k) {
    out[k] = g[k].at(static_cast<int>(idx % g[k].n));
    idx /= g[k].n;
  }
}

// Generates exp(i lambda S(a, b)) for a fixed outer point a over the full
// inner grid b. S is viewed as a polynomial in the last inner axis, whose
// coefficients depend on a and the remaining inner axes; along that axis the
// exponentials follow a forward-difference product recurrence.
class PhaseRows {
 public:
  // `p` has the outer variables in its x slot and the inner in its z slot.
  PhaseRows(const HomPoly& p, double lambda, std::vector<AxisGrid> outer,
            std::vector<AxisGrid> inner)
      : outer_(std::move(outer)), inner_(std::move(inner)) {
    const int no = static_cast<int>(outer_.size()), ni = static_cast<int>(inner_.size());
    last_ = inner_.back();
    segments_ = 1;
    for (int k = 0; k + 1 < ni; ++k) segments_ *= inner_[k].n;
    for (const auto& [mi, c] : p.terms()) {
      Term t;
      t.coef = c.get_d() * lambda;
      t.alpha = mi.alpha;
      t.beta.assign(mi.beta.begin(), mi.beta.end() - 1);
      t.e = mi.beta.back();
      degree_ = std::max(degree_, t.e);
      terms_.push_back(std::move(t));
    }
    (void)no;
    // Inner monomials without the last axis, per segment.
    seg_vals_.assign(terms_.size() * segments_, 1.0);
    std::vector<double> pt(std::max(ni - 1, 1));
    std::vector<AxisGrid> head(inner_.begin(), inner_.end() - 1);
    for (std::int64_t s = 0; s < segments_; ++s) {
      if (ni > 1) decode(s, head, pt.data());
      for (std::size_t t = 0; t < terms_.size(); ++t) {
        double v = 1.0;
        for (int k = 0; k + 1 < ni; ++k)
          for (int r = 0; r < terms_[t].beta[k]; ++r) v *= pt[k];
        seg_vals_[s * terms_.size() + t] = v;
      }
    }
  }

  std::int64_t outer_size() const {
    std::int64_t n = 1;
    for (const auto& g : outer_) n *= g.n;
    return n;
  }
  std::int64_t inner_size() const { return segments_ * last_.n; }

  // Fills re/im[0 .. inner_size()).
  void row(std::int64_t i, double* re, double* im) const {
    std::vector<double> a(outer_.size());
    decode(i, outer_, a.data());
    std::vector<double> xm(terms_.size());
    for (std::size_t t = 0; t < terms_.size(); ++t) {
      double v = terms_[t].coef;
      for (std::size_t k = 0; k < a.size(); ++k)
        for (int r = 0; r < terms_[t].alpha[k]; ++r) v *= a[k];
      xm[t] = v;
    }
    const int d = degree_;
    double coef[16];
    double vals[16];
    double ur[16], ui[16];
    const int nl = last_.n;
    for (std::int64_t s = 0; s < segments_; ++s) {
      std::fill(coef, coef + d + 1, 0.0);
      const double* sv = &seg_vals_[s * terms_.size()];
      for (std::size_t t = 0; t < terms_.size(); ++t) coef[terms_[t].e] += xm[t] * sv[t];
      double* ore = re + s * nl;
      double* oim = im + s * nl;
      for (int j0 = 0; j0 < nl; j0 += kRestart) {
        for (int k = 0; k <= d; ++k) {
          const double tt = last_.at(j0 + k);
          double v = coef[d];
          for (int e = d - 1; e >= 0; --e) v = v * tt + coef[e];
          vals[k] = v;
        }
        for (int lvl = 1; lvl <= d; ++lvl)
          for (int k = d; k >= lvl; --k) vals[k] -= vals[k - 1];
        for (int k = 0; k <= d; ++k) {
          ur[k] = std::cos(vals[k]);
          ui[k] = std::sin(vals[k]);
        }
        const int jend = std::min(nl, j0 + kRestart);
        for (int j = j0; j < jend; ++j) {
          ore[j] = ur[0];
          oim[j] = ui[0];
          for (int k = 0; k < d; ++k) {
            const double r = ur[k] * ur[k + 1] - ui[k] * ui[k + 1];
            const double m = ur[k] * ui[k + 1] + ui[k] * ur[k + 1];
            ur[k] = r;
            ui[k] = m;
          }
        }
      }
    }
  }

 private:
  struct Term {
    double coef = 0.0;
    std::vector<int> alpha, beta;
    int e = 0;
  };
  std::vector<AxisGrid> outer_, inner_;
  AxisGrid last_;
  std::int64_t segments_ = 1;
  int degree_ = 0;
  std::vector<Term> terms_;
  std::vector<double> seg_vals_;
};

std::vector<double> amplitude_vector(const AmplitudeSpec& amp, const std::vector<AxisGrid>& g,
                                     int axis0) {
  std::int64_t n = 1;
  for (const auto& a : g) n *= a.n;
  std::vector<double> out(n);
  std::vector<double> pt(g.size());
  for (std::int64_t i = 0; i < n; ++i) {
    decode(i, g, pt.data());
    double v = 1.0;
    for (std::size_t k = 0; k < g.size(); ++k) v *= amp.axis_value(axis0 + static_cast<int>(k), pt[k]);
    out[i] = v;
  }
  return out;
}

double norm2(const cvec& v) {
  double s = 0.0;
  for (const auto& c : v) s += std::norm(c);
  return s;
}

}  // namespace

AmplitudeSpec AmplitudeSpec::cube(int axes, double half_width, Kind kind) {
  AmplitudeSpec a;
  a.kind = kind;
  a.box.assign(axes, {-half_width, half_width});
  return a;
}

std::pair<double, double> AmplitudeSpec::axis_box(int axis) const {
  if (box.empty()) return {-1.0, 1.0};
  if (axis < 0 || axis >= static_cast<int>(box.size()))
    throw DimensionError("amplitude box has no axis " + std::to_string(axis));
  return box[axis];
}

double AmplitudeSpec::axis_value(int axis, double t) const {
  auto [lo, hi] = axis_box(axis);
  if (t <= lo || t >= hi) return 0.0;
  if (kind == Kind::kConstant) return 1.0;
  const double s = (2.0 * t - (lo + hi)) / (hi - lo);
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

struct KernelOperator::Impl {
  int nx = 0, nz = 0;
  std::vector<AxisGrid> gx, gz;
  std::vector<double> ax, az;
  double weight = 1.0;
  std::unique_ptr<PhaseRows> fwd, adj;
  bool cached = false;
  std::vector<float> cre, cim;
  int threads = 1;

  std::int64_t rows() const { return static_cast<std::int64_t>(ax.size()); }
  std::int64_t cols() const { return static_cast<std::int64_t>(az.size()); }
};

KernelOperator::KernelOperator(const PhasePoly& s, double lambda, const AmplitudeSpec& amp, int n,
                               std::int64_t dense_limit, int threads)
    : impl_(std::make_unique<Impl>()) {
  if (n < 2) throw DomainError("grid size per axis must be at least 2");
  if (lambda < 0) throw DomainError("lambda must be nonnegative");
  Impl& m = *impl_;
  m.nx = s.nx();
  m.nz = s.nz();
  m.threads = resolve_threads(threads);
  if (!amp.box.empty() && static_cast<int>(amp.box.size()) != m.nx + m.nz)
    throw DimensionError("amplitude box needs one interval per axis");
  double vol = 1.0;
  for (int k = 0; k < m.nx + m.nz; ++k) {
    auto [lo, hi] = amp.axis_box(k);
    if (!(hi > lo)) throw DomainError("amplitude box intervals must have positive length");
    AxisGrid g{lo, (hi - lo) / n, n};
    vol *= g.step;
    (k < m.nx ? m.gx : m.gz).push_back(g);
  }
  m.weight = std::sqrt(vol);
  m.ax = amplitude_vector(amp, m.gx, 0);
  m.az = amplitude_vector(amp, m.gz, m.nx);
  m.fwd = std::make_unique<PhaseRows>(s.poly(), lambda, m.gx, m.gz);
  m.adj = std::make_unique<PhaseRows>(swap_sides(s.poly()), -lambda, m.gz, m.gx);

  const std::int64_t entries = m.rows() * m.cols();
  if (entries <= dense_limit) {
    m.cached = true;
    m.cre.resize(entries);
    m.cim.resize(entries);
    const std::int64_t nc = m.cols();
    parallel_for(m.rows(), m.threads, [&](std::int64_t b, std::int64_t e) {
      std::vector<double> re(nc), im(nc);
      for (std::int64_t i = b; i < e; ++i) {
        m.fwd->row(i, re.data(), im.data());
        const double ri = m.ax[i] * m.weight;
        float* cr = &m.cre[i * nc];
        float* ci = &m.cim[i * nc];
        for (std::int64_t j = 0; j < nc; ++j) {
          const double a = ri * m.az[j];
          cr[j] = static_cast<float>(a * re[j]);
          ci[j] = static_cast<float>(a * im[j]);
        }
      }
    });
  }
}

KernelOperator::~KernelOperator() = default;

std::int64_t KernelOperator::rows() const { return impl_->rows(); }
std::int64_t KernelOperator::cols() const { return impl_->cols(); }
bool KernelOperator::cached() const { return impl_->cached; }

void KernelOperator::apply(const cvec& f, cvec& y) const {
  const Impl& m = *impl_;
  const std::int64_t nr = m.rows(), nc = m.cols();
  if (static_cast<std::int64_t>(f.size()) != nc) throw DimensionError("apply: wrong input length");
  y.assign(nr, {0.0, 0.0});
  if (m.cached) {
    std::vector<double> fr(nc), fi(nc);
    for (std::int64_t j = 0; j < nc; ++j) {
      fr[j] = f[j].real();
      fi[j] = f[j].imag();
    }
    parallel_for(nr, m.threads, [&](std::int64_t b, std::int64_t e) {
      for (std::int64_t i = b; i < e; ++i) {
        const float* cr = &m.cre[i * nc];
        const float* ci = &m.cim[i * nc];
        double sr = 0.0, si = 0.0;
        for (std::int64_t j = 0; j < nc; ++j) {
          sr += cr[j] * fr[j] - ci[j] * fi[j];
          si += cr[j] * fi[j] + ci[j] * fr[j];
        }
        y[i] = {sr, si};
      }
    });
    return;
  }
  std::vector<double> gr(nc), gi(nc);
  for (std::int64_t j = 0; j < nc; ++j) {
    gr[j] = m.az[j] * f[j].real();
    gi[j] = m.az[j] * f[j].imag();
  }
  parallel_for(nr, m.threads, [&](std::int64_t b, std::int64_t e) {
    std::vector<double> re(nc), im(nc);
    for (std::int64_t i = b; i < e; ++i) {
      if (m.ax[i] == 0.0) continue;
      m.fwd->row(i, re.data(), im.data());
      double sr = 0.0, si = 0.0;
      for (std::int64_t j = 0; j < nc; ++j) {
        sr += re[j] * gr[j] - im[j] * gi[j];
        si += re[j] * gi[j] + im[j] * gr[j];
      }
      const double s = m.ax[i] * m.weight;
      y[i] = {s * sr, s * si};
    }
  });
}

void KernelOperator::apply_adjoint(const cvec& y, cvec& f) const {
  const Impl& m = *impl_;
  const std::int64_t nr = m.rows(), nc = m.cols();
  if (static_cast<std::int64_t>(y.size()) != nr)
    throw DimensionError("apply_adjoint: wrong input length");
  f.assign(nc, {0.0, 0.0});
  if (m.cached) {
    // Each thread owns a block of output columns and sweeps all rows in order.
    parallel_for(nc, m.threads, [&](std::int64_t b, std::int64_t e) {
      std::vector<double> ar(e - b, 0.0), ai(e - b, 0.0);
      for (std::int64_t i = 0; i < nr; ++i) {
        const double yr = y[i].real(), yi = y[i].imag();
        if (yr == 0.0 && yi == 0.0) continue;
        const float* cr = &m.cre[i * nc];
        const float* ci = &m.cim[i * nc];
        for (std::int64_t j = b; j < e; ++j) {
          ar[j - b] += cr[j] * yr + ci[j] * yi;
          ai[j - b] += cr[j] * yi - ci[j] * yr;
        }
      }
      for (std::int64_t j = b; j < e; ++j) f[j] = {ar[j - b], ai[j - b]};
    });
    return;
  }
  std::vector<double> gr(nr), gi(nr);
  for (std::int64_t i = 0; i < nr; ++i) {
    gr[i] = m.ax[i] * y[i].real();
    gi[i] = m.ax[i] * y[i].imag();
  }
  parallel_for(nc, m.threads, [&](std::int64_t b, std::int64_t e) {
    std::vector<double> re(nr), im(nr);
    for (std::int64_t j = b; j < e; ++j) {
      if (m.az[j] == 0.0) continue;
      m.adj->row(j, re.data(), im.data());
      double sr = 0.0, si = 0.0;
      for (std::int64_t i = 0; i < nr; ++i) {
        sr += re[i] * gr[i] - im[i] * gi[i];
        si += re[i] * gi[i] + im[i] * gr[i];
      }
      const double s = m.az[j] * m.weight;
      f[j] = {s * sr, s * si};
    }
  });
}

std::vector<double> KernelOperator::z_point(std::int64_t j) const {
  std::vector<double> p(impl_->gz.size());
  decode(j, impl_->gz, p.data());
  return p;
}

std::vector<double> KernelOperator::x_point(std::int64_t i) const {
  std::vector<double> p(impl_->gx.size());
  decode(i, impl_->gx, p.data());
  return p;
}

Eigen::MatrixXcd KernelOperator::dense() const {
  const Impl& m = *impl_;
  Eigen::MatrixXcd d(m.rows(), m.cols());
  std::vector<double> re(m.cols()), im(m.cols());
  for (std::int64_t i = 0; i < m.rows(); ++i) {
    m.fwd->row(i, re.data(), im.data());
    for (std::int64_t j = 0; j < m.cols(); ++j) {
      const double a = m.ax[i] * m.az[j] * m.weight;
      d(i, j) = {a * re[j], a * im[j]};
    }
  }
  return d;
}

int oscillation_rule_n(const PhasePoly& s, double lambda, const AmplitudeSpec& amp, double ppw) {
  const int nv = s.nx() + s.nz();
  std::vector<double> bound(nv), len(nv);
  for (int k = 0; k < nv; ++k) {
    auto [lo, hi] = amp.axis_box(k);
    bound[k] = std::max(std::abs(lo), std::abs(hi));
    len[k] = hi - lo;
  }
  double need = 0.0;
  for (int k = 0; k < nv; ++k) {
    double g = 0.0;
    for (const auto& [mi, c] : s.poly().terms()) {
      std::vector<int> e = mi.alpha;
      e.insert(e.end(), mi.beta.begin(), mi.beta.end());
      if (e[k] == 0) continue;
      double t = std::abs(c.get_d()) * e[k];
      for (int l = 0; l < nv; ++l) t *= std::pow(bound[l], e[l] - (l == k ? 1 : 0));
      g += t;
    }
    need = std::max(need, ppw / kTwoPi * lambda * len[k] * g);
  }
  return static_cast<int>(std::min(std::ceil(need), 1e9));
}

namespace {

cvec seeded_start(std::int64_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  cvec v(n);
  for (auto& c : v) c = {normal(rng), normal(rng)};
  const double nv = std::sqrt(norm2(v));
  for (auto& c : v) c /= nv;
  return v;
}

std::complex<double> dot(const cvec& a, const cvec& b) {
  std::complex<double> s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += std::conj(a[j]) * b[j];
  return s;
}

NormEstimate lanczos(const KernelOperator& k, const NormOptions& opt) {
  NormEstimate est;
  cvec start = seeded_start(k.cols(), opt.seed);
  const int kmax = std::max(2, opt.krylov_dim);
  cvec w, u;
  double theta_prev = 0.0;
  int applies = 0;
  while (applies < opt.max_iter) {
    std::vector<cvec> basis{start};
    std::vector<double> alpha, beta;
    Eigen::VectorXd ritz;
    double theta = 0.0;
    for (int j = 0; j < kmax && applies < opt.max_iter; ++j) {
      k.apply(basis[j], w);
      k.apply_adjoint(w, u);
      ++applies;
      est.iterations = applies;
      const double a = dot(basis[j], u).real();
      alpha.push_back(a);
      // Full reorthogonalization, twice for stability.
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : basis) {
          const auto c = dot(q, u);
          for (std::size_t t = 0; t < u.size(); ++t) u[t] -= c * q[t];
        }
      const double b = std::sqrt(norm2(u));
      const int m = static_cast<int>(alpha.size());
      Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        tri(i, i) = alpha[i];
        if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
      theta = es.eigenvalues()(m - 1);
      ritz = es.eigenvectors().col(m - 1);
      if (theta <= 0.0) {
        est.norm = 0.0;
        est.residual = 0.0;
        est.converged = true;
        return est;
      }
      est.norm = std::sqrt(theta);
      est.residual = b * std::abs(ritz(m - 1)) / theta;
      const double change = std::abs(theta - theta_prev) / theta;
      theta_prev = theta;
      if (applies > 1 && change < opt.tol && est.residual < std::sqrt(opt.tol)) {
        est.converged = true;
        return est;
      }
      if (b <= 1e-14 * theta) break;  // invariant subspace
      beta.push_back(b);
      for (auto& c : u) c /= b;
      basis.push_back(u);
    }
    // Restart from the current Ritz vector.
    cvec y(start.size(), {0.0, 0.0});
    for (int i = 0; i < ritz.size(); ++i)
      for (std::size_t t = 0; t < y.size(); ++t) y[t] += ritz(i) * basis[i][t];
    const double ny = std::sqrt(norm2(y));
    for (auto& c : y) c /= ny;
    start = std::move(y);
    if (est.residual * theta <= 1e-14 * theta) {
      est.converged = true;
      return est;
    }
  }
  return est;
}

NormEstimate power_method(const KernelOperator& k, const NormOptions& opt) {
  NormEstimate est;
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  cvec v(k.cols());
  for (auto& c : v) c = {normal(rng), normal(rng)};
  double nv = std::sqrt(norm2(v));
  for (auto& c : v) c /= nv;

  cvec w, u;
  double rho_prev = 0.0;
  for (int it = 1; it <= opt.max_iter; ++it) {
    k.apply(v, w);
    const double rho = norm2(w);
    est.iterations = it;
    if (rho == 0.0) {
      est.norm = 0.0;
      est.residual = 0.0;
      est.converged = true;
      return est;
    }
    k.apply_adjoint(w, u);
    double res = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) res += std::norm(u[j] - rho * v[j]);
    est.residual = std::sqrt(res) / rho;
    est.norm = std::sqrt(rho);
    const double change = std::abs(rho - rho_prev) / rho;
    const double nu = std::sqrt(norm2(u));
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = u[j] / nu;
    if (it > 1 && change < opt.tol && est.residual < std::sqrt(opt.tol)) {
      est.converged = true;
      break;
    }
    rho_prev = rho;
  }
  return est;
}

}  // namespace

NormEstimate spectral_norm(const KernelOperator& k, const NormOptions& opt) {
  return opt.method == NormMethod::kLanczos ? lanczos(k, opt) : power_method(k, opt);
}

NormEstimate estimate_norm(const PhasePoly& s, double lambda, const AmplitudeSpec& amp,
                           const NormOptions& opt) {
  if (opt.n < 8) throw DomainError("grid size per axis must be at least 8");
  KernelOperator k(s, lambda, amp, opt.n, opt.dense_limit, opt.threads);
  NormEstimate est = spectral_norm(k, opt);
  est.n = opt.n;
  est.rule_n = oscillation_rule_n(s, lambda, amp, opt.ppw);
  est.rule_resolved = opt.n >= est.rule_n;
  return est;
}

FitResult fit_loglog(const std::vector<double>& lambdas, const std::vector<double>& norms,
                     double drop_fraction) {
  if (lambdas.size() != norms.size()) throw DimensionError("fit: length mismatch");
  std::vector<std::size_t> idx(lambdas.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return lambdas[a] < lambdas[b]; });
  const std::size_t drop = static_cast<std::size_t>(std::floor(drop_fraction * idx.size()));
  std::vector<double> lx, ly;
  for (std::size_t k = drop; k < idx.size(); ++k) {
    if (!(norms[idx[k]] > 0) || !(lambdas[idx[k]] > 0)) continue;
    lx.push_back(std::log(lambdas[idx[k]]));
    ly.push_back(std::log(norms[idx[k]]));
  }
  if (lx.size() < 2) throw DomainError("fit needs at least two usable points after the window");
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
  }
  FitResult f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    const double r = ly[k] - f.intercept - f.slope * lx[k];
    ssr += r * r;
  }
  f.stderr_slope = lx.size() > 2 ? std::sqrt(ssr / (n - 2) / sxx) : 0.0;
  f.lambda_lo = std::exp(lx.front());
  f.lambda_hi = std::exp(lx.back());
  f.points = static_cast<int>(lx.size());
  return f;
}

double log_factor_slope_bias(double a, double b) {
  if (!(a > 1.0) || !(b > a)) throw DomainError("log-factor bias needs 1 < a < b");
  return (std::log(std::log(b)) - std::log(std::log(a))) / (std::log(b) - std::log(a));
}

std::vector<double> geometric_lambdas(double lo, double hi, int count) {
  if (count < 2 || !(lo > 0) || !(hi > lo)) throw DomainError("need 0 < lo < hi and count >= 2");
  std::vector<double> out(count);
  for (int k = 0; k < count; ++k) out[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (count - 1));
  return out;
}

namespace {

int grid_cap(int nv, const SweepOptions& opt) {
  const double entries = static_cast<double>(opt.max_kernel_entries);
  int cap = static_cast<int>(std::floor(std::pow(entries, 1.0 / nv) + 1e-9));
  if (opt.n_max > 0) cap = std::min(cap, opt.n_max);
  while (cap > 8 && std::pow(static_cast<double>(cap), nv) > entries) --cap;
  return std::max(cap, 8);
}

}  // namespace

int auto_grid_n(const PhasePoly& s, double lambda, const SweepOptions& opt) {
  const int cap = grid_cap(s.nx() + s.nz(), opt);
  const int rule = oscillation_rule_n(s, lambda, opt.amp, opt.norm.ppw);
  const int start = static_cast<int>(std::ceil(rule * opt.start_fraction));
  return std::clamp(start, std::min(opt.n_min, cap), cap);
}

NormSweepResult sweep_and_fit(const PhasePoly& s, const SweepOptions& opt) {
  if (opt.lambdas.size() < 4) throw DomainError("a sweep needs at least 4 lambda values");
  for (std::size_t k = 1; k < opt.lambdas.size(); ++k)
    if (!(opt.lambdas[k] > opt.lambdas[k - 1]))
      throw DomainError("lambda values must be strictly increasing");
  NormSweepResult res;
  res.seed = opt.norm.seed;
  res.tol = opt.norm.tol;
  res.n_cap = opt.auto_grid ? grid_cap(s.nx() + s.nz(), opt) : opt.norm.n;
  const int cap = res.n_cap;
  for (double lam : opt.lambdas) {
    NormOptions no = opt.norm;
    no.dense_limit = std::max(no.dense_limit, opt.max_kernel_entries);
    const int rule = oscillation_rule_n(s, lam, opt.amp, no.ppw);
    auto solve = [&](int n, double* witness) {
      KernelOperator k(s, lam, opt.amp, n, no.dense_limit, no.threads);
      NormEstimate e = spectral_norm(k, no);
      e.n = n;
      e.rule_n = rule;
      e.rule_resolved = n >= rule;
      if (witness && opt.witness && lam >= 1.0)
        *witness = lower_bound_witness(k, s, lam, opt.witness_opt).ratio;
      return e;
    };
    auto coarser = [&](int n) { return std::max(8, static_cast<int>(std::lround(n * opt.refine_ratio))); };

    SweepRow row;
    row.lambda = lam;
    int n = opt.norm.n;
    if (opt.auto_grid) {
      const int start = static_cast<int>(std::ceil(rule * opt.start_fraction));
      n = std::clamp(start, std::min(opt.n_min, cap), cap);
    }
    NormEstimate fine = solve(n, &row.witness_ratio);
    std::optional<NormEstimate> coarse;
    bool refined = false;
    // Grow the grid until it agrees with the next coarser one.
    while (opt.refine_check && !fine.rule_resolved) {
      if (!coarse) coarse = solve(coarser(fine.n), nullptr);
      row.coarse_norm = coarse->norm;
      row.refine_rel_diff = std::abs(coarse->norm - fine.norm) / fine.norm;
      refined = coarse->converged && row.refine_rel_diff < opt.refine_tol;
      if (refined || !opt.auto_grid || fine.n >= cap) break;
      const int next = std::min(cap, std::max(fine.n + 1, static_cast<int>(std::ceil(fine.n / opt.refine_ratio))));
      coarse = fine;
      fine = solve(next, &row.witness_ratio);
    }
    row.norm = fine.norm;
    row.n = fine.n;
    row.iterations = fine.iterations;
    row.residual = fine.residual;
    row.converged = fine.converged;
    row.rule_n = fine.rule_n;
    row.rule_resolved = fine.rule_resolved;
    row.resolved = fine.converged && fine.norm > 0 && (fine.rule_resolved || refined);
    if (!row.resolved) res.excluded.push_back(lam);
    res.rows.push_back(row);
  }
  res.fit = fit_rows(res.rows, opt.drop_fraction);
  if (opt.witness) {
    std::vector<double> l, w;
    for (const auto& r : res.rows)
      if (r.resolved && r.witness_ratio > 0) {
        l.push_back(r.lambda);
        w.push_back(r.witness_ratio);
      }
    if (l.size() >= 2) res.witness_fit = fit_loglog(l, w, opt.drop_fraction);
  }
  return res;
}

FitResult fit_rows(const std::vector<SweepRow>& rows, double drop_fraction) {
  std::vector<double> l, n;
  for (const auto& r : rows)
    if (r.resolved) {
      l.push_back(r.lambda);
      n.push_back(r.norm);
    }
  return fit_loglog(l, n, drop_fraction);
}

WitnessResult lower_bound_witness(const KernelOperator& k, const PhasePoly& s, double lambda,
                                  const WitnessOptions& opt) {
  if (lambda < 1.0) throw DomainError("witness needs lambda >= 1");
  const int nz = s.nz();
  std::vector<double> z0 = opt.z0.empty() ? std::vector<double>(nz, 0.5) : opt.z0;
  if (static_cast<int>(z0.size()) != nz) throw DimensionError("witness base point has wrong length");
  const double scale = std::pow(lambda, -1.0 / s.degree());
  const double radius = scale * opt.eps;
  WitnessResult res;
  cvec g(k.cols());
  for (std::int64_t j = 0; j < k.cols(); ++j) {
    auto z = k.z_point(j);
    double r2 = 0.0;
    for (int a = 0; a < nz; ++a) {
      const double d = (z[a] - scale * z0[a]) / radius;
      r2 += d * d;
    }
    if (r2 < 1.0) {
      g[j] = std::exp(1.0 - 1.0 / (1.0 - r2));
      ++res.support_points;
    }
  }
  const double gn = norm2(g);
  if (gn == 0.0) return res;
  cvec y;
  k.apply(g, y);
  res.ratio = std::sqrt(norm2(y) / gn);
  return res;
}

std::string sweep_to_csv(const NormSweepResult& r) {
  std::ostringstream os;
  char buf[256];
  os << "# oscint sweep\n";
  std::snprintf(buf, sizeof buf, "# seed=%llu tol=%.3g n_cap=%d\n",
                static_cast<unsigned long long>(r.seed), r.tol, r.n_cap);
  os << buf;
  os << "lambda,norm,grid_n,iters,residual,resolved\n";
  for (const auto& row : r.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%d,%.6g,%d\n", row.lambda, row.norm, row.n,
                  row.iterations, row.residual, row.resolved ? 1 : 0);
    os << buf;
  }
  return os.str();
}

std::vector<SweepRow> sweep_from_csv(const std::string& text) {
  std::vector<SweepRow> rows;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line.rfind("lambda,norm", 0) != 0) throw ParseError("expected CSV header", lineno, 1);
      header = true;
      continue;
    }
    std::vector<std::string> cols;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cols.push_back(cell);
    if (cols.size() != 6)
      throw ParseError("expected 6 columns, found " + std::to_string(cols.size()), lineno, 1);
    SweepRow r;
    try {
      r.lambda = std::stod(cols[0]);
      r.norm = std::stod(cols[1]);
      r.n = std::stoi(cols[2]);
      r.iterations = std::stoi(cols[3]);
      r.residual = std::stod(cols[4]);
      r.resolved = std::stoi(cols[5]) != 0;
    } catch (const std::exception&) {
      throw ParseError("malformed number in CSV row", lineno, 1);
    }
    r.converged = r.resolved;
    rows.push_back(r);
  }
  if (!header) throw ParseError("missing CSV header", lineno, 1);
  return rows;
}

std::string sweep_plot_data(const NormSweepResult& r) {
  std::ostringstream os;
  char buf[96];
  for (const auto& row : r.rows) {
    if (!row.resolved) continue;
    std::snprintf(buf, sizeof buf, "%.12g %.12g\n", std::log(row.lambda), std::log(row.norm));
    os << buf;
  }
  return os.str();
}

}  // namespace oscint
