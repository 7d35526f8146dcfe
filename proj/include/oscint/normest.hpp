#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oscint/poly.hpp"

namespace oscint {

using cvec = std::vector<std::complex<double>>;

/// Product amplitude a(x, z) = prod_k g_k(t_k) over all nx + nz axes.
struct AmplitudeSpec {
  enum class Kind { kSmoothBump, kConstant };
  Kind kind = Kind::kSmoothBump;
  /// One (low, high) per axis, x axes first. Empty means [-1, 1] everywhere.
  std::vector<std::pair<double, double>> box;

  static AmplitudeSpec cube(int axes, double half_width, Kind kind = Kind::kSmoothBump);

  std::pair<double, double> axis_box(int axis) const;
  /// g_k(t): exp(1 - 1/(1 - s^2)) with s the position rescaled to [-1, 1],
  /// or 1 on the box for the constant kind; 0 outside.
  double axis_value(int axis, double t) const;
};

/// Midpoint discretization of T_lambda on an n^nx by n^nz grid, scaled so
/// its spectral norm approximates the L^2 operator norm. Rows are x points
/// (last x axis fastest), columns z points (last z axis fastest).
class KernelOperator {
 public:
  /// `dense_limit` caps the number of entries cached in memory
  /// (single-precision); larger kernels are applied matrix-free.
  KernelOperator(const PhasePoly& s, double lambda, const AmplitudeSpec& amp, int n,
                 std::int64_t dense_limit = 300'000'000, int threads = 0);
  ~KernelOperator();
  KernelOperator(const KernelOperator&) = delete;
  KernelOperator& operator=(const KernelOperator&) = delete;

  std::int64_t rows() const;
  std::int64_t cols() const;
  bool cached() const;

  void apply(const cvec& f, cvec& y) const;          // y = M f
  void apply_adjoint(const cvec& y, cvec& f) const;  // f = M^* y

  /// Grid coordinates of column j (a z point) or row i (an x point).
  std::vector<double> z_point(std::int64_t j) const;
  std::vector<double> x_point(std::int64_t i) const;

  /// Full matrix; intended for small grids in tests.
  Eigen::MatrixXcd dense() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

enum class NormMethod {
  kLanczos,  // Krylov acceleration of the power method on M^*M
  kPower,
};

struct NormOptions {
  NormMethod method = NormMethod::kLanczos;
  int n = 64;
  double tol = 1e-6;
  int max_iter = 500;       // applications of M^*M
  int krylov_dim = 40;      // Lanczos restart length
  std::uint64_t seed = 1;
  int threads = 0;
  double ppw = 10.0;  // points per wavelength for the oscillation rule
  std::int64_t dense_limit = 300'000'000;
};

struct NormEstimate {
  double norm = 0.0;
  int iterations = 0;
  double residual = 0.0;   // ||M^*M v - rho v|| / rho at the last step
  bool converged = false;
  int n = 0;
  int rule_n = 0;          // grid demanded by the oscillation rule
  bool rule_resolved = false;
};

/// Per-axis grid size demanded by n >= (ppw / 2 pi) lambda L G, with G a
/// coefficient bound for |dS/dt_k| on the box.
int oscillation_rule_n(const PhasePoly& s, double lambda, const AmplitudeSpec& amp, double ppw);

/// Largest singular value of the discretized operator from M^*M, started
/// from a seeded complex Gaussian vector. Both methods stop once the
/// estimate of sigma^2 changes by less than tol (relative) and the
/// eigen-residual is below sqrt(tol).
NormEstimate estimate_norm(const PhasePoly& s, double lambda, const AmplitudeSpec& amp,
                           const NormOptions& opt);

/// Same, for an operator that is already assembled.
NormEstimate spectral_norm(const KernelOperator& k, const NormOptions& opt);

struct FitResult {
  double slope = 0.0;
  double stderr_slope = 0.0;
  double intercept = 0.0;
  double lambda_lo = 0.0;  // fit window
  double lambda_hi = 0.0;
  int points = 0;
};

/// Least-squares slope of log(norm) against log(lambda) after dropping the
/// smallest `drop_fraction` of the lambda values.
FitResult fit_loglog(const std::vector<double>& lambdas, const std::vector<double>& norms,
                     double drop_fraction = 0.25);

/// Largest change of the log-log slope that a (log lambda)^1 factor can cause
/// over [a, b]; used to widen acceptance bands when p = 1.
double log_factor_slope_bias(double a, double b);

std::vector<double> geometric_lambdas(double lo, double hi, int count);

struct WitnessOptions {
  std::vector<double> z0;  // base point, default (1/2, ..., 1/2)
  double eps = 0.25;       // bump radius before scaling
};

struct SweepOptions {
  std::vector<double> lambdas;
  AmplitudeSpec amp;
  NormOptions norm;         // n here is ignored when auto_grid is set
  bool auto_grid = true;
  int n_min = 32;
  int n_max = 0;                 // 0: limited by max_kernel_entries only
  std::int64_t max_kernel_entries = 300'000'000;
  /// Auto grids start at this fraction of the oscillation-rule size and grow
  /// by 1/refine_ratio until two consecutive grids agree within refine_tol.
  double start_fraction = 0.125;
  bool refine_check = true;      // compare with a coarser grid
  double refine_ratio = 0.75;
  double refine_tol = 0.005;
  double drop_fraction = 0.25;
  bool witness = false;          // also evaluate the lower-bound witness per row
  WitnessOptions witness_opt;
};

struct SweepRow {
  double lambda = 0.0;
  double norm = 0.0;
  int n = 0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  int rule_n = 0;
  bool rule_resolved = false;
  double coarse_norm = 0.0;  // 0 when no refinement check ran
  double refine_rel_diff = 0.0;
  bool resolved = false;     // converged and (rule met or refinement agrees)
  double witness_ratio = 0.0;
};

struct NormSweepResult {
  std::vector<SweepRow> rows;
  FitResult fit;
  std::optional<FitResult> witness_fit;
  std::vector<double> excluded;  // lambdas left out of the fit
  std::uint64_t seed = 0;
  double tol = 0.0;
  int n_cap = 0;
};

/// First grid tried for one lambda under the sweep policy.
int auto_grid_n(const PhasePoly& s, double lambda, const SweepOptions& opt);

NormSweepResult sweep_and_fit(const PhasePoly& s, const SweepOptions& opt);

/// Fits rows as read back from CSV (resolved rows only).
FitResult fit_rows(const std::vector<SweepRow>& rows, double drop_fraction = 0.25);

struct WitnessResult {
  double ratio = 0.0;      // ||M g|| / ||g||
  int support_points = 0;  // grid points inside the scaled bump
};

/// Applies the discretized operator to f_lambda(z) = f(lambda^{1/m} z), a bump
/// on B(lambda^{-1/m} z0, lambda^{-1/m} eps), on the operator's own grid.
WitnessResult lower_bound_witness(const KernelOperator& k, const PhasePoly& s, double lambda,
                                  const WitnessOptions& opt = {});

std::string sweep_to_csv(const NormSweepResult& r);
std::vector<SweepRow> sweep_from_csv(const std::string& text);
/// Two columns: log lambda, log norm (resolved rows).
std::string sweep_plot_data(const NormSweepResult& r);

}  // namespace oscint
