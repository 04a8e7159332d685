#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "shks/config.hpp"
#include "shks/integrator.hpp"
#include "shks/statistics.hpp"

namespace shks {

/// |(Lambda^s u, Lambda^s G(u))| / (||u||_{W1inf} ||u||_{H^s}^2); nullopt
/// when the denominator vanishes.
std::optional<double> kappa_ratio(const SpectralField& u, double s);

struct KappaEstimate {
  double kappa_hat = 0.0;
  std::size_t n_samples = 0;
  std::size_t n_skipped = 0;
  /// Running maximum after each sample.
  std::vector<double> running_max;
  std::optional<std::size_t> argmax_sample;
  double argmax_amplitude = 0.0;
  std::uint64_t argmax_seed = 0;
};

/// Random search for the largest ratio over RandomSobolev fields whose
/// H^s norms cycle through `amplitudes`.  Sample i draws from its own
/// stream, so a longer run extends a shorter one.  A lower estimate of kappa.
KappaEstimate estimate_kappa(const TorusGrid& grid, double s, std::size_t n_samples,
                             std::span<const double> amplitudes, std::uint64_t master_seed);

struct GbmMoment {
  double exponent = 0.0;
  double empirical_moment = 0.0;
  double std_error = 0.0;
  /// exp(lambda^2 t k (2k - 1 + 1/rho) / 4), equal to 1 at k = 1/2 - 1/(2 rho).
  double expected = 1.0;
  std::size_t n_paths = 0;
};

/// 1/2 - 1/(2 rho)
double gbm_critical_exponent(double rho);

/// Sample mean of Phi_t^k, Phi_t = exp(lambda W_t - (lambda^2/4)(1 - 1/rho) t),
/// with W_t drawn exactly.  k defaults to the critical exponent.
GbmMoment gbm_moment_check(double lambda, double rho, double t, std::size_t n_paths, std::uint64_t seed,
                           std::optional<double> exponent = std::nullopt);

struct ConvergenceStudy {
  /// dt values or Galerkin levels, in ladder order.
  std::vector<double> ladder;
  std::vector<double> errors;
  /// Log-log least-squares slope; NaN when some error is zero.
  double slope = 0.0;
};

/// Mean over paths of ||u_dt(T) - u_ref(T)||_{H^s}, the reference using
/// dt_min / reference_factor.  Every coarse path sums fine increments of one
/// stored reference path.  Throws ConfigError when the ladder cannot be
/// coupled and StudyAbort when a path overflows.
ConvergenceStudy temporal_convergence(const SolverConfig& cfg, std::span<const double> dt_ladder,
                                      std::size_t n_paths, std::uint64_t master_seed, int reference_factor = 32);

/// Mean over paths of the final transform discrepancy ||u(T) - v(T)/mu(T)||_{H^s}
/// for each dt, all coarsened from one path at the finest dt.
ConvergenceStudy transform_refinement(const SolverConfig& cfg, std::span<const double> dt_ladder,
                                      std::size_t n_paths, std::uint64_t master_seed);

struct SpectralStudy {
  std::vector<double> ladder;
  /// ||v - P_n v||_{H^r}
  std::vector<double> errors;
  double profile_norm = 0.0;
  /// Log-log slope; NaN when some error is zero.
  double slope = 0.0;
  double expected_slope = 0.0;
};

/// Projection errors of the profile built on cfg.grid; profile_norm is its
/// H^{cfg.s} norm and expected_slope is r - cfg.s.
SpectralStudy spectral_convergence(const SolverConfig& cfg, double r, std::span<const int> n_ladder,
                                   std::uint64_t master_seed);

/// Least-squares slope of ln(e + ||u||_{H^s}^2) against t.
double log_energy_slope(const TrajectoryRecord& record);

/// Mean and standard error of the per-path slopes.
MeanEstimate log_energy_drift(std::span<const TrajectoryRecord> records);

}  // namespace shks
