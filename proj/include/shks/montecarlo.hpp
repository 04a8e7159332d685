#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shks/config.hpp"
#include "shks/integrator.hpp"
#include "shks/statistics.hpp"

namespace shks {

/// Constants of the small-data linear-noise result.  c_tilde is not
/// determined by the theory and is always supplied by the user.
struct TheoryParams {
  double R = 100.0;
  double rho = 4.0;
  double c_tilde = 1.0;
  friend bool operator==(const TheoryParams&, const TheoryParams&) = default;
};

/// 1 - R^{-(rho-1)/(2 rho)}; requires R > 1 and rho > 2.
double survival_lower_bound(double R, double rho);

/// Largest admissible ||u_0||_{H^s}: lambda^2 / (2 R rho c_tilde).
double small_data_bound(double lambda, const TheoryParams& theory);

/// Stopping level lambda^2 / (2 rho c_tilde) used in the proof of the bound.
double proof_stop_level(double lambda, const TheoryParams& theory);

struct PathSummary {
  std::size_t path_id = 0;
  PathStatus status = PathStatus::survived;
  double t_event = 0.0;
  double initial_hs = 0.0;
  double final_hs = 0.0;
  std::optional<double> log_energy_slope;
};

/// Survival here means no stop and no overflow before t_final, so p_hat
/// estimates P(xi > t_final).
struct McReport {
  std::size_t n_paths = 0;
  std::size_t n_survived = 0;
  std::size_t n_stopped = 0;
  std::size_t n_nonfinite = 0;
  double p_hat = 0.0;
  Interval ci;
  double max_initial_hs = 0.0;
  /// Set when theory parameters were supplied and the noise is linear.
  std::optional<double> data_bound;
  /// Set when additionally every initial field satisfies the data bound.
  std::optional<double> theory_bound;
  MeanEstimate log_energy_slope;
  std::vector<PathSummary> paths;
};

McReport monte_carlo_survival(const SolverConfig& cfg, std::size_t n_paths, std::uint64_t master_seed,
                              const std::optional<TheoryParams>& theory = std::nullopt);

/// Worker threads for ensembles: SHKS_WORKERS if set, else the hardware count.
std::size_t worker_count();

/// Calls fn(i) for i in [0, n) on worker_count() threads.  If calls throw,
/// the exception of the lowest index is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

enum class ScanParameter { nonlinear_c, nonlinear_delta, linear_lambda };

/// "c_eff", "delta" or "lambda".
ScanParameter parse_scan_parameter(const std::string& name);
std::string scan_parameter_name(ScanParameter p);

/// base with the scanned noise parameter set to value.  c_eff = 0 yields the
/// zero-noise model.
SolverConfig with_scan_value(const SolverConfig& base, ScanParameter p, double value);

struct ScanRow {
  double value = 0.0;
  McReport report;
};

/// One report per value, all with the same master seed (common random numbers).
std::vector<ScanRow> threshold_scan(const SolverConfig& base, ScanParameter p, std::span<const double> values,
                                    std::size_t n_paths, std::uint64_t master_seed,
                                    const std::optional<TheoryParams>& theory = std::nullopt);

}  // namespace shks
