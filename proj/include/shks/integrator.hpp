#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shks/config.hpp"
#include "shks/field.hpp"
#include "shks/rng.hpp"

namespace shks {

enum class PathStatus { survived, stopped, non_finite };

std::string status_name(PathStatus status);

/// Norm history of one path.  Samples are taken at t = 0, every
/// record_every steps, and at the terminal event.  t_event is the stop time
/// (first grid time with ||u||_{W1inf} >= stop_threshold) or the time of the
/// step that produced a non-finite value; NaN for survived paths.  A stop
/// time is a surrogate for the hitting time, late by at most dt.
struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<double> hs_norms;
  std::vector<double> w1inf_norms;
  std::vector<double> log_energy;
  PathStatus status = PathStatus::survived;
  double t_event = 0.0;
  std::uint64_t seed = 0;
  std::string diagnostic;
  std::optional<SpectralField> initial_state;
  std::optional<SpectralField> final_state;
};

/// ln(e + ||u||_{H^s}^2)
double log_energy(double hs_norm);

/// One Euler-Maruyama step from time t:
///   u - dt theta_R(||u||_{W1inf}) P_n G(u) + dW P_n sigma(u).
/// Throws NonFiniteError stamped with t + dt.
SpectralField em_step(const SpectralField& u, double t, double dW, const SolverConfig& cfg);
/// Same with ||u||_{W1inf} already known.
SpectralField em_step(const SpectralField& u, double t, double dW, const SolverConfig& cfg,
                      double w1inf);

/// Integrates from u0 (projected onto P_n first) with the given increments,
/// which must cover cfg.steps() steps of size cfg.dt.
TrajectoryRecord run_trajectory(const SolverConfig& cfg, const SpectralField& u0,
                                std::span<const double> increments);

/// Path `path_index` of the ensemble seeded by master_seed: initial data and
/// Brownian increments come from independent derived streams.
TrajectoryRecord run_path(const SolverConfig& cfg, std::uint64_t master_seed, std::uint64_t path_index);

/// Initial field of path `path_index` (the same one run_path starts from).
SpectralField path_initial_field(const SolverConfig& cfg, std::uint64_t master_seed,
                                 std::uint64_t path_index);

/// Brownian path of `path_index` with cfg.steps() increments of size cfg.dt.
BrownianPath path_brownian(const SolverConfig& cfg, std::uint64_t master_seed, std::uint64_t path_index);

/// Final state of a plain Euler-Maruyama run (no stopping, no recording).
/// Throws NonFiniteError.
SpectralField integrate_to_end(const SolverConfig& cfg, const SpectralField& u0, const BrownianPath& path);

// Linear noise sigma(u) = lambda u admits the substitution v = mu u with
// mu(t) = exp(lambda^2 t / 2 - lambda W_t), after which v solves a PDE with
// random coefficients and no stochastic integral.

/// exp(lambda^2 t / 2 - lambda W_t)
double doss_sussmann_mu(double t, double w, double lambda);

/// v - dt P_n [ (mu^-1 - 2 mu^-2 v) grad S(v) . grad v + (mu^-1 v - mu^-2 v^2) Laplacian S(v) ]
SpectralField random_pde_step(const SpectralField& v, double mu, double dt, const SolverConfig& cfg);

struct TransformComparison {
  std::vector<double> times;
  /// ||u_direct - v / mu||_{H^s} at each sample time.
  std::vector<double> discrepancy;
  bool complete = true;
  std::string diagnostic;

  double final_discrepancy() const { return discrepancy.empty() ? 0.0 : discrepancy.back(); }
  double max_discrepancy() const;
};

/// Runs the direct Euler-Maruyama path and the random-PDE path on the same
/// increments.  Requires LinearNoise and no cut-off.  A non-finite value in
/// either path ends the comparison early (complete = false).
TransformComparison transform_compare(const SolverConfig& cfg, const SpectralField& u0,
                                      const BrownianPath& path);
TransformComparison transform_compare(const SolverConfig& cfg, std::uint64_t master_seed,
                                      std::uint64_t path_index = 0);

}  // namespace shks
