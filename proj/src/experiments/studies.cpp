#include "shks/studies.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "shks/dynamics.hpp"
#include "shks/error.hpp"
#include "shks/montecarlo.hpp"

namespace shks {

std::optional<double> kappa_ratio(const SpectralField& u, double s) {
  const double w = w1inf_norm(u);
  const double hs = sobolev_norm(u, s);
  const double denom = w * hs * hs;
  if (denom == 0.0) return std::nullopt;
  return std::abs(sobolev_inner(u, drift(u), s)) / denom;
}

KappaEstimate estimate_kappa(const TorusGrid& grid, double s, std::size_t n_samples,
                             std::span<const double> amplitudes, std::uint64_t master_seed) {
  if (n_samples < 1) throw ConfigError("samples: need at least one sample");
  if (amplitudes.empty()) throw ConfigError("amplitudes: need at least one amplitude");
  for (double a : amplitudes) {
    if (!(a > 0.0)) throw ConfigError("amplitudes: every amplitude must be positive");
  }
  SolverConfig cfg;
  cfg.grid = grid;
  cfg.s = s;
  KappaEstimate est;
  est.n_samples = n_samples;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double amp = amplitudes[i % amplitudes.size()];
    cfg.initial = RandomSobolevInitial{amp, std::nullopt};
    RandomStream rng(master_seed, i, StreamPurpose::study);
    const auto ratio = kappa_ratio(make_initial_field(cfg, rng), s);
    if (!ratio) {
      ++est.n_skipped;
    } else if (!est.argmax_sample || *ratio > est.kappa_hat) {
      est.kappa_hat = *ratio;
      est.argmax_sample = i;
      est.argmax_amplitude = amp;
      est.argmax_seed = rng.seed();
    }
    est.running_max.push_back(est.kappa_hat);
  }
  return est;
}

double gbm_critical_exponent(double rho) { return 0.5 - 0.5 / rho; }

GbmMoment gbm_moment_check(double lambda, double rho, double t, std::size_t n_paths, std::uint64_t seed,
                           std::optional<double> exponent) {
  if (!(rho > 2.0)) throw ConfigError("rho: must exceed 2");
  if (!(t >= 0.0)) throw ConfigError("t: must be non-negative");
  if (n_paths < 1) throw ConfigError("paths: need at least one path");
  GbmMoment out;
  out.exponent = exponent.value_or(gbm_critical_exponent(rho));
  out.n_paths = n_paths;
  const double k = out.exponent;
  const double l2 = lambda * lambda;
  out.expected = std::exp(0.25 * l2 * t * k * (2.0 * k - 1.0 + 1.0 / rho));
  RandomStream rng(seed, 0, StreamPurpose::study);
  const double sqrt_t = std::sqrt(t);
  std::vector<double> samples(n_paths);
  for (double& x : samples) {
    const double w = sqrt_t * rng.normal();
    const double log_phi = lambda * w - 0.25 * l2 * (1.0 - 1.0 / rho) * t;
    x = std::exp(k * log_phi);
  }
  const MeanEstimate m = mean_with_stderr(samples);
  out.empirical_moment = m.mean;
  out.std_error = m.std_error;
  return out;
}

namespace {

// Integer ratio a / b, or nullopt when it is not one (relative tolerance 1e-9).
std::optional<long> integer_ratio(double a, double b) {
  const double q = a / b;
  const double r = std::round(q);
  if (r < 1.0 || std::abs(q - r) > 1e-9 * r) return std::nullopt;
  return static_cast<long>(r);
}

struct Ladder {
  double finest;
  std::vector<long> factors;
};

Ladder check_ladder(const SolverConfig& cfg, std::span<const double> dt_ladder) {
  if (dt_ladder.size() < 2) throw ConfigError("dt_ladder: need at least two values to fit a slope");
  Ladder lad{dt_ladder[0], {}};
  for (double dt : dt_ladder) {
    if (!(dt > 0.0)) throw ConfigError("dt_ladder: values must be positive");
    lad.finest = std::min(lad.finest, dt);
  }
  for (double dt : dt_ladder) {
    const auto f = integer_ratio(dt, lad.finest);
    if (!f) {
      std::ostringstream os;
      os << "dt_ladder: finest dt " << lad.finest << " does not divide dt " << dt;
      throw ConfigError(os.str());
    }
    lad.factors.push_back(*f);
  }
  for (double dt : dt_ladder) {
    if (!integer_ratio(cfg.t_final, dt)) {
      std::ostringstream os;
      os << "dt_ladder: dt " << dt << " does not divide t_final " << cfg.t_final;
      throw ConfigError(os.str());
    }
  }
  return lad;
}

double slope_or_nan(std::span<const double> x, std::span<const double> y) {
  for (double v : y) {
    if (!(v > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  }
  return loglog_slope(x, y);
}

}  // namespace

ConvergenceStudy temporal_convergence(const SolverConfig& cfg, std::span<const double> dt_ladder,
                                      std::size_t n_paths, std::uint64_t master_seed, int reference_factor) {
  if (n_paths < 1) throw ConfigError("paths: need at least one path");
  if (reference_factor < 1) throw ConfigError("reference_factor: must be >= 1");
  const Ladder lad = check_ladder(cfg, dt_ladder);
  SolverConfig ref_cfg = cfg;
  ref_cfg.dt = lad.finest / reference_factor;
  const long ref_steps = ref_cfg.steps();

  std::vector<std::vector<double>> errors(n_paths, std::vector<double>(dt_ladder.size()));
  try {
    parallel_for(n_paths, [&](std::size_t i) {
      const SpectralField u0 = path_initial_field(cfg, master_seed, i);
      RandomStream rng(master_seed, i, StreamPurpose::brownian);
      const BrownianPath fine(rng, ref_cfg.dt, static_cast<std::size_t>(ref_steps));
      const SpectralField reference = integrate_to_end(ref_cfg, u0, fine);
      for (std::size_t j = 0; j < dt_ladder.size(); ++j) {
        const BrownianPath coarse = fine.coarsen(static_cast<std::size_t>(lad.factors[j] * reference_factor));
        SolverConfig c = cfg;
        c.dt = coarse.dt();
        errors[i][j] = sobolev_norm(integrate_to_end(c, u0, coarse) - reference, cfg.s);
      }
    });
  } catch (const NonFiniteError& e) {
    std::ostringstream os;
    os << "temporal convergence aborted: " << e.what() << " at t = " << e.time();
    throw StudyAbort(os.str());
  }

  ConvergenceStudy study;
  study.ladder.assign(dt_ladder.begin(), dt_ladder.end());
  for (std::size_t j = 0; j < dt_ladder.size(); ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n_paths; ++i) sum += errors[i][j];
    study.errors.push_back(sum / static_cast<double>(n_paths));
  }
  study.slope = slope_or_nan(study.ladder, study.errors);
  return study;
}

ConvergenceStudy transform_refinement(const SolverConfig& cfg, std::span<const double> dt_ladder,
                                      std::size_t n_paths, std::uint64_t master_seed) {
  if (n_paths < 1) throw ConfigError("paths: need at least one path");
  const Ladder lad = check_ladder(cfg, dt_ladder);
  SolverConfig fine_cfg = cfg;
  fine_cfg.dt = lad.finest;
  std::vector<std::vector<double>> errors(n_paths, std::vector<double>(dt_ladder.size()));
  parallel_for(n_paths, [&](std::size_t i) {
    const SpectralField u0 = path_initial_field(cfg, master_seed, i);
    const BrownianPath fine = path_brownian(fine_cfg, master_seed, i);
    for (std::size_t j = 0; j < dt_ladder.size(); ++j) {
      const BrownianPath coarse = fine.coarsen(static_cast<std::size_t>(lad.factors[j]));
      SolverConfig c = cfg;
      c.dt = coarse.dt();
      const TransformComparison cmp = transform_compare(c, u0, coarse);
      if (!cmp.complete) throw StudyAbort("transform comparison aborted: " + cmp.diagnostic);
      errors[i][j] = cmp.final_discrepancy();
    }
  });
  ConvergenceStudy study;
  study.ladder.assign(dt_ladder.begin(), dt_ladder.end());
  for (std::size_t j = 0; j < dt_ladder.size(); ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n_paths; ++i) sum += errors[i][j];
    study.errors.push_back(sum / static_cast<double>(n_paths));
  }
  study.slope = slope_or_nan(study.ladder, study.errors);
  return study;
}

SpectralStudy spectral_convergence(const SolverConfig& cfg, double r, std::span<const int> n_ladder,
                                   std::uint64_t master_seed) {
  if (n_ladder.empty()) throw ConfigError("n_ladder: need at least one level");
  if (r > cfg.s) throw ConfigError("r: must not exceed s");
  RandomStream rng(master_seed, 0, StreamPurpose::initial_condition);
  const SpectralField v = make_initial_field(cfg, rng);
  SpectralStudy study;
  study.profile_norm = sobolev_norm(v, cfg.s);
  study.expected_slope = r - cfg.s;
  for (int n : n_ladder) {
    study.ladder.push_back(n);
    study.errors.push_back(sobolev_norm(v - galerkin_project(v, n), r));
  }
  study.slope = study.ladder.size() >= 2 ? slope_or_nan(study.ladder, study.errors)
                                         : std::numeric_limits<double>::quiet_NaN();
  return study;
}

double log_energy_slope(const TrajectoryRecord& record) {
  if (record.times.size() < 2) throw Error("log_energy_slope: need at least two samples");
  return least_squares_slope(record.times, record.log_energy);
}

MeanEstimate log_energy_drift(std::span<const TrajectoryRecord> records) {
  std::vector<double> slopes;
  for (const auto& r : records) slopes.push_back(log_energy_slope(r));
  return mean_with_stderr(slopes);
}

}  // namespace shks
