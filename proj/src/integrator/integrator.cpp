#include "shks/integrator.hpp"

#include <cmath>
#include <limits>

#include "shks/dynamics.hpp"
#include "shks/error.hpp"
#include "shks/simd/kernels.hpp"

namespace shks {

namespace {

const double* as_doubles(const SpectralField& f) { return reinterpret_cast<const double*>(f.coeffs().data()); }
double* as_doubles(SpectralField& f) { return reinterpret_cast<double*>(f.coeffs().data()); }

bool needs_w1inf(const SolverConfig& cfg) {
  return cfg.cutoff.bounded() || std::holds_alternative<NonlinearNoise>(cfg.noise);
}

}  // namespace

std::string status_name(PathStatus status) {
  switch (status) {
    case PathStatus::survived: return "survived";
    case PathStatus::stopped: return "stopped";
    case PathStatus::non_finite: return "non_finite";
  }
  return "unknown";
}

double log_energy(double hs_norm) { return std::log(std::exp(1.0) + hs_norm * hs_norm); }

SpectralField em_step(const SpectralField& u, double t, double dW, const SolverConfig& cfg) {
  return em_step(u, t, dW, cfg, needs_w1inf(cfg) ? w1inf_norm(u) : 0.0);
}

SpectralField em_step(const SpectralField& u, double t, double dW, const SolverConfig& cfg, double w1inf) {
  const double t_next = t + cfg.dt;
  const int n = cfg.projection_level();
  const auto& kt = simd::active_kernels();
  try {
    const SpectralField g = truncated_drift(u, cfg.cutoff, n, w1inf);
    const SpectralField sigma = galerkin_project(diffusion_coefficient(u, cfg.noise, t, w1inf), n);
    SpectralField out(u.grid());
    const std::size_t len = 2 * u.size();
    kt.combine3(as_doubles(out), as_doubles(u), as_doubles(g), -cfg.dt, as_doubles(sigma), dW, len);
    if (!kt.all_finite(as_doubles(out), len)) {
      throw NonFiniteError("Euler-Maruyama step produced a non-finite state", t_next);
    }
    return out;
  } catch (const NonFiniteError& e) {
    if (std::isnan(e.time())) throw NonFiniteError(e.what(), t_next);
    throw;
  }
}

TrajectoryRecord run_trajectory(const SolverConfig& cfg, const SpectralField& u0,
                                std::span<const double> increments) {
  const long steps = cfg.steps();
  if (increments.size() < static_cast<std::size_t>(steps)) {
    throw Error("run_trajectory: " + std::to_string(increments.size()) + " increments for " +
                std::to_string(steps) + " steps");
  }
  TrajectoryRecord rec;
  rec.t_event = std::numeric_limits<double>::quiet_NaN();
  SpectralField u = galerkin_project(u0, cfg.projection_level());
  rec.initial_state = u;

  double w = w1inf_norm(u);
  double hs = sobolev_norm(u, cfg.s);
  auto sample = [&](double t) {
    rec.times.push_back(t);
    rec.hs_norms.push_back(hs);
    rec.w1inf_norms.push_back(w);
    rec.log_energy.push_back(log_energy(hs));
  };
  auto finish = [&](PathStatus status, double t) {
    rec.status = status;
    rec.t_event = t;
    rec.final_state = u;
    return rec;
  };

  if (!std::isfinite(w) || !std::isfinite(hs)) {
    rec.diagnostic = "initial data is not finite";
    return finish(PathStatus::non_finite, 0.0);
  }
  sample(0.0);
  if (w >= cfg.stop_threshold) return finish(PathStatus::stopped, 0.0);

  for (long step = 1; step <= steps; ++step) {
    const double t_prev = static_cast<double>(step - 1) * cfg.dt;
    const double t = static_cast<double>(step) * cfg.dt;
    try {
      u = em_step(u, t_prev, increments[step - 1], cfg, w);
    } catch (const NonFiniteError& e) {
      rec.diagnostic = e.what();
      return finish(PathStatus::non_finite, e.time());
    }
    w = w1inf_norm(u);
    hs = sobolev_norm(u, cfg.s);
    if (!std::isfinite(w) || !std::isfinite(hs)) {
      rec.diagnostic = "norm overflow";
      return finish(PathStatus::non_finite, t);
    }
    if (w >= cfg.stop_threshold) {
      sample(t);
      return finish(PathStatus::stopped, t);
    }
    if (step % cfg.record_every == 0 || step == steps) sample(t);
  }
  rec.status = PathStatus::survived;
  rec.final_state = u;
  return rec;
}

SpectralField path_initial_field(const SolverConfig& cfg, std::uint64_t master_seed, std::uint64_t path_index) {
  RandomStream rng(master_seed, path_index, StreamPurpose::initial_condition);
  return make_initial_field(cfg, rng);
}

BrownianPath path_brownian(const SolverConfig& cfg, std::uint64_t master_seed, std::uint64_t path_index) {
  RandomStream rng(master_seed, path_index, StreamPurpose::brownian);
  return BrownianPath(rng, cfg.dt, static_cast<std::size_t>(cfg.steps()));
}

TrajectoryRecord run_path(const SolverConfig& cfg, std::uint64_t master_seed, std::uint64_t path_index) {
  const SpectralField u0 = path_initial_field(cfg, master_seed, path_index);
  const BrownianPath path = path_brownian(cfg, master_seed, path_index);
  TrajectoryRecord rec = run_trajectory(cfg, u0, path.increments());
  rec.seed = derive_seed(master_seed, path_index, StreamPurpose::brownian);
  return rec;
}

SpectralField integrate_to_end(const SolverConfig& cfg, const SpectralField& u0, const BrownianPath& path) {
  const long steps = cfg.steps();
  const auto inc = path.increments();
  if (inc.size() != static_cast<std::size_t>(steps)) {
    throw Error("integrate_to_end: Brownian path has " + std::to_string(inc.size()) + " increments, " +
                std::to_string(steps) + " steps needed");
  }
  SpectralField u = galerkin_project(u0, cfg.projection_level());
  for (long step = 0; step < steps; ++step) {
    u = em_step(u, static_cast<double>(step) * cfg.dt, inc[step], cfg);
  }
  return u;
}

}  // namespace shks
