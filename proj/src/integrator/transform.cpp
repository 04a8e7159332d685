#include <algorithm>
#include <cmath>

#include "shks/dynamics.hpp"
#include "shks/error.hpp"
#include "shks/integrator.hpp"
#include "shks/simd/kernels.hpp"

namespace shks {

double doss_sussmann_mu(double t, double w, double lambda) {
  return std::exp(0.5 * lambda * lambda * t - lambda * w);
}

SpectralField random_pde_step(const SpectralField& v, double mu, double dt, const SolverConfig& cfg) {
  if (!(mu > 0.0)) throw Error("random_pde_step: mu must be positive");
  const double inv = 1.0 / mu;
  const auto& kt = simd::active_kernels();
  const SpectralField g = galerkin_project(weighted_drift(v, inv, inv * inv), cfg.projection_level());
  SpectralField out(v.grid());
  const std::size_t len = 2 * v.size();
  const auto* x = reinterpret_cast<const double*>(v.coeffs().data());
  const auto* y = reinterpret_cast<const double*>(g.coeffs().data());
  auto* o = reinterpret_cast<double*>(out.coeffs().data());
  kt.combine3(o, x, y, -dt, y, 0.0, len);
  if (!kt.all_finite(o, len)) throw NonFiniteError("random PDE step produced a non-finite state", std::nan(""));
  return out;
}

double TransformComparison::max_discrepancy() const {
  double m = 0.0;
  for (double d : discrepancy) m = std::max(m, d);
  return m;
}

TransformComparison transform_compare(const SolverConfig& cfg, const SpectralField& u0, const BrownianPath& path) {
  const auto* lin = std::get_if<LinearNoise>(&cfg.noise);
  if (!lin) throw ConfigError("noise.type: transform comparison needs linear noise");
  if (cfg.cutoff.bounded()) throw ConfigError("cutoff.R: transform comparison runs without a cut-off");
  const long steps = cfg.steps();
  const auto inc = path.increments();
  if (inc.size() != static_cast<std::size_t>(steps) || path.dt() != cfg.dt) {
    throw Error("transform_compare: Brownian path does not match dt and horizon");
  }
  const double lambda = lin->lambda;

  TransformComparison cmp;
  SpectralField u = galerkin_project(u0, cfg.projection_level());
  SpectralField v = u;
  double w_t = 0.0;
  auto sample = [&](double t) {
    const double mu = doss_sussmann_mu(t, w_t, lambda);
    cmp.times.push_back(t);
    cmp.discrepancy.push_back(sobolev_norm(u - (1.0 / mu) * v, cfg.s));
  };
  sample(0.0);
  for (long step = 1; step <= steps; ++step) {
    const double t_prev = static_cast<double>(step - 1) * cfg.dt;
    const double t = static_cast<double>(step) * cfg.dt;
    try {
      const double mu_prev = doss_sussmann_mu(t_prev, w_t, lambda);
      u = em_step(u, t_prev, inc[step - 1], cfg);
      v = random_pde_step(v, mu_prev, cfg.dt, cfg);
    } catch (const NonFiniteError& e) {
      cmp.complete = false;
      cmp.diagnostic = std::string(e.what()) + " at t = " + std::to_string(t);
      return cmp;
    }
    w_t += inc[step - 1];
    if (step % cfg.record_every == 0 || step == steps) sample(t);
  }
  return cmp;
}

TransformComparison transform_compare(const SolverConfig& cfg, std::uint64_t master_seed, std::uint64_t path_index) {
  return transform_compare(cfg, path_initial_field(cfg, master_seed, path_index),
                           path_brownian(cfg, master_seed, path_index));
}

}  // namespace shks
