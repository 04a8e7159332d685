#include "shks/config.hpp"

#include <cmath>
#include <sstream>

#include "shks/error.hpp"

namespace shks {

std::string initial_kind(const InitialCondition& ic) {
  struct Visitor {
    std::string operator()(const ConstantInitial&) const { return "constant"; }
    std::string operator()(const SingleModeInitial&) const { return "single_mode"; }
    std::string operator()(const RandomSobolevInitial&) const { return "random_sobolev"; }
    std::string operator()(const PowerLawInitial&) const { return "power_law"; }
  };
  return std::visit(Visitor{}, ic);
}

long SolverConfig::steps() const {
  return static_cast<long>(std::ceil(t_final / dt - 1e-9));
}

namespace {

void check_single_mode(const SolverConfig& cfg, const SingleModeInitial& m) {
  if (static_cast<int>(m.wavevector.size()) != cfg.grid.dimension()) {
    throw ConfigError("ic.k: wavevector needs " + std::to_string(cfg.grid.dimension()) + " components");
  }
  for (int k : m.wavevector) {
    if (std::abs(k) >= cfg.grid.points() / 2) {
      throw ConfigError("ic.k: component " + std::to_string(k) + " is not below M/2");
    }
  }
  if (!std::isfinite(m.amplitude)) throw ConfigError("ic.amplitude: must be finite");
}

bool deterministic(const InitialCondition& ic) {
  return !std::holds_alternative<RandomSobolevInitial>(ic);
}

}  // namespace

std::vector<std::string> SolverConfig::validate() const {
  std::vector<std::string> warnings;
  if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("s: Sobolev index must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt: time step must be positive");
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw ConfigError("t_final: horizon must be positive");
  if (!(stop_threshold > 0.0)) throw ConfigError("stop_threshold: must be positive");
  if (record_every < 1) throw ConfigError("record_every: must be >= 1");
  if (galerkin_n < 0 || galerkin_n > grid.points() / 2) {
    throw ConfigError("galerkin.n: must lie in [1, M/2] (0 selects M/2)");
  }
  if (const auto* lin = std::get_if<LinearNoise>(&noise); lin && !std::isfinite(lin->lambda)) {
    throw ConfigError("noise.lambda: must be finite");
  }
  if (const auto* nl = std::get_if<NonlinearNoise>(&noise)) {
    (void)make_nonlinear_noise(nl->delta, nl->c_eff);
  }
  if (const auto* m = std::get_if<SingleModeInitial>(&initial)) check_single_mode(*this, *m);
  if (const auto* r = std::get_if<RandomSobolevInitial>(&initial)) {
    if (!(r->target_norm > 0.0)) throw ConfigError("ic.target_norm: must be positive");
    if (r->decay && !std::isfinite(*r->decay)) throw ConfigError("ic.decay: must be finite");
  }
  if (const auto* p = std::get_if<PowerLawInitial>(&initial)) {
    if (!std::isfinite(p->amplitude) || !std::isfinite(p->decay)) {
      throw ConfigError("ic.amplitude/ic.decay: must be finite");
    }
  }
  if (deterministic(initial)) {
    RandomStream unused(0);
    const SpectralField u0 = galerkin_project(make_initial_field(*this, unused), projection_level());
    const double w = w1inf_norm(u0);
    if (!(stop_threshold > w)) {
      std::ostringstream os;
      os << "stop_threshold: " << stop_threshold << " does not exceed ||u0||_W1inf = " << w;
      throw ConfigError(os.str());
    }
  }
  const double regime = 0.5 * grid.dimension() + 1.0;
  if (s <= regime) {
    std::ostringstream os;
    os << "s = " << s << " is not above d/2 + 1 = " << regime << "; norms are tracked but the "
       << "local theory does not apply";
    warnings.push_back(os.str());
  }
  return warnings;
}

SpectralField make_initial_field(const SolverConfig& cfg, RandomStream& rng) {
  const TorusGrid& g = cfg.grid;
  struct Visitor {
    const SolverConfig& cfg;
    const TorusGrid& g;
    RandomStream& rng;

    SpectralField operator()(const ConstantInitial& c) const { return SpectralField::constant(g, c.value); }

    SpectralField operator()(const SingleModeInitial& m) const {
      check_single_mode(cfg, m);
      SpectralField f(g);
      std::vector<int> minus(m.wavevector.size());
      for (std::size_t i = 0; i < minus.size(); ++i) minus[i] = -m.wavevector[i];
      const std::size_t plus_idx = g.flat_index(m.wavevector);
      const std::size_t minus_idx = g.flat_index(minus);
      if (plus_idx == minus_idx) {
        f.coeffs()[plus_idx] = m.amplitude;
      } else {
        f.coeffs()[plus_idx] = 0.5 * m.amplitude;
        f.coeffs()[minus_idx] = 0.5 * m.amplitude;
      }
      return f;
    }

    SpectralField operator()(const RandomSobolevInitial& r) const {
      const double decay = r.decay.value_or(cfg.s + 0.5 * g.dimension() + 0.51);
      SpectralField f(g);
      auto c = f.coeffs();
      const auto k2 = g.k_squared();
      for (std::size_t i = 0; i < c.size(); ++i) {
        const std::size_t p = g.partner(i);
        if (p < i) continue;
        Complex xi;
        if (p == i) {
          xi = rng.normal();
        } else {
          const double re = rng.normal();
          const double im = rng.normal();
          xi = Complex(re, im) * std::sqrt(0.5);
        }
        if (g.touches_nyquist(i)) xi = 0.0;
        const Complex value = xi * std::pow(1.0 + k2[i], -0.5 * decay);
        c[i] = value;
        c[p] = std::conj(value);
      }
      const double norm = sobolev_norm(f, cfg.s);
      if (norm == 0.0) throw Error("random initial field drew an all-zero sample");
      f *= r.target_norm / norm;
      return f;
    }

    SpectralField operator()(const PowerLawInitial& p) const {
      SpectralField f(g);
      auto c = f.coeffs();
      const auto k2 = g.k_squared();
      for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] = g.touches_nyquist(i) ? 0.0 : p.amplitude * std::pow(1.0 + k2[i], -0.5 * p.decay);
      }
      return f;
    }
  };
  return std::visit(Visitor{cfg, g, rng}, cfg.initial);
}

InitialCondition with_initial_norm(const SolverConfig& cfg, double norm) {
  if (!(norm >= 0.0)) throw ConfigError("initial norm must be non-negative");
  InitialCondition ic = cfg.initial;
  if (auto* r = std::get_if<RandomSobolevInitial>(&ic)) {
    r->target_norm = norm;
    return ic;
  }
  RandomStream unused(0);
  const double current = sobolev_norm(make_initial_field(cfg, unused), cfg.s);
  if (current == 0.0) throw ConfigError("initial condition is zero and cannot be rescaled");
  const double factor = norm / current;
  if (auto* c = std::get_if<ConstantInitial>(&ic)) c->value *= factor;
  if (auto* m = std::get_if<SingleModeInitial>(&ic)) m->amplitude *= factor;
  if (auto* p = std::get_if<PowerLawInitial>(&ic)) p->amplitude *= factor;
  return ic;
}

}  // namespace shks
