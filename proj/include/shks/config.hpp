#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "shks/dynamics.hpp"
#include "shks/field.hpp"
#include "shks/grid.hpp"
#include "shks/rng.hpp"

namespace shks {

struct ConstantInitial {
  double value = 0.0;
  friend bool operator==(const ConstantInitial&, const ConstantInitial&) = default;
};

/// amplitude * cos(k . x)
struct SingleModeInitial {
  double amplitude = 0.1;
  std::vector<int> wavevector{1};
  friend bool operator==(const SingleModeInitial&, const SingleModeInitial&) = default;
};

/// Coefficients xi_k (1+|k|^2)^{-decay/2} with xi_k complex standard normal
/// (Hermitian-paired, Nyquist zeroed), rescaled so ||u||_{H^s} = target_norm.
/// Without a decay the default s + d/2 + 0.51 puts the field in H^s a.s.
struct RandomSobolevInitial {
  double target_norm = 0.1;
  std::optional<double> decay;
  friend bool operator==(const RandomSobolevInitial&, const RandomSobolevInitial&) = default;
};

/// Deterministic amplitude * (1+|k|^2)^{-decay/2} for every k (Nyquist
/// zeroed); a field of known Sobolev regularity.
struct PowerLawInitial {
  double amplitude = 1.0;
  double decay = 4.0;
  friend bool operator==(const PowerLawInitial&, const PowerLawInitial&) = default;
};

using InitialCondition =
    std::variant<ConstantInitial, SingleModeInitial, RandomSobolevInitial, PowerLawInitial>;

std::string initial_kind(const InitialCondition& ic);

struct SolverConfig {
  TorusGrid grid{1, 128};
  /// Sobolev index of the tracked H^s norm.
  double s = 2.0;
  double dt = 1e-3;
  double t_final = 1.0;
  CutoffSpec cutoff = CutoffSpec::unbounded();
  /// Galerkin level n; 0 selects M/2 (no truncation).
  int galerkin_n = 0;
  NoiseModel noise = ZeroNoise{};
  /// ||u||_{W1inf} level at which a path is declared stopped.
  double stop_threshold = 1e3;
  int record_every = 10;
  InitialCondition initial = SingleModeInitial{};

  int projection_level() const noexcept { return galerkin_n == 0 ? grid.points() / 2 : galerkin_n; }
  /// ceil(t_final / dt), tolerant of round-off in the ratio.
  long steps() const;

  /// Throws ConfigError naming the first invalid field.  Returns warnings
  /// (e.g. s <= d/2 + 1, below the well-posedness regime).
  std::vector<std::string> validate() const;

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

/// Builds u_0.  Only RandomSobolevInitial consumes `rng`.
SpectralField make_initial_field(const SolverConfig& cfg, RandomStream& rng);

/// Same initial condition rescaled so that ||u_0||_{H^s} = norm (constant
/// and deterministic kinds are rescaled analytically).
InitialCondition with_initial_norm(const SolverConfig& cfg, double norm);

}  // namespace shks
