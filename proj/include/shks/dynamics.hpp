#pragma once

#include <optional>
#include <string>
#include <variant>

#include "shks/field.hpp"

namespace shks {

// Noise models for sigma(t, u) dW with a single scalar Brownian motion.
//
// Any model plugged in here is expected to satisfy, for s > d/2 + 1,
//   ||sigma(u)||_{H^s}            <= beta(||u||_{W1inf}) (1 + ||u||_{H^s})
//   ||sigma(u) - sigma(v)||_{H^s} <= gamma(||u||_{W1inf} + ||v||_{W1inf}) ||u - v||_{H^s}
// with beta >= 1 and gamma increasing and locally bounded.  For the linear
// model beta = gamma = max(1, |lambda|); for the nonlinear one
// beta(x) = max(1, c_eff) (1 + x)^delta.  None of this is checked at runtime.

struct ZeroNoise {
  friend bool operator==(const ZeroNoise&, const ZeroNoise&) = default;
};

/// sigma(u) = lambda u.  lambda may be negative.
struct LinearNoise {
  double lambda = 0.0;
  friend bool operator==(const LinearNoise&, const LinearNoise&) = default;
};

/// sigma(u) = c_eff (1 + ||u||_{W1inf})^delta u.
///
/// A family sum_i c_i (...) u dW_i acts on a single field shape, so it equals
/// in law one Brownian motion with c_eff = (sum_i c_i^2)^{1/2}.
struct NonlinearNoise {
  double delta = 1.0;
  double c_eff = 1.0;
  friend bool operator==(const NonlinearNoise&, const NonlinearNoise&) = default;
};

using NoiseModel = std::variant<ZeroNoise, LinearNoise, NonlinearNoise>;

/// Validates delta >= 0 and c_eff > 0.
NoiseModel make_nonlinear_noise(double delta, double c_eff);

std::string noise_name(const NoiseModel& model);

/// Cut-off radius R of theta_R, or unbounded (theta == 1).
class CutoffSpec {
 public:
  static CutoffSpec unbounded() { return CutoffSpec(); }
  static CutoffSpec radius(double r);

  bool bounded() const noexcept { return radius_.has_value(); }
  double value() const { return radius_.value(); }

  friend bool operator==(const CutoffSpec&, const CutoffSpec&) = default;

 private:
  CutoffSpec() = default;
  std::optional<double> radius_;
};

/// S = (1 - Laplacian)^{-1} u.
SpectralField helmholtz_solve(const SpectralField& u);

/// G(u) = (1 - 2u) grad S . grad u + (u - u^2) Laplacian S, with
/// Laplacian S = S - u.  Products are exact (padded grid) and the result is
/// 2/3-dealiased.  Throws NonFiniteError if any intermediate is not finite.
SpectralField drift(const SpectralField& u);

/// (a - 2 b v) grad S(v) . grad v + (a v - b v^2) Laplacian S(v); drift() is
/// the case a = b = 1.  Same product and dealiasing treatment as drift().
SpectralField weighted_drift(const SpectralField& v, double a, double b);

/// div(u (1 - u) grad S), the conservative form of the same vector field.
SpectralField drift_divergence_form(const SpectralField& u);

/// Smooth cut-off: 1 on [0, R], 0 on [2R, inf), quintic smoothstep between
/// (value 1/2 at 3R/2).  Always 1 for an unbounded spec.  x must be >= 0.
double cutoff_theta(double x, const CutoffSpec& spec);

/// theta_R(||u||_{W1inf}) P_n drift(u).
SpectralField truncated_drift(const SpectralField& u, const CutoffSpec& spec, int n);
/// Same, with ||u||_{W1inf} already known.
SpectralField truncated_drift(const SpectralField& u, const CutoffSpec& spec, int n, double w1inf);

/// sigma(u) for the model; multiplies one scalar Brownian increment.  All
/// models are autonomous, so `t` is accepted and ignored.
SpectralField diffusion_coefficient(const SpectralField& u, const NoiseModel& model, double t = 0.0);
SpectralField diffusion_coefficient(const SpectralField& u, const NoiseModel& model, double t,
                                    double w1inf);

}  // namespace shks
