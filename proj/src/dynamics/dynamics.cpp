#include "shks/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "shks/error.hpp"
#include "shks/padded.hpp"
#include "shks/simd/kernels.hpp"

namespace shks {

NoiseModel make_nonlinear_noise(double delta, double c_eff) {
  if (!(delta >= 0.0)) throw ConfigError("noise.delta: must be >= 0");
  if (!(c_eff > 0.0)) throw ConfigError("noise.c_eff: must be > 0");
  return NonlinearNoise{delta, c_eff};
}

std::string noise_name(const NoiseModel& model) {
  struct Visitor {
    std::string operator()(const ZeroNoise&) const { return "zero"; }
    std::string operator()(const LinearNoise&) const { return "linear"; }
    std::string operator()(const NonlinearNoise&) const { return "nonlinear"; }
  };
  return std::visit(Visitor{}, model);
}

CutoffSpec CutoffSpec::radius(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("cutoff.R: radius must be positive and finite");
  CutoffSpec spec;
  spec.radius_ = r;
  return spec;
}

SpectralField helmholtz_solve(const SpectralField& u) {
  SpectralField s = u;
  const auto k2 = u.grid().k_squared();
  auto c = s.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] /= 1.0 + k2[i];
  return s;
}

namespace {

struct Scratch {
  std::vector<double> u, s, dot, a, b, out;
  std::vector<Complex> grad;

  void resize(std::size_t fine, std::size_t base) {
    if (u.size() != fine) {
      for (auto* v : {&u, &s, &dot, &a, &b, &out}) v->assign(fine, 0.0);
    }
    grad.resize(base);
  }
};

Scratch& scratch() {
  thread_local Scratch sc;
  return sc;
}

// Coefficients of d/dx_axis (Nyquist on that axis dropped).
void derivative(const SpectralField& f, int axis, std::span<Complex> out) {
  const TorusGrid& g = f.grid();
  const int nyq = g.points() / 2;
  const auto c = f.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const int k = g.wavevector(i)[axis];
    out[i] = k == nyq ? Complex(0.0) : Complex(0.0, k) * c[i];
  }
}

void require_finite(const simd::KernelTable& kt, const std::vector<double>& v, const char* what) {
  if (!kt.all_finite(v.data(), v.size())) {
    throw NonFiniteError(std::string("non-finite value in ") + what, std::nan(""));
  }
}

}  // namespace

SpectralField weighted_drift(const SpectralField& v, double a, double b) {
  const TorusGrid& g = v.grid();
  const auto& kt = simd::active_kernels();
  PaddedGrid& pad = padded_workspace(g);
  Scratch& sc = scratch();
  sc.resize(pad.fine_size(), g.size());

  const SpectralField s = helmholtz_solve(v);
  pad.to_samples(v.coeffs(), sc.u);
  pad.to_samples(s.coeffs(), sc.s);
  std::fill(sc.dot.begin(), sc.dot.end(), 0.0);
  for (int axis = 0; axis < g.dimension(); ++axis) {
    derivative(v, axis, sc.grad);
    pad.to_samples(sc.grad, sc.a);
    derivative(s, axis, sc.grad);
    pad.to_samples(sc.grad, sc.b);
    kt.multiply_accumulate(sc.dot.data(), sc.a.data(), sc.b.data(), sc.dot.size());
  }
  kt.assemble_drift(sc.out.data(), sc.u.data(), sc.s.data(), sc.dot.data(), a, b, sc.out.size());
  require_finite(kt, sc.out, "drift");

  SpectralField result(g);
  pad.to_coeffs(sc.out, g.dealias_limit(), result.coeffs());
  return result;
}

SpectralField drift(const SpectralField& u) { return weighted_drift(u, 1.0, 1.0); }

SpectralField drift_divergence_form(const SpectralField& u) {
  const TorusGrid& g = u.grid();
  const auto& kt = simd::active_kernels();
  PaddedGrid& pad = padded_workspace(g);
  Scratch& sc = scratch();
  sc.resize(pad.fine_size(), g.size());

  const SpectralField s = helmholtz_solve(u);
  pad.to_samples(u.coeffs(), sc.u);
  SpectralField result(g);
  SpectralField flux(g);
  for (int axis = 0; axis < g.dimension(); ++axis) {
    derivative(s, axis, sc.grad);
    pad.to_samples(sc.grad, sc.b);
    kt.logistic_flux(sc.out.data(), sc.u.data(), sc.b.data(), sc.out.size());
    require_finite(kt, sc.out, "drift flux");
    pad.to_coeffs(sc.out, g.dealias_limit(), flux.coeffs());
    derivative(flux, axis, sc.grad);
    for (std::size_t i = 0; i < g.size(); ++i) result.coeffs()[i] += sc.grad[i];
  }
  return result;
}

double cutoff_theta(double x, const CutoffSpec& spec) {
  if (!(x >= 0.0)) {
    std::ostringstream os;
    os << "cutoff argument must be >= 0 (got " << x << ")";
    throw Error(os.str());
  }
  if (!spec.bounded()) return 1.0;
  const double y = x / spec.value() - 1.0;
  if (y <= 0.0) return 1.0;
  if (y >= 1.0) return 0.0;
  const double smooth = y * y * y * (10.0 + y * (-15.0 + 6.0 * y));
  return 1.0 - smooth;
}

SpectralField truncated_drift(const SpectralField& u, const CutoffSpec& spec, int n) {
  return truncated_drift(u, spec, n, spec.bounded() ? w1inf_norm(u) : 0.0);
}

SpectralField truncated_drift(const SpectralField& u, const CutoffSpec& spec, int n, double w1inf) {
  const double theta = cutoff_theta(w1inf, spec);
  if (theta == 0.0) {
    (void)galerkin_project(u, n);  // still validates n
    return SpectralField(u.grid());
  }
  SpectralField g = galerkin_project(drift(u), n);
  if (theta != 1.0) g *= theta;
  return g;
}

SpectralField diffusion_coefficient(const SpectralField& u, const NoiseModel& model, double t) {
  const bool needs_norm = std::holds_alternative<NonlinearNoise>(model);
  return diffusion_coefficient(u, model, t, needs_norm ? w1inf_norm(u) : 0.0);
}

SpectralField diffusion_coefficient(const SpectralField& u, const NoiseModel& model, double /*t*/,
                                    double w1inf) {
  struct Visitor {
    const SpectralField& u;
    double w1inf;
    SpectralField operator()(const ZeroNoise&) const { return SpectralField(u.grid()); }
    SpectralField operator()(const LinearNoise& m) const { return m.lambda * u; }
    SpectralField operator()(const NonlinearNoise& m) const {
      return (m.c_eff * std::pow(1.0 + w1inf, m.delta)) * u;
    }
  };
  return std::visit(Visitor{u, w1inf}, model);
}

}  // namespace shks
