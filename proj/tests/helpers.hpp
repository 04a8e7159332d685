#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "shks/field.hpp"
#include "shks/grid.hpp"

namespace testutil {

using shks::Complex;

/// Random real field with every coefficient up to max_j |k_j| <= band drawn
/// from N(0, scale^2) (Hermitian-paired, Nyquist zero).
inline shks::SpectralField random_field(const shks::TorusGrid& g, std::mt19937_64& rng, int band,
                                        double scale = 1.0, double decay = 0.0) {
  std::normal_distribution<double> n(0.0, 1.0);
  shks::SpectralField f(g);
  auto c = f.coeffs();
  const auto kmax = g.k_max_abs();
  const auto k2 = g.k_squared();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const std::size_t p = g.partner(i);
    if (p < i) continue;
    if (kmax[i] > band || g.touches_nyquist(i)) continue;
    const double w = scale * std::pow(1.0 + k2[i], -0.5 * decay);
    Complex z = p == i ? Complex(n(rng), 0.0) : Complex(n(rng), n(rng));
    c[i] = w * z;
    c[p] = std::conj(c[i]);
  }
  return f;
}

/// Direct evaluation of sum_k fhat(k) e^{i k.x} at every grid point.
inline std::vector<Complex> naive_synthesis(const shks::SpectralField& f) {
  const auto& g = f.grid();
  std::vector<Complex> out(g.size());
  for (std::size_t p = 0; p < g.size(); ++p) {
    const auto x = g.point(p);
    Complex sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto k = g.wavevector(i);
      double phase = 0.0;
      for (int a = 0; a < g.dimension(); ++a) phase += k[a] * x[a];
      sum += f.coeffs()[i] * std::polar(1.0, phase);
    }
    out[p] = sum;
  }
  return out;
}

inline double max_abs_diff(const shks::SpectralField& a, const shks::SpectralField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  return m;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace testutil
