#include <cmath>

#include "shks/simd/kernels.hpp"

namespace shks::simd {
namespace {

void scale_by_real(Complex* c, const double* w, std::size_t n) {
  auto* d = reinterpret_cast<double*>(c);
  for (std::size_t i = 0; i < n; ++i) {
    d[2 * i] = d[2 * i] * w[i];
    d[2 * i + 1] = d[2 * i + 1] * w[i];
  }
}

// Lane layout mirrors the AVX2 kernel: a register holds two complex values
// (re0, im0, re1, im1) and accumulates into four independent lanes.
double weighted_energy(const Complex* c, const double* w, std::size_t n) {
  const auto* d = reinterpret_cast<const double*>(c);
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const double* p = d + 2 * i;
    const double wl[4] = {w[i], w[i], w[i + 1], w[i + 1]};
    for (int l = 0; l < 4; ++l) {
      const double sq = p[l] * p[l];
      lane[l] = lane[l] + sq * wl[l];
    }
  }
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) {
    const double re = d[2 * i];
    const double im = d[2 * i + 1];
    total = total + (re * re) * w[i];
    total = total + (im * im) * w[i];
  }
  return total;
}

double weighted_inner(const Complex* a, const Complex* b, const double* w, std::size_t n) {
  const auto* x = reinterpret_cast<const double*>(a);
  const auto* y = reinterpret_cast<const double*>(b);
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const double wl[4] = {w[i], w[i], w[i + 1], w[i + 1]};
    for (int l = 0; l < 4; ++l) {
      const double pr = x[2 * i + l] * y[2 * i + l];
      lane[l] = lane[l] + pr * wl[l];
    }
  }
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) {
    total = total + (x[2 * i] * y[2 * i]) * w[i];
    total = total + (x[2 * i + 1] * y[2 * i + 1]) * w[i];
  }
  return total;
}

double max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::fabs(x[i]);
    m = v > m ? v : m;
  }
  return m;
}

void multiply_accumulate(double* acc, const double* x, const double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] = acc[i] + x[i] * y[i];
}

void assemble_drift(double* out, const double* u, const double* s, const double* dot, double a,
                    double b, std::size_t n) {
  const double two_b = 2.0 * b;
  for (std::size_t i = 0; i < n; ++i) {
    const double ui = u[i];
    const double first = (a - two_b * ui) * dot[i];
    const double second = (a * ui - (b * ui) * ui) * (s[i] - ui);
    out[i] = first + second;
  }
}

void logistic_flux(double* out, const double* u, const double* g, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (u[i] - u[i] * u[i]) * g[i];
}

void combine3(double* out, const double* x, const double* y, double alpha, const double* z,
              double beta, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (x[i] + alpha * y[i]) + beta * z[i];
}

bool all_finite(const double* x, std::size_t n) {
  // x - x is NaN exactly for NaN and +-inf.
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc = acc + (x[i] - x[i]);
  return acc == 0.0;
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table{
      "scalar",       scale_by_real,  weighted_energy, weighted_inner, max_abs,
      multiply_accumulate, assemble_drift, logistic_flux, combine3,      all_finite,
  };
  return table;
}

}  // namespace shks::simd
