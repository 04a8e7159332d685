#pragma once

// Data-parallel inner loops of the solver.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant.  The active table is chosen once at first use from the CPU
// features; SHKS_SIMD=scalar|avx2|auto overrides the choice.
//
// Contract between variants: elementwise kernels agree bit for bit, and the
// reductions use the same 4-lane accumulation order, so they agree bit for
// bit as well.  Both translation units are compiled with -ffp-contract=off.

#include <complex>
#include <cstddef>

namespace shks::simd {

using Complex = std::complex<double>;

struct KernelTable {
  const char* name;

  /// c[i] *= w[i]
  void (*scale_by_real)(Complex* c, const double* w, std::size_t n);

  /// sum_i w[i] * |c[i]|^2
  double (*weighted_energy)(const Complex* c, const double* w, std::size_t n);

  /// Re sum_i w[i] * a[i] * conj(b[i])
  double (*weighted_inner)(const Complex* a, const Complex* b, const double* w, std::size_t n);

  /// max_i |x[i]|; 0 for n == 0.  Inputs are assumed finite.
  double (*max_abs)(const double* x, std::size_t n);

  /// acc[i] += x[i] * y[i]
  void (*multiply_accumulate)(double* acc, const double* x, const double* y, std::size_t n);

  /// out[i] = (a - 2 b u) * dot + (a u - b u^2) * (s - u)
  ///
  /// With a = b = 1 this is the hyperbolic Keller-Segel drift integrand with
  /// dot = grad S . grad u and Laplacian S = S - u.
  void (*assemble_drift)(double* out, const double* u, const double* s, const double* dot,
                         double a, double b, std::size_t n);

  /// out[i] = (u[i] - u[i]^2) * g[i]
  void (*logistic_flux)(double* out, const double* u, const double* g, std::size_t n);

  /// out[i] = x[i] + alpha * y[i] + beta * z[i]
  void (*combine3)(double* out, const double* x, const double* y, double alpha, const double* z,
                   double beta, std::size_t n);

  /// true when every x[i] is finite
  bool (*all_finite)(const double* x, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;

/// AVX2 table, or nullptr when not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_kernels() noexcept;

/// Table selected at runtime.
const KernelTable& active_kernels() noexcept;

}  // namespace shks::simd
