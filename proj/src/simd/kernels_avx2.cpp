#include <immintrin.h>

#include <cmath>

#include "shks/simd/kernels.hpp"

namespace shks::simd {
namespace {

// Broadcast (w[i], w[i], w[i+1], w[i+1]) for a pair of interleaved complex values.
inline __m256d pair_weights(const double* w) {
  const __m128d two = _mm_loadu_pd(w);
  const __m256d wide = _mm256_castpd128_pd256(two);
  const __m256d both = _mm256_insertf128_pd(wide, two, 1);
  return _mm256_permute_pd(both, 0b1100);
}

void scale_by_real(Complex* c, const double* w, std::size_t n) {
  auto* d = reinterpret_cast<double*>(c);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(d + 2 * i);
    _mm256_storeu_pd(d + 2 * i, _mm256_mul_pd(v, pair_weights(w + i)));
  }
  for (; i < n; ++i) {
    d[2 * i] = d[2 * i] * w[i];
    d[2 * i + 1] = d[2 * i + 1] * w[i];
  }
}

double weighted_energy(const Complex* c, const double* w, std::size_t n) {
  const auto* d = reinterpret_cast<const double*>(c);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(d + 2 * i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_mul_pd(v, v), pair_weights(w + i)));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
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
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(x + 2 * i), _mm256_loadu_pd(y + 2 * i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(p, pair_weights(w + i)));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) {
    total = total + (x[2 * i] * y[2 * i]) * w[i];
    total = total + (x[2 * i + 1] * y[2 * i + 1]) * w[i];
  }
  return total;
}

double max_abs(const double* x, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    m = _mm256_max_pd(m, _mm256_andnot_pd(sign, _mm256_loadu_pd(x + i)));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, m);
  double r = 0.0;
  for (double v : lane) r = v > r ? v : r;
  for (; i < n; ++i) {
    const double v = std::fabs(x[i]);
    r = v > r ? v : r;
  }
  return r;
}

void multiply_accumulate(double* acc, const double* x, const double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), p));
  }
  for (; i < n; ++i) acc[i] = acc[i] + x[i] * y[i];
}

void assemble_drift(double* out, const double* u, const double* s, const double* dot, double a,
                    double b, std::size_t n) {
  const double two_b = 2.0 * b;
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  const __m256d v2b = _mm256_set1_pd(two_b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ui = _mm256_loadu_pd(u + i);
    const __m256d first = _mm256_mul_pd(_mm256_sub_pd(va, _mm256_mul_pd(v2b, ui)), _mm256_loadu_pd(dot + i));
    const __m256d logistic = _mm256_sub_pd(_mm256_mul_pd(va, ui), _mm256_mul_pd(_mm256_mul_pd(vb, ui), ui));
    const __m256d second = _mm256_mul_pd(logistic, _mm256_sub_pd(_mm256_loadu_pd(s + i), ui));
    _mm256_storeu_pd(out + i, _mm256_add_pd(first, second));
  }
  for (; i < n; ++i) {
    const double ui = u[i];
    const double first = (a - two_b * ui) * dot[i];
    const double second = (a * ui - (b * ui) * ui) * (s[i] - ui);
    out[i] = first + second;
  }
}

void logistic_flux(double* out, const double* u, const double* g, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ui = _mm256_loadu_pd(u + i);
    const __m256d l = _mm256_sub_pd(ui, _mm256_mul_pd(ui, ui));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(l, _mm256_loadu_pd(g + i)));
  }
  for (; i < n; ++i) out[i] = (u[i] - u[i] * u[i]) * g[i];
}

void combine3(double* out, const double* x, const double* y, double alpha, const double* z,
              double beta, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  const __m256d vb = _mm256_set1_pd(beta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_mul_pd(va, _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(out + i, _mm256_add_pd(t, _mm256_mul_pd(vb, _mm256_loadu_pd(z + i))));
  }
  for (; i < n; ++i) out[i] = (x[i] + alpha * y[i]) + beta * z[i];
}

bool all_finite(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_add_pd(acc, _mm256_sub_pd(v, v));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) total = total + (x[i] - x[i]);
  return total == 0.0;
}

}  // namespace

const KernelTable& avx2_table() noexcept {
  static const KernelTable table{
      "avx2",         scale_by_real,  weighted_energy, weighted_inner, max_abs,
      multiply_accumulate, assemble_drift, logistic_flux, combine3,      all_finite,
  };
  return table;
}

}  // namespace shks::simd
