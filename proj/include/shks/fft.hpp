#pragma once

#include <complex>

namespace shks::fft {

using Complex = std::complex<double>;

/// Unnormalized complex DFT over a d-dimensional M^d grid, out-of-place.
///   forward: out[k] = sum_x in[x] e^{-i k.x}
///   inverse: out[x] = sum_k in[k] e^{+i k.x}
/// Thread-safe; plans are created once per shape and shared.
void forward(int dimension, int points, const Complex* in, Complex* out);
void inverse(int dimension, int points, const Complex* in, Complex* out);

}  // namespace shks::fft
