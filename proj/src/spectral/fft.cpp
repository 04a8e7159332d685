#include "shks/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace shks::fft {
namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is.  Plans are unaligned so any std::vector storage is accepted.
fftw_plan plan_for(int dimension, int points, int sign) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, fftw_plan> cache;

  std::lock_guard lock(mutex);
  const auto key = std::make_tuple(dimension, points, sign);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  std::size_t size = 1;
  std::vector<int> dims(dimension, points);
  for (int a = 0; a < dimension; ++a) size *= static_cast<std::size_t>(points);
  std::vector<Complex> a(size), b(size);
  fftw_plan plan = fftw_plan_dft(dimension, dims.data(), reinterpret_cast<fftw_complex*>(a.data()),
                                 reinterpret_cast<fftw_complex*>(b.data()), sign,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_PRESERVE_INPUT);
  cache.emplace(key, plan);
  return plan;
}

}  // namespace

void forward(int dimension, int points, const Complex* in, Complex* out) {
  fftw_execute_dft(plan_for(dimension, points, FFTW_FORWARD),
                   reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void inverse(int dimension, int points, const Complex* in, Complex* out) {
  fftw_execute_dft(plan_for(dimension, points, FFTW_BACKWARD),
                   reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace shks::fft
