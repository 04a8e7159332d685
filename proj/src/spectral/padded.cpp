#include "shks/padded.hpp"

#include <map>
#include <memory>
#include <utility>

#include "shks/error.hpp"
#include "shks/fft.hpp"

namespace shks {

PaddedGrid::PaddedGrid(const TorusGrid& base)
    : base_(base),
      fine_(base.dimension(), 2 * base.points()),
      fine_of_base_(base.size()),
      spectrum_(fine_.size()),
      physical_(fine_.size()) {
  const int d = base_.dimension();
  const int half = base_.points() / 2;
  std::vector<int> k(d);
  for (std::size_t b = 0; b < base_.size(); ++b) {
    const auto kv = base_.wavevector(b);
    std::copy(kv.begin(), kv.end(), k.begin());
    fine_of_base_[b] = fine_.flat_index(k);

    // Every Nyquist axis doubles the number of fine targets.
    std::vector<int> nyq_axes;
    for (int a = 0; a < d; ++a) {
      if (kv[a] == half) nyq_axes.push_back(a);
    }
    const std::size_t combos = std::size_t{1} << nyq_axes.size();
    const double weight = 1.0 / static_cast<double>(combos);
    for (std::size_t m = 0; m < combos; ++m) {
      for (std::size_t j = 0; j < nyq_axes.size(); ++j) {
        k[nyq_axes[j]] = (m >> j) & 1U ? -half : half;
      }
      embed_.push_back({b, fine_.flat_index(k), weight});
    }
  }
}

void PaddedGrid::to_samples(std::span<const Complex> coeffs, std::span<double> out) {
  std::fill(spectrum_.begin(), spectrum_.end(), Complex(0.0));
  for (const Embed& e : embed_) spectrum_[e.fine] += e.weight * coeffs[e.base];
  fft::inverse(fine_.dimension(), fine_.points(), spectrum_.data(), physical_.data());
  for (std::size_t i = 0; i < physical_.size(); ++i) out[i] = physical_[i].real();
}

void PaddedGrid::to_coeffs(std::span<const double> samples, int limit, std::span<Complex> out) {
  if (limit >= base_.points() / 2) throw Error("padded restriction limit must be below M/2");
  for (std::size_t i = 0; i < physical_.size(); ++i) physical_[i] = samples[i];
  fft::forward(fine_.dimension(), fine_.points(), physical_.data(), spectrum_.data());
  const double scale = 1.0 / static_cast<double>(fine_.size());
  const auto kmax = base_.k_max_abs();
  for (std::size_t b = 0; b < base_.size(); ++b) {
    out[b] = kmax[b] <= limit ? scale * spectrum_[fine_of_base_[b]] : Complex(0.0);
  }
  // Restore exact Hermitian pairing after the forward transform.
  for (std::size_t b = 0; b < base_.size(); ++b) {
    const std::size_t p = base_.partner(b);
    if (p < b) {
      const Complex avg = 0.5 * (out[b] + std::conj(out[p]));
      out[b] = avg;
      out[p] = std::conj(avg);
    } else if (p == b) {
      out[b] = out[b].real();
    }
  }
}

PaddedGrid& padded_workspace(const TorusGrid& base) {
  thread_local std::map<std::pair<int, int>, std::unique_ptr<PaddedGrid>> cache;
  auto& slot = cache[{base.dimension(), base.points()}];
  if (!slot) slot = std::make_unique<PaddedGrid>(base);
  return *slot;
}

}  // namespace shks
