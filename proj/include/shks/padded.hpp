#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "shks/field.hpp"
#include "shks/grid.hpp"

namespace shks {

/// Exact pointwise products of band-limited fields.
///
/// Fields with wavenumbers |k_j| <= M/2 are sampled on a grid with 2M points
/// per axis.  Any product of up to three such fields has |k_j| <= 3M/2 and
/// aliases on the fine grid only onto |k_j| >= M/2, so the coefficients
/// recovered for |k_j| < M/2 are exact.  The Nyquist coefficient of the base
/// grid is split evenly between +M/2 and -M/2 (the cosine interpolant).
class PaddedGrid {
 public:
  explicit PaddedGrid(const TorusGrid& base);

  const TorusGrid& base() const noexcept { return base_; }
  const TorusGrid& fine() const noexcept { return fine_; }
  std::size_t fine_size() const noexcept { return fine_.size(); }

  /// Samples of the trigonometric interpolant of `coeffs` (base layout).
  void to_samples(std::span<const Complex> coeffs, std::span<double> out);

  /// Coefficients of fine samples for max_j |k_j| <= limit (limit < M/2),
  /// written in base layout; all other base coefficients are set to zero.
  void to_coeffs(std::span<const double> samples, int limit, std::span<Complex> out);

 private:
  struct Embed {
    std::size_t base;
    std::size_t fine;
    double weight;
  };

  TorusGrid base_;
  TorusGrid fine_;
  std::vector<Embed> embed_;
  std::vector<std::size_t> fine_of_base_;
  std::vector<Complex> spectrum_;
  std::vector<Complex> physical_;
};

/// Per-thread workspace for a base grid (lazily constructed, reused).
PaddedGrid& padded_workspace(const TorusGrid& base);

}  // namespace shks
