#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace shks {

/// Uniform grid on the torus [0, 2pi)^d with M points per axis.
///
/// Flat indices are row-major (last axis fastest), matching the FFT layout.
/// Index j on an axis carries the wavenumber j for j <= M/2 and j - M
/// otherwise, so the lattice per axis is {-M/2+1, ..., M/2}.
class TorusGrid {
 public:
  TorusGrid(int dimension, int points_per_dim);

  int dimension() const noexcept { return dimension_; }
  int points() const noexcept { return points_; }
  std::size_t size() const noexcept { return size_; }
  double spacing() const noexcept;

  /// Wavenumber of axis index j.
  int wavenumber(int j) const noexcept { return j <= points_ / 2 ? j : j - points_; }
  /// Axis index holding wavenumber k (any integer, reduced mod M).
  int axis_index(int k) const noexcept;

  /// Wavevector of a flat index (d integers).
  std::span<const int> wavevector(std::size_t flat) const noexcept {
    return {tables_->wavevectors.data() + flat * dimension_, static_cast<std::size_t>(dimension_)};
  }
  /// |k|^2 for every flat index.
  std::span<const double> k_squared() const noexcept { return tables_->k_squared; }
  /// max_j |k_j| for every flat index.
  std::span<const int> k_max_abs() const noexcept { return tables_->k_max_abs; }
  /// Flat index of -k.
  std::size_t partner(std::size_t flat) const noexcept { return tables_->partner[flat]; }
  /// True when some component of k equals the unmatched Nyquist wavenumber M/2.
  bool touches_nyquist(std::size_t flat) const noexcept { return tables_->nyquist[flat] != 0; }

  std::size_t flat_index(std::span<const int> k) const;

  /// Cut-off of the 2/3 rule, floor(M/3).
  int dealias_limit() const noexcept { return points_ / 3; }

  /// Coordinates of a grid point.
  std::vector<double> point(std::size_t flat) const;

  friend bool operator==(const TorusGrid& a, const TorusGrid& b) noexcept {
    return a.dimension_ == b.dimension_ && a.points_ == b.points_;
  }

 private:
  struct Tables {
    std::vector<int> wavevectors;
    std::vector<double> k_squared;
    std::vector<int> k_max_abs;
    std::vector<std::size_t> partner;
    std::vector<unsigned char> nyquist;
  };

  int dimension_;
  int points_;
  std::size_t size_;
  std::shared_ptr<const Tables> tables_;
};

}  // namespace shks
