#include "shks/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "shks/error.hpp"

namespace shks {

TorusGrid::TorusGrid(int dimension, int points_per_dim)
    : dimension_(dimension), points_(points_per_dim), size_(1) {
  if (dimension < 1 || dimension > 3) {
    throw ConfigError("grid.d: dimension must be 1, 2 or 3 (got " + std::to_string(dimension) + ")");
  }
  if (points_per_dim < 4 || points_per_dim % 2 != 0) {
    throw ConfigError("grid.M: points per dimension must be even and >= 4 (got " +
                      std::to_string(points_per_dim) + ")");
  }
  for (int a = 0; a < dimension; ++a) size_ *= static_cast<std::size_t>(points_per_dim);

  auto t = std::make_shared<Tables>();
  t->wavevectors.resize(size_ * dimension_);
  t->k_squared.resize(size_);
  t->k_max_abs.resize(size_);
  t->partner.resize(size_);
  t->nyquist.resize(size_);

  const int half = points_ / 2;
  for (std::size_t flat = 0; flat < size_; ++flat) {
    std::size_t rest = flat;
    std::size_t partner = 0;
    std::size_t stride = size_;
    double k2 = 0.0;
    int kmax = 0;
    bool nyq = false;
    for (int a = 0; a < dimension_; ++a) {
      stride /= static_cast<std::size_t>(points_);
      const int j = static_cast<int>(rest / stride);
      rest %= stride;
      const int k = wavenumber(j);
      t->wavevectors[flat * dimension_ + a] = k;
      k2 += static_cast<double>(k) * k;
      kmax = std::max(kmax, std::abs(k));
      nyq = nyq || k == half;
      partner += static_cast<std::size_t>((points_ - j) % points_) * stride;
    }
    t->k_squared[flat] = k2;
    t->k_max_abs[flat] = kmax;
    t->partner[flat] = partner;
    t->nyquist[flat] = nyq ? 1 : 0;
  }
  tables_ = std::move(t);
}

double TorusGrid::spacing() const noexcept {
  return 2.0 * std::numbers::pi / static_cast<double>(points_);
}

int TorusGrid::axis_index(int k) const noexcept {
  const int r = k % points_;
  return r < 0 ? r + points_ : r;
}

std::size_t TorusGrid::flat_index(std::span<const int> k) const {
  if (static_cast<int>(k.size()) != dimension_) {
    throw Error("wavevector has " + std::to_string(k.size()) + " components, grid dimension is " +
                std::to_string(dimension_));
  }
  std::size_t flat = 0;
  for (int a = 0; a < dimension_; ++a) {
    flat = flat * static_cast<std::size_t>(points_) + static_cast<std::size_t>(axis_index(k[a]));
  }
  return flat;
}

std::vector<double> TorusGrid::point(std::size_t flat) const {
  std::vector<double> x(dimension_);
  std::size_t stride = size_;
  for (int a = 0; a < dimension_; ++a) {
    stride /= static_cast<std::size_t>(points_);
    x[a] = spacing() * static_cast<double>(flat / stride);
    flat %= stride;
  }
  return x;
}

}  // namespace shks
