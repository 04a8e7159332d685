#include "shks/rng.hpp"

#include <cmath>
#include <string>

#include "shks/error.hpp"

namespace shks {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t path_index, StreamPurpose purpose) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ path_index);
  h = splitmix64(h ^ static_cast<std::uint64_t>(purpose));
  return h;
}

double brownian_increment(RandomStream& rng, double dt) {
  if (!(dt > 0.0)) throw Error("brownian_increment: dt must be positive");
  return std::sqrt(dt) * rng.normal();
}

BrownianPath::BrownianPath(RandomStream& rng, double dt, std::size_t steps) : dt_(dt) {
  increments_.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) increments_.push_back(brownian_increment(rng, dt));
}

BrownianPath::BrownianPath(double dt, std::vector<double> increments)
    : dt_(dt), increments_(std::move(increments)) {}

BrownianPath BrownianPath::coarsen(std::size_t factor) const {
  if (factor == 0 || increments_.size() % factor != 0) {
    throw Error("cannot coarsen " + std::to_string(increments_.size()) + " increments by " +
                std::to_string(factor));
  }
  std::vector<double> coarse(increments_.size() / factor, 0.0);
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < factor; ++j) sum += increments_[i * factor + j];
    coarse[i] = sum;
  }
  return BrownianPath(dt_ * static_cast<double>(factor), std::move(coarse));
}

}  // namespace shks
