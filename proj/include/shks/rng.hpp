#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace shks {

/// Independent purposes draw from independent streams, so that e.g. changing
/// the horizon never perturbs initial data.
enum class StreamPurpose : std::uint64_t {
  brownian = 0x42524f574eULL,
  initial_condition = 0x494e495443ULL,
  study = 0x5354554459ULL,
};

/// Seed of the stream for (master_seed, path_index, purpose): a splitmix64
/// hash chain over the three words.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t path_index, StreamPurpose purpose);

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}
  RandomStream(std::uint64_t master_seed, std::uint64_t path_index, StreamPurpose purpose)
      : RandomStream(derive_seed(master_seed, path_index, purpose)) {}

  std::uint64_t seed() const noexcept { return seed_; }
  double normal() { return normal_(engine_); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Sample of N(0, dt).  dt must be positive.
double brownian_increment(RandomStream& rng, double dt);

/// Brownian increments on a fine uniform time grid.  Coarser paths are sums
/// of consecutive fine increments, never re-sampled.
class BrownianPath {
 public:
  BrownianPath(RandomStream& rng, double dt, std::size_t steps);
  BrownianPath(double dt, std::vector<double> increments);

  double dt() const noexcept { return dt_; }
  std::span<const double> increments() const noexcept { return increments_; }

  /// Path with step factor*dt; steps must divide evenly.
  BrownianPath coarsen(std::size_t factor) const;

 private:
  double dt_;
  std::vector<double> increments_;
};

}  // namespace shks
