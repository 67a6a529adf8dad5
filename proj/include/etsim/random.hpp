#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>

namespace etsim {

/// Independent, reproducible random stream for one trial.
///
/// The pair (seed, stream_id) fully determines the draw sequence, so a Monte
/// Carlo loop that gives trial i the stream (seed, i) produces the same
/// numbers regardless of how trials are distributed over threads.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Uniform on [0, 1).
  double uniform();
  /// Standard normal.
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  /// Circular complex Gaussian with E|z|^2 = variance.
  std::complex<double> complex_normal(double variance);
  /// Index drawn from a normalized cumulative distribution (last entry 1).
  std::size_t from_cdf(std::span<const double> cdf);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Seed and worker count for a Monte Carlo run. Trial i always uses the
/// stream (seed, i); `threads` changes wall time only.
struct MonteCarloOptions {
  std::uint64_t seed = 0;
  int threads = 1;
};

/// SplitMix64 finalizer, used to derive engine seeds.
std::uint64_t mix64(std::uint64_t x);

}  // namespace etsim
