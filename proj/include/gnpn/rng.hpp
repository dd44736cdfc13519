#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace gnpn {

/// Seeded random stream. Identical (seed, stream_id) pairs replay the same
/// draws; the engine and the distribution code are both fully specified
/// (mt19937_64 + boost::random), so the sequence does not depend on the
/// standard library vendor. Not shareable between threads.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  double uniform(double lo, double hi);
  double normal(double mean, double sd);
  double standard_normal() { return normal(0.0, 1.0); }
  unsigned poisson(double lambda);
  bool bernoulli(double p);
  /// Uniform index in [0, n).
  std::size_t index(std::size_t n);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace gnpn
