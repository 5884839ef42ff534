#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace mqsr {

/// Seeded, splittable random stream.
///
/// `split(k)` derives a child stream from the construction seed and `k` only,
/// so children do not depend on how many draws the parent has made. Every
/// sampling operation in the simulator takes an `Rng&` explicitly.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  [[nodiscard]] Rng split(std::uint64_t stream) const;
  [[nodiscard]] std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  std::uint8_t bit() { return static_cast<std::uint8_t>(engine_() >> 63); }
  /// Uniform integer in [0, n). n must be positive.
  std::size_t below(std::size_t n);
  /// k distinct indices from [0, n), returned in increasing order.
  std::vector<std::size_t> choose(std::size_t n, std::size_t k);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return engine_(); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace mqsr
