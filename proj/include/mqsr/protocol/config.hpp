#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>

namespace mqsr::protocol {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ProtocolConfig {
  int num_agents = 2;
  std::size_t key_len = 32;
  /// Decoys per agent line = ceil(decoy_rate * key_len).
  double decoy_rate = 0.1;
  /// Key-distribution check: ceil(sample_rate_e1 * key_len) systems.
  double sample_rate_e1 = 0.25;
  /// Per agent and round: ceil(sample_rate_e3 * slots) travelling qubits are samples.
  double sample_rate_e3 = 0.1;
  /// Per round: ceil(reuse_check_rate * used entries) entries are checked and consumed.
  double reuse_check_rate = 0.1;
  double error_threshold = 0.02;
  std::uint64_t rng_seed = 1;
  /// Draw labels from both signs instead of the + family only.
  bool include_minus_labels = false;
  /// Key-distribution restarts allowed after an abort.
  int max_retries = 3;

  /// Throws ConfigError on out-of-range rates, M outside [1, 12], N = 0, or a
  /// key too short to leave entries after the distribution check.
  void validate() const;

  [[nodiscard]] std::size_t decoys_per_agent() const;
  [[nodiscard]] std::size_t e1_sample_count() const;
  [[nodiscard]] static std::size_t sample_count(double rate, std::size_t population);
};

}  // namespace mqsr::protocol
