#include "mqsr/protocol/config.hpp"

#include <cmath>
#include <string>

#include "mqsr/ghzkey.hpp"

namespace mqsr::protocol {

namespace {
void require_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ConfigError(std::string(name) + " must lie in [0, 1], got " + std::to_string(v));
  }
}
}  // namespace

std::size_t ProtocolConfig::sample_count(double rate, std::size_t population) {
  // The epsilon keeps exact products such as (3/32) * 32 from rounding up.
  return static_cast<std::size_t>(std::ceil(rate * static_cast<double>(population) - 1e-9));
}

std::size_t ProtocolConfig::decoys_per_agent() const { return sample_count(decoy_rate, key_len); }

std::size_t ProtocolConfig::e1_sample_count() const { return sample_count(sample_rate_e1, key_len); }

void ProtocolConfig::validate() const {
  if (num_agents < 1 || num_agents > ghz::kMaxAgents - 2) {
    throw ConfigError("num_agents must lie in [1, " + std::to_string(ghz::kMaxAgents - 2) + "]");
  }
  if (key_len < 1) throw ConfigError("key_len must be at least 1");
  require_unit(decoy_rate, "decoy_rate");
  require_unit(sample_rate_e1, "sample_rate_e1");
  require_unit(sample_rate_e3, "sample_rate_e3");
  require_unit(reuse_check_rate, "reuse_check_rate");
  require_unit(error_threshold, "error_threshold");
  if (max_retries < 0) throw ConfigError("max_retries must be non-negative");
  if (e1_sample_count() >= key_len) {
    throw ConfigError("key_len " + std::to_string(key_len) +
                      " leaves no key after the distribution check (" +
                      std::to_string(e1_sample_count()) + " samples)");
  }
}

}  // namespace mqsr::protocol
