#pragma once

// Batch experiments: a grid of adversary strategies (optionally crossed with a
// sweep over one numeric config field), `trials` seeded protocol runs per
// cell, aggregated into MetricsRow and written as CSV + JSON.
//
// Spec files are JSON; see docs/experiment_spec.md for the schema.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mqsr/adversary.hpp"
#include "mqsr/harness/metrics.hpp"
#include "mqsr/protocol/config.hpp"

namespace mqsr::harness {

inline constexpr int kSpecSchemaVersion = 1;
inline constexpr int kResultsSchemaVersion = 1;
inline constexpr const char* kSeedEnvVar = "MQSR_SEED";

enum class SeedPolicy : std::uint8_t {
  /// Trial seeds derive from the spec (or override) seed; runs are reproducible.
  Fixed,
  /// The base seed is drawn from std::random_device and written to the results.
  PerTrialDerived,
};

struct Sweep {
  std::string parameter;
  std::vector<double> values;
};

struct ExperimentSpec {
  protocol::ProtocolConfig base;
  int rounds = 1;
  std::vector<adversary::StrategyDescriptor> grid;
  std::optional<Sweep> sweep;
  std::size_t trials = 100;
  std::string output = "results";
  SeedPolicy seed_policy = SeedPolicy::Fixed;
  std::uint64_t seed = 1;

  /// Throws protocol::ConfigError.
  void validate() const;
};

/// Throws protocol::ConfigError on malformed JSON, unknown keys, or bad values.
ExperimentSpec parse_spec(std::string_view json_text);
ExperimentSpec load_spec(const std::filesystem::path& path);

/// Applies MQSR_SEED from the environment, then `cli_seed`, which wins.
void apply_seed_overrides(ExperimentSpec& spec, std::optional<std::uint64_t> cli_seed);

std::uint64_t trial_seed(std::uint64_t base, std::size_t cell, std::size_t trial);

/// Applies a sweep value to the named config field. Throws ConfigError for an
/// unknown field.
void set_parameter(protocol::ProtocolConfig& config, std::string_view name, double value);

struct ExperimentResult {
  std::uint64_t seed = 0;  // base seed actually used
  std::vector<MetricsRow> rows;
};

/// Runs every cell; trials run in parallel, rows come back in grid order.
ExperimentResult run_experiment(const ExperimentSpec& spec);

std::string results_csv(const ExperimentSpec& spec, const ExperimentResult& result);
std::string results_json(const ExperimentSpec& spec, const ExperimentResult& result);

/// Writes `<output>.csv` and `<output>.json`; throws std::runtime_error when
/// a file cannot be written.
void write_results(const ExperimentSpec& spec, const ExperimentResult& result);

}  // namespace mqsr::harness
