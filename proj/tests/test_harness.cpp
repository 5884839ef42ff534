#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "mqsr/harness/experiment.hpp"
#include "mqsr/harness/invariants.hpp"
#include "mqsr/harness/metrics.hpp"

using namespace mqsr;
using namespace mqsr::harness;
using protocol::ConfigError;

namespace {

struct ScopedEnv {
  explicit ScopedEnv(const char* value) {
    if (value) {
      setenv(kSeedEnvVar, value, 1);
    } else {
      unsetenv(kSeedEnvVar);
    }
  }
  ~ScopedEnv() { unsetenv(kSeedEnvVar); }
};

constexpr const char* kSmallSpec = R"({
  "protocol": {"num_agents": 2, "key_len": 12},
  "rounds": 1,
  "strategies": ["none", "eve:X:travelling"],
  "trials": 6,
  "seed": 5
})";

}  // namespace

TEST(Metrics, EfficiencyRatios) {
  const auto e = compute_efficiency(30, 100, 50);
  EXPECT_DOUBLE_EQ(e.eta_q, 0.3);
  EXPECT_DOUBLE_EQ(e.eta_t, 0.2);
  EXPECT_THROW(compute_efficiency(1, 0, 0), std::invalid_argument);
  EXPECT_THROW(compute_efficiency(5, 4, 0), std::invalid_argument);
}

TEST(Metrics, WilsonInterval) {
  const auto mid = wilson_interval(50, 100);
  EXPECT_NEAR(mid.low, 0.4038, 1e-4);
  EXPECT_NEAR(mid.high, 0.5962, 1e-4);
  const auto none = wilson_interval(0, 20);
  EXPECT_DOUBLE_EQ(none.low, 0.0);
  EXPECT_GT(none.high, 0.0);
  const auto all = wilson_interval(20, 20);
  EXPECT_DOUBLE_EQ(all.high, 1.0);
  EXPECT_LT(all.low, 1.0);
}

TEST(Metrics, AccumulatorAggregates) {
  MetricsAccumulator acc;
  TrialSummary a;
  a.detected = true;
  a.e3.record(true);
  a.e3.record(false);
  a.q_u = 10;
  a.q_t = 40;
  a.b_t = 10;
  a.message_bits = 10;
  a.correct_bits = 10;
  TrialSummary b;
  b.e3.record(false);
  b.q_u = 0;
  b.q_t = 40;
  b.b_t = 30;
  acc.add(a);
  acc.add(b);
  const auto row = acc.finish("s", "", std::nullopt);
  EXPECT_EQ(row.trials, 2u);
  EXPECT_EQ(row.detections, 1u);
  EXPECT_DOUBLE_EQ(row.detection_probability, 0.5);
  EXPECT_DOUBLE_EQ(row.mean_e3_error, 0.25);
  EXPECT_DOUBLE_EQ(row.eta_q, 10.0 / 80.0);
  EXPECT_DOUBLE_EQ(row.eta_t, 10.0 / 120.0);
  ASSERT_TRUE(row.fidelity.has_value());
  EXPECT_DOUBLE_EQ(*row.fidelity, 1.0);
}

TEST(Experiment, ParsesSpec) {
  const auto spec = parse_spec(kSmallSpec);
  EXPECT_EQ(spec.base.num_agents, 2);
  EXPECT_EQ(spec.base.key_len, 12u);
  EXPECT_DOUBLE_EQ(spec.base.decoy_rate, 0.1);
  EXPECT_EQ(spec.grid.size(), 2u);
  EXPECT_EQ(spec.trials, 6u);
  EXPECT_EQ(spec.seed, 5u);
  EXPECT_EQ(spec.seed_policy, SeedPolicy::Fixed);
}

TEST(Experiment, RejectsBadSpecs) {
  EXPECT_THROW(parse_spec("{"), ConfigError);
  EXPECT_THROW(parse_spec(R"({"trails": 3})"), ConfigError);
  EXPECT_THROW(parse_spec(R"({"protocol": {"agents": 3}})"), ConfigError);
  EXPECT_THROW(parse_spec(R"({"trials": 0})"), ConfigError);
  EXPECT_THROW(parse_spec(R"({"strategies": []})"), ConfigError);
  EXPECT_THROW(parse_spec(R"({"strategies": ["eve:W:key"]})"), ConfigError);
  EXPECT_THROW(parse_spec(R"({"strategies": ["dishonest:0:5"]})"), ConfigError);
  EXPECT_THROW(parse_spec(R"({"protocol": {"decoy_rate": 2}})"), ConfigError);
  EXPECT_THROW(parse_spec(R"({"protocol": {"key_len": "many"}})"), ConfigError);
  EXPECT_THROW(parse_spec(R"({"sweep": {"parameter": "speed", "values": [1]}})"), ConfigError);
  EXPECT_THROW(parse_spec(R"({"sweep": {"parameter": "decoy_rate", "values": [0.1, 1.1]}})"), ConfigError);
  EXPECT_THROW(parse_spec(R"({"seed_policy": "sometimes"})"), ConfigError);
  EXPECT_THROW(parse_spec(R"({"schema_version": 2})"), ConfigError);
  EXPECT_THROW(load_spec("/nonexistent/spec.json"), ConfigError);
}

TEST(Experiment, SeedPrecedence) {
  auto spec = parse_spec(kSmallSpec);
  {
    ScopedEnv env(nullptr);
    apply_seed_overrides(spec, std::nullopt);
    EXPECT_EQ(spec.seed, 5u);
  }
  {
    ScopedEnv env("77");
    apply_seed_overrides(spec, std::nullopt);
    EXPECT_EQ(spec.seed, 77u);
    apply_seed_overrides(spec, 9);
    EXPECT_EQ(spec.seed, 9u);
    EXPECT_EQ(spec.base.rng_seed, 9u);
  }
  {
    ScopedEnv env("seven");
    EXPECT_THROW(apply_seed_overrides(spec, std::nullopt), ConfigError);
  }
}

TEST(Experiment, TrialSeedsAreDistinct) {
  std::set<std::uint64_t> seen;
  for (std::size_t cell = 0; cell < 10; ++cell) {
    for (std::size_t trial = 0; trial < 100; ++trial) seen.insert(trial_seed(1, cell, trial));
  }
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(trial_seed(1, 0, 0), trial_seed(2, 0, 0));
}

TEST(Experiment, SetParameter) {
  protocol::ProtocolConfig c;
  set_parameter(c, "key_len", 48);
  set_parameter(c, "num_agents", 3);
  set_parameter(c, "sample_rate_e3", 0.05);
  EXPECT_EQ(c.key_len, 48u);
  EXPECT_EQ(c.num_agents, 3);
  EXPECT_DOUBLE_EQ(c.sample_rate_e3, 0.05);
  EXPECT_THROW(set_parameter(c, "rng_seed", 1), ConfigError);
}

TEST(Experiment, RunIsDeterministicAndOrdered) {
  auto spec = parse_spec(R"({
    "protocol": {"key_len": 12},
    "strategies": ["none", "eve:X:travelling"],
    "sweep": {"parameter": "sample_rate_e3", "values": [0.1, 0.5]},
    "trials": 8,
    "seed": 3
  })");
  const auto a = run_experiment(spec);
  const auto b = run_experiment(spec);
  ASSERT_EQ(a.rows.size(), 4u);
  EXPECT_EQ(a.rows[0].strategy, "none");
  EXPECT_EQ(a.rows[1].sweep_value, 0.5);
  EXPECT_EQ(a.rows[2].strategy, "eve:X:travelling");
  EXPECT_EQ(a.rows[0].detections, 0u);
  EXPECT_GT(a.rows[3].detections, 0u);
  EXPECT_EQ(results_csv(spec, a), results_csv(spec, b));
  EXPECT_EQ(results_json(spec, a), results_json(spec, b));
  EXPECT_EQ(results_csv(spec, a).rfind("# mqsr-results schema=1 seed=3", 0), 0u);
}

TEST(Experiment, DerivedSeedIsRecorded) {
  auto spec = parse_spec(kSmallSpec);
  spec.seed_policy = SeedPolicy::PerTrialDerived;
  spec.trials = 2;
  const auto r = run_experiment(spec);
  EXPECT_NE(results_csv(spec, r).find("seed=" + std::to_string(r.seed)), std::string::npos);
}

TEST(Experiment, WritesBothFiles) {
  auto spec = parse_spec(kSmallSpec);
  const auto dir = std::filesystem::temp_directory_path() / "mqsr_harness_test";
  std::filesystem::remove_all(dir);
  spec.output = (dir / "sub" / "out").string();
  write_results(spec, run_experiment(spec));
  EXPECT_TRUE(std::filesystem::exists(dir / "sub" / "out.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "sub" / "out.json"));
  std::filesystem::remove_all(dir);
}

TEST(Invariants, SuiteHolds) {
  for (const auto& r : run_invariant_suite(17)) EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
}
