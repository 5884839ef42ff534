// mqsr: command-line front end.
//
//   mqsr run SPEC.json [--seed N] [--output PATH]
//   mqsr check [--seed N]
//   mqsr demo [--agents M] [--key-len N] [--seed N]
//
// Exit codes: 0 success, 1 configuration error, 2 invariant failure.

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mqsr/harness/experiment.hpp"
#include "mqsr/harness/invariants.hpp"
#include "mqsr/harness/metrics.hpp"
#include "mqsr/protocol/session.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitInvariant = 2;

using mqsr::protocol::ConfigError;

// Flag beats environment beats `fallback`.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::uint64_t fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv(mqsr::harness::kSeedEnvVar); env != nullptr && *env != '\0') {
    std::uint64_t value = 0;
    const std::string_view text(env);
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
      throw ConfigError(std::string(mqsr::harness::kSeedEnvVar) + " is not an unsigned integer");
    }
    return value;
  }
  return fallback;
}

int cmd_run(const std::string& spec_path, std::optional<std::uint64_t> seed,
            const std::string& output) {
  auto spec = mqsr::harness::load_spec(spec_path);
  mqsr::harness::apply_seed_overrides(spec, seed);
  if (!output.empty()) spec.output = output;
  const auto result = mqsr::harness::run_experiment(spec);
  try {
    mqsr::harness::write_results(spec, result);
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
  std::cout << "wrote " << spec.output << ".csv and " << spec.output << ".json (" << result.rows.size()
            << " rows, seed " << result.seed << ")\n";
  return kExitOk;
}

int cmd_check(std::optional<std::uint64_t> seed) {
  const auto results = mqsr::harness::run_invariant_suite(resolve_seed(seed, 1));
  int failures = 0;
  for (const auto& r : results) {
    std::cout << (r.passed ? "ok   " : "FAIL ") << r.name << ": " << r.detail << '\n';
    if (!r.passed) ++failures;
  }
  std::cout << results.size() - static_cast<std::size_t>(failures) << '/' << results.size()
            << " invariants hold\n";
  return failures == 0 ? kExitOk : kExitInvariant;
}

int cmd_demo(int agents, std::size_t key_len, std::optional<std::uint64_t> seed) {
  mqsr::protocol::ProtocolConfig config;
  config.num_agents = agents;
  config.key_len = key_len;
  config.rng_seed = resolve_seed(seed, 7);
  config.validate();
  const auto t = mqsr::protocol::run_protocol(config, mqsr::adversary::StrategyDescriptor::none(),
                                              1, &std::cout);
  const auto eff = mqsr::harness::compute_efficiency(t);
  std::cout << "\nsummary: q_u=" << t.q_u << " q_t=" << t.q_t << " b_t=" << t.b_t
            << " eta_q=" << eff.eta_q << " eta_t=" << eff.eta_t << " fidelity="
            << t.message_fidelity().value_or(0.0) << '\n';
  return t.detected() ? kExitInvariant : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiparty quantum secret report simulator"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string output;
  std::optional<std::uint64_t> run_seed;
  auto* run = app.add_subcommand("run", "Run an experiment spec and write CSV/JSON results");
  run->add_option("spec", spec_path, "Experiment spec (JSON)")->required();
  run->add_option("--seed", run_seed, "Base seed (overrides MQSR_SEED and the spec)");
  run->add_option("--output", output, "Output path prefix (overrides the spec)");

  std::optional<std::uint64_t> check_seed;
  auto* check = app.add_subcommand("check", "Run the invariant suite");
  check->add_option("--seed", check_seed, "Seed (overrides MQSR_SEED)");

  int agents = 2;
  std::size_t key_len = 8;
  std::optional<std::uint64_t> demo_seed;
  auto* demo = app.add_subcommand("demo", "Trace one honest round");
  demo->add_option("--agents", agents, "Number of agents M");
  demo->add_option("--key-len", key_len, "Key length N");
  demo->add_option("--seed", demo_seed, "Seed (overrides MQSR_SEED)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(spec_path, run_seed, output);
    if (*check) return cmd_check(check_seed);
    if (*demo) return cmd_demo(agents, key_len, demo_seed);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvariant;
  }
  return kExitConfig;
}
