#include "mqsr/harness/experiment.hpp"

#include <charconv>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "mqsr/protocol/session.hpp"
#include "mqsr/rng.hpp"

namespace mqsr::harness {

using nlohmann::json;
using protocol::ConfigError;

namespace {

template <class T>
T get_field(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> known, const char* where) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (std::string_view k : known) ok = ok || key == k;
    if (!ok) throw ConfigError(std::string("unknown key '") + key + "' in " + where);
  }
}

protocol::ProtocolConfig parse_protocol(const json& j) {
  if (!j.is_object()) throw ConfigError("'protocol' must be an object");
  reject_unknown(j,
                 {"num_agents", "key_len", "decoy_rate", "sample_rate_e1", "sample_rate_e3",
                  "reuse_check_rate", "error_threshold", "include_minus_labels", "max_retries"},
                 "protocol");
  protocol::ProtocolConfig c;
  c.num_agents = get_field(j, "num_agents", c.num_agents);
  c.key_len = get_field(j, "key_len", c.key_len);
  c.decoy_rate = get_field(j, "decoy_rate", c.decoy_rate);
  c.sample_rate_e1 = get_field(j, "sample_rate_e1", c.sample_rate_e1);
  c.sample_rate_e3 = get_field(j, "sample_rate_e3", c.sample_rate_e3);
  c.reuse_check_rate = get_field(j, "reuse_check_rate", c.reuse_check_rate);
  c.error_threshold = get_field(j, "error_threshold", c.error_threshold);
  c.include_minus_labels = get_field(j, "include_minus_labels", c.include_minus_labels);
  c.max_retries = get_field(j, "max_retries", c.max_retries);
  return c;
}

json protocol_json(const protocol::ProtocolConfig& c) {
  return json{{"num_agents", c.num_agents},
              {"key_len", c.key_len},
              {"decoy_rate", c.decoy_rate},
              {"sample_rate_e1", c.sample_rate_e1},
              {"sample_rate_e3", c.sample_rate_e3},
              {"reuse_check_rate", c.reuse_check_rate},
              {"error_threshold", c.error_threshold},
              {"include_minus_labels", c.include_minus_labels},
              {"max_retries", c.max_retries}};
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string_view policy_name(SeedPolicy p) {
  return p == SeedPolicy::Fixed ? "fixed" : "per-trial-derived";
}

struct Cell {
  adversary::StrategyDescriptor strategy;
  std::optional<double> sweep_value;
};

std::vector<Cell> cells_of(const ExperimentSpec& spec) {
  std::vector<Cell> cells;
  for (const auto& s : spec.grid) {
    if (spec.sweep) {
      for (double v : spec.sweep->values) cells.push_back({s, v});
    } else {
      cells.push_back({s, std::nullopt});
    }
  }
  return cells;
}

}  // namespace

void ExperimentSpec::validate() const {
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (grid.empty()) throw ConfigError("strategy grid must not be empty");
  if (rounds < 0) throw ConfigError("rounds must be non-negative");
  if (output.empty()) throw ConfigError("output path must not be empty");
  if (sweep) {
    if (sweep->values.empty()) throw ConfigError("sweep needs at least one value");
    for (double v : sweep->values) {
      protocol::ProtocolConfig probe = base;
      set_parameter(probe, sweep->parameter, v);
      probe.validate();
    }
  } else {
    base.validate();
  }
  for (const auto& s : grid) {
    if (s.kind == adversary::StrategyKind::DishonestAgent &&
        (s.cheater >= base.num_agents || s.victim >= base.num_agents)) {
      throw ConfigError("strategy " + s.to_string() + " names an agent outside [0, M)");
    }
  }
}

void set_parameter(protocol::ProtocolConfig& c, std::string_view name, double value) {
  if (name == "decoy_rate") {
    c.decoy_rate = value;
  } else if (name == "sample_rate_e1") {
    c.sample_rate_e1 = value;
  } else if (name == "sample_rate_e3") {
    c.sample_rate_e3 = value;
  } else if (name == "reuse_check_rate") {
    c.reuse_check_rate = value;
  } else if (name == "error_threshold") {
    c.error_threshold = value;
  } else if (name == "key_len") {
    c.key_len = static_cast<std::size_t>(value);
  } else if (name == "num_agents") {
    c.num_agents = static_cast<int>(value);
  } else {
    throw ConfigError("cannot sweep unknown parameter '" + std::string(name) + "'");
  }
}

ExperimentSpec parse_spec(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("spec is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("spec must be a JSON object");
  reject_unknown(j,
                 {"schema_version", "protocol", "rounds", "strategies", "sweep", "trials", "seed",
                  "seed_policy", "output"},
                 "spec");
  const int version = get_field(j, "schema_version", kSpecSchemaVersion);
  if (version != kSpecSchemaVersion) {
    throw ConfigError("unsupported spec schema_version " + std::to_string(version));
  }

  ExperimentSpec spec;
  if (j.contains("protocol")) spec.base = parse_protocol(j.at("protocol"));
  spec.rounds = get_field(j, "rounds", spec.rounds);
  spec.trials = get_field(j, "trials", spec.trials);
  spec.seed = get_field(j, "seed", spec.seed);
  spec.output = get_field(j, "output", spec.output);

  const std::string policy = get_field<std::string>(j, "seed_policy", "fixed");
  if (policy == "fixed") {
    spec.seed_policy = SeedPolicy::Fixed;
  } else if (policy == "per-trial-derived") {
    spec.seed_policy = SeedPolicy::PerTrialDerived;
  } else {
    throw ConfigError("seed_policy must be 'fixed' or 'per-trial-derived'");
  }

  const auto strategies = get_field<std::vector<std::string>>(j, "strategies", {"none"});
  for (const std::string& s : strategies) {
    try {
      spec.grid.push_back(adversary::StrategyDescriptor::parse(s));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }

  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    if (!s.is_object()) throw ConfigError("'sweep' must be an object");
    reject_unknown(s, {"parameter", "values"}, "sweep");
    spec.sweep = Sweep{get_field<std::string>(s, "parameter", ""),
                       get_field<std::vector<double>>(s, "values", {})};
  }
  spec.base.rng_seed = spec.seed;
  spec.validate();
  return spec;
}

ExperimentSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read spec file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_spec(buffer.str());
}

void apply_seed_overrides(ExperimentSpec& spec, std::optional<std::uint64_t> cli_seed) {
  if (const char* env = std::getenv(kSeedEnvVar); env != nullptr && *env != '\0') {
    std::uint64_t value = 0;
    const std::string_view text(env);
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
      throw ConfigError(std::string(kSeedEnvVar) + " is not an unsigned integer");
    }
    spec.seed = value;
  }
  if (cli_seed) spec.seed = *cli_seed;
  spec.base.rng_seed = spec.seed;
}

std::uint64_t trial_seed(std::uint64_t base, std::size_t cell, std::size_t trial) {
  const std::uint64_t tag = (static_cast<std::uint64_t>(cell) << 32) ^ static_cast<std::uint64_t>(trial);
  return splitmix64(base ^ splitmix64(tag));
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentResult result;
  result.seed = spec.seed;
  if (spec.seed_policy == SeedPolicy::PerTrialDerived) {
    std::random_device device;
    result.seed = (static_cast<std::uint64_t>(device()) << 32) ^ device();
  }

  const auto cells = cells_of(spec);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    protocol::ProtocolConfig config = spec.base;
    if (cells[c].sweep_value) set_parameter(config, spec.sweep->parameter, *cells[c].sweep_value);
    config.validate();

    std::vector<TrialSummary> summaries(spec.trials);
    std::exception_ptr failure;
    const auto trials = static_cast<std::int64_t>(spec.trials);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t t = 0; t < trials; ++t) {
      try {
        protocol::ProtocolConfig trial_config = config;
        trial_config.rng_seed = trial_seed(result.seed, c, static_cast<std::size_t>(t));
        summaries[static_cast<std::size_t>(t)] =
            TrialSummary::from(protocol::run_protocol(trial_config, cells[c].strategy, spec.rounds));
      } catch (...) {
#pragma omp critical(mqsr_experiment_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);

    MetricsAccumulator acc;
    for (const TrialSummary& s : summaries) acc.add(s);
    result.rows.push_back(acc.finish(cells[c].strategy.to_string(),
                                     spec.sweep ? spec.sweep->parameter : std::string{},
                                     cells[c].sweep_value));
  }
  return result;
}

std::string results_csv(const ExperimentSpec& spec, const ExperimentResult& result) {
  std::ostringstream out;
  out << "# mqsr-results schema=" << kResultsSchemaVersion << " seed=" << result.seed
      << " seed_policy=" << policy_name(spec.seed_policy) << " trials=" << spec.trials
      << " rounds=" << spec.rounds << '\n';
  out << "strategy,sweep_parameter,sweep_value,trials,detections,detection_probability,ci_low,"
         "ci_high,distribution_detections,mean_e1_error,mean_decoy_error,mean_e3_error,"
         "mean_reuse_error,fidelity,eta_q,eta_t,q_u,q_t,b_t\n";
  for (const MetricsRow& r : result.rows) {
    out << r.strategy << ',' << r.sweep_parameter << ','
        << (r.sweep_value ? format_double(*r.sweep_value) : "") << ',' << r.trials << ','
        << r.detections << ',' << format_double(r.detection_probability) << ','
        << format_double(r.detection_ci.low) << ',' << format_double(r.detection_ci.high) << ','
        << r.distribution_detections << ',' << format_double(r.mean_e1_error) << ','
        << format_double(r.mean_decoy_error) << ',' << format_double(r.mean_e3_error) << ','
        << format_double(r.mean_reuse_error) << ','
        << (r.fidelity ? format_double(*r.fidelity) : "") << ',' << format_double(r.eta_q) << ','
        << format_double(r.eta_t) << ',' << r.q_u << ',' << r.q_t << ',' << r.b_t << '\n';
  }
  return out.str();
}

std::string results_json(const ExperimentSpec& spec, const ExperimentResult& result) {
  json rows = json::array();
  for (const MetricsRow& r : result.rows) {
    json row{{"strategy", r.strategy},
             {"trials", r.trials},
             {"detections", r.detections},
             {"detection_probability", r.detection_probability},
             {"detection_ci", {r.detection_ci.low, r.detection_ci.high}},
             {"distribution_detections", r.distribution_detections},
             {"mean_e1_error", r.mean_e1_error},
             {"mean_decoy_error", r.mean_decoy_error},
             {"mean_e3_error", r.mean_e3_error},
             {"mean_reuse_error", r.mean_reuse_error},
             {"fidelity", r.fidelity ? json(*r.fidelity) : json(nullptr)},
             {"eta_q", r.eta_q},
             {"eta_t", r.eta_t},
             {"q_u", r.q_u},
             {"q_t", r.q_t},
             {"b_t", r.b_t}};
    if (r.sweep_value) {
      row["sweep_parameter"] = r.sweep_parameter;
      row["sweep_value"] = *r.sweep_value;
    }
    rows.push_back(std::move(row));
  }
  json doc{{"schema_version", kResultsSchemaVersion},
           {"seed", result.seed},
           {"seed_policy", std::string(policy_name(spec.seed_policy))},
           {"trials", spec.trials},
           {"rounds", spec.rounds},
           {"protocol", protocol_json(spec.base)},
           {"rows", std::move(rows)}};
  return doc.dump(2) + "\n";
}

void write_results(const ExperimentSpec& spec, const ExperimentResult& result) {
  const std::filesystem::path base(spec.output);
  if (base.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(base.parent_path(), ec);
  }
  const auto write = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path.string());
  };
  write(base.string() + ".csv", results_csv(spec, result));
  write(base.string() + ".json", results_json(spec, result));
}

}  // namespace mqsr::harness
