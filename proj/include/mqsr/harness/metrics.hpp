#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "mqsr/protocol/transcript.hpp"

namespace mqsr::harness {

struct Efficiency {
  double eta_q = 0.0;  // q_u / q_t
  double eta_t = 0.0;  // q_u / (q_t + b_t)
};

/// Throws std::invalid_argument when q_t is zero.
Efficiency compute_efficiency(std::size_t q_u, std::size_t q_t, std::size_t b_t);
Efficiency compute_efficiency(const protocol::RoundTranscript& transcript);

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

/// Wilson score interval; z = 1.96 gives 95%.
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

/// Aggregated result of one grid cell.
struct MetricsRow {
  std::string strategy;
  std::string sweep_parameter;
  std::optional<double> sweep_value;
  std::size_t trials = 0;
  std::size_t detections = 0;
  double detection_probability = 0.0;
  Interval detection_ci;
  /// Trials whose key distribution was flagged at least once.
  std::size_t distribution_detections = 0;
  double mean_e1_error = 0.0;
  double mean_decoy_error = 0.0;
  double mean_e3_error = 0.0;
  double mean_reuse_error = 0.0;
  std::optional<double> fidelity;
  double eta_q = 0.0;
  double eta_t = 0.0;
  std::size_t q_u = 0;
  std::size_t q_t = 0;
  std::size_t b_t = 0;
};

/// The part of a transcript the aggregation needs.
struct TrialSummary {
  bool detected = false;
  bool distribution_detected = false;
  protocol::CheckTally e1, decoy, e3, reuse;
  std::size_t message_bits = 0;
  std::size_t correct_bits = 0;
  std::size_t q_u = 0, q_t = 0, b_t = 0;

  static TrialSummary from(const protocol::RoundTranscript& transcript);
};

class MetricsAccumulator {
 public:
  void add(const TrialSummary& trial);
  [[nodiscard]] MetricsRow finish(std::string strategy, std::string sweep_parameter,
                                  std::optional<double> sweep_value) const;

 private:
  struct Mean {
    double sum = 0.0;
    std::size_t count = 0;
    void add(const protocol::CheckTally& t) {
      if (t.total == 0) return;
      sum += t.rate();
      ++count;
    }
    [[nodiscard]] double value() const { return count == 0 ? 0.0 : sum / static_cast<double>(count); }
  };

  std::size_t trials_ = 0;
  std::size_t detections_ = 0;
  std::size_t distribution_detections_ = 0;
  Mean e1_, decoy_, e3_, reuse_;
  std::size_t message_bits_ = 0;
  std::size_t correct_bits_ = 0;
  std::size_t q_u_ = 0, q_t_ = 0, b_t_ = 0;
};

}  // namespace mqsr::harness
