#include "mqsr/harness/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mqsr::harness {

Efficiency compute_efficiency(std::size_t q_u, std::size_t q_t, std::size_t b_t) {
  if (q_t == 0) throw std::invalid_argument("efficiency undefined for zero transmitted qubits");
  if (q_u > q_t) throw std::invalid_argument("useful qubits exceed transmitted qubits");
  const auto u = static_cast<double>(q_u);
  return Efficiency{u / static_cast<double>(q_t), u / static_cast<double>(q_t + b_t)};
}

Efficiency compute_efficiency(const protocol::RoundTranscript& transcript) {
  return compute_efficiency(transcript.q_u, transcript.q_t, transcript.b_t);
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

TrialSummary TrialSummary::from(const protocol::RoundTranscript& t) {
  TrialSummary s;
  s.detected = t.detected();
  s.distribution_detected = t.distribution_aborts > 0;
  s.e1 = t.e1;
  s.decoy = t.decoy;
  s.e3 = t.e3;
  s.reuse = t.reuse;
  s.message_bits = t.message_bits();
  s.correct_bits = t.correct_message_bits();
  s.q_u = t.q_u;
  s.q_t = t.q_t;
  s.b_t = t.b_t;
  return s;
}

void MetricsAccumulator::add(const TrialSummary& trial) {
  ++trials_;
  detections_ += trial.detected;
  distribution_detections_ += trial.distribution_detected;
  e1_.add(trial.e1);
  decoy_.add(trial.decoy);
  e3_.add(trial.e3);
  reuse_.add(trial.reuse);
  message_bits_ += trial.message_bits;
  correct_bits_ += trial.correct_bits;
  q_u_ += trial.q_u;
  q_t_ += trial.q_t;
  b_t_ += trial.b_t;
}

MetricsRow MetricsAccumulator::finish(std::string strategy, std::string sweep_parameter,
                                      std::optional<double> sweep_value) const {
  MetricsRow row;
  row.strategy = std::move(strategy);
  row.sweep_parameter = std::move(sweep_parameter);
  row.sweep_value = sweep_value;
  row.trials = trials_;
  row.detections = detections_;
  row.detection_probability =
      trials_ == 0 ? 0.0 : static_cast<double>(detections_) / static_cast<double>(trials_);
  row.detection_ci = wilson_interval(detections_, trials_);
  row.distribution_detections = distribution_detections_;
  row.mean_e1_error = e1_.value();
  row.mean_decoy_error = decoy_.value();
  row.mean_e3_error = e3_.value();
  row.mean_reuse_error = reuse_.value();
  if (message_bits_ > 0) {
    row.fidelity = static_cast<double>(correct_bits_) / static_cast<double>(message_bits_);
  }
  if (q_t_ > 0) {
    const Efficiency e = compute_efficiency(q_u_, q_t_, b_t_);
    row.eta_q = e.eta_q;
    row.eta_t = e.eta_t;
  }
  row.q_u = q_u_;
  row.q_t = q_t_;
  row.b_t = b_t_;
  return row;
}

}  // namespace mqsr::harness
