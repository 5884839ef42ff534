#include "mqsr/protocol/transcript.hpp"

namespace mqsr::protocol {

double CheckTally::rate() const {
  return total == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(total);
}

CheckTally& CheckTally::operator+=(const CheckTally& other) {
  errors += other.errors;
  total += other.total;
  return *this;
}

std::size_t RoundTranscript::message_bits() const {
  std::size_t n = 0;
  for (const RoundRecord& r : rounds) {
    if (r.verdict != Verdict::Secure) continue;
    for (const AgentRound& a : r.agents) n += a.sent.size();
  }
  return n;
}

std::size_t RoundTranscript::correct_message_bits() const {
  std::size_t n = 0;
  for (const RoundRecord& r : rounds) {
    if (r.verdict != Verdict::Secure) continue;
    for (const AgentRound& a : r.agents) {
      for (std::size_t i = 0; i < a.sent.size(); ++i) n += a.sent[i] == a.recovered[i];
    }
  }
  return n;
}

std::optional<double> RoundTranscript::message_fidelity() const {
  const std::size_t total = message_bits();
  if (total == 0) return std::nullopt;
  return static_cast<double>(correct_message_bits()) / static_cast<double>(total);
}

}  // namespace mqsr::protocol
