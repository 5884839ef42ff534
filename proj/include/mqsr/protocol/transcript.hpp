#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mqsr/protocol/messages.hpp"
#include "mqsr/qsim/types.hpp"

namespace mqsr::protocol {

enum class Verdict : std::uint8_t { Secure, Compromised };

struct CheckTally {
  std::size_t errors = 0;
  std::size_t total = 0;

  void record(bool error) {
    ++total;
    if (error) ++errors;
  }
  /// errors / total, 0 when nothing was checked.
  [[nodiscard]] double rate() const;
  CheckTally& operator+=(const CheckTally& other);
};

enum class QubitKind : std::uint8_t { GhzParticle, Decoy, MessageCarrier, SampleCarrier };

/// One transmitted (or prepared) qubit. round is -1 during key distribution.
struct QubitEvent {
  QubitKind kind;
  int round;
};

struct AgentRound {
  std::vector<qsim::Bit> sent;
  std::vector<qsim::Bit> recovered;
};

struct RoundRecord {
  int index = 0;
  Verdict verdict = Verdict::Secure;
  CheckTally e3;
  CheckTally reuse;
  std::vector<AgentRound> agents;
  std::size_t message_qubits = 0;
};

/// Counters for one protocol run. q_u counts message-carrying travelling
/// qubits of rounds that ended secure; q_t every prepared or transmitted qubit;
/// b_t every classical bit on the bus.
struct RoundTranscript {
  std::size_t q_u = 0;
  std::size_t q_t = 0;
  std::size_t b_t = 0;
  CheckTally e1;
  CheckTally decoy;
  CheckTally e3;
  CheckTally reuse;
  Verdict verdict = Verdict::Secure;
  std::size_t distribution_attempts = 0;
  /// Checks (any phase) that ended with a compromised verdict.
  std::size_t aborts = 0;
  /// Key distributions that ended compromised (each triggers a restart).
  std::size_t distribution_aborts = 0;
  /// True when every allowed distribution attempt was aborted.
  bool distribution_aborted = false;
  std::vector<RoundRecord> rounds;
  std::vector<QubitEvent> qubit_log;
  std::vector<ClassicalMessage> bus_log;

  [[nodiscard]] bool detected() const { return aborts > 0; }
  /// Correct / total message bits over secure rounds; nullopt if none.
  [[nodiscard]] std::optional<double> message_fidelity() const;
  [[nodiscard]] std::size_t message_bits() const;
  [[nodiscard]] std::size_t correct_message_bits() const;
};

}  // namespace mqsr::protocol
