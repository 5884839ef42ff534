#pragma once

// Classical traffic between the parties. The payload alternatives below are
// the whole schema: none of them can hold a GHZ label or an amplitude, which
// is how key secrecy is enforced at the type level.

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "mqsr/qsim/types.hpp"

namespace mqsr::protocol {

/// 0 is Alice, r + 1 is agent r, kBroadcast addresses every party.
struct PartyId {
  int value = 0;

  static constexpr PartyId alice() { return PartyId{0}; }
  static constexpr PartyId agent(int r) { return PartyId{r + 1}; }
  static constexpr PartyId broadcast() { return PartyId{-1}; }
  bool operator==(const PartyId&) const = default;
};

enum class CheckPhase : std::uint8_t { Decoy, KeyDistribution, Transmission, Reuse };

struct BasisAnnounce {
  std::vector<qsim::Basis> bases;
};

struct ResultAnnounce {
  std::vector<qsim::Bit> bits;
};

struct PositionReveal {
  std::vector<std::size_t> positions;
  std::size_t sequence_length = 0;
};

struct VerdictNotice {
  bool secure = true;
};

struct AbortNotice {};

using Payload = std::variant<BasisAnnounce, ResultAnnounce, PositionReveal, VerdictNotice, AbortNotice>;

struct ClassicalMessage {
  PartyId sender;
  PartyId receiver;
  CheckPhase phase = CheckPhase::KeyDistribution;
  Payload payload;

  /// Classical bits charged to b_t: one per announced basis or result,
  /// ceil(log2(sequence_length)) per revealed position, one per verdict/abort.
  [[nodiscard]] std::size_t bits() const;
  [[nodiscard]] std::string kind() const;
};

std::size_t position_bits(std::size_t sequence_length);

/// Append-only log of classical messages with the running bit count.
class ClassicalBus {
 public:
  std::size_t send(ClassicalMessage message);

  [[nodiscard]] const std::vector<ClassicalMessage>& log() const { return log_; }
  [[nodiscard]] std::size_t bits_sent() const { return bits_; }

 private:
  std::vector<ClassicalMessage> log_;
  std::size_t bits_ = 0;
};

/// Wire form used for transcripts and the schema test.
std::string serialize(const ClassicalMessage& message);

std::string to_string(CheckPhase phase);

}  // namespace mqsr::protocol
