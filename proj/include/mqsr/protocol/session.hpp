#pragma once

// One protocol run: Alice, M agents, a tapped quantum channel and an
// authenticated classical bus.
//
//   distribute_key  - GHZ key sharing with decoy photons and the X/Y parity check
//   report_bit      - CNot encryption by an agent, decryption by Alice
//   run_round       - every agent reports over the fresh key, then the
//                     transmission check and the reuse check
//   run_protocol    - distribution (with restarts) followed by rounds
//
// Alice's labels and decoy ledger never leave this object except through the
// test accessors; parties exchange information only through the World and the
// ClassicalBus.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "mqsr/adversary.hpp"
#include "mqsr/ghzkey.hpp"
#include "mqsr/protocol/config.hpp"
#include "mqsr/protocol/messages.hpp"
#include "mqsr/protocol/transcript.hpp"
#include "mqsr/protocol/world.hpp"
#include "mqsr/rng.hpp"

namespace mqsr::protocol {

enum class DecoyState : std::uint8_t { PlusX, MinusX, PlusY, MinusY };

struct DecoyEntry {
  std::size_t slot = 0;
  DecoyState state = DecoyState::PlusX;
  int agent = 0;

  [[nodiscard]] qsim::Basis basis() const;
  [[nodiscard]] qsim::Bit bit() const;
};

/// Alice-only record of the decoys she inserted into the agent lines.
class DecoyLedger {
 public:
  void add(DecoyEntry entry) { entries_.push_back(entry); }
  void clear() { entries_.clear(); }
  [[nodiscard]] std::span<const DecoyEntry> entries() const { return entries_; }
  [[nodiscard]] std::vector<DecoyEntry> for_agent(int agent) const;

 private:
  std::vector<DecoyEntry> entries_;
};

/// A travelling qubit the agent marked as a transmission sample.
struct SampleRecord {
  std::size_t slot = 0;  // index in the agent's report sequence this round
  qsim::Bit announced = 0;
  qsim::Bit recovered = 0;
};

class Session {
 public:
  Session(ProtocolConfig config, adversary::Adversary& adversary);

  /// One key-distribution attempt. Returns the verdict; an abort is recorded
  /// in the transcript and the key is left unusable.
  Verdict distribute_key();

  /// Agent `agent` sends `message` encrypted with key entry `position`;
  /// returns the bit Alice decrypts. Throws std::logic_error if the entry was
  /// consumed or already used by this agent in the current round, and
  /// std::out_of_range for an unknown agent.
  qsim::Bit report_bit(int agent, qsim::Bit message, std::size_t position);

  /// Compares Alice's decrypted sample bits with the agent's announcement and
  /// returns the error rate.
  double check_transmission_e3(int agent, std::span<const SampleRecord> samples);

  /// Parity check on a fraction of the entries used this round, preferring
  /// those that carried transmission samples; the survivors return to fresh
  /// when the check passes.
  Verdict reuse_check(double fraction);

  /// One S2 + S3 round over every fresh entry.
  const RoundRecord& run_round();

  [[nodiscard]] bool key_ready() const { return key_ready_; }
  [[nodiscard]] std::size_t fresh_entries() const;

  [[nodiscard]] const RoundTranscript& transcript() const { return transcript_; }
  /// Moves the transcript out, with the bus log attached.
  RoundTranscript take_transcript();

  [[nodiscard]] const ProtocolConfig& config() const { return config_; }
  [[nodiscard]] World& world() { return world_; }
  [[nodiscard]] const World& world() const { return world_; }
  [[nodiscard]] const ghz::KeyLedger& key_ledger() const { return key_; }
  [[nodiscard]] const DecoyLedger& decoy_ledger() const { return decoys_; }
  [[nodiscard]] const ClassicalBus& bus() const { return bus_; }
  [[nodiscard]] ParticleId alice_particle(std::size_t position) const;
  [[nodiscard]] ParticleId agent_particle(int agent, std::size_t position) const;

  /// Human-readable trace of every step, or nullptr to disable.
  void set_trace(std::ostream* out) { trace_ = out; }

 private:
  struct AgentState {
    std::vector<ParticleId> line;  // received slots, decoys included
    std::vector<ParticleId> key;   // by key position
    Rng rng;
  };

  qsim::Bit report_impl(int agent, qsim::Bit message, std::size_t position, QubitKind kind);
  void send(PartyId from, PartyId to, CheckPhase phase, Payload payload);
  void count_qubit(QubitKind kind);
  CheckTally run_decoy_check();
  CheckTally run_parity_check(std::span<const std::size_t> positions, CheckPhase phase);
  Verdict conclude(CheckPhase phase, std::span<const CheckTally* const> tallies);
  void require_agent(int agent) const;
  template <class... Args>
  void trace(const Args&... args);

  ProtocolConfig config_;
  adversary::Adversary& adversary_;
  Rng alice_rng_;
  Rng adversary_rng_;
  World world_;
  ghz::KeyLedger key_;
  DecoyLedger decoys_;
  std::vector<ParticleId> alice_particles_;
  std::vector<AgentState> agents_;
  ClassicalBus bus_;
  RoundTranscript transcript_;
  bool key_ready_ = false;
  int round_ = 0;
  std::vector<std::size_t> sample_positions_this_round_;
  CheckTally round_e3_;
  CheckTally round_reuse_;
  std::ostream* trace_ = nullptr;
};

/// Key distribution with up to config.max_retries restarts, then `rounds`
/// rounds (stopping early on a compromised verdict or an exhausted key).
RoundTranscript run_protocol(const ProtocolConfig& config,
                             const adversary::StrategyDescriptor& strategy, int rounds,
                             std::ostream* trace = nullptr);

}  // namespace mqsr::protocol
