#pragma once

// Attack strategies invoked at the channel tap points of a protocol run.
//
//  * none: every tap is the identity.
//  * intercept-resend: Eve measures each qubit on the chosen channel in a fixed
//    basis and forwards the collapsed qubit.
//  * dishonest agent: the cheater captures every particle on the Alice->victim
//    line, forwards one half b2 of a fresh psi- pair (b1, b2), and later
//    Bell-measures (captured, b1). During parity checks he publishes his own
//    result flipped according to CheatRule so Alice sees the parity she expects.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mqsr/protocol/world.hpp"
#include "mqsr/qsim/types.hpp"
#include "mqsr/rng.hpp"

namespace mqsr::adversary {

using protocol::ParticleId;
using protocol::World;
using qsim::Basis;
using qsim::BellOutcome;
using qsim::Bit;

enum class StrategyKind : std::uint8_t { None, InterceptResend, DishonestAgent };
enum class TapTarget : std::uint8_t { KeyParticles, Travelling };

/// Data form of a strategy, parseable from "none", "eve:<Z|X|Y>:<key|travelling>"
/// and "dishonest:<cheater>:<victim>" (agent indices from 0).
struct StrategyDescriptor {
  StrategyKind kind = StrategyKind::None;
  Basis basis = Basis::Z;
  TapTarget target = TapTarget::Travelling;
  int cheater = 0;
  int victim = 1;

  static StrategyDescriptor none() { return {}; }
  static StrategyDescriptor intercept_resend(Basis basis, TapTarget target);
  static StrategyDescriptor dishonest_agent(int cheater, int victim);
  /// Throws std::invalid_argument on malformed text.
  static StrategyDescriptor parse(std::string_view text);

  [[nodiscard]] std::string to_string() const;
  bool operator==(const StrategyDescriptor&) const = default;
};

/// Whether the cheater must flip his honest result, by Bell outcome on
/// (captured B_victim, b1) and by the basis the victim announced.
///
/// Swapping leaves (A, B_cheater, b2) in the original label with a Pauli on b2:
/// psi- identity, psi+ Z (sign flip), phi- X (victim's correlation bit flips),
/// phi+ both. A sign flip inverts every X/Y parity; a correlation flip on the
/// victim inverts it only when the victim measured in Y.
struct CheatRule {
  /// flip[outcome][victim basis is Y]
  std::array<std::array<bool, 2>, 4> flip;

  [[nodiscard]] bool flip_for(BellOutcome outcome, Basis victim_basis) const {
    return flip[static_cast<std::size_t>(outcome)][victim_basis == Basis::Y ? 1 : 0];
  }
};

inline constexpr CheatRule kCheatRule{{{
    {true, false},   // phi+
    {false, true},   // phi-
    {true, true},    // psi+
    {false, false},  // psi-
}}};

struct TapRecord {
  int line = 0;            // agent index of the tapped line
  std::size_t index = 0;   // slot (key line) or report sequence number (travelling)
  Bit bit = 0;
};

struct SwapRecord {
  std::size_t position = 0;
  BellOutcome outcome = BellOutcome::PsiMinus;
};

class Adversary {
 public:
  explicit Adversary(StrategyDescriptor descriptor = {});

  [[nodiscard]] const StrategyDescriptor& descriptor() const { return descriptor_; }

  /// Drops held particles and position maps before a new key distribution.
  void reset();

  /// Measures `in_flight` in `basis`; the collapsed particle is forwarded under
  /// the same id. Returns the logged outcome.
  static Bit tap_intercept_resend(World& world, ParticleId in_flight, Basis basis, Rng& rng);

  /// Captures `in_flight` with a fresh psi- half b1 and returns b2 for forwarding.
  ParticleId tap_bell_substitute(World& world, std::size_t slot, ParticleId in_flight);

  /// Alice -> agent `line`, sequence slot `slot`. Returns the particle that
  /// reaches the agent.
  ParticleId tap_key_line(World& world, int line, std::size_t slot, ParticleId in_flight, Rng& rng);

  /// Agent `line` -> Alice. Returns the particle that reaches Alice.
  ParticleId tap_travelling(World& world, int line, ParticleId in_flight, Rng& rng);

  [[nodiscard]] bool is_cheater(int agent) const;

  /// Public slot -> key position map of an agent line, known once Alice has
  /// revealed the decoy slots.
  void observe_line_mapping(int line, const std::vector<std::optional<std::size_t>>& slot_to_position);

  /// True when the cheater can cheat on a check of `position`.
  [[nodiscard]] bool attacked(std::size_t position) const;

  /// Cheater's published result for a parity check on `position`. Bell-measures
  /// the held pair if that has not happened yet, measures `own` honestly in
  /// `own_basis`, and flips the result per kCheatRule. Throws std::out_of_range
  /// if `position` was not attacked.
  Bit cheat_publish(World& world, std::size_t position, ParticleId own, Basis own_basis,
                    Basis victim_basis, Rng& rng);

  /// Entanglement-swaps every still-held pair so b2 joins the GHZ system.
  void swap_remaining(World& world, Rng& rng);

  [[nodiscard]] const std::vector<TapRecord>& key_taps() const { return key_taps_; }
  [[nodiscard]] const std::vector<TapRecord>& travelling_taps() const { return travelling_taps_; }
  [[nodiscard]] const std::vector<SwapRecord>& swaps() const { return swaps_; }

  struct HeldPair {
    ParticleId captured;
    ParticleId b1;
  };
  /// Held pairs by victim-line slot.
  [[nodiscard]] const std::map<std::size_t, HeldPair>& held() const { return held_; }

 private:
  BellOutcome swap(World& world, std::size_t position, Rng& rng);

  StrategyDescriptor descriptor_;
  std::map<std::size_t, HeldPair> held_;
  std::map<std::size_t, std::size_t> position_to_slot_;
  std::map<std::size_t, BellOutcome> branch_;
  std::vector<TapRecord> key_taps_;
  std::vector<TapRecord> travelling_taps_;
  std::vector<SwapRecord> swaps_;
  std::size_t travelling_count_ = 0;
};

}  // namespace mqsr::adversary
