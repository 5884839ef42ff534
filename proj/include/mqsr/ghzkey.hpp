#pragma once

// GHZ key material: the family (|0 j...k> +- |1 j'...k'>)/sqrt2 on qubits
// ordered A, B_1, ..., B_M, Alice's private label ledger, and the parity rule
// that predicts the outcome of an X/Y check measurement.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mqsr/qsim/state_vector.hpp"
#include "mqsr/qsim/types.hpp"

namespace mqsr::ghz {

using qsim::Basis;
using qsim::Bit;

enum class Sign : std::uint8_t { Plus, Minus };

/// Alice's secret record of one key element. corr_bits[r] is 0 when B_{r+1}
/// is correlated with A in Z and 1 when anti-correlated.
struct GhzLabel {
  std::vector<Bit> corr_bits;
  Sign sign = Sign::Plus;

  /// parse("01", Sign::Minus) is (|001> - |110>)/sqrt2.
  static GhzLabel parse(std::string_view bits, Sign sign = Sign::Plus);

  [[nodiscard]] int num_agents() const { return static_cast<int>(corr_bits.size()); }
  /// "01-" style rendering.
  [[nodiscard]] std::string to_string() const;

  bool operator==(const GhzLabel&) const = default;
};

enum class Parity : std::uint8_t { Even, Odd };

/// Raised when a basis assignment does not have a deterministic joint parity.
/// Reaching it from protocol code means the check logic is wrong.
class ParityUndefined : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Largest M accepted by make_ghz; leaves room for the travelling qubit and a
/// substituted Bell pair inside the 16-qubit engine.
inline constexpr int kMaxAgents = 14;

qsim::StateVector make_ghz(const GhzLabel& label);

/// Basis Alice uses on A once the agents have announced theirs: X if an even
/// number of agents chose Y, otherwise Y. Throws std::invalid_argument on Z.
Basis alice_basis_choice(const GhzLabel& label, std::span<const Basis> agent_bases);

/// Parity (XOR of outcome bits, -1 eigenvalue = bit 1) that occurs with
/// certainty when every qubit of make_ghz(label) is measured in `all_bases`
/// (A first). Throws ParityUndefined unless all bases are X/Y with an even
/// number of Y.
///
/// For |0 c> + s|1 c'>, an X/Y string with 2t Y's has eigenvalue
/// s * (-1)^t * (-1)^(#Y on agents whose c bit is 1).
Parity expected_parity(const GhzLabel& label, std::span<const Basis> all_bases);

bool is_deterministic_assignment(std::span<const Basis> all_bases);

Parity parity_of(std::span<const Bit> bits);

/// Inverse of make_ghz; nullopt when `state` is not in the family (global
/// phase is ignored).
std::optional<GhzLabel> label_from_state(const qsim::StateVector& state,
                                         double tolerance = qsim::kNormTolerance);

enum class KeyStatus : std::uint8_t { Fresh, UsedForMessage, ConsumedForCheck };

struct KeyEntry {
  std::size_t position = 0;
  GhzLabel label;
  KeyStatus status = KeyStatus::Fresh;
  /// Bit r set once agent r has encrypted with this entry in the current round.
  std::uint32_t used_by = 0;
};

/// Alice-only ledger of the key. Status moves fresh -> used -> consumed,
/// fresh -> consumed, or used -> fresh when a round's reuse check passes.
class KeyLedger {
 public:
  void add(std::size_t position, GhzLabel label);

  [[nodiscard]] const KeyEntry& at(std::size_t position) const;
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] std::span<const KeyEntry> entries() const { return entries_; }
  [[nodiscard]] std::vector<std::size_t> positions_with(KeyStatus status) const;
  [[nodiscard]] bool usable_by(std::size_t position, int agent) const;

  void mark_used(std::size_t position, int agent);
  void mark_consumed(std::size_t position);
  /// Returns every used entry to fresh for the next round.
  void release_used();

 private:
  KeyEntry& entry(std::size_t position);

  std::vector<KeyEntry> entries_;
};

}  // namespace mqsr::ghz
