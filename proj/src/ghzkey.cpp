#include "mqsr/ghzkey.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mqsr/qsim/kernels.hpp"

namespace mqsr::ghz {

GhzLabel GhzLabel::parse(std::string_view bits, Sign sign) {
  GhzLabel label;
  label.sign = sign;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("label bits must be 0/1");
    label.corr_bits.push_back(c == '1' ? 1 : 0);
  }
  return label;
}

std::string GhzLabel::to_string() const {
  std::string s;
  for (Bit b : corr_bits) s.push_back(b ? '1' : '0');
  s.push_back(sign == Sign::Plus ? '+' : '-');
  return s;
}

qsim::StateVector make_ghz(const GhzLabel& label) {
  const int m = label.num_agents();
  if (m < 1 || m > kMaxAgents) {
    throw std::invalid_argument("GHZ label needs between 1 and " + std::to_string(kMaxAgents) +
                                " agents");
  }
  const int n = m + 1;
  std::size_t u = 0;  // index of |0 c>
  for (int r = 0; r < m; ++r) {
    if (label.corr_bits[static_cast<std::size_t>(r)]) u |= qsim::kernels::bit_of(n, r + 1);
  }
  const std::size_t all = (std::size_t{1} << n) - 1;
  std::vector<qsim::Complex> amps(std::size_t{1} << n);
  const double h = 1.0 / std::numbers::sqrt2;
  amps[u] = h;
  amps[u ^ all] = label.sign == Sign::Plus ? h : -h;
  return qsim::StateVector(n, std::move(amps));
}

Basis alice_basis_choice(const GhzLabel& label, std::span<const Basis> agent_bases) {
  if (agent_bases.size() != label.corr_bits.size()) {
    throw std::invalid_argument("one basis per agent expected");
  }
  std::size_t y_count = 0;
  for (Basis b : agent_bases) {
    if (b == Basis::Z) throw std::invalid_argument("agents check in X or Y only");
    if (b == Basis::Y) ++y_count;
  }
  return y_count % 2 == 0 ? Basis::X : Basis::Y;
}

bool is_deterministic_assignment(std::span<const Basis> all_bases) {
  std::size_t y_count = 0;
  for (Basis b : all_bases) {
    if (b == Basis::Z) return false;
    if (b == Basis::Y) ++y_count;
  }
  return y_count % 2 == 0;
}

Parity expected_parity(const GhzLabel& label, std::span<const Basis> all_bases) {
  if (all_bases.size() != label.corr_bits.size() + 1) {
    throw std::invalid_argument("expected_parity needs M+1 bases, A first");
  }
  if (!is_deterministic_assignment(all_bases)) {
    throw ParityUndefined("basis assignment has no deterministic parity");
  }
  std::size_t y_count = 0;
  unsigned parity = label.sign == Sign::Minus ? 1u : 0u;
  for (std::size_t q = 0; q < all_bases.size(); ++q) {
    if (all_bases[q] != Basis::Y) continue;
    ++y_count;
    if (q > 0 && label.corr_bits[q - 1]) parity ^= 1u;
  }
  parity ^= static_cast<unsigned>((y_count / 2) % 2);
  return parity ? Parity::Odd : Parity::Even;
}

Parity parity_of(std::span<const Bit> bits) {
  unsigned p = 0;
  for (Bit b : bits) p ^= b & 1u;
  return p ? Parity::Odd : Parity::Even;
}

std::optional<GhzLabel> label_from_state(const qsim::StateVector& state, double tolerance) {
  const int n = state.num_qubits();
  if (n < 2) return std::nullopt;
  const std::size_t all = state.dimension() - 1;
  const std::size_t a_mask = qsim::kernels::bit_of(n, 0);
  // The |0 c> term lives in the lower half of the index space.
  std::size_t u = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < a_mask; ++i) {
    if (std::abs(state[i]) > best) {
      best = std::abs(state[i]);
      u = i;
    }
  }
  const double h = 1.0 / std::numbers::sqrt2;
  const qsim::Complex au = state[u];
  const qsim::Complex av = state[u ^ all];
  if (std::abs(std::abs(au) - h) > tolerance || std::abs(std::abs(av) - h) > tolerance) {
    return std::nullopt;
  }
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    if (i != u && i != (u ^ all) && std::abs(state[i]) > tolerance) return std::nullopt;
  }
  const qsim::Complex ratio = av / au;
  Sign sign;
  if (std::abs(ratio - 1.0) <= tolerance) {
    sign = Sign::Plus;
  } else if (std::abs(ratio + 1.0) <= tolerance) {
    sign = Sign::Minus;
  } else {
    return std::nullopt;
  }
  GhzLabel label;
  label.sign = sign;
  for (int q = 1; q < n; ++q) {
    label.corr_bits.push_back((u & qsim::kernels::bit_of(n, q)) ? 1 : 0);
  }
  return label;
}

void KeyLedger::add(std::size_t position, GhzLabel label) {
  if (position != entries_.size()) throw std::invalid_argument("key positions must be dense");
  entries_.push_back(KeyEntry{position, std::move(label), KeyStatus::Fresh, 0});
}

const KeyEntry& KeyLedger::at(std::size_t position) const {
  if (position >= entries_.size()) throw std::out_of_range("no key entry at position");
  return entries_[position];
}

KeyEntry& KeyLedger::entry(std::size_t position) {
  if (position >= entries_.size()) throw std::out_of_range("no key entry at position");
  return entries_[position];
}

std::vector<std::size_t> KeyLedger::positions_with(KeyStatus status) const {
  std::vector<std::size_t> out;
  for (const KeyEntry& e : entries_) {
    if (e.status == status) out.push_back(e.position);
  }
  return out;
}

bool KeyLedger::usable_by(std::size_t position, int agent) const {
  const KeyEntry& e = at(position);
  return e.status != KeyStatus::ConsumedForCheck && (e.used_by & (1u << agent)) == 0;
}

void KeyLedger::mark_used(std::size_t position, int agent) {
  KeyEntry& e = entry(position);
  if (agent < 0 || agent >= e.label.num_agents()) throw std::out_of_range("unknown agent index");
  if (e.status == KeyStatus::ConsumedForCheck) {
    throw std::logic_error("key entry was consumed by a check");
  }
  if (e.used_by & (1u << agent)) {
    throw std::logic_error("agent already used this key entry in the current round");
  }
  e.used_by |= 1u << agent;
  e.status = KeyStatus::UsedForMessage;
}

void KeyLedger::mark_consumed(std::size_t position) {
  KeyEntry& e = entry(position);
  if (e.status == KeyStatus::ConsumedForCheck) throw std::logic_error("key entry already consumed");
  e.status = KeyStatus::ConsumedForCheck;
}

void KeyLedger::release_used() {
  for (KeyEntry& e : entries_) {
    if (e.status == KeyStatus::UsedForMessage) e.status = KeyStatus::Fresh;
    e.used_by = 0;
  }
}

}  // namespace mqsr::ghz
