#include "mqsr/adversary.hpp"

#include <stdexcept>
#include <string>

#include "mqsr/qsim/operations.hpp"

namespace mqsr::adversary {

StrategyDescriptor StrategyDescriptor::intercept_resend(Basis basis, TapTarget target) {
  StrategyDescriptor d;
  d.kind = StrategyKind::InterceptResend;
  d.basis = basis;
  d.target = target;
  return d;
}

StrategyDescriptor StrategyDescriptor::dishonest_agent(int cheater, int victim) {
  if (cheater < 0 || victim < 0 || cheater == victim) {
    throw std::invalid_argument("dishonest agent needs distinct cheater and victim indices");
  }
  StrategyDescriptor d;
  d.kind = StrategyKind::DishonestAgent;
  d.cheater = cheater;
  d.victim = victim;
  return d;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = text.find(':', start);
    out.push_back(text.substr(start, colon == std::string_view::npos ? colon : colon - start));
    if (colon == std::string_view::npos) return out;
    start = colon + 1;
  }
}

int parse_index(std::string_view field) {
  if (field.empty()) throw std::invalid_argument("empty agent index");
  int v = 0;
  for (char c : field) {
    if (c < '0' || c > '9') throw std::invalid_argument("agent index must be a number");
    v = v * 10 + (c - '0');
  }
  return v;
}

}  // namespace

StrategyDescriptor StrategyDescriptor::parse(std::string_view text) {
  const auto f = split_fields(text);
  if (f[0] == "none" && f.size() == 1) return none();
  if (f[0] == "eve" && f.size() == 3) {
    Basis basis;
    if (f[1] == "Z") {
      basis = Basis::Z;
    } else if (f[1] == "X") {
      basis = Basis::X;
    } else if (f[1] == "Y") {
      basis = Basis::Y;
    } else {
      throw std::invalid_argument("eve basis must be Z, X or Y");
    }
    TapTarget target;
    if (f[2] == "key") {
      target = TapTarget::KeyParticles;
    } else if (f[2] == "travelling") {
      target = TapTarget::Travelling;
    } else {
      throw std::invalid_argument("eve target must be key or travelling");
    }
    return intercept_resend(basis, target);
  }
  if (f[0] == "dishonest" && f.size() == 3) {
    return dishonest_agent(parse_index(f[1]), parse_index(f[2]));
  }
  throw std::invalid_argument("unknown strategy '" + std::string(text) + "'");
}

std::string StrategyDescriptor::to_string() const {
  switch (kind) {
    case StrategyKind::None: return "none";
    case StrategyKind::InterceptResend:
      return "eve:" + std::string(qsim::to_string(basis)) + ":" +
             (target == TapTarget::KeyParticles ? "key" : "travelling");
    case StrategyKind::DishonestAgent:
      return "dishonest:" + std::to_string(cheater) + ":" + std::to_string(victim);
  }
  return "?";
}

Adversary::Adversary(StrategyDescriptor descriptor) : descriptor_(descriptor) {}

void Adversary::reset() {
  held_.clear();
  position_to_slot_.clear();
  branch_.clear();
}

Bit Adversary::tap_intercept_resend(World& world, ParticleId in_flight, Basis basis, Rng& rng) {
  return world.measure(in_flight, basis, rng);
}

ParticleId Adversary::tap_bell_substitute(World& world, std::size_t slot, ParticleId in_flight) {
  const auto pair = world.create(qsim::bell_state(BellOutcome::PsiMinus));
  held_[slot] = HeldPair{in_flight, pair[0]};
  return pair[1];
}

ParticleId Adversary::tap_key_line(World& world, int line, std::size_t slot, ParticleId in_flight,
                                   Rng& rng) {
  switch (descriptor_.kind) {
    case StrategyKind::None: return in_flight;
    case StrategyKind::InterceptResend:
      if (descriptor_.target == TapTarget::KeyParticles) {
        key_taps_.push_back({line, slot, tap_intercept_resend(world, in_flight, descriptor_.basis, rng)});
      }
      return in_flight;
    case StrategyKind::DishonestAgent:
      if (line == descriptor_.victim) return tap_bell_substitute(world, slot, in_flight);
      return in_flight;
  }
  return in_flight;
}

ParticleId Adversary::tap_travelling(World& world, int line, ParticleId in_flight, Rng& rng) {
  const std::size_t index = travelling_count_++;
  if (descriptor_.kind == StrategyKind::InterceptResend &&
      descriptor_.target == TapTarget::Travelling) {
    travelling_taps_.push_back({line, index, tap_intercept_resend(world, in_flight, descriptor_.basis, rng)});
  }
  return in_flight;
}

bool Adversary::is_cheater(int agent) const {
  return descriptor_.kind == StrategyKind::DishonestAgent && agent == descriptor_.cheater;
}

void Adversary::observe_line_mapping(int line,
                                     const std::vector<std::optional<std::size_t>>& slot_to_position) {
  if (descriptor_.kind != StrategyKind::DishonestAgent || line != descriptor_.victim) return;
  for (std::size_t slot = 0; slot < slot_to_position.size(); ++slot) {
    if (slot_to_position[slot]) position_to_slot_[*slot_to_position[slot]] = slot;
  }
}

bool Adversary::attacked(std::size_t position) const {
  if (descriptor_.kind != StrategyKind::DishonestAgent) return false;
  if (branch_.contains(position)) return true;
  const auto it = position_to_slot_.find(position);
  return it != position_to_slot_.end() && held_.contains(it->second);
}

BellOutcome Adversary::swap(World& world, std::size_t position, Rng& rng) {
  const std::size_t slot = position_to_slot_.at(position);
  const HeldPair pair = held_.at(slot);
  const BellOutcome outcome = world.measure_bell(pair.captured, pair.b1, rng);
  held_.erase(slot);
  branch_[position] = outcome;
  swaps_.push_back({position, outcome});
  return outcome;
}

Bit Adversary::cheat_publish(World& world, std::size_t position, ParticleId own, Basis own_basis,
                             Basis victim_basis, Rng& rng) {
  if (!attacked(position)) {
    throw std::out_of_range("cheat_publish: position " + std::to_string(position) +
                            " was not substituted");
  }
  const auto known = branch_.find(position);
  const BellOutcome outcome = known != branch_.end() ? known->second : swap(world, position, rng);
  const Bit honest = world.measure(own, own_basis, rng);
  return static_cast<Bit>(honest ^ (kCheatRule.flip_for(outcome, victim_basis) ? 1 : 0));
}

void Adversary::swap_remaining(World& world, Rng& rng) {
  if (descriptor_.kind != StrategyKind::DishonestAgent) return;
  for (const auto& [position, slot] : position_to_slot_) {
    if (held_.contains(slot)) swap(world, position, rng);
  }
}

}  // namespace mqsr::adversary
