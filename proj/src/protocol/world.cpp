#include "mqsr/protocol/world.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mqsr::protocol {

std::vector<ParticleId> World::create(qsim::StateVector state) {
  const int n = state.num_qubits();
  std::vector<ParticleId> ids;
  ids.reserve(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) {
    ids.push_back(ParticleId{static_cast<std::uint32_t>(home_.size())});
    home_.push_back(kGone);
  }
  add_system(System{std::move(state), ids});
  return ids;
}

ParticleId World::create_single(qsim::StateVector state) {
  if (state.num_qubits() != 1) throw std::invalid_argument("create_single needs a one-qubit state");
  return create(std::move(state)).front();
}

std::size_t World::home(ParticleId particle) const {
  if (particle.value >= home_.size() || home_[particle.value] == kGone) {
    throw std::out_of_range("particle " + std::to_string(particle.value) + " is not alive");
  }
  return home_[particle.value];
}

std::size_t World::add_system(System system) {
  const std::size_t index = systems_.size();
  for (ParticleId p : system.particles) home_[p.value] = index;
  systems_.emplace_back(std::move(system));
  return index;
}

int World::qubit_index(ParticleId particle) const {
  const auto& ps = systems_[home(particle)]->particles;
  return static_cast<int>(std::find(ps.begin(), ps.end(), particle) - ps.begin());
}

std::size_t World::merge(std::size_t a, std::size_t b) {
  if (a == b) return a;
  System& sa = *systems_[a];
  System& sb = *systems_[b];
  System joined{qsim::tensor(sa.state, sb.state), sa.particles};
  joined.particles.insert(joined.particles.end(), sb.particles.begin(), sb.particles.end());
  systems_[a].reset();
  systems_[b].reset();
  return add_system(std::move(joined));
}

void World::split_off(std::size_t system, int qubit) {
  System& s = *systems_[system];
  if (s.state.num_qubits() == 1) return;
  auto [single, rest] = qsim::factor_out(s.state, qubit);
  const ParticleId particle = s.particles[static_cast<std::size_t>(qubit)];
  std::vector<ParticleId> others = s.particles;
  others.erase(others.begin() + qubit);
  systems_[system].reset();
  add_system(System{std::move(single), {particle}});
  add_system(System{std::move(*rest), std::move(others)});
}

void World::apply(ParticleId particle, qsim::Gate gate) {
  System& s = *systems_[home(particle)];
  s.state = qsim::apply_single(std::move(s.state), qubit_index(particle), gate);
}

void World::cnot(ParticleId control, ParticleId target) {
  const std::size_t merged = merge(home(control), home(target));
  System& s = *systems_[merged];
  s.state = qsim::apply_cnot(std::move(s.state), qubit_index(control), qubit_index(target));
}

qsim::Bit World::measure(ParticleId particle, qsim::Basis basis, Rng& rng) {
  const std::size_t sys = home(particle);
  const int q = qubit_index(particle);
  auto outcome = qsim::measure(std::move(systems_[sys]->state), q, basis, rng);
  systems_[sys]->state = std::move(outcome.collapsed);
  split_off(sys, q);
  return outcome.bit;
}

qsim::BellOutcome World::measure_bell(ParticleId first, ParticleId second, Rng& rng) {
  const std::size_t sys = merge(home(first), home(second));
  System& s = *systems_[sys];
  const int q1 = qubit_index(first);
  const int q2 = qubit_index(second);
  auto result = qsim::measure_bell(s.state, q1, q2, rng);
  if (!result.remainder) {
    s.state = qsim::bell_state(result.outcome);
    s.particles = {first, second};
    return result.outcome;
  }
  std::vector<ParticleId> others;
  for (ParticleId p : s.particles) {
    if (p != first && p != second) others.push_back(p);
  }
  systems_[sys].reset();
  add_system(System{qsim::bell_state(result.outcome), {first, second}});
  add_system(System{std::move(*result.remainder), std::move(others)});
  return result.outcome;
}

void World::discard(ParticleId particle) {
  const std::size_t sys = home(particle);
  split_off(sys, qubit_index(particle));
  const std::size_t single = home(particle);
  systems_[single].reset();
  home_[particle.value] = kGone;
}

bool World::alive(ParticleId particle) const {
  return particle.value < home_.size() && home_[particle.value] != kGone;
}

bool World::same_system(ParticleId a, ParticleId b) const { return home(a) == home(b); }

const qsim::StateVector& World::system_state(ParticleId particle) const {
  return systems_[home(particle)]->state;
}

std::span<const ParticleId> World::system_particles(ParticleId particle) const {
  return systems_[home(particle)]->particles;
}

qsim::StateVector World::joint_state(std::span<const ParticleId> particles) const {
  std::vector<std::size_t> order_of_systems;
  for (ParticleId p : particles) {
    const std::size_t h = home(p);
    if (std::find(order_of_systems.begin(), order_of_systems.end(), h) == order_of_systems.end()) {
      order_of_systems.push_back(h);
    }
  }
  std::optional<qsim::StateVector> joint;
  std::vector<ParticleId> joint_particles;
  for (std::size_t h : order_of_systems) {
    const System& s = *systems_[h];
    joint = joint ? qsim::tensor(*joint, s.state) : s.state;
    joint_particles.insert(joint_particles.end(), s.particles.begin(), s.particles.end());
  }
  if (joint_particles.size() != particles.size()) {
    throw std::invalid_argument("joint_state: particles do not form whole systems");
  }
  std::vector<int> order;
  for (ParticleId p : particles) {
    order.push_back(static_cast<int>(
        std::find(joint_particles.begin(), joint_particles.end(), p) - joint_particles.begin()));
  }
  return qsim::permute(*joint, order);
}

std::size_t World::live_systems() const {
  return static_cast<std::size_t>(
      std::count_if(systems_.begin(), systems_.end(), [](const auto& s) { return s.has_value(); }));
}

}  // namespace mqsr::protocol
