#pragma once

// The physics world of one protocol run. It owns every live StateVector and
// maps particle ids onto (system, qubit index). Parties and adversaries hold
// particle ids only, so no module outside this file depends on how qubits are
// ordered inside a register.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mqsr/qsim/operations.hpp"
#include "mqsr/qsim/state_vector.hpp"
#include "mqsr/rng.hpp"

namespace mqsr::protocol {

struct ParticleId {
  std::uint32_t value = 0;
  auto operator<=>(const ParticleId&) const = default;
};

class World {
 public:
  /// Registers `state` as a new system; returns one id per qubit, in qubit order.
  std::vector<ParticleId> create(qsim::StateVector state);
  ParticleId create_single(qsim::StateVector state);

  void apply(ParticleId particle, qsim::Gate gate);
  /// Merges the two systems first when the particles live in different ones.
  void cnot(ParticleId control, ParticleId target);
  /// Measures and splits the measured particle into its own system.
  qsim::Bit measure(ParticleId particle, qsim::Basis basis, Rng& rng);
  /// Bell-basis measurement; the pair ends up as its own two-qubit system.
  qsim::BellOutcome measure_bell(ParticleId first, ParticleId second, Rng& rng);
  /// Removes a particle that is not entangled with anything. Throws
  /// std::domain_error otherwise.
  void discard(ParticleId particle);

  [[nodiscard]] bool alive(ParticleId particle) const;
  [[nodiscard]] bool same_system(ParticleId a, ParticleId b) const;
  [[nodiscard]] const qsim::StateVector& system_state(ParticleId particle) const;
  [[nodiscard]] std::span<const ParticleId> system_particles(ParticleId particle) const;
  [[nodiscard]] int qubit_index(ParticleId particle) const;

  /// Joint state of exactly the given particles, in the given order. The
  /// particles must make up whole systems (they may span several).
  [[nodiscard]] qsim::StateVector joint_state(std::span<const ParticleId> particles) const;

  [[nodiscard]] std::size_t live_systems() const;
  [[nodiscard]] std::size_t particle_count() const { return home_.size(); }

 private:
  struct System {
    qsim::StateVector state;
    std::vector<ParticleId> particles;
  };

  static constexpr std::size_t kGone = static_cast<std::size_t>(-1);

  std::size_t home(ParticleId particle) const;
  std::size_t add_system(System system);
  std::size_t merge(std::size_t a, std::size_t b);
  void split_off(std::size_t system, int qubit);

  std::vector<std::optional<System>> systems_;
  std::vector<std::size_t> home_;
};

}  // namespace mqsr::protocol
