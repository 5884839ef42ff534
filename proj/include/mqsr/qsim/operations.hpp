#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <utility>

#include "mqsr/qsim/state_vector.hpp"
#include "mqsr/qsim/types.hpp"
#include "mqsr/rng.hpp"

namespace mqsr::qsim {

// Gate and measurement operations take the state by value and return the new
// state; move the argument in to avoid a copy.

StateVector make_basis_state(int num_qubits, std::string_view bits);

/// Single-qubit eigenstate of `basis` for outcome `bit` (|0>,|1>,|+-x>,|+-y>).
StateVector eigenstate(Basis basis, Bit bit);

StateVector bell_state(BellOutcome which);

StateVector apply_single(StateVector state, int qubit, Gate gate);
StateVector apply_cnot(StateVector state, int control, int target);

/// Kronecker product; qubits of `a` come first.
StateVector tensor(const StateVector& a, const StateVector& b);

struct MeasureOutcome {
  Bit bit;
  Basis basis;
  StateVector collapsed;
};

/// Born-rule probability that measuring `qubit` in `basis` yields bit 1.
double probability_of_one(const StateVector& state, int qubit, Basis basis);

MeasureOutcome measure(StateVector state, int qubit, Basis basis, Rng& rng);

/// Projects onto one outcome without sampling. Throws std::domain_error when the
/// outcome has (near) zero probability.
StateVector project(StateVector state, int qubit, Basis basis, Bit bit);

struct BellMeasurement {
  BellOutcome outcome;
  /// Full register with (q1, q2) in the observed Bell state.
  StateVector collapsed;
  /// The other qubits in their original order; empty for a two-qubit register.
  std::optional<StateVector> remainder;
};

/// Projection weights in BellOutcome order (phi+, phi-, psi+, psi-).
std::array<double, 4> bell_probabilities(const StateVector& state, int q1, int q2);

BellMeasurement measure_bell(const StateVector& state, int q1, int q2, Rng& rng);

/// Remainder after projecting (q1, q2) onto `which`, renormalized.
std::optional<StateVector> project_bell(const StateVector& state, int q1, int q2,
                                        BellOutcome which);

/// Splits `qubit` off a product state. Returns (single qubit, rest); rest is
/// empty when the register had one qubit. Throws std::domain_error if `qubit`
/// is entangled with the rest.
std::pair<StateVector, std::optional<StateVector>> factor_out(const StateVector& state,
                                                              int qubit);

/// New register whose qubit i is old qubit order[i]; `order` is a permutation.
StateVector permute(const StateVector& state, std::span<const int> order);

/// Equality up to a global phase, aligned on the largest-magnitude amplitude of `a`.
bool equal_up_to_global_phase(const StateVector& a, const StateVector& b,
                              double tolerance = kNormTolerance);

/// Haar-like random state: Gaussian amplitudes, normalized.
StateVector random_state(int num_qubits, Rng& rng);

/// |<a|b>|^2
double fidelity(const StateVector& a, const StateVector& b);

}  // namespace mqsr::qsim
