#include "mqsr/qsim/operations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mqsr/qsim/kernels.hpp"

namespace mqsr::qsim {

namespace kp = kernels::parallel;

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
// Outcomes with smaller weight are treated as impossible.
constexpr double kZeroProbability = 1e-14;

kernels::Matrix2 matrix_of(Gate gate) {
  const Complex i{0.0, 1.0};
  switch (gate) {
    case Gate::X: return {0.0, 1.0, 1.0, 0.0};
    case Gate::Z: return {1.0, 0.0, 0.0, -1.0};
    case Gate::H: return {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2};
    case Gate::S: return {1.0, 0.0, 0.0, i};
    case Gate::Sdg: return {1.0, 0.0, 0.0, -i};
  }
  throw std::invalid_argument("unknown gate");
}

void require_qubit(const StateVector& s, int qubit) {
  if (qubit < 0 || qubit >= s.num_qubits()) {
    throw std::out_of_range("qubit index " + std::to_string(qubit) + " out of range for " +
                            std::to_string(s.num_qubits()) + "-qubit register");
  }
}

void require_pair(const StateVector& s, int q1, int q2) {
  require_qubit(s, q1);
  require_qubit(s, q2);
  if (q1 == q2) throw std::invalid_argument("two-qubit operation needs distinct qubits");
}

void apply_in_place(StateVector& s, int qubit, Gate gate) {
  kp::apply_matrix(s.raw_amplitudes(), s.num_qubits(), qubit, matrix_of(gate));
}

// Rotates `basis` onto Z: X via H, Y via S-dagger then H.
void rotate_to_z(StateVector& s, int qubit, Basis basis) {
  if (basis == Basis::X) {
    apply_in_place(s, qubit, Gate::H);
  } else if (basis == Basis::Y) {
    apply_in_place(s, qubit, Gate::Sdg);
    apply_in_place(s, qubit, Gate::H);
  }
}

void rotate_from_z(StateVector& s, int qubit, Basis basis) {
  if (basis == Basis::X) {
    apply_in_place(s, qubit, Gate::H);
  } else if (basis == Basis::Y) {
    apply_in_place(s, qubit, Gate::H);
    apply_in_place(s, qubit, Gate::S);
  }
}

kernels::PairCoefficients coefficients_of(BellOutcome which) {
  switch (which) {
    case BellOutcome::PhiPlus: return {kInvSqrt2, 0.0, 0.0, kInvSqrt2};
    case BellOutcome::PhiMinus: return {kInvSqrt2, 0.0, 0.0, -kInvSqrt2};
    case BellOutcome::PsiPlus: return {0.0, kInvSqrt2, kInvSqrt2, 0.0};
    case BellOutcome::PsiMinus: return {0.0, kInvSqrt2, -kInvSqrt2, 0.0};
  }
  throw std::invalid_argument("unknown Bell outcome");
}

// Embeds `pair` on (q1, q2) and `rest` on the remaining qubits, in order.
StateVector embed_pair(int num_qubits, int q1, int q2, const kernels::PairCoefficients& pair,
                       const std::vector<Complex>& rest) {
  const std::size_t m1 = kernels::bit_of(num_qubits, q1);
  const std::size_t m2 = kernels::bit_of(num_qubits, q2);
  const std::size_t lo = std::min(m1, m2);
  const std::size_t hi = std::max(m1, m2);
  std::vector<Complex> amps(std::size_t{1} << num_qubits);
  for (std::size_t i = 0; i < rest.size(); ++i) {
    const std::size_t base = kernels::insert_zero(kernels::insert_zero(i, lo), hi);
    amps[base] = pair[0] * rest[i];
    amps[base | m2] = pair[1] * rest[i];
    amps[base | m1] = pair[2] * rest[i];
    amps[base | m1 | m2] = pair[3] * rest[i];
  }
  return StateVector(num_qubits, std::move(amps));
}

std::vector<Complex> normalized_projection(const StateVector& state, int q1, int q2,
                                           BellOutcome which, double weight) {
  std::vector<Complex> rest(state.dimension() / 4);
  kp::project_pair(state.amplitudes(), state.num_qubits(), q1, q2, coefficients_of(which), rest);
  const double scale = 1.0 / std::sqrt(weight);
  for (Complex& a : rest) a *= scale;
  return rest;
}

}  // namespace

StateVector make_basis_state(int num_qubits, std::string_view bits) {
  require_qubit_count(num_qubits);
  if (bits.size() != static_cast<std::size_t>(num_qubits)) {
    throw std::invalid_argument("bit string length does not match qubit count");
  }
  std::size_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("bit string must contain only 0/1");
    index = (index << 1) | static_cast<std::size_t>(c == '1');
  }
  std::vector<Complex> amps(std::size_t{1} << num_qubits);
  amps[index] = 1.0;
  return StateVector(num_qubits, std::move(amps));
}

StateVector eigenstate(Basis basis, Bit bit) {
  StateVector s = make_basis_state(1, bit ? "1" : "0");
  rotate_from_z(s, 0, basis);
  return s;
}

StateVector bell_state(BellOutcome which) {
  const auto c = coefficients_of(which);
  return StateVector(2, {c[0], c[1], c[2], c[3]});
}

StateVector apply_single(StateVector state, int qubit, Gate gate) {
  require_qubit(state, qubit);
  apply_in_place(state, qubit, gate);
  return state;
}

StateVector apply_cnot(StateVector state, int control, int target) {
  require_pair(state, control, target);
  kp::apply_cnot(state.raw_amplitudes(), state.num_qubits(), control, target);
  return state;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  const int n = a.num_qubits() + b.num_qubits();
  if (n > kMaxQubits) {
    throw std::invalid_argument("tensor product exceeds " + std::to_string(kMaxQubits) + " qubits");
  }
  std::vector<Complex> amps(a.dimension() * b.dimension());
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    for (std::size_t j = 0; j < b.dimension(); ++j) {
      amps[i * b.dimension() + j] = a[i] * b[j];
    }
  }
  return StateVector(n, std::move(amps));
}

double probability_of_one(const StateVector& state, int qubit, Basis basis) {
  require_qubit(state, qubit);
  if (basis == Basis::Z) {
    return kp::probability_of_one(state.amplitudes(), state.num_qubits(), qubit);
  }
  StateVector rotated = state;
  rotate_to_z(rotated, qubit, basis);
  return kp::probability_of_one(rotated.amplitudes(), rotated.num_qubits(), qubit);
}

StateVector project(StateVector state, int qubit, Basis basis, Bit bit) {
  require_qubit(state, qubit);
  rotate_to_z(state, qubit, basis);
  const double p1 = kp::probability_of_one(state.amplitudes(), state.num_qubits(), qubit);
  const double p = bit ? p1 : 1.0 - p1;
  if (p < kZeroProbability) throw std::domain_error("projection onto a zero-probability outcome");
  kp::collapse(state.raw_amplitudes(), state.num_qubits(), qubit, bit, p);
  rotate_from_z(state, qubit, basis);
  return state;
}

MeasureOutcome measure(StateVector state, int qubit, Basis basis, Rng& rng) {
  require_qubit(state, qubit);
  rotate_to_z(state, qubit, basis);
  const double p1 =
      std::clamp(kp::probability_of_one(state.amplitudes(), state.num_qubits(), qubit), 0.0, 1.0);
  const Bit bit = rng.uniform() < p1 ? 1 : 0;
  kp::collapse(state.raw_amplitudes(), state.num_qubits(), qubit, bit, bit ? p1 : 1.0 - p1);
  rotate_from_z(state, qubit, basis);
  return MeasureOutcome{bit, basis, std::move(state)};
}

std::array<double, 4> bell_probabilities(const StateVector& state, int q1, int q2) {
  require_pair(state, q1, q2);
  return kp::bell_weights(state.amplitudes(), state.num_qubits(), q1, q2);
}

std::optional<StateVector> project_bell(const StateVector& state, int q1, int q2,
                                        BellOutcome which) {
  const auto weights = bell_probabilities(state, q1, q2);
  const double w = weights[static_cast<std::size_t>(which)];
  if (w < kZeroProbability) throw std::domain_error("projection onto a zero-probability Bell state");
  if (state.num_qubits() == 2) return std::nullopt;
  return StateVector(state.num_qubits() - 2, normalized_projection(state, q1, q2, which, w));
}

BellMeasurement measure_bell(const StateVector& state, int q1, int q2, Rng& rng) {
  const auto weights = bell_probabilities(state, q1, q2);
  const double u = rng.uniform() * (weights[0] + weights[1] + weights[2] + weights[3]);
  std::size_t pick = 0;
  double acc = weights[0];
  while (pick < 3 && (u >= acc || weights[pick] < kZeroProbability)) {
    ++pick;
    acc += weights[pick];
  }
  const auto outcome = static_cast<BellOutcome>(pick);
  if (state.num_qubits() == 2) {
    return BellMeasurement{outcome, bell_state(outcome), std::nullopt};
  }
  std::vector<Complex> rest = normalized_projection(state, q1, q2, outcome, weights[pick]);
  StateVector collapsed = embed_pair(state.num_qubits(), q1, q2, coefficients_of(outcome), rest);
  return BellMeasurement{outcome, std::move(collapsed),
                         StateVector(state.num_qubits() - 2, std::move(rest))};
}

std::pair<StateVector, std::optional<StateVector>> factor_out(const StateVector& state,
                                                              int qubit) {
  require_qubit(state, qubit);
  const int n = state.num_qubits();
  if (n == 1) return {state, std::nullopt};

  const std::size_t mask = kernels::bit_of(n, qubit);
  const std::size_t half = state.dimension() / 2;
  // Pick the rest-index with the most weight to read off the single-qubit factor.
  std::size_t best = 0;
  double best_weight = -1.0;
  for (std::size_t r = 0; r < half; ++r) {
    const std::size_t i0 = kernels::insert_zero(r, mask);
    const double w = std::norm(state[i0]) + std::norm(state[i0 | mask]);
    if (w > best_weight) {
      best_weight = w;
      best = r;
    }
  }
  const std::size_t b0 = kernels::insert_zero(best, mask);
  const double scale = 1.0 / std::sqrt(best_weight);
  const Complex phi0 = state[b0] * scale;
  const Complex phi1 = state[b0 | mask] * scale;

  std::vector<Complex> rest(half);
  for (std::size_t r = 0; r < half; ++r) {
    const std::size_t i0 = kernels::insert_zero(r, mask);
    rest[r] = std::conj(phi0) * state[i0] + std::conj(phi1) * state[i0 | mask];
  }
  double residual = 0.0;
  for (std::size_t r = 0; r < half; ++r) {
    const std::size_t i0 = kernels::insert_zero(r, mask);
    residual += std::norm(state[i0] - phi0 * rest[r]) + std::norm(state[i0 | mask] - phi1 * rest[r]);
  }
  if (residual > kNormTolerance) {
    throw std::domain_error("qubit " + std::to_string(qubit) + " is entangled with the register");
  }
  return {StateVector(1, {phi0, phi1}), StateVector(n - 1, std::move(rest))};
}

StateVector permute(const StateVector& state, std::span<const int> order) {
  const int n = state.num_qubits();
  if (order.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("permutation length does not match qubit count");
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int q : order) {
    if (q < 0 || q >= n || seen[static_cast<std::size_t>(q)]) {
      throw std::invalid_argument("order is not a permutation");
    }
    seen[static_cast<std::size_t>(q)] = true;
  }
  std::vector<Complex> amps(state.dimension());
  for (std::size_t old_index = 0; old_index < state.dimension(); ++old_index) {
    std::size_t new_index = 0;
    for (int i = 0; i < n; ++i) {
      if (old_index & kernels::bit_of(n, order[static_cast<std::size_t>(i)])) {
        new_index |= kernels::bit_of(n, i);
      }
    }
    amps[new_index] = state[old_index];
  }
  return StateVector(n, std::move(amps));
}

bool equal_up_to_global_phase(const StateVector& a, const StateVector& b, double tolerance) {
  if (a.num_qubits() != b.num_qubits()) return false;
  std::size_t k = 0;
  for (std::size_t i = 1; i < a.dimension(); ++i) {
    if (std::abs(a[i]) > std::abs(a[k])) k = i;
  }
  if (std::abs(b[k]) < tolerance) return false;
  Complex phase = b[k] / a[k];
  phase /= std::abs(phase);
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    if (std::abs(b[i] - phase * a[i]) > tolerance) return false;
  }
  return true;
}

StateVector random_state(int num_qubits, Rng& rng) {
  require_qubit_count(num_qubits);
  std::vector<Complex> amps(std::size_t{1} << num_qubits);
  double total = 0.0;
  for (Complex& a : amps) {
    // Box-Muller; 1 - u keeps the logarithm finite.
    const double r = std::sqrt(-2.0 * std::log(1.0 - rng.uniform()));
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    a = Complex{r * std::cos(theta), r * std::sin(theta)};
    total += std::norm(a);
  }
  const double scale = 1.0 / std::sqrt(total);
  for (Complex& a : amps) a *= scale;
  return StateVector(num_qubits, std::move(amps));
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits()) throw std::invalid_argument("register sizes differ");
  Complex overlap = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) overlap += std::conj(a[i]) * b[i];
  return std::norm(overlap);
}

}  // namespace mqsr::qsim
