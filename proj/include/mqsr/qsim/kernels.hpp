#pragma once

// Amplitude-level kernels. Qubit q of an n-qubit register is bit (n-1-q) of the
// amplitude index, so qubit 0 is the most significant bit.
//
// `serial` is the reference implementation. `parallel` runs the same loops with
// OpenMP work sharing once the register is large enough to amortize a fork.
// Both must agree to within rounding; tests/test_kernels.cpp enforces that.

#include <array>
#include <cstddef>
#include <span>

#include "mqsr/qsim/types.hpp"

namespace mqsr::qsim::kernels {

/// Row-major 2x2 matrix {m00, m01, m10, m11}.
using Matrix2 = std::array<Complex, 4>;

/// Coefficients (c00, c01, c10, c11) of a two-qubit state on (q1, q2).
using PairCoefficients = std::array<Complex, 4>;

/// Weights of the projections onto phi+, phi-, psi+, psi- (BellOutcome order).
using BellWeights = std::array<double, 4>;

/// Registers at or above this dimension use OpenMP in the parallel kernels.
inline constexpr std::size_t kParallelMinDimension = std::size_t{1} << 12;

inline constexpr std::size_t bit_of(int num_qubits, int qubit) {
  return std::size_t{1} << (num_qubits - 1 - qubit);
}

/// Spreads the bits of `i` around a zero inserted at `mask` (a single set bit).
inline constexpr std::size_t insert_zero(std::size_t i, std::size_t mask) {
  const std::size_t low = mask - 1;
  return ((i & ~low) << 1) | (i & low);
}

namespace serial {
void apply_matrix(std::span<Complex> amps, int num_qubits, int qubit, const Matrix2& m);
void apply_cnot(std::span<Complex> amps, int num_qubits, int control, int target);
double probability_of_one(std::span<const Complex> amps, int num_qubits, int qubit);
void collapse(std::span<Complex> amps, int num_qubits, int qubit, Bit bit, double probability);
BellWeights bell_weights(std::span<const Complex> amps, int num_qubits, int q1, int q2);
/// out[r] = sum_ab conj(c_ab) * amps[r with (q1,q2) = (a,b)]; out has size 2^(n-2).
void project_pair(std::span<const Complex> amps, int num_qubits, int q1, int q2,
                  const PairCoefficients& coeffs, std::span<Complex> out);
double norm_squared(std::span<const Complex> amps);
}  // namespace serial

namespace parallel {
void apply_matrix(std::span<Complex> amps, int num_qubits, int qubit, const Matrix2& m);
void apply_cnot(std::span<Complex> amps, int num_qubits, int control, int target);
double probability_of_one(std::span<const Complex> amps, int num_qubits, int qubit);
void collapse(std::span<Complex> amps, int num_qubits, int qubit, Bit bit, double probability);
BellWeights bell_weights(std::span<const Complex> amps, int num_qubits, int q1, int q2);
void project_pair(std::span<const Complex> amps, int num_qubits, int q1, int q2,
                  const PairCoefficients& coeffs, std::span<Complex> out);
double norm_squared(std::span<const Complex> amps);
}  // namespace parallel

}  // namespace mqsr::qsim::kernels
