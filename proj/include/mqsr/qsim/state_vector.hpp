#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mqsr/qsim/types.hpp"

namespace mqsr::qsim {

/// Pure state of an n-qubit register, 1 <= n <= 16, with 2^n amplitudes.
///
/// Qubit 0 is the most significant bit of the amplitude index; in a ket string
/// "b0 b1 ... b(n-1)" the first character addresses qubit 0.
class StateVector {
 public:
  /// |0...0> on `num_qubits` qubits.
  explicit StateVector(int num_qubits);

  /// Takes ownership of `amplitudes`. Throws std::invalid_argument on a bad
  /// qubit count, a length other than 2^n, or a norm off by more than 1e-9.
  StateVector(int num_qubits, std::vector<Complex> amplitudes);

  [[nodiscard]] int num_qubits() const { return num_qubits_; }
  [[nodiscard]] std::size_t dimension() const { return amplitudes_.size(); }
  [[nodiscard]] std::span<const Complex> amplitudes() const { return amplitudes_; }
  [[nodiscard]] const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }
  [[nodiscard]] double norm_squared() const;

  /// Mutable view for kernels. Callers own restoring the unit norm.
  [[nodiscard]] std::span<Complex> raw_amplitudes() { return amplitudes_; }

 private:
  int num_qubits_;
  std::vector<Complex> amplitudes_;
};

void require_qubit_count(int num_qubits);

}  // namespace mqsr::qsim
