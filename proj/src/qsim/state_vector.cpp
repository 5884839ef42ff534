#include "mqsr/qsim/state_vector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mqsr/qsim/kernels.hpp"

namespace mqsr::qsim {

void require_qubit_count(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count " + std::to_string(num_qubits) +
                                " outside [1, " + std::to_string(kMaxQubits) + "]");
  }
}

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
  require_qubit_count(num_qubits);
  amplitudes_.assign(std::size_t{1} << num_qubits, Complex{0.0, 0.0});
  amplitudes_[0] = 1.0;
}

StateVector::StateVector(int num_qubits, std::vector<Complex> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  require_qubit_count(num_qubits);
  if (amplitudes_.size() != (std::size_t{1} << num_qubits)) {
    throw std::invalid_argument("amplitude count does not match 2^" + std::to_string(num_qubits));
  }
  if (std::abs(norm_squared() - 1.0) > kNormTolerance) {
    throw std::invalid_argument("state is not normalized");
  }
}

double StateVector::norm_squared() const { return kernels::parallel::norm_squared(amplitudes_); }

}  // namespace mqsr::qsim
