#include "mqsr/qsim/kernels.hpp"

#include <cmath>
#include <utility>

namespace mqsr::qsim::kernels::serial {

void apply_matrix(std::span<Complex> amps, int num_qubits, int qubit, const Matrix2& m) {
  const std::size_t mask = bit_of(num_qubits, qubit);
  const std::size_t half = amps.size() / 2;
  for (std::size_t i = 0; i < half; ++i) {
    const std::size_t i0 = insert_zero(i, mask);
    const std::size_t i1 = i0 | mask;
    const Complex a0 = amps[i0];
    const Complex a1 = amps[i1];
    amps[i0] = m[0] * a0 + m[1] * a1;
    amps[i1] = m[2] * a0 + m[3] * a1;
  }
}

void apply_cnot(std::span<Complex> amps, int num_qubits, int control, int target) {
  const std::size_t cmask = bit_of(num_qubits, control);
  const std::size_t tmask = bit_of(num_qubits, target);
  const std::size_t lo = cmask < tmask ? cmask : tmask;
  const std::size_t hi = cmask < tmask ? tmask : cmask;
  const std::size_t quarter = amps.size() / 4;
  for (std::size_t i = 0; i < quarter; ++i) {
    const std::size_t base = insert_zero(insert_zero(i, lo), hi) | cmask;
    std::swap(amps[base], amps[base | tmask]);
  }
}

double probability_of_one(std::span<const Complex> amps, int num_qubits, int qubit) {
  const std::size_t mask = bit_of(num_qubits, qubit);
  const std::size_t half = amps.size() / 2;
  double p = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    p += std::norm(amps[insert_zero(i, mask) | mask]);
  }
  return p;
}

void collapse(std::span<Complex> amps, int num_qubits, int qubit, Bit bit, double probability) {
  const std::size_t mask = bit_of(num_qubits, qubit);
  const double scale = 1.0 / std::sqrt(probability);
  const std::size_t half = amps.size() / 2;
  for (std::size_t i = 0; i < half; ++i) {
    const std::size_t i0 = insert_zero(i, mask);
    const std::size_t keep = bit ? (i0 | mask) : i0;
    const std::size_t drop = bit ? i0 : (i0 | mask);
    amps[keep] *= scale;
    amps[drop] = 0.0;
  }
}

BellWeights bell_weights(std::span<const Complex> amps, int num_qubits, int q1, int q2) {
  const std::size_t m1 = bit_of(num_qubits, q1);
  const std::size_t m2 = bit_of(num_qubits, q2);
  const std::size_t lo = m1 < m2 ? m1 : m2;
  const std::size_t hi = m1 < m2 ? m2 : m1;
  const std::size_t quarter = amps.size() / 4;
  BellWeights w{0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < quarter; ++i) {
    const std::size_t base = insert_zero(insert_zero(i, lo), hi);
    const Complex a00 = amps[base];
    const Complex a01 = amps[base | m2];
    const Complex a10 = amps[base | m1];
    const Complex a11 = amps[base | m1 | m2];
    w[0] += 0.5 * std::norm(a00 + a11);
    w[1] += 0.5 * std::norm(a00 - a11);
    w[2] += 0.5 * std::norm(a01 + a10);
    w[3] += 0.5 * std::norm(a01 - a10);
  }
  return w;
}

void project_pair(std::span<const Complex> amps, int num_qubits, int q1, int q2,
                  const PairCoefficients& coeffs, std::span<Complex> out) {
  const std::size_t m1 = bit_of(num_qubits, q1);
  const std::size_t m2 = bit_of(num_qubits, q2);
  const std::size_t lo = m1 < m2 ? m1 : m2;
  const std::size_t hi = m1 < m2 ? m2 : m1;
  const std::size_t quarter = amps.size() / 4;
  for (std::size_t i = 0; i < quarter; ++i) {
    const std::size_t base = insert_zero(insert_zero(i, lo), hi);
    out[i] = std::conj(coeffs[0]) * amps[base] + std::conj(coeffs[1]) * amps[base | m2] +
             std::conj(coeffs[2]) * amps[base | m1] + std::conj(coeffs[3]) * amps[base | m1 | m2];
  }
}

double norm_squared(std::span<const Complex> amps) {
  double s = 0.0;
  for (const Complex& a : amps) s += std::norm(a);
  return s;
}

}  // namespace mqsr::qsim::kernels::serial
