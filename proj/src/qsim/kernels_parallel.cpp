#include "mqsr/qsim/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <utility>

namespace mqsr::qsim::kernels::parallel {

namespace {
using Index = std::int64_t;

bool worth_forking(std::size_t dimension) { return dimension >= kParallelMinDimension; }
}  // namespace

void apply_matrix(std::span<Complex> amps, int num_qubits, int qubit, const Matrix2& m) {
  const std::size_t mask = bit_of(num_qubits, qubit);
  const Index half = static_cast<Index>(amps.size() / 2);
#pragma omp parallel for schedule(static) if (worth_forking(amps.size()))
  for (Index i = 0; i < half; ++i) {
    const std::size_t i0 = insert_zero(static_cast<std::size_t>(i), mask);
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
  const Index quarter = static_cast<Index>(amps.size() / 4);
#pragma omp parallel for schedule(static) if (worth_forking(amps.size()))
  for (Index i = 0; i < quarter; ++i) {
    const std::size_t base = insert_zero(insert_zero(static_cast<std::size_t>(i), lo), hi) | cmask;
    std::swap(amps[base], amps[base | tmask]);
  }
}

double probability_of_one(std::span<const Complex> amps, int num_qubits, int qubit) {
  const std::size_t mask = bit_of(num_qubits, qubit);
  const Index half = static_cast<Index>(amps.size() / 2);
  double p = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : p) if (worth_forking(amps.size()))
  for (Index i = 0; i < half; ++i) {
    p += std::norm(amps[insert_zero(static_cast<std::size_t>(i), mask) | mask]);
  }
  return p;
}

void collapse(std::span<Complex> amps, int num_qubits, int qubit, Bit bit, double probability) {
  const std::size_t mask = bit_of(num_qubits, qubit);
  const double scale = 1.0 / std::sqrt(probability);
  const Index half = static_cast<Index>(amps.size() / 2);
#pragma omp parallel for schedule(static) if (worth_forking(amps.size()))
  for (Index i = 0; i < half; ++i) {
    const std::size_t i0 = insert_zero(static_cast<std::size_t>(i), mask);
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
  const Index quarter = static_cast<Index>(amps.size() / 4);
  double phi_plus = 0.0, phi_minus = 0.0, psi_plus = 0.0, psi_minus = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : phi_plus, phi_minus, psi_plus, psi_minus) \
    if (worth_forking(amps.size()))
  for (Index i = 0; i < quarter; ++i) {
    const std::size_t base = insert_zero(insert_zero(static_cast<std::size_t>(i), lo), hi);
    const Complex a00 = amps[base];
    const Complex a01 = amps[base | m2];
    const Complex a10 = amps[base | m1];
    const Complex a11 = amps[base | m1 | m2];
    phi_plus += 0.5 * std::norm(a00 + a11);
    phi_minus += 0.5 * std::norm(a00 - a11);
    psi_plus += 0.5 * std::norm(a01 + a10);
    psi_minus += 0.5 * std::norm(a01 - a10);
  }
  return {phi_plus, phi_minus, psi_plus, psi_minus};
}

void project_pair(std::span<const Complex> amps, int num_qubits, int q1, int q2,
                  const PairCoefficients& coeffs, std::span<Complex> out) {
  const std::size_t m1 = bit_of(num_qubits, q1);
  const std::size_t m2 = bit_of(num_qubits, q2);
  const std::size_t lo = m1 < m2 ? m1 : m2;
  const std::size_t hi = m1 < m2 ? m2 : m1;
  const Index quarter = static_cast<Index>(amps.size() / 4);
#pragma omp parallel for schedule(static) if (worth_forking(amps.size()))
  for (Index i = 0; i < quarter; ++i) {
    const std::size_t base = insert_zero(insert_zero(static_cast<std::size_t>(i), lo), hi);
    out[static_cast<std::size_t>(i)] =
        std::conj(coeffs[0]) * amps[base] + std::conj(coeffs[1]) * amps[base | m2] +
        std::conj(coeffs[2]) * amps[base | m1] + std::conj(coeffs[3]) * amps[base | m1 | m2];
  }
}

double norm_squared(std::span<const Complex> amps) {
  const Index n = static_cast<Index>(amps.size());
  double s = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : s) if (worth_forking(amps.size()))
  for (Index i = 0; i < n; ++i) s += std::norm(amps[static_cast<std::size_t>(i)]);
  return s;
}

}  // namespace mqsr::qsim::kernels::parallel
