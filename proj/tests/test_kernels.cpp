#include <gtest/gtest.h>

#include <vector>

#include "mqsr/qsim/kernels.hpp"
#include "mqsr/qsim/operations.hpp"

using namespace mqsr;
using namespace mqsr::qsim;

namespace {

// Large enough that the parallel kernels actually fork.
constexpr int kQubits = 14;

std::vector<Complex> random_amps(std::uint64_t seed) {
  Rng rng(seed);
  const auto s = random_state(kQubits, rng);
  return {s.amplitudes().begin(), s.amplitudes().end()};
}

void expect_same(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_NEAR(std::abs(a[i] - b[i]), 0.0, 1e-13) << "index " << i;
  }
}

}  // namespace

static_assert(kernels::insert_zero(0b1011, 0b100) == 0b10011);
static_assert(kernels::bit_of(4, 0) == 0b1000);

TEST(Kernels, RegisterIsAboveParallelThreshold) {
  EXPECT_GE(std::size_t{1} << kQubits, kernels::kParallelMinDimension);
}

TEST(Kernels, ApplyMatrixAgrees) {
  const kernels::Matrix2 h{Complex(0.6, 0.0), Complex(0.0, 0.8), Complex(0.0, 0.8), Complex(0.6, 0.0)};
  for (int q : {0, 5, kQubits - 1}) {
    auto a = random_amps(1);
    auto b = a;
    kernels::serial::apply_matrix(a, kQubits, q, h);
    kernels::parallel::apply_matrix(b, kQubits, q, h);
    expect_same(a, b);
  }
}

TEST(Kernels, CnotAgrees) {
  auto a = random_amps(2);
  auto b = a;
  kernels::serial::apply_cnot(a, kQubits, 3, 9);
  kernels::parallel::apply_cnot(b, kQubits, 3, 9);
  expect_same(a, b);
  kernels::serial::apply_cnot(a, kQubits, 12, 0);
  kernels::parallel::apply_cnot(b, kQubits, 12, 0);
  expect_same(a, b);
}

TEST(Kernels, ProbabilityAndCollapseAgree) {
  auto a = random_amps(3);
  auto b = a;
  const double pa = kernels::serial::probability_of_one(a, kQubits, 7);
  const double pb = kernels::parallel::probability_of_one(b, kQubits, 7);
  EXPECT_NEAR(pa, pb, 1e-13);
  kernels::serial::collapse(a, kQubits, 7, 1, pa);
  kernels::parallel::collapse(b, kQubits, 7, 1, pb);
  expect_same(a, b);
  EXPECT_NEAR(kernels::serial::norm_squared(a), 1.0, 1e-12);
  EXPECT_NEAR(kernels::parallel::norm_squared(b), 1.0, 1e-12);
}

TEST(Kernels, BellWeightsAndProjectionAgree) {
  const auto a = random_amps(4);
  const auto wa = kernels::serial::bell_weights(a, kQubits, 2, 11);
  const auto wb = kernels::parallel::bell_weights(a, kQubits, 2, 11);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(wa[k], wb[k], 1e-13);

  const kernels::PairCoefficients c{Complex(0.5, 0), Complex(0, 0.5), Complex(-0.5, 0), Complex(0, -0.5)};
  std::vector<Complex> oa(a.size() / 4);
  std::vector<Complex> ob(a.size() / 4);
  kernels::serial::project_pair(a, kQubits, 11, 2, c, oa);
  kernels::parallel::project_pair(a, kQubits, 11, 2, c, ob);
  expect_same(oa, ob);
}
