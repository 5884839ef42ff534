#pragma once

// Self-check suite behind `mqsr check`. Each entry exercises one property of
// the simulator end to end and reports a one-line detail.

#include <cstdint>
#include <string>
#include <vector>

namespace mqsr::harness {

struct InvariantResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<InvariantResult> run_invariant_suite(std::uint64_t seed);

}  // namespace mqsr::harness
