#pragma once

#include <complex>
#include <cstdint>
#include <string_view>

namespace mqsr::qsim {

using Complex = std::complex<double>;
using Bit = std::uint8_t;

inline constexpr int kMaxQubits = 16;

/// Tolerance for normalization checks.
inline constexpr double kNormTolerance = 1e-9;
/// Tolerance for algebraic identities (involutions, exact rewrites).
inline constexpr double kIdentityTolerance = 1e-12;

/// Measuring basis. Outcome bit 0 is the +1 eigenvector, bit 1 the -1 eigenvector:
///   Z: |0>, |1>
///   X: |+x> = (|0> + |1>)/sqrt2, |-x> = (|0> - |1>)/sqrt2
///   Y: |+y> = (|0> + i|1>)/sqrt2, |-y> = (|0> - i|1>)/sqrt2
enum class Basis : std::uint8_t { Z, X, Y };

enum class Gate : std::uint8_t { X, Z, H, S, Sdg };

/// Bell states: phi+- = (|00> +- |11>)/sqrt2, psi+- = (|01> +- |10>)/sqrt2.
enum class BellOutcome : std::uint8_t { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

inline constexpr std::string_view to_string(Basis b) {
  switch (b) {
    case Basis::Z: return "Z";
    case Basis::X: return "X";
    case Basis::Y: return "Y";
  }
  return "?";
}

inline constexpr std::string_view to_string(BellOutcome b) {
  switch (b) {
    case BellOutcome::PhiPlus: return "phi+";
    case BellOutcome::PhiMinus: return "phi-";
    case BellOutcome::PsiPlus: return "psi+";
    case BellOutcome::PsiMinus: return "psi-";
  }
  return "?";
}

}  // namespace mqsr::qsim
