#pragma once

namespace kgf {

// Relative positivity slack: min eigenvalue >= -kEpsPos * (1 + scale).
inline constexpr double kEpsPos = 1e-9;
// Relative equality tolerance for algebra and module identities.
inline constexpr double kTauAlg = 1e-10;
// Absolute cutoff below which a modulus or singular value counts as zero.
inline constexpr double kTauInv = 1e-12;

}  // namespace kgf
