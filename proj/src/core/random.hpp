#pragma once

// Seeded randomness. The engine is std::mt19937_64, whose output sequence is
// fixed by the standard; conversions to doubles are done here rather than
// through <random> distributions so fixtures are identical across standard
// library implementations.

#include <cstdint>
#include <random>

#include "module.hpp"

namespace kgf {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform in the closed unit disk.
  cplx unit_disk();
  cplx unit_phase();
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

  AlgebraElement element(const AlgebraDescriptor& desc);
  ModuleVector vector(const ModuleSpace& space);
  CMatrix matrix(std::size_t rows, std::size_t cols);
  // Haar-ish unitary from modified Gram-Schmidt on a random matrix.
  CMatrix unitary(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

// Mixes a base seed with a stream label so sub-generators are decorrelated.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace kgf
