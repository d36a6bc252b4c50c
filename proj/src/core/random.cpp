#include "random.hpp"

#include <cmath>
#include <numbers>

namespace kgf {

cplx Rng::unit_disk() {
  const double r = std::sqrt(uniform());
  const double phi = 2.0 * std::numbers::pi * uniform();
  return std::polar(r, phi);
}

cplx Rng::unit_phase() { return std::polar(1.0, 2.0 * std::numbers::pi * uniform()); }

AlgebraElement Rng::element(const AlgebraDescriptor& desc) {
  std::vector<cplx> data(desc.storage_size());
  for (auto& z : data) z = unit_disk();
  return AlgebraElement(desc, std::move(data));
}

ModuleVector Rng::vector(const ModuleSpace& space) {
  std::vector<AlgebraElement> coords;
  coords.reserve(space.rank);
  for (std::size_t i = 0; i < space.rank; ++i) coords.push_back(element(space.algebra));
  return ModuleVector(space, std::move(coords));
}

CMatrix Rng::matrix(std::size_t rows, std::size_t cols) {
  CMatrix m(rows, cols);
  for (auto& z : m.data()) z = unit_disk();
  return m;
}

CMatrix Rng::unitary(std::size_t n) {
  CMatrix q = matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    // Re-orthogonalize twice; random columns are almost surely independent.
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t p = 0; p < j; ++p) {
        cplx dot{};
        for (std::size_t i = 0; i < n; ++i) dot += std::conj(q(i, p)) * q(i, j);
        for (std::size_t i = 0; i < n; ++i) q(i, j) -= dot * q(i, p);
      }
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(q(i, j));
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) q(i, j) /= norm;
  }
  return q;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over seed + stream * golden gamma
  std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace kgf
