#pragma once

// Free Hilbert A-modules A^m, their A-valued inner product, and adjointable
// operators represented as m x k matrices of algebra elements.
//
// Convention: the module action is on the left and operator coefficients act
// on the right, (Tx)_j = sum_i x_i * M_ij. Every coefficient matrix is then
// A-linear, and the adjoint is the star-transpose.
//
// Flattening. All spectral work happens on the C-linear representation of an
// operator acting on column vectors of complex coordinates:
//   Diagonal C^d: d independent blocks; block c is the k x m matrix with
//     entry (j, i) = M_ij[c]. Coordinates of x in block c are x_i[c].
//   Matrix M_n:   one (k n^2) x (m n^2) block. Coordinate (i, r, s), i.e.
//     entry (r, s) of x_i, sits at index i*n^2 + r*n + s.
// With this ordering flatten(T o U) = flatten(T) * flatten(U) and
// flatten(T*) = flatten(T)^H, and Re tr <x, y> is the Euclidean inner product
// of the flattened coordinates.

#include <cstddef>
#include <vector>

#include "algebra.hpp"

namespace kgf {

struct ModuleSpace {
  AlgebraDescriptor algebra;
  std::size_t rank = 1;

  ModuleSpace() = default;
  ModuleSpace(AlgebraDescriptor alg, std::size_t m);

  // Length of the flattened coordinate vector in each block.
  std::size_t flat_size() const;
  std::size_t block_count() const;

  friend bool operator==(const ModuleSpace&, const ModuleSpace&) = default;
};

class ModuleVector {
 public:
  ModuleVector(ModuleSpace space, std::vector<AlgebraElement> coords);
  static ModuleVector zero(const ModuleSpace& space);

  const ModuleSpace& space() const { return space_; }
  const std::vector<AlgebraElement>& coords() const { return coords_; }
  const AlgebraElement& operator[](std::size_t i) const { return coords_[i]; }

  friend bool operator==(const ModuleVector&, const ModuleVector&) = default;

 private:
  ModuleSpace space_;
  std::vector<AlgebraElement> coords_;
};

ModuleVector operator+(const ModuleVector& x, const ModuleVector& y);
ModuleVector operator-(const ModuleVector& x, const ModuleVector& y);
ModuleVector operator*(cplx s, const ModuleVector& x);

class AdjointableOperator {
 public:
  // coeffs is row-major m x k: coeffs[i * k + j] = M_ij.
  AdjointableOperator(ModuleSpace domain, ModuleSpace codomain, std::vector<AlgebraElement> coeffs);

  static AdjointableOperator identity(const ModuleSpace& space);
  static AdjointableOperator zero(const ModuleSpace& domain, const ModuleSpace& codomain);
  static AdjointableOperator scalar(const ModuleSpace& space, cplx value);

  const ModuleSpace& domain() const { return domain_; }
  const ModuleSpace& codomain() const { return codomain_; }
  const AlgebraElement& coeff(std::size_t i, std::size_t j) const {
    return coeffs_[i * codomain_.rank + j];
  }
  const std::vector<AlgebraElement>& coeffs() const { return coeffs_; }

  friend bool operator==(const AdjointableOperator&, const AdjointableOperator&) = default;

 private:
  ModuleSpace domain_;
  ModuleSpace codomain_;
  std::vector<AlgebraElement> coeffs_;
};

AdjointableOperator operator+(const AdjointableOperator& t, const AdjointableOperator& u);
AdjointableOperator operator-(const AdjointableOperator& t, const AdjointableOperator& u);
AdjointableOperator operator*(cplx s, const AdjointableOperator& t);

// <x, y> = sum_i x_i y_i*
AlgebraElement inner_product(const ModuleVector& x, const ModuleVector& y);
ModuleVector module_action(const AlgebraElement& a, const ModuleVector& x);
ModuleVector apply(const AdjointableOperator& t, const ModuleVector& x);
AdjointableOperator adjoint(const AdjointableOperator& t);
// compose(T, U) = T o U, defined when U.codomain == T.domain.
AdjointableOperator compose(const AdjointableOperator& t, const AdjointableOperator& u);

struct FlatOperator {
  std::vector<CMatrix> blocks;
};

FlatOperator flatten(const AdjointableOperator& t);
// Inverse of flatten for matrices that represent A-linear maps. In the
// Matrix case only the r = 0 slice is read.
AdjointableOperator unflatten(const ModuleSpace& domain, const ModuleSpace& codomain,
                              const FlatOperator& flat);

std::vector<std::vector<cplx>> flatten_vector(const ModuleVector& x);
// Lifts coordinates of one block back to a module vector (zero elsewhere).
ModuleVector unflatten_vector(const ModuleSpace& space, std::size_t block,
                              std::span<const cplx> coords);

// Natural coefficient blocks: Diagonal gives d blocks (m x k) with entry
// (i, j) = M_ij[c]; Matrix gives one (m n) x (k n) block matrix whose
// (i, j) block is M_ij. Any complex matrix of that shape is a valid operator.
std::vector<CMatrix> coefficient_blocks(const AdjointableOperator& t);
AdjointableOperator from_coefficient_blocks(const ModuleSpace& domain, const ModuleSpace& codomain,
                                            const std::vector<CMatrix>& blocks);

// Largest / smallest singular value over all flattened blocks.
double operator_norm(const AdjointableOperator& t);
double lower_bound(const AdjointableOperator& t);

// Inverse of a square operator, computed on flattened blocks. Throws
// NotInvertibleError when lower_bound(t) <= kTauInv.
AdjointableOperator invert_operator(const AdjointableOperator& t);

// Sorted eigenvalues of the flattened self-adjoint part, all blocks merged.
std::vector<double> flat_spectrum(const AdjointableOperator& t);

}  // namespace kgf
