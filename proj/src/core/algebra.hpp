#pragma once

// Finite-dimensional C*-algebras: the commutative C^d with componentwise
// operations and the full matrix algebra M_n(C).

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "linalg.hpp"

namespace kgf {

enum class AlgebraKind { Diagonal, Matrix };

struct AlgebraDescriptor {
  AlgebraKind kind = AlgebraKind::Diagonal;
  std::size_t dim = 1;  // d for Diagonal, n for Matrix

  static AlgebraDescriptor diagonal(std::size_t d);
  static AlgebraDescriptor matrix(std::size_t n);

  // Number of complex scalars per element: d or n*n.
  std::size_t storage_size() const;

  friend bool operator==(const AlgebraDescriptor&, const AlgebraDescriptor&) = default;
};

class AlgebraElement {
 public:
  // Matrix data is row-major n x n.
  AlgebraElement(AlgebraDescriptor desc, std::vector<cplx> data);

  static AlgebraElement zero(AlgebraDescriptor desc);
  static AlgebraElement identity(AlgebraDescriptor desc);
  static AlgebraElement scalar(AlgebraDescriptor desc, cplx value);
  static AlgebraElement diagonal(std::vector<cplx> values);
  static AlgebraElement from_matrix(const CMatrix& m);

  const AlgebraDescriptor& descriptor() const { return desc_; }
  std::span<const cplx> data() const { return data_; }
  const cplx& operator[](std::size_t i) const { return data_[i]; }

  // Diagonal elements become diagonal matrices.
  CMatrix to_matrix() const;

  friend bool operator==(const AlgebraElement&, const AlgebraElement&) = default;

 private:
  AlgebraDescriptor desc_;
  std::vector<cplx> data_;
};

enum class BinaryOp { Add, Sub, Mul };

AlgebraElement binary_op(BinaryOp kind, const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator*(cplx s, const AlgebraElement& a);

AlgebraElement star(const AlgebraElement& a);

// Diagonal: every component nearly real and >= -tol*(1+|a|).
// Matrix: Hermitian to tol*(1+|a|) and min eigenvalue >= -tol*(1+|a|).
bool is_positive(const AlgebraElement& a, double tol);

// Smallest eigenvalue of the self-adjoint part (componentwise minimum of
// real parts in the Diagonal case).
double min_selfadjoint_eigenvalue(const AlgebraElement& a);

// Positive square root. Components or eigenvalues that are negative within
// tolerance are clamped to zero; beyond tolerance throws NotPositiveError.
AlgebraElement sqrt_positive(const AlgebraElement& a);

AlgebraElement invert(const AlgebraElement& a);

// Diagonal: sup norm. Matrix: largest singular value.
double alg_norm(const AlgebraElement& a);

// |a - b| <= tol * (1 + max(|a|, |b|))
bool approx_equal(const AlgebraElement& a, const AlgebraElement& b, double tol);

// Returns lambda when a = lambda * 1 with lambda real (to kTauAlg relative).
std::optional<double> real_scalar_value(const AlgebraElement& a);

}  // namespace kgf
