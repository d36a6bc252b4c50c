#pragma once

// Small dense complex linear algebra used by every spectral computation in the
// library: a row-major matrix type, a cyclic Jacobi Hermitian eigensolver,
// singular values and a pivoted inverse. Matrices here are at most a few
// hundred rows, so everything is O(n^3) and single threaded.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace kgf {

using cplx = std::complex<double>;

class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data);

  static CMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const cplx> data() const { return data_; }
  std::span<cplx> data() { return data_; }

  CMatrix adjoint() const;
  CMatrix transpose() const;
  // (A + A^H) / 2
  CMatrix hermitian_part() const;

  double frobenius_norm() const;
  double max_abs() const;
  // max |A - A^H| over all entries
  double hermitian_defect() const;

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(cplx s);

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator*(cplx s, CMatrix a);
std::vector<cplx> operator*(const CMatrix& a, std::span<const cplx> x);

// Eigenpairs of a Hermitian matrix. Values ascending; vectors() column j
// belongs to values[j]. Each eigenvector is phase-normalized so that its
// largest-modulus entry (first one on ties) is real and positive.
struct HermitianEigen {
  std::vector<double> values;
  CMatrix vectors;

  std::vector<cplx> vector(std::size_t j) const;
};

// Cyclic Jacobi on the Hermitian part of `a`. Deterministic for identical
// input bits.
HermitianEigen eigh(const CMatrix& a);
std::vector<double> eigvalsh(const CMatrix& a);

// Singular values of a (rows x cols) matrix viewed as a map from C^cols,
// ascending, always `cols` of them (zeros pad when rows < cols). Computed
// from the Hermitian dilation [[0, A], [A^H, 0]] so small singular values
// keep absolute accuracy eps * ||A||.
std::vector<double> singular_values(const CMatrix& a);

// Gauss-Jordan with partial pivoting. Throws NotInvertibleError when the
// smallest singular value is <= kTauInv.
CMatrix inverse(const CMatrix& a);

double norm2(std::span<const cplx> x);

}  // namespace kgf
