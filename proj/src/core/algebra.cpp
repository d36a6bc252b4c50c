#include "algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "error.hpp"
#include "tolerances.hpp"

namespace kgf {

AlgebraDescriptor AlgebraDescriptor::diagonal(std::size_t d) {
  if (d == 0) throw ConfigError("algebra dimension must be >= 1");
  return {AlgebraKind::Diagonal, d};
}

AlgebraDescriptor AlgebraDescriptor::matrix(std::size_t n) {
  if (n == 0) throw ConfigError("algebra dimension must be >= 1");
  return {AlgebraKind::Matrix, n};
}

std::size_t AlgebraDescriptor::storage_size() const {
  return kind == AlgebraKind::Diagonal ? dim : dim * dim;
}

AlgebraElement::AlgebraElement(AlgebraDescriptor desc, std::vector<cplx> data)
    : desc_(desc), data_(std::move(data)) {
  if (desc_.dim == 0) throw ConfigError("algebra dimension must be >= 1");
  if (data_.size() != desc_.storage_size()) {
    throw DimensionError("algebra element: expected " + std::to_string(desc_.storage_size()) +
                         " scalars, got " + std::to_string(data_.size()));
  }
}

AlgebraElement AlgebraElement::zero(AlgebraDescriptor desc) {
  return AlgebraElement(desc, std::vector<cplx>(desc.storage_size()));
}

AlgebraElement AlgebraElement::identity(AlgebraDescriptor desc) {
  return scalar(desc, 1.0);
}

AlgebraElement AlgebraElement::scalar(AlgebraDescriptor desc, cplx value) {
  std::vector<cplx> data(desc.storage_size());
  if (desc.kind == AlgebraKind::Diagonal) {
    std::fill(data.begin(), data.end(), value);
  } else {
    for (std::size_t i = 0; i < desc.dim; ++i) data[i * desc.dim + i] = value;
  }
  return AlgebraElement(desc, std::move(data));
}

AlgebraElement AlgebraElement::diagonal(std::vector<cplx> values) {
  const auto desc = AlgebraDescriptor::diagonal(values.size());
  return AlgebraElement(desc, std::move(values));
}

AlgebraElement AlgebraElement::from_matrix(const CMatrix& m) {
  if (!m.is_square()) throw DimensionError("algebra element: matrix is not square");
  return AlgebraElement(AlgebraDescriptor::matrix(m.rows()),
                        std::vector<cplx>(m.data().begin(), m.data().end()));
}

CMatrix AlgebraElement::to_matrix() const {
  const std::size_t n = desc_.dim;
  if (desc_.kind == AlgebraKind::Matrix) return CMatrix(n, n, data_);
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = data_[i];
  return m;
}

namespace {

void require_same(const AlgebraElement& a, const AlgebraElement& b, const char* what) {
  if (!(a.descriptor() == b.descriptor())) {
    throw DimensionError(std::string(what) + ": algebra descriptors differ");
  }
}

}  // namespace

AlgebraElement binary_op(BinaryOp kind, const AlgebraElement& a, const AlgebraElement& b) {
  require_same(a, b, "binary_op");
  const auto& desc = a.descriptor();
  std::vector<cplx> out(desc.storage_size());
  switch (kind) {
    case BinaryOp::Add:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
      break;
    case BinaryOp::Sub:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
      break;
    case BinaryOp::Mul:
      if (desc.kind == AlgebraKind::Diagonal) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
      } else {
        const std::size_t n = desc.dim;
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t k = 0; k < n; ++k) {
            const cplx ark = a[r * n + k];
            for (std::size_t c = 0; c < n; ++c) out[r * n + c] += ark * b[k * n + c];
          }
      }
      break;
  }
  return AlgebraElement(desc, std::move(out));
}

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
  return binary_op(BinaryOp::Add, a, b);
}
AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
  return binary_op(BinaryOp::Sub, a, b);
}
AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  return binary_op(BinaryOp::Mul, a, b);
}

AlgebraElement operator*(cplx s, const AlgebraElement& a) {
  std::vector<cplx> out(a.data().begin(), a.data().end());
  for (auto& z : out) z *= s;
  return AlgebraElement(a.descriptor(), std::move(out));
}

AlgebraElement star(const AlgebraElement& a) {
  const auto& desc = a.descriptor();
  std::vector<cplx> out(desc.storage_size());
  if (desc.kind == AlgebraKind::Diagonal) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::conj(a[i]);
  } else {
    const std::size_t n = desc.dim;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) out[c * n + r] = std::conj(a[r * n + c]);
  }
  return AlgebraElement(desc, std::move(out));
}

double alg_norm(const AlgebraElement& a) {
  if (a.descriptor().kind == AlgebraKind::Diagonal) {
    double m = 0.0;
    for (const auto& z : a.data()) m = std::max(m, std::abs(z));
    return m;
  }
  return singular_values(a.to_matrix()).back();
}

double min_selfadjoint_eigenvalue(const AlgebraElement& a) {
  if (a.descriptor().kind == AlgebraKind::Diagonal) {
    double m = a[0].real();
    for (const auto& z : a.data()) m = std::min(m, z.real());
    return m;
  }
  return eigvalsh(a.to_matrix()).front();
}

bool is_positive(const AlgebraElement& a, double tol) {
  const double slack = tol * (1.0 + alg_norm(a));
  if (a.descriptor().kind == AlgebraKind::Diagonal) {
    for (const auto& z : a.data()) {
      if (std::abs(z.imag()) > slack || z.real() < -slack) return false;
    }
    return true;
  }
  const CMatrix m = a.to_matrix();
  if (m.hermitian_defect() > slack) return false;
  return eigvalsh(m).front() >= -slack;
}

AlgebraElement sqrt_positive(const AlgebraElement& a) {
  if (!is_positive(a, kTauAlg)) throw NotPositiveError("sqrt_positive: element is not positive");
  const auto& desc = a.descriptor();
  if (desc.kind == AlgebraKind::Diagonal) {
    std::vector<cplx> out(desc.dim);
    for (std::size_t i = 0; i < desc.dim; ++i) out[i] = std::sqrt(std::max(0.0, a[i].real()));
    return AlgebraElement(desc, std::move(out));
  }
  const auto eig = eigh(a.to_matrix());
  const std::size_t n = desc.dim;
  CMatrix root(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = std::sqrt(std::max(0.0, eig.values[k]));
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        root(r, c) += s * eig.vectors(r, k) * std::conj(eig.vectors(c, k));
  }
  return AlgebraElement::from_matrix(root);
}

AlgebraElement invert(const AlgebraElement& a) {
  const auto& desc = a.descriptor();
  if (desc.kind == AlgebraKind::Diagonal) {
    std::vector<cplx> out(desc.dim);
    for (std::size_t i = 0; i < desc.dim; ++i) {
      if (std::abs(a[i]) <= kTauInv) {
        throw NotInvertibleError("invert: component " + std::to_string(i) + " is zero");
      }
      out[i] = 1.0 / a[i];
    }
    return AlgebraElement(desc, std::move(out));
  }
  return AlgebraElement::from_matrix(inverse(a.to_matrix()));
}

bool approx_equal(const AlgebraElement& a, const AlgebraElement& b, double tol) {
  require_same(a, b, "approx_equal");
  return alg_norm(a - b) <= tol * (1.0 + std::max(alg_norm(a), alg_norm(b)));
}

std::optional<double> real_scalar_value(const AlgebraElement& a) {
  const auto& desc = a.descriptor();
  const double lambda = a[0].real();
  const auto candidate = AlgebraElement::scalar(desc, lambda);
  if (!approx_equal(a, candidate, kTauAlg)) return std::nullopt;
  return lambda;
}

}  // namespace kgf
