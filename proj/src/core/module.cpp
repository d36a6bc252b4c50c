#include "module.hpp"

#include <algorithm>
#include <string>

#include "error.hpp"
#include "tolerances.hpp"

namespace kgf {

ModuleSpace::ModuleSpace(AlgebraDescriptor alg, std::size_t m) : algebra(alg), rank(m) {
  if (m == 0) throw ConfigError("module rank must be >= 1");
}

std::size_t ModuleSpace::flat_size() const {
  return algebra.kind == AlgebraKind::Diagonal ? rank : rank * algebra.dim * algebra.dim;
}

std::size_t ModuleSpace::block_count() const {
  return algebra.kind == AlgebraKind::Diagonal ? algebra.dim : 1;
}

namespace {

std::string describe(const ModuleSpace& s) {
  return std::string(s.algebra.kind == AlgebraKind::Diagonal ? "C^" : "M_") +
         std::to_string(s.algebra.dim) + " rank " + std::to_string(s.rank);
}

void require_space(const ModuleSpace& expected, const ModuleSpace& got, const char* what) {
  if (!(expected == got)) {
    throw DimensionError(std::string(what) + ": expected module " + describe(expected) + ", got " +
                         describe(got));
  }
}

}  // namespace

ModuleVector::ModuleVector(ModuleSpace space, std::vector<AlgebraElement> coords)
    : space_(space), coords_(std::move(coords)) {
  if (coords_.size() != space_.rank) {
    throw DimensionError("module vector: expected " + std::to_string(space_.rank) +
                         " coordinates, got " + std::to_string(coords_.size()));
  }
  for (const auto& c : coords_) {
    if (!(c.descriptor() == space_.algebra)) {
      throw DimensionError("module vector: coordinate algebra mismatch");
    }
  }
}

ModuleVector ModuleVector::zero(const ModuleSpace& space) {
  return ModuleVector(space, std::vector<AlgebraElement>(space.rank, AlgebraElement::zero(space.algebra)));
}

ModuleVector operator+(const ModuleVector& x, const ModuleVector& y) {
  require_space(x.space(), y.space(), "vector add");
  std::vector<AlgebraElement> out;
  out.reserve(x.space().rank);
  for (std::size_t i = 0; i < x.space().rank; ++i) out.push_back(x[i] + y[i]);
  return ModuleVector(x.space(), std::move(out));
}

ModuleVector operator-(const ModuleVector& x, const ModuleVector& y) {
  require_space(x.space(), y.space(), "vector sub");
  std::vector<AlgebraElement> out;
  out.reserve(x.space().rank);
  for (std::size_t i = 0; i < x.space().rank; ++i) out.push_back(x[i] - y[i]);
  return ModuleVector(x.space(), std::move(out));
}

ModuleVector operator*(cplx s, const ModuleVector& x) {
  std::vector<AlgebraElement> out;
  out.reserve(x.space().rank);
  for (const auto& c : x.coords()) out.push_back(s * c);
  return ModuleVector(x.space(), std::move(out));
}

AdjointableOperator::AdjointableOperator(ModuleSpace domain, ModuleSpace codomain,
                                         std::vector<AlgebraElement> coeffs)
    : domain_(domain), codomain_(codomain), coeffs_(std::move(coeffs)) {
  if (!(domain_.algebra == codomain_.algebra)) {
    throw DimensionError("operator: domain and codomain algebras differ");
  }
  if (coeffs_.size() != domain_.rank * codomain_.rank) {
    throw DimensionError("operator: expected " + std::to_string(domain_.rank) + "x" +
                         std::to_string(codomain_.rank) + " coefficients, got " +
                         std::to_string(coeffs_.size()));
  }
  for (const auto& c : coeffs_) {
    if (!(c.descriptor() == domain_.algebra)) throw DimensionError("operator: coefficient algebra mismatch");
  }
}

AdjointableOperator AdjointableOperator::identity(const ModuleSpace& space) {
  return scalar(space, 1.0);
}

AdjointableOperator AdjointableOperator::zero(const ModuleSpace& domain, const ModuleSpace& codomain) {
  return AdjointableOperator(domain, codomain,
                             std::vector<AlgebraElement>(domain.rank * codomain.rank,
                                                         AlgebraElement::zero(domain.algebra)));
}

AdjointableOperator AdjointableOperator::scalar(const ModuleSpace& space, cplx value) {
  std::vector<AlgebraElement> coeffs(space.rank * space.rank, AlgebraElement::zero(space.algebra));
  for (std::size_t i = 0; i < space.rank; ++i)
    coeffs[i * space.rank + i] = AlgebraElement::scalar(space.algebra, value);
  return AdjointableOperator(space, space, std::move(coeffs));
}

namespace {

template <typename Fn>
AdjointableOperator combine(const AdjointableOperator& t, const AdjointableOperator& u, Fn fn,
                            const char* what) {
  require_space(t.domain(), u.domain(), what);
  require_space(t.codomain(), u.codomain(), what);
  std::vector<AlgebraElement> out;
  out.reserve(t.coeffs().size());
  for (std::size_t i = 0; i < t.coeffs().size(); ++i) out.push_back(fn(t.coeffs()[i], u.coeffs()[i]));
  return AdjointableOperator(t.domain(), t.codomain(), std::move(out));
}

}  // namespace

AdjointableOperator operator+(const AdjointableOperator& t, const AdjointableOperator& u) {
  return combine(t, u, [](const auto& a, const auto& b) { return a + b; }, "operator add");
}

AdjointableOperator operator-(const AdjointableOperator& t, const AdjointableOperator& u) {
  return combine(t, u, [](const auto& a, const auto& b) { return a - b; }, "operator sub");
}

AdjointableOperator operator*(cplx s, const AdjointableOperator& t) {
  std::vector<AlgebraElement> out;
  out.reserve(t.coeffs().size());
  for (const auto& c : t.coeffs()) out.push_back(s * c);
  return AdjointableOperator(t.domain(), t.codomain(), std::move(out));
}

AlgebraElement inner_product(const ModuleVector& x, const ModuleVector& y) {
  require_space(x.space(), y.space(), "inner_product");
  auto acc = AlgebraElement::zero(x.space().algebra);
  for (std::size_t i = 0; i < x.space().rank; ++i) acc = acc + x[i] * star(y[i]);
  return acc;
}

ModuleVector module_action(const AlgebraElement& a, const ModuleVector& x) {
  if (!(a.descriptor() == x.space().algebra)) throw DimensionError("module_action: algebra mismatch");
  std::vector<AlgebraElement> out;
  out.reserve(x.space().rank);
  for (const auto& c : x.coords()) out.push_back(a * c);
  return ModuleVector(x.space(), std::move(out));
}

ModuleVector apply(const AdjointableOperator& t, const ModuleVector& x) {
  require_space(t.domain(), x.space(), "apply");
  const std::size_t m = t.domain().rank;
  const std::size_t k = t.codomain().rank;
  std::vector<AlgebraElement> out(k, AlgebraElement::zero(x.space().algebra));
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < m; ++i) out[j] = out[j] + x[i] * t.coeff(i, j);
  return ModuleVector(t.codomain(), std::move(out));
}

AdjointableOperator adjoint(const AdjointableOperator& t) {
  const std::size_t m = t.domain().rank;
  const std::size_t k = t.codomain().rank;
  std::vector<AlgebraElement> out;
  out.reserve(m * k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < m; ++i) out.push_back(star(t.coeff(i, j)));
  return AdjointableOperator(t.codomain(), t.domain(), std::move(out));
}

AdjointableOperator compose(const AdjointableOperator& t, const AdjointableOperator& u) {
  require_space(t.domain(), u.codomain(), "compose");
  const std::size_t m = u.domain().rank;
  const std::size_t mid = u.codomain().rank;
  const std::size_t k = t.codomain().rank;
  // (T o U)x = sum_i x_i (U_ij T_jl)
  std::vector<AlgebraElement> out(m * k, AlgebraElement::zero(t.domain().algebra));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t l = 0; l < k; ++l)
      for (std::size_t j = 0; j < mid; ++j) out[i * k + l] = out[i * k + l] + u.coeff(i, j) * t.coeff(j, l);
  return AdjointableOperator(u.domain(), t.codomain(), std::move(out));
}

FlatOperator flatten(const AdjointableOperator& t) {
  const auto& alg = t.domain().algebra;
  const std::size_t m = t.domain().rank;
  const std::size_t k = t.codomain().rank;
  FlatOperator flat;
  if (alg.kind == AlgebraKind::Diagonal) {
    flat.blocks.reserve(alg.dim);
    for (std::size_t c = 0; c < alg.dim; ++c) {
      CMatrix b(k, m);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < k; ++j) b(j, i) = t.coeff(i, j)[c];
      flat.blocks.push_back(std::move(b));
    }
    return flat;
  }
  const std::size_t n = alg.dim;
  const std::size_t n2 = n * n;
  CMatrix b(k * n2, m * n2);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const auto& mij = t.coeff(i, j);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s)
          for (std::size_t q = 0; q < n; ++q) b(j * n2 + r * n + s, i * n2 + r * n + q) = mij[q * n + s];
    }
  flat.blocks.push_back(std::move(b));
  return flat;
}

AdjointableOperator unflatten(const ModuleSpace& domain, const ModuleSpace& codomain,
                              const FlatOperator& flat) {
  if (!(domain.algebra == codomain.algebra)) throw DimensionError("unflatten: algebra mismatch");
  const auto& alg = domain.algebra;
  const std::size_t m = domain.rank;
  const std::size_t k = codomain.rank;
  if (flat.blocks.size() != domain.block_count()) throw DimensionError("unflatten: wrong block count");
  for (const auto& b : flat.blocks) {
    if (b.rows() != codomain.flat_size() || b.cols() != domain.flat_size()) {
      throw DimensionError("unflatten: block shape does not match spaces");
    }
  }
  std::vector<AlgebraElement> coeffs;
  coeffs.reserve(m * k);
  if (alg.kind == AlgebraKind::Diagonal) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        std::vector<cplx> data(alg.dim);
        for (std::size_t c = 0; c < alg.dim; ++c) data[c] = flat.blocks[c](j, i);
        coeffs.emplace_back(alg, std::move(data));
      }
  } else {
    const std::size_t n = alg.dim;
    const std::size_t n2 = n * n;
    const auto& b = flat.blocks.front();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        std::vector<cplx> data(n2);
        for (std::size_t q = 0; q < n; ++q)
          for (std::size_t s = 0; s < n; ++s) data[q * n + s] = b(j * n2 + s, i * n2 + q);
        coeffs.emplace_back(alg, std::move(data));
      }
  }
  return AdjointableOperator(domain, codomain, std::move(coeffs));
}

std::vector<std::vector<cplx>> flatten_vector(const ModuleVector& x) {
  const auto& space = x.space();
  std::vector<std::vector<cplx>> out;
  if (space.algebra.kind == AlgebraKind::Diagonal) {
    out.assign(space.algebra.dim, std::vector<cplx>(space.rank));
    for (std::size_t i = 0; i < space.rank; ++i)
      for (std::size_t c = 0; c < space.algebra.dim; ++c) out[c][i] = x[i][c];
    return out;
  }
  std::vector<cplx> flat;
  flat.reserve(space.flat_size());
  for (const auto& e : x.coords()) flat.insert(flat.end(), e.data().begin(), e.data().end());
  out.push_back(std::move(flat));
  return out;
}

ModuleVector unflatten_vector(const ModuleSpace& space, std::size_t block, std::span<const cplx> coords) {
  if (block >= space.block_count()) throw DimensionError("unflatten_vector: block index out of range");
  if (coords.size() != space.flat_size()) throw DimensionError("unflatten_vector: wrong coordinate count");
  std::vector<AlgebraElement> out;
  out.reserve(space.rank);
  const std::size_t width = space.algebra.storage_size();
  for (std::size_t i = 0; i < space.rank; ++i) {
    std::vector<cplx> data(width);
    if (space.algebra.kind == AlgebraKind::Diagonal) {
      data[block] = coords[i];
    } else {
      std::copy_n(coords.begin() + static_cast<std::ptrdiff_t>(i * width), width, data.begin());
    }
    out.emplace_back(space.algebra, std::move(data));
  }
  return ModuleVector(space, std::move(out));
}

std::vector<CMatrix> coefficient_blocks(const AdjointableOperator& t) {
  const auto& alg = t.domain().algebra;
  const std::size_t m = t.domain().rank;
  const std::size_t k = t.codomain().rank;
  std::vector<CMatrix> out;
  if (alg.kind == AlgebraKind::Diagonal) {
    for (std::size_t c = 0; c < alg.dim; ++c) {
      CMatrix b(m, k);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < k; ++j) b(i, j) = t.coeff(i, j)[c];
      out.push_back(std::move(b));
    }
    return out;
  }
  const std::size_t n = alg.dim;
  CMatrix b(m * n, k * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) b(i * n + r, j * n + s) = t.coeff(i, j)[r * n + s];
  out.push_back(std::move(b));
  return out;
}

AdjointableOperator from_coefficient_blocks(const ModuleSpace& domain, const ModuleSpace& codomain,
                                            const std::vector<CMatrix>& blocks) {
  if (!(domain.algebra == codomain.algebra)) throw DimensionError("from_coefficient_blocks: algebra mismatch");
  const auto& alg = domain.algebra;
  const std::size_t m = domain.rank;
  const std::size_t k = codomain.rank;
  if (blocks.size() != domain.block_count()) throw DimensionError("from_coefficient_blocks: wrong block count");
  const std::size_t bn = alg.kind == AlgebraKind::Diagonal ? 1 : alg.dim;
  for (const auto& b : blocks) {
    if (b.rows() != m * bn || b.cols() != k * bn) throw DimensionError("from_coefficient_blocks: wrong block shape");
  }
  std::vector<AlgebraElement> coeffs;
  coeffs.reserve(m * k);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<cplx> data(alg.storage_size());
      if (alg.kind == AlgebraKind::Diagonal) {
        for (std::size_t c = 0; c < alg.dim; ++c) data[c] = blocks[c](i, j);
      } else {
        const std::size_t n = alg.dim;
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t s = 0; s < n; ++s) data[r * n + s] = blocks[0](i * n + r, j * n + s);
      }
      coeffs.emplace_back(alg, std::move(data));
    }
  return AdjointableOperator(domain, codomain, std::move(coeffs));
}

double operator_norm(const AdjointableOperator& t) {
  double best = 0.0;
  for (const auto& b : flatten(t).blocks) best = std::max(best, singular_values(b).back());
  return best;
}

double lower_bound(const AdjointableOperator& t) {
  const auto flat = flatten(t);
  double best = singular_values(flat.blocks.front()).front();
  for (const auto& b : flat.blocks) best = std::min(best, singular_values(b).front());
  return best <= kTauInv ? 0.0 : best;
}

AdjointableOperator invert_operator(const AdjointableOperator& t) {
  if (!(t.domain() == t.codomain())) throw DimensionError("invert_operator: operator is not square");
  if (lower_bound(t) <= kTauInv) throw NotInvertibleError("invert_operator: operator is not bounded below");
  FlatOperator inv;
  for (const auto& b : flatten(t).blocks) inv.blocks.push_back(inverse(b));
  return unflatten(t.codomain(), t.domain(), inv);
}

std::vector<double> flat_spectrum(const AdjointableOperator& t) {
  if (!(t.domain() == t.codomain())) throw DimensionError("flat_spectrum: operator is not square");
  std::vector<double> all;
  for (const auto& b : flatten(t).blocks) {
    const auto ev = eigvalsh(b);
    all.insert(all.end(), ev.begin(), ev.end());
  }
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace kgf
