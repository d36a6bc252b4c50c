#include <cmath>

#include "doctest.h"
#include "error.hpp"
#include "examples_gen.hpp"
#include "module.hpp"
#include "oracle.hpp"
#include "random.hpp"
#include "tolerances.hpp"

using namespace kgf;

namespace {

AlgebraElement diag(std::vector<cplx> v) { return AlgebraElement::diagonal(std::move(v)); }

AdjointableOperator random_op(Rng& rng, const ModuleSpace& dom, const ModuleSpace& cod) {
  std::vector<AlgebraElement> c;
  for (std::size_t i = 0; i < dom.rank * cod.rank; ++i) c.push_back(rng.element(dom.algebra));
  return AdjointableOperator(dom, cod, std::move(c));
}

std::vector<AlgebraDescriptor> algebras() {
  return {AlgebraDescriptor::diagonal(1), AlgebraDescriptor::diagonal(3), AlgebraDescriptor::matrix(2),
          AlgebraDescriptor::matrix(3)};
}

bool close(const ModuleVector& a, const ModuleVector& b, double tol) {
  for (std::size_t i = 0; i < a.coords().size(); ++i)
    if (!approx_equal(a[i], b[i], tol)) return false;
  return true;
}

}  // namespace

TEST_CASE("inner product examples") {
  const ModuleSpace s(AlgebraDescriptor::diagonal(2), 1);
  const ModuleVector x(s, {diag({{1, 1}, 2})});
  CHECK(approx_equal(inner_product(x, x), diag({2, 4}), kTauAlg));
  const ModuleVector e1(s, {diag({1, 0})});
  const ModuleVector e2(s, {diag({0, 1})});
  CHECK(inner_product(e1, e2) == diag({0, 0}));
  CHECK_THROWS_AS(inner_product(x, ModuleVector::zero(ModuleSpace(AlgebraDescriptor::diagonal(2), 2))), DimensionError);
}

TEST_CASE("module action examples") {
  const ModuleSpace s(AlgebraDescriptor::diagonal(2), 1);
  const ModuleVector x(s, {diag({1, 1})});
  CHECK(module_action(AlgebraElement::identity(s.algebra), x) == x);
  CHECK(module_action(AlgebraElement::zero(s.algebra), x) == ModuleVector::zero(s));
  CHECK(module_action(diag({2, 3}), x) == ModuleVector(s, {diag({2, 3})}));
  CHECK_THROWS_AS(module_action(AlgebraElement::identity(AlgebraDescriptor::matrix(2)), x), DimensionError);
}

TEST_CASE("apply examples") {
  Rng rng(1);
  const ModuleSpace s(AlgebraDescriptor::matrix(2), 3);
  const auto x = rng.vector(s);
  CHECK(apply(AdjointableOperator::identity(s), x) == x);
  CHECK(apply(AdjointableOperator::zero(s, s), x) == ModuleVector::zero(s));
  const ModuleSpace sc(AlgebraDescriptor::diagonal(1), 2);
  const AdjointableOperator t(sc, sc, {diag({0}), diag({1}), diag({0}), diag({0})});
  const ModuleVector e1(sc, {diag({1}), diag({0})});
  CHECK(apply(t, e1) == ModuleVector(sc, {diag({0}), diag({1})}));
  CHECK_THROWS_AS(apply(t, ModuleVector::zero(ModuleSpace(AlgebraDescriptor::diagonal(1), 3))), DimensionError);
}

TEST_CASE("adjoint examples") {
  const ModuleSpace s(AlgebraDescriptor::diagonal(2), 1);
  CHECK(adjoint(AdjointableOperator::identity(s)) == AdjointableOperator::identity(s));
  const AdjointableOperator t(s, s, {diag({{0, 1}, 2})});
  CHECK(adjoint(t) == AdjointableOperator(s, s, {diag({{0, -1}, 2})}));
}

TEST_CASE("compose examples") {
  Rng rng(2);
  const ModuleSpace a(AlgebraDescriptor::diagonal(2), 2);
  const ModuleSpace b(AlgebraDescriptor::diagonal(2), 3);
  const auto t = random_op(rng, a, b);
  CHECK(compose(t, AdjointableOperator::identity(a)) == t);
  CHECK(compose(AdjointableOperator::identity(b), t) == t);
  const auto tt = flatten(compose(adjoint(t), t));
  for (const auto& blk : tt.blocks) {
    CHECK(blk.hermitian_defect() < 1e-14);
    CHECK(eigvalsh(blk).front() >= -kEpsPos);
  }
  CHECK_THROWS_AS(compose(t, t), DimensionError);
}

TEST_CASE("flatten examples and agreement with the Kronecker oracle") {
  const ModuleSpace s(AlgebraDescriptor::diagonal(2), 1);
  const auto f = flatten(AdjointableOperator(s, s, {diag({5, 7})}));
  REQUIRE(f.blocks.size() == 2);
  CHECK(f.blocks[0](0, 0) == cplx(5));
  CHECK(f.blocks[1](0, 0) == cplx(7));
  for (const auto& alg : algebras()) {
    const ModuleSpace sp(alg, 2);
    for (const auto& blk : flatten(AdjointableOperator::identity(sp)).blocks) CHECK(blk == CMatrix::identity(blk.rows()));
  }
  Rng rng(4);
  for (const auto& alg : algebras()) {
    const ModuleSpace d(alg, 2);
    const ModuleSpace c(alg, 3);
    const auto t = random_op(rng, d, c);
    CHECK(oracle::relative_distance(oracle::to_eigen(flatten(t).blocks), oracle::flat(t)) == 0.0);
    const auto back = unflatten(d, c, flatten(t));
    CHECK(back == t);
    const auto tt = flatten(compose(adjoint(t), t));
    for (const auto& blk : tt.blocks) CHECK(eigvalsh(blk).front() >= -kEpsPos);
  }
}

TEST_CASE("operator_norm and lower_bound examples") {
  for (const auto& alg : algebras()) {
    const ModuleSpace s(alg, 2);
    CHECK(operator_norm(AdjointableOperator::identity(s)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(lower_bound(AdjointableOperator::identity(s)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(operator_norm(AdjointableOperator::zero(s, s)) == 0.0);
  }
  const ModuleSpace s(AlgebraDescriptor::diagonal(3), 1);
  const AdjointableOperator k(s, s, {diag({1, 0.5, 1.0 / 3})});
  CHECK(operator_norm(k) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lower_bound(k) == doctest::Approx(1.0 / 3).epsilon(1e-14));
  const AdjointableOperator z(s, s, {diag({1, 0, 2})});
  CHECK(lower_bound(z) == 0.0);
}

TEST_CASE("invert_operator") {
  Rng rng(6);
  for (const auto& alg : algebras()) {
    const ModuleSpace s(alg, 2);
    const auto t = random_invertible(rng.index(1000), s);
    const auto inv = invert_operator(t);
    CHECK(relative_flat_distance(compose(t, inv), AdjointableOperator::identity(s)) < 1e-10);
  }
  const ModuleSpace s(AlgebraDescriptor::diagonal(2), 1);
  CHECK_THROWS_AS(invert_operator(AdjointableOperator(s, s, {diag({1, 0})})), NotInvertibleError);
}

TEST_CASE("module axioms and adjoint identity on random data") {
  Rng rng(derive_seed(21, 0));
  for (int it = 0; it < 100; ++it) {
    const auto alg = algebras()[it % 4];
    const ModuleSpace d(alg, 1 + it % 3);
    const ModuleSpace c(alg, 1 + (it / 3) % 3);
    const auto x = rng.vector(d);
    const auto x2 = rng.vector(d);
    const auto y = rng.vector(c);
    const auto a = rng.element(alg);
    const auto t = random_op(rng, d, c);
    const auto xx = inner_product(x, x);
    CHECK(is_positive(xx, kEpsPos));
    CHECK(approx_equal(inner_product(x, x2), star(inner_product(x2, x)), kTauAlg));
    // <a x + x2, z> = a <x, z> + <x2, z>
    const auto z = rng.vector(d);
    CHECK(approx_equal(inner_product(module_action(a, x) + x2, z), a * inner_product(x, z) + inner_product(x2, z),
                       kTauAlg));
    // A-linearity
    CHECK(close(apply(t, module_action(a, x)), module_action(a, apply(t, x)), kTauAlg));
    // <Tx, y> = <x, T*y>
    CHECK(approx_equal(inner_product(apply(t, x), y), inner_product(x, apply(adjoint(t), y)), kTauAlg));
    CHECK(adjoint(adjoint(t)) == t);
    // compose
    const ModuleSpace e(alg, 2);
    const auto u = random_op(rng, c, e);
    CHECK(close(apply(compose(u, t), x), apply(u, apply(t, x)), kTauAlg));
    CHECK(relative_flat_distance(adjoint(compose(u, t)), compose(adjoint(t), adjoint(u))) < 1e-14);
    const auto fut = oracle::to_eigen(flatten(compose(u, t)).blocks);
    const auto fu = oracle::flat(u);
    const auto ft = oracle::flat(t);
    std::vector<oracle::Mat> prod;
    for (std::size_t b = 0; b < fu.size(); ++b) prod.push_back(fu[b] * ft[b]);
    CHECK(oracle::relative_distance(fut, prod) < 1e-13);
  }
  // zero vector detection
  const ModuleSpace s(AlgebraDescriptor::matrix(2), 2);
  CHECK(alg_norm(inner_product(ModuleVector::zero(s), ModuleVector::zero(s))) == 0.0);
}

TEST_CASE("<Tx,Tx> <= |T|^2 <x,x> on 200 random pairs") {
  Rng rng(derive_seed(22, 0));
  for (int it = 0; it < 200; ++it) {
    const auto alg = algebras()[it % 4];
    const ModuleSpace d(alg, 1 + it % 3);
    const ModuleSpace c(alg, 1 + (it / 4) % 3);
    const auto t = random_op(rng, d, c);
    const auto x = rng.vector(d);
    const double n = operator_norm(t);
    const auto tx = apply(t, x);
    CHECK(is_positive((n * n) * inner_product(x, x) - inner_product(tx, tx), kEpsPos));
  }
}

TEST_CASE("surjective operators have bounded-below adjoints") {
  Rng rng(derive_seed(23, 0));
  for (int it = 0; it < 100; ++it) {
    const auto alg = algebras()[it % 4];
    const ModuleSpace s(alg, 1 + it % 3);
    const auto t = random_surjective_k(derive_seed(23, it + 1), s, 0.3);
    const double m = lower_bound(adjoint(t));
    CHECK(m >= 0.3 * (1 - 1e-12));
    const auto x = rng.vector(s);
    const auto tx = apply(adjoint(t), x);
    const double mp = m * m - kEpsPos;
    CHECK(is_positive(inner_product(tx, tx) - mp * inner_product(x, x), kEpsPos));
    const auto ttstar = compose(t, adjoint(t));
    const double lo = 1.0 / operator_norm(invert_operator(ttstar));
    const double hi = std::pow(operator_norm(t), 2);
    for (double ev : flat_spectrum(ttstar)) {
      CHECK(ev >= lo - 1e-8 * (1 + lo));
      CHECK(ev <= hi + 1e-8 * (1 + hi));
    }
  }
}

TEST_CASE("vector flatten round trip") {
  Rng rng(8);
  for (const auto& alg : algebras()) {
    const ModuleSpace s(alg, 3);
    const auto x = rng.vector(s);
    const auto fx = flatten_vector(x);
    auto acc = ModuleVector::zero(s);
    if (alg.kind == AlgebraKind::Diagonal) {
      for (std::size_t b = 0; b < fx.size(); ++b) acc = acc + unflatten_vector(s, b, fx[b]);
      CHECK(close(acc, x, 1e-15));
    } else {
      CHECK(close(unflatten_vector(s, 0, fx[0]), x, 1e-15));
    }
  }
}

TEST_CASE("coefficient blocks round trip") {
  Rng rng(10);
  for (const auto& alg : algebras()) {
    const ModuleSpace d(alg, 2);
    const ModuleSpace c(alg, 3);
    const auto t = random_op(rng, d, c);
    CHECK(from_coefficient_blocks(d, c, coefficient_blocks(t)) == t);
  }
}

TEST_CASE("construction errors") {
  const auto alg = AlgebraDescriptor::diagonal(2);
  CHECK_THROWS_AS(ModuleSpace(alg, 0), ConfigError);
  const ModuleSpace s(alg, 2);
  CHECK_THROWS_AS(ModuleVector(s, {AlgebraElement::zero(alg)}), DimensionError);
  CHECK_THROWS_AS(AdjointableOperator(s, s, {AlgebraElement::zero(alg)}), DimensionError);
}
