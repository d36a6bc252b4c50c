#include "examples_gen.hpp"

#include <cmath>
#include <numbers>

#include "error.hpp"
#include "random.hpp"

namespace kgf {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

AlgebraElement diag_element(const std::vector<double>& v) {
  std::vector<cplx> data(v.begin(), v.end());
  return AlgebraElement::diagonal(data);
}

AlgebraElement unit_vector(std::size_t d, std::size_t i, cplx value) {
  std::vector<cplx> data(d);
  data[i] = value;
  return AlgebraElement::diagonal(data);
}

AdjointableOperator example_k(const ModuleSpace& space) {
  std::vector<double> inv(space.algebra.dim);
  for (std::size_t i = 0; i < inv.size(); ++i) inv[i] = 1.0 / static_cast<double>(i + 1);
  return AdjointableOperator(space, space, {diag_element(inv)});
}

FrameBounds example_bounds(std::size_t d) {
  return FrameBounds{AlgebraElement::identity(AlgebraDescriptor::diagonal(d)),
                     diag_element(example_bound_vector(d)), BoundsMode::AlgebraValued};
}

// Q D R^H on one coefficient block with the given singular values.
CMatrix shaped_block(Rng& rng, std::size_t rows, std::size_t cols, const std::vector<double>& sv) {
  const auto q = rng.unitary(rows);
  const auto r = rng.unitary(cols);
  CMatrix d(rows, cols);
  for (std::size_t i = 0; i < std::min(rows, cols); ++i) d(i, i) = sv[i];
  return q * d * r.adjoint();
}

std::size_t block_side(const ModuleSpace& space) {
  return space.algebra.kind == AlgebraKind::Diagonal ? space.rank : space.rank * space.algebra.dim;
}

template <typename SingularValues>
AdjointableOperator shaped_operator(std::uint64_t seed, const ModuleSpace& space, SingularValues&& draw) {
  Rng rng(seed);
  const std::size_t n = block_side(space);
  const std::size_t blocks = space.algebra.kind == AlgebraKind::Diagonal ? space.algebra.dim : 1;
  std::vector<CMatrix> out;
  out.reserve(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    std::vector<double> sv(n);
    for (std::size_t i = 0; i < n; ++i) sv[i] = draw(rng, i);
    out.push_back(shaped_block(rng, n, n, sv));
  }
  return from_coefficient_blocks(space, space, out);
}

}  // namespace

std::vector<double> example_bound_vector(std::size_t d) {
  std::vector<double> c(d);
  for (std::size_t i = 0; i < d; ++i) c[i] = 0.5 + 1.0 / static_cast<double>(i + 1);
  return c;
}

ProblemInstance build_paper_example_discrete(std::size_t d) {
  if (d == 0) throw ConfigError("example: dim must be >= 1");
  const ModuleSpace space(AlgebraDescriptor::diagonal(d), 1);
  const auto c = example_bound_vector(d);
  std::vector<Atom> atoms;
  std::vector<AdjointableOperator> ops;
  for (std::size_t j = 0; j < d; ++j) {
    atoms.push_back({"j" + std::to_string(j + 1), 1.0});
    // <x, f_j> = x f_j*, f_j real
    ops.emplace_back(space, space, std::vector<AlgebraElement>{unit_vector(d, j, c[j])});
  }
  FrameFamily frame(space, MeasureSpace(std::move(atoms)), std::move(ops));
  return ProblemInstance(std::move(frame), example_k(space), example_bounds(d));
}

AlgebraElement phase_pattern(const std::string& id, std::size_t d) {
  const std::uint64_t h = fnv1a(id);
  std::vector<cplx> data(d);
  for (std::size_t c = 0; c < d; ++c) {
    const double u = static_cast<double>(derive_seed(h, c) >> 11) * 0x1.0p-53;
    data[c] = std::polar(1.0, 2.0 * std::numbers::pi * u);
  }
  return AlgebraElement::diagonal(data);
}

ProblemInstance build_paper_example_continuous(const ExampleConfig& cfg) {
  const std::size_t d = cfg.dim;
  if (d == 0) throw ConfigError("example: dim must be >= 1");
  if (cfg.atoms_per_cell == 0) throw ConfigError("example: atoms_per_cell must be >= 1");
  if (cfg.cell_weights.size() != d && cfg.cell_weights.size() != 1) {
    throw ConfigError("example: cell_weights must have length 1 or dim");
  }
  for (double w : cfg.cell_weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw ConfigError("example: cell weights must be positive");
  }
  const ModuleSpace space(AlgebraDescriptor::diagonal(d), 1);
  const auto c = example_bound_vector(d);
  std::vector<Atom> atoms;
  std::vector<AdjointableOperator> ops;
  const auto p = static_cast<double>(cfg.atoms_per_cell);
  for (std::size_t k = 0; k < d; ++k) {
    const double mu = cfg.cell_weights.size() == 1 ? cfg.cell_weights[0] : cfg.cell_weights[k];
    const double scale = cfg.normalization == Normalization::SqrtCell ? 1.0 / std::sqrt(mu) : 1.0 / mu;
    for (std::size_t a = 0; a < cfg.atoms_per_cell; ++a) {
      std::string id = "k" + std::to_string(k + 1) + "." + std::to_string(a + 1);
      const auto coeff = unit_vector(d, k, scale * c[k]) * phase_pattern(id, d);
      atoms.push_back({std::move(id), mu / p});
      ops.emplace_back(space, space, std::vector<AlgebraElement>{coeff});
    }
  }
  FrameFamily frame(space, MeasureSpace(std::move(atoms)), std::move(ops));
  return ProblemInstance(std::move(frame), example_k(space), example_bounds(d));
}

FrameFamily random_frame(std::uint64_t seed, const AlgebraDescriptor& algebra, std::size_t m,
                         std::size_t n_atoms, const std::vector<std::size_t>& ranks) {
  if (m == 0) throw ConfigError("random_frame: module rank must be >= 1");
  if (n_atoms == 0) throw ConfigError("random_frame: need at least one atom");
  if (!ranks.empty() && ranks.size() != n_atoms) {
    throw ConfigError("random_frame: ranks has " + std::to_string(ranks.size()) + " entries for " +
                      std::to_string(n_atoms) + " atoms");
  }
  for (std::size_t r : ranks)
    if (r == 0) throw ConfigError("random_frame: codomain ranks must be >= 1");

  Rng rng(seed);
  const ModuleSpace domain(algebra, m);
  std::vector<Atom> atoms;
  std::vector<AdjointableOperator> ops;
  for (std::size_t w = 0; w < n_atoms; ++w) {
    const ModuleSpace codomain(algebra, ranks.empty() ? m : ranks[w]);
    atoms.push_back({"w" + std::to_string(w), rng.uniform(0.5, 1.5)});
    std::vector<AlgebraElement> coeffs;
    for (std::size_t i = 0; i < m * codomain.rank; ++i) coeffs.push_back(rng.element(algebra));
    ops.emplace_back(domain, codomain, std::move(coeffs));
  }
  return FrameFamily(domain, MeasureSpace(std::move(atoms)), std::move(ops));
}

AdjointableOperator random_invertible(std::uint64_t seed, const ModuleSpace& space) {
  return shaped_operator(seed, space, [](Rng& rng, std::size_t) { return rng.uniform(0.1, 1.0); });
}

AdjointableOperator random_surjective_k(std::uint64_t seed, const ModuleSpace& space, double min_lower) {
  if (!(min_lower > 0.0)) throw ConfigError("random_surjective_k: min_lower must be > 0");
  return shaped_operator(seed, space,
                         [min_lower](Rng& rng, std::size_t) { return min_lower + rng.uniform(); });
}

AdjointableOperator random_rank_deficient_k(std::uint64_t seed, const ModuleSpace& space, std::size_t null_dims) {
  const std::size_t n = block_side(space);
  if (null_dims == 0 || null_dims > n) {
    throw ConfigError("random_rank_deficient_k: null_dims must be in [1, " + std::to_string(n) + "]");
  }
  return shaped_operator(seed, space, [null_dims](Rng& rng, std::size_t i) {
    const double s = 0.2 + rng.uniform();
    return i < null_dims ? 0.0 : s;
  });
}

ProblemInstance random_problem(const RandomConfig& cfg) {
  auto frame = random_frame(derive_seed(cfg.seed, 0), cfg.algebra, cfg.rank, cfg.atoms, cfg.ranks);
  const ModuleSpace space(cfg.algebra, cfg.rank);
  const auto k = [&] {
    switch (cfg.k) {
      case KKind::Identity:
        return AdjointableOperator::identity(space);
      case KKind::Zero:
        return AdjointableOperator::zero(space, space);
      case KKind::RankDeficient:
        return random_rank_deficient_k(derive_seed(cfg.seed, 1), space, 1);
      case KKind::Surjective:
        break;
    }
    return random_surjective_k(derive_seed(cfg.seed, 1), space, 0.25);
  }();
  ProblemInstance p(std::move(frame), k);
  if (cfg.bounds == RandomBounds::None) return p;

  const auto fs = flatten(frame_operator(p.frame)).blocks;
  const auto fk = flatten(compose(p.k, adjoint(p.k))).blocks;
  const auto lower_from = [](const ScalarLowerBound& lb) {
    return lb.unbounded || lb.value <= 0.0 ? 1.0 : std::sqrt(0.9 * lb.value);
  };
  const auto upper_from = [](double s_norm) { return s_norm <= 0.0 ? 1.0 : 1.05 * std::sqrt(s_norm); };
  const auto block_norm = [](const CMatrix& m) {
    const auto ev = eigvalsh(m);
    return std::max(std::abs(ev.front()), std::abs(ev.back()));
  };

  if (cfg.bounds == RandomBounds::Scalar) {
    double s_norm = 0.0;
    for (const auto& b : fs) s_norm = std::max(s_norm, block_norm(b));
    p.bounds = FrameBounds{AlgebraElement::scalar(cfg.algebra, lower_from(pencil_lower_bound(fs, fk))),
                           AlgebraElement::scalar(cfg.algebra, upper_from(s_norm)), BoundsMode::Scalar};
    return p;
  }

  if (cfg.algebra.kind != AlgebraKind::Diagonal) {
    throw ConfigError("random_problem: algebra-valued bounds are generated for diagonal algebras only");
  }
  Rng rng(derive_seed(cfg.seed, 2));
  std::vector<cplx> lower(fs.size());
  std::vector<cplx> upper(fs.size());
  for (std::size_t c = 0; c < fs.size(); ++c) {
    lower[c] = lower_from(pencil_lower_bound({fs[c]}, {fk[c]})) * rng.unit_phase();
    upper[c] = upper_from(block_norm(fs[c])) * rng.unit_phase();
  }
  p.bounds = FrameBounds{AlgebraElement::diagonal(lower), AlgebraElement::diagonal(upper),
                         BoundsMode::AlgebraValued};
  return p;
}

}  // namespace kgf
