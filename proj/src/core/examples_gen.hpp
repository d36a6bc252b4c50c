#pragma once

// Fixture builders: the l-infinity example truncated to C^d (discrete and
// sigma-finite forms) and seeded random frames and operators.

#include <cstdint>
#include <vector>

#include "frames.hpp"

namespace kgf {

enum class Normalization { SqrtCell, PaperLiteral };

struct ExampleConfig {
  std::size_t dim = 1;
  std::size_t atoms_per_cell = 1;
  std::vector<double> cell_weights{1.0};  // length dim, or 1 to broadcast
  Normalization normalization = Normalization::SqrtCell;
};

// c_i = 1/2 + 1/i, i = 1..d
std::vector<double> example_bound_vector(std::size_t d);

// Diagonal C^d, rank 1, atoms "j1".."jd" of weight 1. Lambda_j x = <x, f_j>
// with f_j = c_j e_j, Kx = {x_i / i}, bounds A = 1, B = c.
ProblemInstance build_paper_example_discrete(std::size_t d);

// Cell k (1-based) holds atoms_per_cell atoms "k<k>.<a>" of weight
// mu_k / atoms_per_cell, with Lambda_w x = s_k <x, f_k> h_w where
// s_k = 1/sqrt(mu_k) (SqrtCell) or 1/mu_k (PaperLiteral) and h_w is a
// unimodular phase pattern fixed by the atom id. K and bounds as above.
ProblemInstance build_paper_example_continuous(const ExampleConfig& cfg);

// Unimodular element derived from an id hash; <h, h> = 1.
AlgebraElement phase_pattern(const std::string& id, std::size_t d);

// Operators Lambda_w : A^m -> A^{ranks[w]} with coefficient entries in the
// unit disk and weights in [0.5, 1.5]. ranks may be empty (all rank m).
FrameFamily random_frame(std::uint64_t seed, const AlgebraDescriptor& algebra, std::size_t m,
                         std::size_t n_atoms, const std::vector<std::size_t>& ranks = {});

// Singular values of every coefficient block drawn from [0.1, 1].
AdjointableOperator random_invertible(std::uint64_t seed, const ModuleSpace& space);
// lower_bound(adjoint(K)) >= min_lower; singular values in [min_lower, min_lower + 1].
AdjointableOperator random_surjective_k(std::uint64_t seed, const ModuleSpace& space, double min_lower);
// Like random_surjective_k with `null_dims` singular values per block set to 0.
AdjointableOperator random_rank_deficient_k(std::uint64_t seed, const ModuleSpace& space, std::size_t null_dims);

enum class KKind { Identity, Surjective, RankDeficient, Zero };
enum class RandomBounds { None, Scalar, AlgebraValued };

struct RandomConfig {
  std::uint64_t seed = 0;
  AlgebraDescriptor algebra = AlgebraDescriptor::diagonal(2);
  std::size_t rank = 2;
  std::size_t atoms = 4;
  std::vector<std::size_t> ranks;
  KKind k = KKind::Surjective;
  RandomBounds bounds = RandomBounds::Scalar;
};

// Scalar bounds: A = sqrt(0.9 A_opt), B = 1.05 sqrt(|S|). Algebra-valued
// bounds (Diagonal only) apply the same rule per component with random
// phases. When A_opt is 0 the lower bound is left at 1 and will not certify.
ProblemInstance random_problem(const RandomConfig& cfg);

}  // namespace kgf
