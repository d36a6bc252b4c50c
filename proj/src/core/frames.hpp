#pragma once

// Continuous *-K-g-frames over a measure space realized as finitely many
// weighted atoms. Integrals over (Omega, mu) are weighted sums taken in atom
// order, so every identity between frame transforms and frame operators holds
// exactly up to rounding.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "module.hpp"
#include "tolerances.hpp"

namespace kgf {

struct Atom {
  std::string id;
  double weight = 1.0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

class MeasureSpace {
 public:
  // Weights must be strictly positive and finite, ids unique and non-empty.
  explicit MeasureSpace(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double total_mass() const;
  std::optional<std::size_t> index_of(const std::string& id) const;

  friend bool operator==(const MeasureSpace&, const MeasureSpace&) = default;

 private:
  std::vector<Atom> atoms_;
};

// One adjointable operator Lambda_w : U -> V_w per atom, in atom order.
class FrameFamily {
 public:
  FrameFamily(ModuleSpace domain, MeasureSpace measure, std::vector<AdjointableOperator> operators);

  const ModuleSpace& domain() const { return domain_; }
  const MeasureSpace& measure() const { return measure_; }
  const std::vector<AdjointableOperator>& operators() const { return operators_; }
  const AdjointableOperator& op(const std::string& atom_id) const;

 private:
  ModuleSpace domain_;
  MeasureSpace measure_;
  std::vector<AdjointableOperator> operators_;
};

// Element of the direct sum of the V_w with <x, y> = sum_w mu_w <x_w, y_w>.
class DirectSumVector {
 public:
  DirectSumVector(MeasureSpace measure, std::vector<ModuleVector> parts);

  const MeasureSpace& measure() const { return measure_; }
  const std::vector<ModuleVector>& parts() const { return parts_; }

 private:
  MeasureSpace measure_;
  std::vector<ModuleVector> parts_;
};

AlgebraElement direct_sum_inner(const DirectSumVector& x, const DirectSumVector& y);
double direct_sum_norm(const DirectSumVector& x);

enum class BoundsMode { AlgebraValued, Scalar };

// Frame bounds A (lower) and B (upper). Scalar mode requires both to be
// real multiples of the identity.
struct FrameBounds {
  AlgebraElement lower;
  AlgebraElement upper;
  BoundsMode mode = BoundsMode::AlgebraValued;
};

// Throws NotInvertibleError unless both bounds are invertible, ConfigError
// when Scalar mode is claimed for non-scalar elements.
void validate_bounds(const FrameBounds& bounds, const AlgebraDescriptor& algebra);

struct ProblemInstance {
  FrameFamily frame;
  AdjointableOperator k;
  std::optional<FrameBounds> bounds;

  ProblemInstance(FrameFamily f, AdjointableOperator kop, std::optional<FrameBounds> b = std::nullopt);
};

// Same frame and bounds with K replaced by the identity (plain *-g-frame).
ProblemInstance as_gframe(const ProblemInstance& p);

DirectSumVector analysis(const FrameFamily& f, const ModuleVector& x);
ModuleVector synthesis(const FrameFamily& f, const DirectSumVector& y);
AdjointableOperator frame_operator(const FrameFamily& f);
// sum_w mu_w <Lambda_w x, Lambda_w x>, evaluated atom by atom.
AlgebraElement frame_energy(const FrameFamily& f, const ModuleVector& x);

enum class Verdict { Certified, Refuted, Inconclusive };
enum class CertMethod { ExactPSD, Sampled };
enum class CertifyMode { Exact, Sampled };
enum class Inequality { Lower, Upper };

struct CertifyOptions {
  CertifyMode mode = CertifyMode::Exact;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  double tol = kEpsPos;
};

struct SpectralRange {
  double min = 0.0;
  double max = 0.0;
};

struct CertificationReport {
  Verdict verdict = Verdict::Inconclusive;
  CertMethod method = CertMethod::ExactPSD;
  BoundsMode mode = BoundsMode::AlgebraValued;
  std::optional<AlgebraElement> lower_element;  // absent for Bessel checks
  AlgebraElement upper_element;
  // Exact: eigenvalue range of S - A^2 KK* and B^2 - S over all blocks.
  // Sampled: range of the smallest eigenvalue of the element difference,
  // normalized by |<x, x>|, over the samples.
  std::optional<SpectralRange> lower;
  SpectralRange upper;
  std::optional<Inequality> violated;
  std::optional<ModuleVector> witness;
  // Smallest eigenvalue of the violated difference at the witness, and the
  // slack it had to beat.
  double witness_gap = 0.0;
  double witness_slack = 0.0;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;
  double tol = kEpsPos;
};

// Upper inequality only: sum_w mu_w <Lambda_w x, Lambda_w x> <= B <x, x> B*.
CertificationReport certify_bessel(const FrameFamily& f, const AlgebraElement& upper, BoundsMode mode,
                                   const CertifyOptions& opts = {});
// Both inequalities. Throws ConfigError when the instance carries no bounds.
CertificationReport certify_kgframe(const ProblemInstance& p, const CertifyOptions& opts = {});

// Evaluates both inequalities at one vector.
struct PointCheck {
  double lower_gap = 0.0;  // min eig of energy - A<K*x,K*x>A*
  double lower_slack = 0.0;
  double upper_gap = 0.0;  // min eig of B<x,x>B* - energy
  double upper_slack = 0.0;

  bool lower_ok() const { return lower_gap >= -lower_slack; }
  bool upper_ok() const { return upper_gap >= -upper_slack; }
};
PointCheck check_point(const ProblemInstance& p, const ModuleVector& x, double tol = kEpsPos);

bool is_tight(const ProblemInstance& p, double tol = kEpsPos);
bool is_parseval(const ProblemInstance& p, double tol = kEpsPos);

struct ScalarLowerBound {
  double value = 0.0;
  bool unbounded = false;  // K = 0: every A works
  int iterations = 0;
};

// sup{A >= 0 : S - A KK* is positive semidefinite}, by bisection.
ScalarLowerBound optimal_scalar_lower_bound(const ProblemInstance& p);
// Same search on explicit flattened blocks (s[b] and kk[b] Hermitian).
ScalarLowerBound pencil_lower_bound(const std::vector<CMatrix>& s, const std::vector<CMatrix>& kk);

struct NormSandwich {
  double lo = 0.0;
  double s_norm = 0.0;
  double hi = 0.0;
  bool ok = false;
};

// |A^-1|^-2 |K|^2 <= |S| <= |B|^2, with 1e-8 relative slack.
NormSandwich operator_norm_sandwich(const ProblemInstance& p);

// {Lambda_w o T}
FrameFamily transform_frame(const FrameFamily& f, const AdjointableOperator& t);

struct TransformOutcome {
  ProblemInstance problem;  // with transferred bounds: K replaced by the identity
  bool t_invertible = false;
  bool k_surjective = false;
  double t_norm = 0.0;
  double t_lower = 0.0;  // |T^-1|^-1
  double k_adjoint_lower = 0.0;  // sqrt(m)
  std::optional<FrameBounds> transferred;
  // Relative Frobenius distance between the new frame operator and T*ST.
  double operator_residual = 0.0;
  // Only for the canonical dual: distance to S^-1.
  std::optional<double> inverse_residual;
};

TransformOutcome transform_problem(const ProblemInstance& p, const AdjointableOperator& t);
// transform_problem with T = S^-1. Throws NotInvertibleError for singular S.
TransformOutcome canonical_transform_dual(const ProblemInstance& p);

// *-g-frame bounds (A, B) to *-K-g-frame bounds (|K|^-1 A, B).
FrameBounds gframe_to_kgframe_bounds(const FrameFamily& f, const FrameBounds& gbounds,
                                     const AdjointableOperator& k);
// *-K-g-frame bounds (A, B) to *-g-frame bounds (sqrt(m) A, B) with
// m = lower_bound(K*)^2. Throws PreconditionError if K is not surjective.
FrameBounds kgframe_to_gframe_bounds(const ProblemInstance& p);

// |flatten(a) - flatten(b)|_F / |flatten(b)|_F (absolute when b = 0).
double relative_flat_distance(const AdjointableOperator& a, const AdjointableOperator& b);

}  // namespace kgf
