#include "frames.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <set>

#include "error.hpp"
#include "random.hpp"

namespace kgf {

MeasureSpace::MeasureSpace(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  std::set<std::string> seen;
  for (const auto& a : atoms_) {
    if (a.id.empty()) throw ConfigError("measure: atom id must be non-empty");
    if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
      throw ConfigError("measure: atom '" + a.id + "' has non-positive weight");
    }
    if (!seen.insert(a.id).second) throw ConfigError("measure: duplicate atom id '" + a.id + "'");
  }
}

double MeasureSpace::total_mass() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.weight;
  return s;
}

std::optional<std::size_t> MeasureSpace::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if (atoms_[i].id == id) return i;
  return std::nullopt;
}

FrameFamily::FrameFamily(ModuleSpace domain, MeasureSpace measure, std::vector<AdjointableOperator> operators)
    : domain_(domain), measure_(std::move(measure)), operators_(std::move(operators)) {
  if (operators_.size() != measure_.size()) {
    throw StructureError("frame: " + std::to_string(operators_.size()) + " operators for " +
                         std::to_string(measure_.size()) + " atoms");
  }
  for (std::size_t w = 0; w < operators_.size(); ++w) {
    const auto& op = operators_[w];
    if (!(op.domain() == domain_)) {
      throw DimensionError("frame: operator for atom '" + measure_.atoms()[w].id +
                           "' has domain rank " + std::to_string(op.domain().rank) +
                           ", expected " + std::to_string(domain_.rank));
    }
  }
}

const AdjointableOperator& FrameFamily::op(const std::string& atom_id) const {
  const auto idx = measure_.index_of(atom_id);
  if (!idx) throw StructureError("frame: unknown atom '" + atom_id + "'");
  return operators_[*idx];
}

DirectSumVector::DirectSumVector(MeasureSpace measure, std::vector<ModuleVector> parts)
    : measure_(std::move(measure)), parts_(std::move(parts)) {
  if (parts_.size() != measure_.size()) throw StructureError("direct sum: part count does not match atoms");
}

AlgebraElement direct_sum_inner(const DirectSumVector& x, const DirectSumVector& y) {
  if (!(x.measure() == y.measure())) throw StructureError("direct sum inner product: atoms differ");
  if (x.parts().empty()) throw StructureError("direct sum inner product: no atoms");
  auto acc = AlgebraElement::zero(x.parts().front().space().algebra);
  for (std::size_t w = 0; w < x.parts().size(); ++w) {
    acc = acc + x.measure().atoms()[w].weight * inner_product(x.parts()[w], y.parts()[w]);
  }
  return acc;
}

double direct_sum_norm(const DirectSumVector& x) { return std::sqrt(alg_norm(direct_sum_inner(x, x))); }

void validate_bounds(const FrameBounds& bounds, const AlgebraDescriptor& algebra) {
  if (!(bounds.lower.descriptor() == algebra) || !(bounds.upper.descriptor() == algebra)) {
    throw DimensionError("bounds: elements do not belong to the frame's algebra");
  }
  (void)invert(bounds.lower);
  (void)invert(bounds.upper);
  if (bounds.mode == BoundsMode::Scalar &&
      (!real_scalar_value(bounds.lower) || !real_scalar_value(bounds.upper))) {
    throw ConfigError("bounds: scalar mode requires real multiples of the identity");
  }
}

ProblemInstance::ProblemInstance(FrameFamily f, AdjointableOperator kop, std::optional<FrameBounds> b)
    : frame(std::move(f)), k(std::move(kop)), bounds(std::move(b)) {
  if (!(k.domain() == frame.domain()) || !(k.codomain() == frame.domain())) {
    throw DimensionError("problem: K must map the frame domain to itself");
  }
  if (bounds) {
    if (!(bounds->lower.descriptor() == frame.domain().algebra) ||
        !(bounds->upper.descriptor() == frame.domain().algebra)) {
      throw DimensionError("problem: bounds do not belong to the frame's algebra");
    }
  }
}

ProblemInstance as_gframe(const ProblemInstance& p) {
  return ProblemInstance(p.frame, AdjointableOperator::identity(p.frame.domain()), p.bounds);
}

DirectSumVector analysis(const FrameFamily& f, const ModuleVector& x) {
  if (!(x.space() == f.domain())) throw DimensionError("analysis: vector is not in the frame domain");
  std::vector<ModuleVector> parts;
  parts.reserve(f.operators().size());
  for (const auto& op : f.operators()) parts.push_back(apply(op, x));
  return DirectSumVector(f.measure(), std::move(parts));
}

ModuleVector synthesis(const FrameFamily& f, const DirectSumVector& y) {
  if (!(y.measure() == f.measure())) throw StructureError("synthesis: atoms do not match the frame");
  auto acc = ModuleVector::zero(f.domain());
  for (std::size_t w = 0; w < f.operators().size(); ++w) {
    acc = acc + f.measure().atoms()[w].weight * apply(adjoint(f.operators()[w]), y.parts()[w]);
  }
  return acc;
}

AdjointableOperator frame_operator(const FrameFamily& f) {
  auto s = AdjointableOperator::zero(f.domain(), f.domain());
  for (std::size_t w = 0; w < f.operators().size(); ++w) {
    const auto& op = f.operators()[w];
    s = s + f.measure().atoms()[w].weight * compose(adjoint(op), op);
  }
  return s;
}

AlgebraElement frame_energy(const FrameFamily& f, const ModuleVector& x) {
  auto acc = AlgebraElement::zero(f.domain().algebra);
  for (std::size_t w = 0; w < f.operators().size(); ++w) {
    const auto y = apply(f.operators()[w], x);
    acc = acc + f.measure().atoms()[w].weight * inner_product(y, y);
  }
  return acc;
}

namespace {

struct Inequalities {
  const FrameFamily& frame;
  const AdjointableOperator* k;        // null for Bessel checks
  const AlgebraElement* lower;         // null for Bessel checks
  const AlgebraElement& upper;
  BoundsMode mode;
};

double spectral_abs_max(const std::vector<double>& ev) {
  return ev.empty() ? 0.0 : std::max(std::abs(ev.front()), std::abs(ev.back()));
}

PointCheck evaluate_point(const Inequalities& q, const ModuleVector& x, double tol) {
  PointCheck pc;
  const auto energy = frame_energy(q.frame, x);
  const double energy_norm = alg_norm(energy);
  if (q.k != nullptr) {
    const auto kx = apply(adjoint(*q.k), x);
    const auto lhs = *q.lower * inner_product(kx, kx) * star(*q.lower);
    pc.lower_gap = min_selfadjoint_eigenvalue(energy - lhs);
    pc.lower_slack = tol * (1.0 + energy_norm + alg_norm(lhs));
  }
  const auto rhs = q.upper * inner_product(x, x) * star(q.upper);
  pc.upper_gap = min_selfadjoint_eigenvalue(rhs - energy);
  pc.upper_slack = tol * (1.0 + energy_norm + alg_norm(rhs));
  return pc;
}

struct Failure {
  std::size_t block = 0;
  double eigenvalue = 0.0;
  std::vector<cplx> vector;
};

void finish_with_witness(CertificationReport& rep, const Inequalities& q, Inequality which, ModuleVector x) {
  const auto pc = evaluate_point(q, x, rep.tol);
  rep.violated = which;
  rep.witness_gap = which == Inequality::Lower ? pc.lower_gap : pc.upper_gap;
  rep.witness_slack = which == Inequality::Lower ? pc.lower_slack : pc.upper_slack;
  const bool confirmed = which == Inequality::Lower ? !pc.lower_ok() : !pc.upper_ok();
  rep.verdict = confirmed ? Verdict::Refuted : Verdict::Inconclusive;
  rep.witness = std::move(x);
}

void certify_exact(CertificationReport& rep, const Inequalities& q) {
  const auto& space = q.frame.domain();
  const auto fs = flatten(frame_operator(q.frame)).blocks;
  std::vector<CMatrix> fk;
  if (q.k != nullptr) fk = flatten(compose(*q.k, adjoint(*q.k))).blocks;

  const auto weight = [&](const AlgebraElement& e, std::size_t block) {
    if (q.mode == BoundsMode::Scalar) return std::norm(e[0]);
    return std::norm(e[block]);  // Diagonal: component `block`
  };

  std::optional<Failure> lower_fail;
  std::optional<Failure> upper_fail;
  SpectralRange lower_range{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  SpectralRange upper_range = lower_range;

  for (std::size_t b = 0; b < fs.size(); ++b) {
    const double s_norm = spectral_abs_max(eigvalsh(fs[b]));
    const std::size_t n = fs[b].rows();
    if (q.k != nullptr) {
      const double wa = weight(*q.lower, b);
      const double k_norm = spectral_abs_max(eigvalsh(fk[b]));
      const auto eig = eigh(fs[b] - wa * fk[b]);
      lower_range.min = std::min(lower_range.min, eig.values.front());
      lower_range.max = std::max(lower_range.max, eig.values.back());
      const double slack = rep.tol * (1.0 + s_norm + wa * k_norm);
      if (eig.values.front() < -slack && (!lower_fail || eig.values.front() < lower_fail->eigenvalue)) {
        lower_fail = Failure{b, eig.values.front(), eig.vector(0)};
      }
    }
    const double wb = weight(q.upper, b);
    const auto eig = eigh(wb * CMatrix::identity(n) - fs[b]);
    upper_range.min = std::min(upper_range.min, eig.values.front());
    upper_range.max = std::max(upper_range.max, eig.values.back());
    const double slack = rep.tol * (1.0 + s_norm + wb);
    if (eig.values.front() < -slack && (!upper_fail || eig.values.front() < upper_fail->eigenvalue)) {
      upper_fail = Failure{b, eig.values.front(), eig.vector(0)};
    }
  }

  if (q.k != nullptr) rep.lower = lower_range;
  rep.upper = upper_range;
  if (lower_fail) {
    finish_with_witness(rep, q, Inequality::Lower, unflatten_vector(space, lower_fail->block, lower_fail->vector));
  } else if (upper_fail) {
    finish_with_witness(rep, q, Inequality::Upper, unflatten_vector(space, upper_fail->block, upper_fail->vector));
  } else {
    rep.verdict = Verdict::Certified;
  }
}

void certify_sampled(CertificationReport& rep, const Inequalities& q, std::size_t samples) {
  Rng rng(rep.seed);
  SpectralRange lower_range{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  SpectralRange upper_range = lower_range;
  std::optional<std::pair<double, ModuleVector>> lower_fail;
  std::optional<std::pair<double, ModuleVector>> upper_fail;

  for (std::size_t s = 0; s < samples; ++s) {
    auto x = rng.vector(q.frame.domain());
    const double scale = alg_norm(inner_product(x, x));
    if (scale == 0.0) continue;  // zero vector satisfies both sides trivially
    const auto pc = evaluate_point(q, x, rep.tol);
    if (q.k != nullptr) {
      lower_range.min = std::min(lower_range.min, pc.lower_gap / scale);
      lower_range.max = std::max(lower_range.max, pc.lower_gap / scale);
      if (!pc.lower_ok() && (!lower_fail || pc.lower_gap / scale < lower_fail->first)) {
        lower_fail.emplace(pc.lower_gap / scale, x);
      }
    }
    upper_range.min = std::min(upper_range.min, pc.upper_gap / scale);
    upper_range.max = std::max(upper_range.max, pc.upper_gap / scale);
    if (!pc.upper_ok() && (!upper_fail || pc.upper_gap / scale < upper_fail->first)) {
      upper_fail.emplace(pc.upper_gap / scale, x);
    }
  }

  rep.sample_count = samples;
  if (q.k != nullptr) rep.lower = lower_range;
  rep.upper = upper_range;
  if (lower_fail) {
    finish_with_witness(rep, q, Inequality::Lower, std::move(lower_fail->second));
  } else if (upper_fail) {
    finish_with_witness(rep, q, Inequality::Upper, std::move(upper_fail->second));
  } else {
    rep.verdict = Verdict::Inconclusive;  // positive on every sample, not universal
  }
}

CertificationReport run_certification(const Inequalities& q, const CertifyOptions& opts) {
  if (opts.samples == 0) throw ConfigError("certify: samples must be >= 1");
  if (!(opts.tol > 0.0)) throw ConfigError("certify: tolerance must be > 0");
  CertificationReport rep{.upper_element = q.upper};
  rep.mode = q.mode;
  rep.seed = opts.seed;
  rep.tol = opts.tol;
  if (q.lower != nullptr) rep.lower_element = *q.lower;

  const bool exact_available =
      q.mode == BoundsMode::Scalar || q.frame.domain().algebra.kind == AlgebraKind::Diagonal;
  if (opts.mode == CertifyMode::Exact && exact_available) {
    rep.method = CertMethod::ExactPSD;
    certify_exact(rep, q);
  } else {
    rep.method = CertMethod::Sampled;
    certify_sampled(rep, q, opts.samples);
  }
  return rep;
}

}  // namespace

CertificationReport certify_bessel(const FrameFamily& f, const AlgebraElement& upper, BoundsMode mode,
                                   const CertifyOptions& opts) {
  if (!(upper.descriptor() == f.domain().algebra)) throw DimensionError("certify_bessel: bound algebra mismatch");
  (void)invert(upper);
  if (mode == BoundsMode::Scalar && !real_scalar_value(upper)) {
    throw ConfigError("certify_bessel: scalar mode requires a real multiple of the identity");
  }
  return run_certification(Inequalities{f, nullptr, nullptr, upper, mode}, opts);
}

CertificationReport certify_kgframe(const ProblemInstance& p, const CertifyOptions& opts) {
  if (!p.bounds) throw ConfigError("certify_kgframe: problem has no bounds");
  validate_bounds(*p.bounds, p.frame.domain().algebra);
  return run_certification(Inequalities{p.frame, &p.k, &p.bounds->lower, p.bounds->upper, p.bounds->mode}, opts);
}

PointCheck check_point(const ProblemInstance& p, const ModuleVector& x, double tol) {
  if (!p.bounds) throw ConfigError("check_point: problem has no bounds");
  return evaluate_point(Inequalities{p.frame, &p.k, &p.bounds->lower, p.bounds->upper, p.bounds->mode}, x, tol);
}

bool is_tight(const ProblemInstance& p, double tol) {
  if (!p.bounds) throw PreconditionError("is_tight: problem has no bounds");
  if (!approx_equal(p.bounds->lower, p.bounds->upper, tol)) return false;
  const auto rep = certify_kgframe(p, CertifyOptions{.tol = tol});
  if (rep.verdict == Verdict::Refuted) return false;

  const auto s = frame_operator(p.frame);
  if (rep.method == CertMethod::ExactPSD) {
    const double scale = 1.0 + operator_norm(s);
    return std::max(std::abs(rep.upper.min), std::abs(rep.upper.max)) <= tol * scale;
  }
  // Equality of the upper inequality on a spanning set of coordinate vectors.
  const auto& space = p.frame.domain();
  const auto& b = p.bounds->upper;
  for (std::size_t blk = 0; blk < space.block_count(); ++blk)
    for (std::size_t i = 0; i < space.flat_size(); ++i) {
      std::vector<cplx> e(space.flat_size());
      e[i] = 1.0;
      const auto x = unflatten_vector(space, blk, e);
      const auto rhs = b * inner_product(x, x) * star(b);
      if (alg_norm(rhs - frame_energy(p.frame, x)) > tol * (1.0 + alg_norm(rhs))) return false;
    }
  return true;
}

bool is_parseval(const ProblemInstance& p, double tol) {
  const auto& space = p.frame.domain();
  const auto diff = flatten(frame_operator(p.frame) - AdjointableOperator::identity(space));
  for (const auto& blk : diff.blocks)
    if (blk.max_abs() > tol) return false;
  const auto one = AlgebraElement::identity(space.algebra);
  const ProblemInstance unit(p.frame, p.k, FrameBounds{one, one, BoundsMode::Scalar});
  return certify_kgframe(unit, CertifyOptions{.tol = tol}).verdict == Verdict::Certified;
}

ScalarLowerBound pencil_lower_bound(const std::vector<CMatrix>& fs, const std::vector<CMatrix>& fk) {
  if (fs.size() != fk.size()) throw DimensionError("pencil_lower_bound: block count mismatch");
  double s_norm = 0.0;
  double k_norm2 = 0.0;
  double k_min = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < fs.size(); ++b) {
    s_norm = std::max(s_norm, spectral_abs_max(eigvalsh(fs[b])));
    const auto ev = eigvalsh(fk[b]);
    k_norm2 = std::max(k_norm2, spectral_abs_max(ev));
    k_min = std::min(k_min, ev.front());
  }
  if (k_norm2 <= kTauInv) return {std::numeric_limits<double>::infinity(), true, 0};

  // Rounding-level slack. The eps_pos relaxation would bias the result by
  // about 1e-7 relative.
  constexpr double kSlack = 1e-13;
  const auto feasible = [&](double a) {
    const double slack = kSlack * (1.0 + s_norm + a * k_norm2);
    for (std::size_t b = 0; b < fs.size(); ++b) {
      if (eigvalsh(fs[b] - a * fk[b]).front() < -slack) return false;
    }
    return true;
  };

  constexpr int kMaxIterations = 200;
  int iterations = 0;
  double lo = 0.0;
  // lower_bound(K*)^2 is the smallest eigenvalue of KK*. Near-singular KK*
  // starts from the norm ratio and grows.
  double hi = k_min > 1e-8 * k_norm2 ? s_norm / k_min : std::max(1.0, s_norm / k_norm2);
  while (feasible(hi) && iterations < kMaxIterations) {
    lo = hi;
    hi *= 2.0;
    ++iterations;
  }
  // lo is always feasible; returning it keeps the reported constant certifiable.
  while (hi - lo > 1e-12 * (1.0 + lo) && iterations < kMaxIterations) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++iterations;
  }
  return {lo, false, iterations};
}

ScalarLowerBound optimal_scalar_lower_bound(const ProblemInstance& p) {
  return pencil_lower_bound(flatten(frame_operator(p.frame)).blocks, flatten(compose(p.k, adjoint(p.k))).blocks);
}

NormSandwich operator_norm_sandwich(const ProblemInstance& p) {
  if (!p.bounds) throw PreconditionError("operator_norm_sandwich: problem has no bounds");
  NormSandwich out;
  const double a_inv = alg_norm(invert(p.bounds->lower));
  const double k_norm = operator_norm(p.k);
  out.lo = k_norm * k_norm / (a_inv * a_inv);
  out.s_norm = operator_norm(frame_operator(p.frame));
  const double b_norm = alg_norm(p.bounds->upper);
  out.hi = b_norm * b_norm;
  constexpr double kRel = 1e-8;
  out.ok = out.lo <= out.s_norm + kRel * (1.0 + out.s_norm) && out.s_norm <= out.hi + kRel * (1.0 + out.hi);
  return out;
}

FrameFamily transform_frame(const FrameFamily& f, const AdjointableOperator& t) {
  if (!(t.domain() == f.domain()) || !(t.codomain() == f.domain())) {
    throw DimensionError("transform_frame: T must map the frame domain to itself");
  }
  std::vector<AdjointableOperator> ops;
  ops.reserve(f.operators().size());
  for (const auto& op : f.operators()) ops.push_back(compose(op, t));
  return FrameFamily(f.domain(), f.measure(), std::move(ops));
}

double relative_flat_distance(const AdjointableOperator& a, const AdjointableOperator& b) {
  const auto fa = flatten(a).blocks;
  const auto fb = flatten(b).blocks;
  if (fa.size() != fb.size()) throw DimensionError("relative_flat_distance: block mismatch");
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < fa.size(); ++i) {
    diff += std::pow((fa[i] - fb[i]).frobenius_norm(), 2);
    ref += std::pow(fb[i].frobenius_norm(), 2);
  }
  return ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff);
}

TransformOutcome transform_problem(const ProblemInstance& p, const AdjointableOperator& t) {
  TransformOutcome out{.problem = ProblemInstance(transform_frame(p.frame, t), p.k)};
  out.t_norm = operator_norm(t);
  out.t_lower = lower_bound(t);
  out.k_adjoint_lower = lower_bound(adjoint(p.k));
  out.t_invertible = out.t_lower > kTauInv;
  out.k_surjective = out.k_adjoint_lower > kTauInv;
  if (p.bounds && out.t_invertible && out.k_surjective) {
    // (|T^-1|^-1 sqrt(m) A, |T| B)
    out.transferred = FrameBounds{(out.t_lower * out.k_adjoint_lower) * p.bounds->lower,
                                  out.t_norm * p.bounds->upper, p.bounds->mode};
    // the lower side of this pair is measured against <x,x>, not <K*x,K*x>
    out.problem = ProblemInstance(out.problem.frame, AdjointableOperator::identity(p.frame.domain()), out.transferred);
  }
  const auto s = frame_operator(p.frame);
  const auto expected = compose(adjoint(t), compose(s, t));
  out.operator_residual = relative_flat_distance(frame_operator(out.problem.frame), expected);
  return out;
}

TransformOutcome canonical_transform_dual(const ProblemInstance& p) {
  const auto s = frame_operator(p.frame);
  if (lower_bound(s) <= kTauInv) throw NotInvertibleError("canonical_transform_dual: frame operator is singular");
  const auto s_inv = invert_operator(s);
  auto out = transform_problem(p, s_inv);
  out.inverse_residual = relative_flat_distance(frame_operator(out.problem.frame), s_inv);
  return out;
}

FrameBounds gframe_to_kgframe_bounds(const FrameFamily& f, const FrameBounds& gbounds,
                                     const AdjointableOperator& k) {
  if (!(k.domain() == f.domain()) || !(k.codomain() == f.domain())) {
    throw DimensionError("gframe_to_kgframe_bounds: K must act on the frame domain");
  }
  const double k_norm = operator_norm(k);
  if (k_norm <= kTauInv) throw PreconditionError("gframe_to_kgframe_bounds: K is zero");
  return FrameBounds{(1.0 / k_norm) * gbounds.lower, gbounds.upper, gbounds.mode};
}

FrameBounds kgframe_to_gframe_bounds(const ProblemInstance& p) {
  if (!p.bounds) throw PreconditionError("kgframe_to_gframe_bounds: problem has no bounds");
  const double root_m = lower_bound(adjoint(p.k));
  if (root_m <= kTauInv) throw PreconditionError("kgframe_to_gframe_bounds: K is not surjective");
  return FrameBounds{root_m * p.bounds->lower, p.bounds->upper, p.bounds->mode};
}

}  // namespace kgf
