// Acceptance checks: one PASS/FAIL line per criterion. Reference values come
// from the Eigen oracle in oracle.hpp, never from the library under test.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <sstream>
#include <string>

#include "error.hpp"
#include "examples_gen.hpp"
#include "golden.hpp"
#include "oracle.hpp"
#include "random.hpp"

using namespace kgf;
using oracle::Mat;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream note;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) note << "first failure: " << what << "; ";
    ok = ok && cond;
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::vector<Mat> adjoint_blocks(const std::vector<Mat>& b) {
  std::vector<Mat> out;
  for (const auto& m : b) out.push_back(m.adjoint());
  return out;
}

std::vector<Mat> lib_flat(const AdjointableOperator& t) { return oracle::to_eigen(flatten(t).blocks); }

AlgebraElement diagonal_element(const std::vector<double>& v) {
  std::vector<cplx> z(v.begin(), v.end());
  return AlgebraElement::diagonal(z);
}

AlgebraDescriptor pick_algebra(int i) {
  return i % 2 == 0 ? AlgebraDescriptor::diagonal(1 + (i / 2) % 4) : AlgebraDescriptor::matrix(1 + (i / 2) % 3);
}

const std::vector<std::size_t> kDims{1, 2, 4, 8, 16, 32};

// 1: tightness of the discrete example
Check tightness() {
  Check c;
  double worst = 0.0;
  for (auto d : kDims) {
    const auto p = build_paper_example_discrete(d);
    const auto cv = example_bound_vector(d);
    const auto ce = diagonal_element(cv);
    const ProblemInstance g(p.frame, AdjointableOperator::identity(p.frame.domain()),
                            FrameBounds{ce, ce, BoundsMode::AlgebraValued});
    const auto rep = certify_kgframe(g);
    c.require(rep.verdict == Verdict::Certified && rep.method == CertMethod::ExactPSD,
              "d=" + std::to_string(d) + " not certified");
    c.require(is_tight(g), "d=" + std::to_string(d) + " not tight");
    // oracle S block per component must equal c_i^2
    const auto s = oracle::frame_operator(p.frame);
    for (std::size_t i = 0; i < d; ++i) {
      const double r = std::abs(s[i](0, 0) - cv[i] * cv[i]);
      worst = std::max(worst, r);
      c.require(r <= 1e-12, "oracle S component");
    }
    Rng rng(derive_seed(1, d));
    for (int k = 0; k < 20; ++k) {
      const auto x = rng.vector(g.frame.domain());
      const auto diff = frame_energy(g.frame, x) - ce * inner_product(x, x) * star(ce);
      for (std::size_t i = 0; i < d; ++i) {
        worst = std::max(worst, std::abs(diff[i]));
        c.require(std::abs(diff[i]) <= 1e-12, "equality residual");
      }
    }
  }
  c.note << "max equality residual " << sci(worst);
  return c;
}

// 2: K-g certification of the discrete example and the A = 10 mutation
Check kg_certification() {
  Check c;
  for (auto d : kDims) {
    const auto p = build_paper_example_discrete(d);
    const auto rep = certify_kgframe(p);
    c.require(rep.verdict == Verdict::Certified && rep.method == CertMethod::ExactPSD,
              "d=" + std::to_string(d) + " not certified via exact_psd");

    auto bad = p;
    bad.bounds->lower = AlgebraElement::scalar(bad.bounds->lower.descriptor(), 10.0);
    const auto r = certify_kgframe(bad);
    c.require(r.verdict == Verdict::Refuted && r.violated == Inequality::Lower && r.witness.has_value(),
              "d=" + std::to_string(d) + " mutation not refuted");
    if (!r.witness) continue;
    c.require(!check_point(bad, *r.witness).lower_ok(), "witness not confirmed by check_point");
    // independent gap: x^H S x - 100 x^H KK* x on some component must be negative
    const auto s = oracle::frame_operator(p.frame);
    const auto kk = oracle::kk_adjoint(p.k);
    const auto xv = flatten_vector(*r.witness);
    double most_negative = 0.0;
    for (std::size_t b = 0; b < s.size(); ++b) {
      Eigen::VectorXcd x(xv[b].size());
      for (std::size_t i = 0; i < xv[b].size(); ++i) x(i) = xv[b][i];
      most_negative = std::min(most_negative, (x.adjoint() * (s[b] - 100.0 * kk[b]) * x)(0, 0).real());
    }
    c.require(most_negative < -1e-6, "oracle does not confirm the witness");
  }
  c.note << "d in {1..32} certified, A = 10 refuted with confirmed witnesses";
  return c;
}

ProblemInstance sandwich_instance(int i) {
  RandomConfig cfg;
  cfg.seed = derive_seed(300, i);
  if (i < 25) {
    cfg.algebra = AlgebraDescriptor::diagonal(1 + i % 4);
    cfg.rank = 1 + i % 5;
    cfg.atoms = 1 + (i * 3) % 10;
    cfg.bounds = i % 2 ? RandomBounds::AlgebraValued : RandomBounds::Scalar;
  } else {
    cfg.algebra = AlgebraDescriptor::matrix(2);
    cfg.rank = 1 + i % 3;
    cfg.atoms = 1 + (i * 7) % 10;
    cfg.bounds = RandomBounds::Scalar;
  }
  cfg.k = i % 3 == 0 ? KKind::Identity : KKind::Surjective;
  return random_problem(cfg);
}

// 3: norm sandwich on certified random instances
Check sandwich() {
  Check c;
  double worst_herm = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto p = sandwich_instance(i);
    const std::string tag = "instance " + std::to_string(i);
    c.require(certify_kgframe(p).verdict == Verdict::Certified, tag + " not certified");
    const auto s = oracle::frame_operator(p.frame);
    const double s_norm = oracle::spectral_norm(s);
    const double k_norm = oracle::spectral_norm(oracle::flat(p.k));
    const Mat a = oracle::element_matrix(p.bounds->lower);
    const Mat b = oracle::element_matrix(p.bounds->upper);
    const double a_inv = oracle::spectral_norm({Mat(a.inverse())});
    const double lo = k_norm * k_norm / (a_inv * a_inv);
    const double hi = std::pow(oracle::spectral_norm({b}), 2);
    c.require(lo <= s_norm * (1 + 1e-8), tag + " lower sandwich");
    c.require(s_norm <= hi * (1 + 1e-8), tag + " upper sandwich");
    const auto sw = operator_norm_sandwich(p);
    c.require(sw.ok, tag + " library sandwich not ok");
    c.require(std::abs(sw.lo - lo) <= 1e-8 * lo && std::abs(sw.hi - hi) <= 1e-8 * hi &&
                  std::abs(sw.s_norm - s_norm) <= 1e-8 * s_norm,
              tag + " library sandwich disagrees with oracle");
    for (const auto& f : lib_flat(frame_operator(p.frame))) {
      const double herm = (f - f.adjoint()).cwiseAbs().maxCoeff();
      worst_herm = std::max(worst_herm, herm);
      c.require(herm <= 1e-12, tag + " flatten(S) not Hermitian");
      c.require(oracle::eigenvalues(f)(0) >= -kEpsPos, tag + " flatten(S) not PSD");
    }
  }
  c.note << "50 instances, max Hermitian defect " << sci(worst_herm);
  return c;
}

// 4: operator law and bound transfer under invertible T
Check transform_law() {
  Check c;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto alg = pick_algebra(i);
    const std::size_t m = 1 + i % 3;
    const auto f = random_frame(derive_seed(400, i), alg, m, 1 + i % 6);
    const auto t = random_invertible(derive_seed(401, i), f.domain());
    const auto s = oracle::frame_operator(f);
    const auto ft = oracle::flat(t);
    std::vector<Mat> expected;
    for (std::size_t b = 0; b < s.size(); ++b) expected.push_back(ft[b].adjoint() * s[b] * ft[b]);
    const double dist = oracle::relative_distance(oracle::frame_operator(transform_frame(f, t)), expected);
    worst = std::max(worst, dist);
    c.require(dist <= 1e-9, "operator law, instance " + std::to_string(i));
  }
  for (int i = 0; i < 25; ++i) {
    RandomConfig cfg;
    cfg.seed = derive_seed(402, i);
    cfg.algebra = i % 3 == 2 ? AlgebraDescriptor::matrix(2) : AlgebraDescriptor::diagonal(1 + i % 4);
    cfg.rank = 1 + i % 3;
    cfg.atoms = 2 + i % 5;
    cfg.k = KKind::Surjective;
    cfg.bounds = cfg.algebra.kind == AlgebraKind::Diagonal && i % 2 ? RandomBounds::AlgebraValued : RandomBounds::Scalar;
    const auto p = random_problem(cfg);
    const auto t = random_invertible(derive_seed(403, i), p.frame.domain());
    const auto out = transform_problem(p, t);
    const std::string tag = "transfer " + std::to_string(i);
    c.require(out.transferred.has_value(), tag + " no transferred bounds");
    if (!out.transferred) continue;
    const double t_lower = oracle::min_singular(oracle::flat(t));
    const double root_m = oracle::min_singular(adjoint_blocks(oracle::flat(p.k)));
    const double t_norm = oracle::spectral_norm(oracle::flat(t));
    const auto want_a = (t_lower * root_m) * p.bounds->lower;
    const auto want_b = t_norm * p.bounds->upper;
    c.require(approx_equal(out.transferred->lower, want_a, 1e-8) && approx_equal(out.transferred->upper, want_b, 1e-8),
              tag + " transferred bounds disagree with oracle");
    c.require(certify_kgframe(out.problem).verdict == Verdict::Certified, tag + " does not re-certify");
  }
  c.note << "max relative residual " << sci(worst) << ", 25 transfers re-certified";
  return c;
}

// 5: canonical dual has frame operator S^-1
Check dual() {
  Check c;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    RandomConfig cfg;
    cfg.seed = derive_seed(500, i);
    cfg.algebra = pick_algebra(i);
    cfg.rank = 1 + i % 3;
    cfg.atoms = 3 + i % 4;
    const auto p = random_problem(cfg);
    std::vector<Mat> s_inv;
    for (const auto& b : oracle::frame_operator(p.frame)) s_inv.push_back(b.inverse());
    const auto out = canonical_transform_dual(p);
    const double dist = oracle::relative_distance(oracle::frame_operator(out.problem.frame), s_inv);
    worst = std::max(worst, dist);
    c.require(dist <= 1e-9, "instance " + std::to_string(i));
  }
  c.note << "20 instances, max relative residual " << sci(worst);
  return c;
}

ProblemInstance bessel_instance(int i) {
  const auto seed = derive_seed(600, i);
  const auto with_k = [](FrameFamily f, AdjointableOperator k) { return ProblemInstance(std::move(f), std::move(k)); };
  if (i == 49) {
    const auto f = random_frame(seed, AlgebraDescriptor::diagonal(2), 2, 3);
    return with_k(f, AdjointableOperator::zero(f.domain(), f.domain()));
  }
  switch (i % 5) {
    case 0: {
      // one rank-1 atom on a rank-3 module: S is singular, A_opt = 0 for K = I
      const auto f = random_frame(seed, AlgebraDescriptor::diagonal(1 + i % 3), 3, 1, {1});
      return with_k(f, AdjointableOperator::identity(f.domain()));
    }
    case 1: {
      const auto f = random_frame(seed, AlgebraDescriptor::diagonal(1 + i % 4), 2 + i % 3, 2 + i % 5);
      return with_k(f, random_rank_deficient_k(derive_seed(seed, 1), f.domain(), 1));
    }
    case 2: {
      const auto f = random_frame(seed, pick_algebra(i), 1 + i % 3, 2 + i % 4);
      return with_k(f, frame_operator(f));
    }
    case 3: {
      const auto f = random_frame(seed, AlgebraDescriptor::diagonal(1 + i % 4), 1 + i % 4, 1 + i % 6);
      return with_k(f, random_surjective_k(derive_seed(seed, 1), f.domain(), 0.25));
    }
    default: {
      const auto f = random_frame(seed, AlgebraDescriptor::matrix(2), 1 + i % 3, 1 + i % 4);
      if (i % 2) return with_k(f, random_rank_deficient_k(derive_seed(seed, 1), f.domain(), 1));
      return with_k(f, random_surjective_k(derive_seed(seed, 1), f.domain(), 0.25));
    }
  }
}

// 6: A_opt > 0 exactly when scalar certification passes; A_opt vs oracle
Check lower_bound_equivalence() {
  Check c;
  int zero_cases = 0;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    auto p = bessel_instance(i);
    const std::string tag = "instance " + std::to_string(i);
    const auto s = oracle::frame_operator(p.frame);
    const auto kk = oracle::kk_adjoint(p.k);
    const double want = oracle::a_opt(s, kk);
    const auto got = optimal_scalar_lower_bound(p);
    const double s_norm = oracle::spectral_norm(s);
    const double kk_norm = oracle::spectral_norm(kk);
    const bool positive = got.unbounded || got.value > 0.0;

    if (std::isinf(want)) {
      c.require(got.unbounded, tag + " expected unbounded");
    } else {
      const double cutoff = 1e-10 * s_norm / kk_norm;
      if (want > cutoff) {
        const double rel = std::abs(got.value - want) / want;
        worst = std::max(worst, rel);
        c.require(rel <= 1e-8, tag + " A_opt " + sci(got.value) + " vs oracle " + sci(want));
      } else {
        ++zero_cases;
        c.require(got.value <= cutoff, tag + " A_opt should vanish");
      }
    }

    const auto alg = p.frame.domain().algebra;
    const double a = positive ? (got.unbounded ? 1.0 : std::sqrt(0.99 * got.value)) : 0.1 * std::sqrt(s_norm / kk_norm);
    p.bounds = FrameBounds{AlgebraElement::scalar(alg, a), AlgebraElement::scalar(alg, 1.05 * std::sqrt(s_norm)),
                           BoundsMode::Scalar};
    const auto v = certify_kgframe(p).verdict;
    c.require(v == (positive ? Verdict::Certified : Verdict::Refuted), tag + " verdict does not match A_opt sign");
    if (positive && !got.unbounded && got.value > 1e-6 * s_norm / kk_norm) {
      p.bounds->lower = AlgebraElement::scalar(alg, std::sqrt(1.01 * got.value));
      c.require(certify_kgframe(p).verdict == Verdict::Refuted, tag + " A_opt not sharp");
    }
  }
  c.require(zero_cases >= 5, "too few A_opt = 0 cases");
  c.note << "50 instances (" << zero_cases << " with A_opt = 0), max relative error " << sci(worst);
  return c;
}

// 7: operator inequalities on 200 seeded operators
Check operator_inequalities() {
  Check c;
  int surjective = 0;
  for (int i = 0; i < 200; ++i) {
    const auto alg = pick_algebra(i);
    const std::size_t m = 1 + i % 3;
    const std::string tag = "operator " + std::to_string(i);
    const ModuleSpace space(alg, m);

    // <Tx,Tx> <= |T|^2 <x,x> for a rectangular T
    const auto t = random_frame(derive_seed(700, i), alg, m, 1, {static_cast<std::size_t>(1 + (i / 3) % 3)}).operators()[0];
    const double t_norm = operator_norm(t);
    c.require(std::abs(t_norm - oracle::spectral_norm(oracle::flat(t))) <= 1e-10 * std::max(1.0, t_norm),
              tag + " norm disagrees with oracle");
    Rng rng(derive_seed(701, i));
    for (int k = 0; k < 3; ++k) {
      const auto x = rng.vector(space);
      const auto tx = apply(t, x);
      c.require(is_positive((t_norm * t_norm) * inner_product(x, x) - inner_product(tx, tx), kEpsPos),
                tag + " norm domination");
    }

    // surjective iff lower_bound(T*) > 0, against the oracle rank test
    const bool make_surjective = i % 2 == 0;
    const auto u = make_surjective ? random_surjective_k(derive_seed(702, i), space, 0.05 + 0.1 * (i % 5))
                   : (alg.kind == AlgebraKind::Diagonal && m == 1)
                       ? AdjointableOperator::zero(space, space)
                       : random_rank_deficient_k(derive_seed(702, i), space, 1);
    const bool lib = lower_bound(adjoint(u)) > kTauInv;
    const bool orc = oracle::min_singular(adjoint_blocks(oracle::flat(u))) > 1e-10;
    c.require(lib == orc && lib == make_surjective, tag + " surjectivity classification");
    if (!lib) continue;
    ++surjective;

    // spectrum of UU* inside [|(UU*)^-1|^-1, |U|^2]
    const auto uu = compose(u, adjoint(u));
    const double lo = 1.0 / operator_norm(invert_operator(uu));
    const double hi = std::pow(operator_norm(u), 2);
    for (const auto& b : oracle::kk_adjoint(u)) {
      const auto ev = oracle::eigenvalues(b);
      c.require(ev(0) >= lo * (1 - 1e-8) && ev(ev.size() - 1) <= hi * (1 + 1e-8), tag + " spectrum of UU*");
    }
  }
  c.note << "200 operators, " << surjective << " surjective";
  return c;
}

// 8: quadrature of the continuous example
Check quadrature() {
  Check c;
  const std::size_t d = 8;
  const auto s_disc = oracle::frame_operator(build_paper_example_discrete(d).frame);
  const auto cv = example_bound_vector(d);
  std::vector<double> weights;
  for (std::size_t k = 0; k < d; ++k) weights.push_back(0.5 + 0.25 * double(k));
  double worst = 0.0;
  for (std::size_t p : {1u, 2u, 4u, 8u}) {
    ExampleConfig cfg;
    cfg.dim = d;
    cfg.atoms_per_cell = p;
    cfg.cell_weights = weights;
    const double dist = oracle::relative_distance(oracle::frame_operator(build_paper_example_continuous(cfg).frame), s_disc);
    worst = std::max(worst, dist);
    c.require(dist <= 1e-10, "sqrt-cell, atoms_per_cell " + std::to_string(p));

    cfg.normalization = Normalization::PaperLiteral;
    std::vector<Mat> closed;
    for (std::size_t k = 0; k < d; ++k) closed.push_back(Mat::Constant(1, 1, cv[k] * cv[k] / weights[k]));
    const double dl = oracle::relative_distance(oracle::frame_operator(build_paper_example_continuous(cfg).frame), closed);
    worst = std::max(worst, dl);
    c.require(dl <= 1e-10, "paper-literal, atoms_per_cell " + std::to_string(p));
  }
  c.note << "max relative deviation " << sci(worst);
  return c;
}

// 9: golden corpus through the CLI
Check cli_contract() {
  Check c;
  const std::filesystem::path root = KGF_GOLDEN_DIR;
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(root / "inputs")) files += e.path().extension() == ".json";
  c.require(files >= 10, "fewer than 10 problem files");
  const auto results = golden::run_corpus(KGF_CLI_PATH, root);
  std::size_t passed = 0;
  for (const auto& r : results) {
    c.require(r.ok, r.name + ": " + r.detail);
    passed += r.ok;
  }
  c.require(!results.empty(), "empty manifest");
  c.note << passed << "/" << results.size() << " cases over " << files << " input files";
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
      {"tight discrete example", tightness},
      {"K-g certification of the discrete example", kg_certification},
      {"norm sandwich", sandwich},
      {"operator law under T", transform_law},
      {"canonical dual", dual},
      {"optimal lower bound equivalence", lower_bound_equivalence},
      {"operator inequalities", operator_inequalities},
      {"quadrature soundness", quadrature},
      {"CLI golden corpus", cli_contract},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.ok = false;
      c.note << "exception: " << e.what();
    }
    std::printf("C%zu %s %s: %s\n", i + 1, c.ok ? "PASS" : "FAIL", criteria[i].first.c_str(), c.note.str().c_str());
    failed += c.ok ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
