#define KGF_BUILD 1
#include "kgf/kgf.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "error.hpp"
#include "examples_gen.hpp"
#include "frames.hpp"
#include "serialize.hpp"

struct kgf_problem {
  kgf::ProblemInstance p;
};

struct kgf_report {
  kgf::CertificationReport r;
};

struct kgf_operator {
  kgf::AdjointableOperator t;
};

namespace {

thread_local std::string last_error;

kgf_status fail(kgf_status code, const std::string& msg) {
  last_error = msg;
  return code;
}

// Runs f, translating exceptions into status codes.
template <typename F>
kgf_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return KGF_OK;
  } catch (const kgf::ParseError& e) {
    return fail(KGF_ERR_PARSE, e.what());
  } catch (const kgf::DimensionError& e) {
    return fail(KGF_ERR_DIMENSION, e.what());
  } catch (const kgf::ConfigError& e) {
    return fail(KGF_ERR_CONFIG, e.what());
  } catch (const kgf::StructureError& e) {
    return fail(KGF_ERR_STRUCTURE, e.what());
  } catch (const kgf::NotInvertibleError& e) {
    return fail(KGF_ERR_NOT_INVERTIBLE, e.what());
  } catch (const kgf::NotPositiveError& e) {
    return fail(KGF_ERR_NOT_POSITIVE, e.what());
  } catch (const kgf::PreconditionError& e) {
    return fail(KGF_ERR_PRECONDITION, e.what());
  } catch (const std::exception& e) {
    return fail(KGF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(KGF_ERR_INTERNAL, "unknown exception");
  }
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void fill_summary(const kgf::TransformOutcome& o, kgf_transform_summary* s) {
  if (s == nullptr) return;
  s->t_invertible = o.t_invertible ? 1 : 0;
  s->k_surjective = o.k_surjective ? 1 : 0;
  s->t_norm = o.t_norm;
  s->t_lower = o.t_lower;
  s->k_adjoint_lower = o.k_adjoint_lower;
  s->has_transferred = o.transferred ? 1 : 0;
  s->operator_residual = o.operator_residual;
  s->has_inverse_residual = o.inverse_residual ? 1 : 0;
  s->inverse_residual = o.inverse_residual.value_or(0.0);
}

}  // namespace

#define KGF_REQUIRE(cond, what) \
  if (!(cond)) return fail(KGF_ERR_INVALID_ARGUMENT, what)

extern "C" {

const char* kgf_version(void) { return KGF_VERSION_STRING; }

const char* kgf_last_error(void) { return last_error.c_str(); }

const char* kgf_status_name(kgf_status status) {
  switch (status) {
    case KGF_OK: return "ok";
    case KGF_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case KGF_ERR_PARSE: return "parse_error";
    case KGF_ERR_DIMENSION: return "dimension_error";
    case KGF_ERR_CONFIG: return "config_error";
    case KGF_ERR_STRUCTURE: return "structure_error";
    case KGF_ERR_NOT_INVERTIBLE: return "not_invertible";
    case KGF_ERR_NOT_POSITIVE: return "not_positive";
    case KGF_ERR_PRECONDITION: return "precondition_error";
    case KGF_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

void kgf_string_free(char* s) { std::free(s); }

kgf_status kgf_problem_parse(const char* text, size_t len, kgf_problem** out) {
  KGF_REQUIRE(out != nullptr, "kgf_problem_parse: out is NULL");
  KGF_REQUIRE(text != nullptr || len == 0, "kgf_problem_parse: text is NULL");
  *out = nullptr;
  return guarded([&] { *out = new kgf_problem{kgf::parse_problem(std::string_view(text ? text : "", len))}; });
}

kgf_status kgf_problem_example_discrete(size_t dim, kgf_problem** out) {
  KGF_REQUIRE(out != nullptr, "kgf_problem_example_discrete: out is NULL");
  *out = nullptr;
  return guarded([&] { *out = new kgf_problem{kgf::build_paper_example_discrete(dim)}; });
}

kgf_status kgf_problem_example_continuous(const kgf_example_config* cfg, kgf_problem** out) {
  KGF_REQUIRE(cfg != nullptr && out != nullptr, "kgf_problem_example_continuous: NULL argument");
  *out = nullptr;
  return guarded([&] {
    kgf::ExampleConfig c;
    c.dim = cfg->dim;
    c.atoms_per_cell = cfg->atoms_per_cell;
    if (cfg->cell_weights != nullptr) c.cell_weights.assign(cfg->cell_weights, cfg->cell_weights + cfg->n_cell_weights);
    c.normalization = cfg->paper_literal ? kgf::Normalization::PaperLiteral : kgf::Normalization::SqrtCell;
    *out = new kgf_problem{kgf::build_paper_example_continuous(c)};
  });
}

void kgf_random_config_default(kgf_random_config* cfg) {
  if (cfg == nullptr) return;
  cfg->seed = 0;
  cfg->algebra = KGF_ALGEBRA_DIAGONAL;
  cfg->algebra_dim = 2;
  cfg->module_rank = 2;
  cfg->atoms = 4;
  cfg->k = KGF_K_SURJECTIVE;
  cfg->bounds = KGF_BOUNDS_SCALAR;
}

kgf_status kgf_problem_random(const kgf_random_config* cfg, kgf_problem** out) {
  KGF_REQUIRE(cfg != nullptr && out != nullptr, "kgf_problem_random: NULL argument");
  *out = nullptr;
  return guarded([&] {
    kgf::RandomConfig c;
    c.seed = cfg->seed;
    c.algebra = cfg->algebra == KGF_ALGEBRA_MATRIX ? kgf::AlgebraDescriptor::matrix(cfg->algebra_dim)
                                                   : kgf::AlgebraDescriptor::diagonal(cfg->algebra_dim);
    c.rank = cfg->module_rank;
    c.atoms = cfg->atoms;
    switch (cfg->k) {
      case KGF_K_IDENTITY: c.k = kgf::KKind::Identity; break;
      case KGF_K_SURJECTIVE: c.k = kgf::KKind::Surjective; break;
      case KGF_K_RANK_DEFICIENT: c.k = kgf::KKind::RankDeficient; break;
      case KGF_K_ZERO: c.k = kgf::KKind::Zero; break;
      default: throw kgf::ConfigError("kgf_problem_random: unknown K kind");
    }
    switch (cfg->bounds) {
      case KGF_BOUNDS_NONE: c.bounds = kgf::RandomBounds::None; break;
      case KGF_BOUNDS_SCALAR: c.bounds = kgf::RandomBounds::Scalar; break;
      case KGF_BOUNDS_ALGEBRA: c.bounds = kgf::RandomBounds::AlgebraValued; break;
      default: throw kgf::ConfigError("kgf_problem_random: unknown bounds kind");
    }
    *out = new kgf_problem{kgf::random_problem(c)};
  });
}

kgf_status kgf_problem_to_json(const kgf_problem* p, char** out) {
  KGF_REQUIRE(p != nullptr && out != nullptr, "kgf_problem_to_json: NULL argument");
  *out = nullptr;
  return guarded([&] { *out = dup_string(kgf::to_json(p->p).dump()); });
}

int kgf_problem_has_bounds(const kgf_problem* p) { return p != nullptr && p->p.bounds ? 1 : 0; }

void kgf_problem_free(kgf_problem* p) { delete p; }

void kgf_certify_options_default(kgf_certify_options* opts) {
  if (opts == nullptr) return;
  const kgf::CertifyOptions d;
  opts->mode = KGF_MODE_EXACT;
  opts->samples = d.samples;
  opts->seed = d.seed;
  opts->tol = d.tol;
}

kgf_status kgf_certify(const kgf_problem* p, const kgf_certify_options* opts, kgf_report** out) {
  KGF_REQUIRE(p != nullptr && out != nullptr, "kgf_certify: NULL argument");
  *out = nullptr;
  return guarded([&] {
    kgf::CertifyOptions o;
    if (opts != nullptr) {
      o.mode = opts->mode == KGF_MODE_SAMPLED ? kgf::CertifyMode::Sampled : kgf::CertifyMode::Exact;
      o.samples = opts->samples;
      o.seed = opts->seed;
      o.tol = opts->tol;
    }
    *out = new kgf_report{kgf::certify_kgframe(p->p, o)};
  });
}

kgf_verdict kgf_report_verdict(const kgf_report* r) {
  if (r == nullptr) return KGF_INCONCLUSIVE;
  switch (r->r.verdict) {
    case kgf::Verdict::Certified: return KGF_CERTIFIED;
    case kgf::Verdict::Refuted: return KGF_REFUTED;
    case kgf::Verdict::Inconclusive: break;
  }
  return KGF_INCONCLUSIVE;
}

kgf_status kgf_report_to_json(const kgf_report* r, char** out) {
  KGF_REQUIRE(r != nullptr && out != nullptr, "kgf_report_to_json: NULL argument");
  *out = nullptr;
  return guarded([&] { *out = dup_string(kgf::to_json(r->r).dump()); });
}

void kgf_report_free(kgf_report* r) { delete r; }

kgf_status kgf_bounds(const kgf_problem* p, kgf_bounds_summary* out) {
  KGF_REQUIRE(p != nullptr && out != nullptr, "kgf_bounds: NULL argument");
  return guarded([&] {
    kgf_bounds_summary s{};
    const auto lb = kgf::optimal_scalar_lower_bound(p->p);
    s.a_opt = lb.unbounded ? 0.0 : lb.value;
    s.a_opt_unbounded = lb.unbounded ? 1 : 0;
    s.iterations = lb.iterations;
    s.s_norm = kgf::operator_norm(kgf::frame_operator(p->p.frame));
    if (p->p.bounds) {
      const auto sw = kgf::operator_norm_sandwich(p->p);
      s.has_sandwich = 1;
      s.sandwich_lo = sw.lo;
      s.sandwich_hi = sw.hi;
      s.sandwich_ok = sw.ok ? 1 : 0;
    }
    *out = s;
  });
}

kgf_status kgf_frame_operator_json(const kgf_problem* p, char** out) {
  KGF_REQUIRE(p != nullptr && out != nullptr, "kgf_frame_operator_json: NULL argument");
  *out = nullptr;
  return guarded([&] { *out = dup_string(kgf::to_json(kgf::frame_operator(p->p.frame)).dump()); });
}

kgf_status kgf_operator_parse(const kgf_problem* context, const char* text, size_t len, kgf_operator** out) {
  KGF_REQUIRE(context != nullptr && out != nullptr, "kgf_operator_parse: NULL argument");
  KGF_REQUIRE(text != nullptr || len == 0, "kgf_operator_parse: text is NULL");
  *out = nullptr;
  return guarded([&] {
    *out = new kgf_operator{kgf::parse_operator(std::string_view(text ? text : "", len), context->p.frame.domain())};
  });
}

void kgf_operator_free(kgf_operator* op) { delete op; }

kgf_status kgf_transform(const kgf_problem* p, const kgf_operator* t, kgf_problem** out,
                         kgf_transform_summary* summary) {
  KGF_REQUIRE(p != nullptr && t != nullptr && out != nullptr, "kgf_transform: NULL argument");
  *out = nullptr;
  return guarded([&] {
    auto outcome = kgf::transform_problem(p->p, t->t);
    fill_summary(outcome, summary);
    *out = new kgf_problem{std::move(outcome.problem)};
  });
}

kgf_status kgf_dual(const kgf_problem* p, kgf_problem** out, kgf_transform_summary* summary) {
  KGF_REQUIRE(p != nullptr && out != nullptr, "kgf_dual: NULL argument");
  *out = nullptr;
  return guarded([&] {
    auto outcome = kgf::canonical_transform_dual(p->p);
    fill_summary(outcome, summary);
    *out = new kgf_problem{std::move(outcome.problem)};
  });
}

}  // extern "C"
