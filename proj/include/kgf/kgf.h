/* C interface to the kgf library: continuous *-K-g-frames over finite
 * C*-algebras. All handles are opaque and owned by the caller; strings
 * returned through char** must be released with kgf_string_free. */
#ifndef KGF_KGF_H
#define KGF_KGF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(KGF_BUILD)
#define KGF_API __declspec(dllexport)
#else
#define KGF_API __declspec(dllimport)
#endif
#else
#define KGF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define KGF_VERSION_STRING "0.1.0"

/* Default tolerances: positivity slack, algebra equality, singularity cutoff. */
#define KGF_EPS_POS 1e-9
#define KGF_TAU_ALG 1e-10
#define KGF_TAU_INV 1e-12

typedef enum kgf_status {
  KGF_OK = 0,
  KGF_ERR_INVALID_ARGUMENT = 1,
  KGF_ERR_PARSE = 2,
  KGF_ERR_DIMENSION = 3,
  KGF_ERR_CONFIG = 4,
  KGF_ERR_STRUCTURE = 5,
  KGF_ERR_NOT_INVERTIBLE = 6,
  KGF_ERR_NOT_POSITIVE = 7,
  KGF_ERR_PRECONDITION = 8,
  KGF_ERR_INTERNAL = 9
} kgf_status;

typedef enum kgf_verdict { KGF_CERTIFIED = 0, KGF_REFUTED = 1, KGF_INCONCLUSIVE = 2 } kgf_verdict;

typedef enum kgf_mode { KGF_MODE_EXACT = 0, KGF_MODE_SAMPLED = 1 } kgf_mode;

typedef struct kgf_problem kgf_problem;
typedef struct kgf_report kgf_report;
typedef struct kgf_operator kgf_operator;

KGF_API const char* kgf_version(void);
/* Message of the last failed call on this thread ("" if none). */
KGF_API const char* kgf_last_error(void);
KGF_API const char* kgf_status_name(kgf_status status);
KGF_API void kgf_string_free(char* s);

/* Problems */
KGF_API kgf_status kgf_problem_parse(const char* text, size_t len, kgf_problem** out);
KGF_API kgf_status kgf_problem_example_discrete(size_t dim, kgf_problem** out);

typedef struct kgf_example_config {
  size_t dim;
  size_t atoms_per_cell;
  const double* cell_weights; /* NULL means all cells weigh 1 */
  size_t n_cell_weights;      /* 1 (broadcast) or dim */
  int paper_literal;          /* 0: 1/sqrt(mu_k) scaling, 1: 1/mu_k */
} kgf_example_config;

KGF_API kgf_status kgf_problem_example_continuous(const kgf_example_config* cfg, kgf_problem** out);

typedef enum kgf_algebra_kind { KGF_ALGEBRA_DIAGONAL = 0, KGF_ALGEBRA_MATRIX = 1 } kgf_algebra_kind;
typedef enum kgf_k_kind { KGF_K_IDENTITY = 0, KGF_K_SURJECTIVE = 1, KGF_K_RANK_DEFICIENT = 2, KGF_K_ZERO = 3 } kgf_k_kind;
typedef enum kgf_bounds_kind { KGF_BOUNDS_NONE = 0, KGF_BOUNDS_SCALAR = 1, KGF_BOUNDS_ALGEBRA = 2 } kgf_bounds_kind;

typedef struct kgf_random_config {
  uint64_t seed;
  kgf_algebra_kind algebra;
  size_t algebra_dim;
  size_t module_rank;
  size_t atoms;
  kgf_k_kind k;
  kgf_bounds_kind bounds;
} kgf_random_config;

KGF_API void kgf_random_config_default(kgf_random_config* cfg);
KGF_API kgf_status kgf_problem_random(const kgf_random_config* cfg, kgf_problem** out);
KGF_API kgf_status kgf_problem_to_json(const kgf_problem* p, char** out);
KGF_API int kgf_problem_has_bounds(const kgf_problem* p);
KGF_API void kgf_problem_free(kgf_problem* p);

/* Certification */
typedef struct kgf_certify_options {
  kgf_mode mode;
  size_t samples;
  uint64_t seed;
  double tol;
} kgf_certify_options;

KGF_API void kgf_certify_options_default(kgf_certify_options* opts);
KGF_API kgf_status kgf_certify(const kgf_problem* p, const kgf_certify_options* opts, kgf_report** out);
KGF_API kgf_verdict kgf_report_verdict(const kgf_report* r);
KGF_API kgf_status kgf_report_to_json(const kgf_report* r, char** out);
KGF_API void kgf_report_free(kgf_report* r);

/* Bounds and frame operator */
typedef struct kgf_bounds_summary {
  double a_opt;
  int a_opt_unbounded;
  int iterations;
  double s_norm;
  int has_sandwich; /* 0 when the problem carries no bounds */
  double sandwich_lo;
  double sandwich_hi;
  int sandwich_ok;
} kgf_bounds_summary;

KGF_API kgf_status kgf_bounds(const kgf_problem* p, kgf_bounds_summary* out);
KGF_API kgf_status kgf_frame_operator_json(const kgf_problem* p, char** out);

/* Transforms */
KGF_API kgf_status kgf_operator_parse(const kgf_problem* context, const char* text, size_t len, kgf_operator** out);
KGF_API void kgf_operator_free(kgf_operator* op);

typedef struct kgf_transform_summary {
  int t_invertible;
  int k_surjective;
  double t_norm;
  double t_lower;
  double k_adjoint_lower;
  int has_transferred; /* transferred bounds are attached to the new problem */
  double operator_residual;
  int has_inverse_residual;
  double inverse_residual;
} kgf_transform_summary;

KGF_API kgf_status kgf_transform(const kgf_problem* p, const kgf_operator* t, kgf_problem** out,
                                 kgf_transform_summary* summary);
KGF_API kgf_status kgf_dual(const kgf_problem* p, kgf_problem** out, kgf_transform_summary* summary);

#ifdef __cplusplus
}
#endif

#endif
