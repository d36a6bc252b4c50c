/* Exercises the public header from plain C. */
#include <stdio.h>
#include <string.h>

#include "kgf/kgf.h"

static int check(int ok, const char* what) {
  if (!ok) fprintf(stderr, "capi_smoke: %s failed: %s\n", what, kgf_last_error());
  return ok ? 0 : 1;
}

int main(void) {
  int failures = 0;
  kgf_problem* p = NULL;
  kgf_report* r = NULL;
  kgf_certify_options opts;
  char* text = NULL;
  kgf_problem* q = NULL;

  failures += check(strcmp(kgf_version(), KGF_VERSION_STRING) == 0, "version");
  failures += check(kgf_problem_example_discrete(4, &p) == KGF_OK, "example");
  if (p == NULL) return 1;
  kgf_certify_options_default(&opts);
  failures += check(kgf_certify(p, &opts, &r) == KGF_OK, "certify");
  failures += check(r != NULL && kgf_report_verdict(r) == KGF_CERTIFIED, "verdict");
  kgf_report_free(r);

  failures += check(kgf_problem_to_json(p, &text) == KGF_OK, "to_json");
  if (text != NULL) {
    failures += check(kgf_problem_parse(text, strlen(text), &q) == KGF_OK, "parse");
    kgf_string_free(text);
  }
  kgf_problem_free(q);
  kgf_problem_free(p);

  failures += check(kgf_problem_parse("", 0, &p) == KGF_ERR_PARSE, "empty parse");
  failures += check(p == NULL, "null on failure");
  if (failures == 0) printf("capi_smoke: ok\n");
  return failures == 0 ? 0 : 1;
}
