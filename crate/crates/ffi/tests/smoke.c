#include <math.h>
#include <stdio.h>
#include <string.h>

#include "spectra_lab.h"

#define CHECK(cond)                                         \
  do {                                                      \
    if (!(cond)) {                                          \
      fprintf(stderr, "line %d: %s\n", __LINE__, #cond);    \
      return 1;                                             \
    }                                                       \
  } while (0)

int main(void) {
  SlCantorSet *k = NULL;
  double lo = 0, hi = 0, d = log(2.0) / log(3.0);
  bool ok = false;
  char *json = NULL;

  CHECK(sl_cantor_set_new("midthird", &k) == SL_STATUS_OK);
  CHECK(sl_cantor_set_dimension(k, 1e-9, &lo, &hi) == SL_STATUS_OK);
  CHECK(lo <= d && d <= hi);
  CHECK(sl_sumset_certify(k, k, 0.0, 2.0, 14, &ok) == SL_STATUS_OK && ok);
  sl_cantor_set_free(k);

  CHECK(sl_cantor_set_new("nope", &k) == SL_STATUS_INVALID_ARGUMENT);
  CHECK(k == NULL && sl_last_error() != NULL);

  SlSubshift *s = NULL, *t = NULL;
  uint64_t n = 0;
  CHECK(sl_subshift_full(3, &s) == SL_STATUS_OK);
  CHECK(sl_subshift_fixed_points(s, 4, &n) == SL_STATUS_OK && n == 81);
  CHECK(sl_subshift_avoid_word(s, "00", &t) == SL_STATUS_OK);
  CHECK(sl_subshift_to_json(t, &json) == SL_STATUS_OK && json != NULL);
  sl_string_free(json);
  sl_subshift_free(t);
  sl_subshift_free(s);

  SlReport *r = NULL;
  bool cert_ok = false, certified = false;
  CHECK(sl_run("{\"command\":\"thickness\",\"K\":\"midthird\"}", &r) == SL_STATUS_OK);
  CHECK(sl_report_status(r, &cert_ok, &certified) == SL_STATUS_OK);
  CHECK(cert_ok && certified);
  CHECK(sl_report_payload(r, &json) == SL_STATUS_OK);
  CHECK(strstr(json, "\"provenance\"") == NULL);
  sl_string_free(json);
  sl_report_free(r);

  printf("%s ok\n", sl_version());
  return 0;
}
