#include <stdio.h>
#include <string.h>

#include "critorbit.h"

#define CHECK(cond)                                             \
  do {                                                          \
    if (!(cond)) {                                              \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      return 1;                                                 \
    }                                                           \
  } while (0)

int main(void) {
  CritorbitPoly *f = NULL;
  CHECK(critorbit_poly_parse("x3+5", &f) == CRITORBIT_STATUS_OK);
  size_t deg = 0;
  CHECK(critorbit_poly_degree(f, &deg) == CRITORBIT_STATUS_OK && deg == 3);

  char *disc = NULL;
  CHECK(critorbit_poly_discriminant(f, &disc) == CRITORBIT_STATUS_OK);
  CHECK(strcmp(disc, "-675/1") == 0);
  critorbit_string_free(disc);

  char *report = NULL;
  CHECK(critorbit_density_scan_json(f, 100, 1, 3, &report) == CRITORBIT_STATUS_OK);
  CHECK(strstr(report, "\"primes_scanned\":25") != NULL);
  critorbit_string_free(report);
  critorbit_poly_free(f);

  CritorbitFppTable *t = NULL;
  CHECK(critorbit_fpp_table_new(2, 3, &t) == CRITORBIT_STATUS_OK);
  double lo = 0, hi = 0;
  bool exact = false;
  CHECK(critorbit_fpp_table_value(t, 2, &lo, &hi, &exact) == CRITORBIT_STATUS_OK);
  CHECK(exact && lo == 0.375 && hi == 0.375);
  bool holds = false;
  CHECK(critorbit_fpp_table_check_bound(t, &holds) == CRITORBIT_STATUS_OK && holds);
  critorbit_fpp_table_free(t);

  CHECK(critorbit_fpp_table_new(13, 1, &t) == CRITORBIT_STATUS_INVALID_ARGUMENT);
  CHECK(critorbit_last_error() != NULL);

  puts("ok");
  return 0;
}
