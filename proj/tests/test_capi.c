/* Exercises the C interface from a C translation unit. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "ctgen/ctgen.h"

static int failures = 0;

#define EXPECT(cond)                                                \
  do {                                                              \
    if (!(cond)) {                                                  \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                   \
    }                                                               \
  } while (0)

static void test_count(void) {
  const int64_t two[] = {2, 2};
  char* s = NULL;
  EXPECT(ctg_count(two, 2, two, 2, 4, &s) == CTG_OK);
  EXPECT(s && strcmp(s, "2") == 0);
  ctg_string_free(s);
  const int64_t ones[] = {1, 1, 1, 1};
  EXPECT(ctg_count_multigraphs(ones, 4, 0, &s) == CTG_OK);
  EXPECT(s && strcmp(s, "3") == 0);
  ctg_string_free(s);
}

static void test_errors(void) {
  const int64_t r[] = {2, 1}, c[] = {2};
  ctg_sampler* sp = NULL;
  EXPECT(ctg_table_sampler_create(r, 2, c, 1, NULL, &sp) == CTG_UNEQUAL_SUMS);
  EXPECT(sp == NULL);
  EXPECT(strlen(ctg_last_error()) > 0);
  EXPECT(strcmp(ctg_status_string(CTG_UNEQUAL_SUMS), "") != 0);
  const int64_t odd[] = {2, 1};
  EXPECT(ctg_multigraph_sampler_create(odd, 2, NULL, &sp) == CTG_ODD_SUM);
  const int64_t bad[] = {3, 1};
  EXPECT(ctg_multigraph_sampler_create(bad, 2, NULL, &sp) == CTG_NOT_GRAPHICAL);
  EXPECT(ctg_rng_create(1, NULL) == CTG_INVALID_ARGUMENT);
  ctg_config cfg;
  ctg_config_init(&cfg);
  cfg.eps_min = "3/2";
  const int64_t two[] = {2, 2};
  EXPECT(ctg_table_sampler_create(two, 2, two, 2, &cfg, &sp) == CTG_INVALID_ARGUMENT);
}

static void test_sampling(void) {
  const int64_t r[] = {2, 0, 1}, c[] = {1, 2};
  ctg_sampler* sp = NULL;
  ctg_rng* rng = NULL;
  EXPECT(ctg_table_sampler_create(r, 3, c, 2, NULL, &sp) == CTG_OK);
  EXPECT(ctg_rng_create(42, &rng) == CTG_OK);
  size_t rows = 0, cols = 0;
  EXPECT(ctg_sampler_shape(sp, &rows, &cols) == CTG_OK);
  EXPECT(rows == 3 && cols == 2);
  int64_t cells[6];
  for (int k = 0; k < 50; ++k) {
    EXPECT(ctg_sampler_sample(sp, rng, cells, 6) == CTG_OK);
    EXPECT(cells[0] + cells[1] == 2);
    EXPECT(cells[2] == 0 && cells[3] == 0);
    EXPECT(cells[4] + cells[5] == 1);
    EXPECT(cells[0] + cells[2] + cells[4] == 1);
  }
  EXPECT(ctg_sampler_sample(sp, rng, cells, 5) == CTG_INVALID_ARGUMENT);
  char* json = NULL;
  EXPECT(ctg_sampler_stats_json(sp, &json) == CTG_OK);
  EXPECT(json && strstr(json, "\"samples\":50") != NULL);
  ctg_string_free(json);

  char* text = NULL;
  EXPECT(ctg_format_samples(0, 0, cells, 1, 3, 2, &text) == CTG_OK);
  EXPECT(text && strchr(text, ',') != NULL);
  ctg_string_free(text);
  ctg_sampler_destroy(sp);
  ctg_rng_destroy(rng);
}

static void test_determinism(void) {
  const int64_t d[] = {2, 2, 2, 2, 2, 2};
  ctg_config cfg;
  ctg_config_init(&cfg);
  cfg.force_t0 = 5;
  int64_t a[36], b[36];
  for (int pass = 0; pass < 2; ++pass) {
    ctg_sampler* sp = NULL;
    ctg_rng* rng = NULL;
    EXPECT(ctg_multigraph_sampler_create(d, 6, &cfg, &sp) == CTG_OK);
    EXPECT(ctg_rng_create(ctg_derive_seed(7, 1), &rng) == CTG_OK);
    for (int k = 0; k < 20; ++k) EXPECT(ctg_sampler_sample(sp, rng, pass ? b : a, 36) == CTG_OK);
    ctg_sampler_destroy(sp);
    ctg_rng_destroy(rng);
  }
  EXPECT(memcmp(a, b, sizeof a) == 0);
  for (int i = 0; i < 6; ++i) {
    int64_t s = 0;
    for (int j = 0; j < 6; ++j) s += a[6 * i + j];
    EXPECT(s == 2);
    EXPECT(a[7 * i] == 0);
  }
  EXPECT(ctg_derive_seed(7, 0) != ctg_derive_seed(7, 1));
}

static void test_verify(void) {
  char* report = NULL;
  char* lines = NULL;
  int passed = 0;
  EXPECT(ctg_verify(1, NULL, 1, &report, &lines, &passed) == CTG_OK);
  EXPECT(passed == 1);
  EXPECT(lines && strncmp(lines, "[PASS] 1 ", 9) == 0);
  ctg_string_free(report);
  ctg_string_free(lines);
}

int main(void) {
  test_count();
  test_errors();
  test_sampling();
  test_determinism();
  test_verify();
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  puts("all C API checks passed");
  return 0;
}
