// Copyright 2026 The uadmhd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* Exercises the C API from plain C: handles, status codes, a scoring run. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "uadmhd/uadmhd.h"

static int failures = 0;

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

/* Returns the healthy image it was given, ignoring the noisy input. */
static int copy_reconstructor(void* user_data, const double* xt, size_t height, size_t width,
                              int t, uint64_t seed, double* out) {
  const double* base = (const double*)user_data;
  size_t k;
  (void)xt;
  (void)t;
  for (k = 0; k < height * width; ++k) out[k] = base[k] + 1e-3 * (double)((seed >> (k % 32)) & 3);
  return 0;
}

static int failing_reconstructor(void* user_data, const double* xt, size_t height,
                                 size_t width, int t, uint64_t seed, double* out) {
  (void)user_data;
  (void)xt;
  (void)height;
  (void)width;
  (void)t;
  (void)seed;
  (void)out;
  return 7;
}

int main(void) {
  double pixels[16];
  size_t k;
  uad_image* img = NULL;
  uad_image* other = NULL;
  uad_image* map = NULL;
  uad_schedule* sched = NULL;
  uad_reconstructor* rec = NULL;
  uad_stack* stack = NULL;
  uad_scored_case* scored = NULL;
  uad_scoring_config cfg;
  double diag = 0.0, full = 0.0, value = 0.0;

  CHECK(strlen(uad_version()) > 0);
  CHECK(strcmp(uad_status_string(UAD_OK), "ok") == 0);

  for (k = 0; k < 16; ++k) pixels[k] = 0.25 + 0.03 * (double)k;
  CHECK(uad_image_create(4, 4, pixels, &img) == UAD_OK);
  CHECK(uad_image_height(img) == 4 && uad_image_width(img) == 4);
  CHECK(uad_image_data(img)[5] == pixels[5]);

  CHECK(uad_image_create(4, 4, NULL, NULL) == UAD_ERR_NULL_ARGUMENT);
  CHECK(strlen(uad_last_error()) > 0);
  CHECK(uad_image_create(0, 4, NULL, &other) == UAD_ERR_DIMENSION);
  CHECK(other == NULL);

  CHECK(uad_schedule_linear(1000, 1e-4, 0.02, &sched) == UAD_OK);
  CHECK(uad_schedule_alpha_bar(sched, 0, &value) == UAD_OK && value == 1.0);
  CHECK(uad_schedule_alpha_bar(sched, 1001, &value) == UAD_ERR_PARAMETER);

  CHECK(uad_reconstructor_from_callback(copy_reconstructor, pixels, &rec) == UAD_OK);
  CHECK(uad_sample_stack(rec, img, 500, 5, sched, UAD_NOISE_SIMPLEX, 3, &stack) == UAD_OK);
  CHECK(uad_stack_size(stack) == 5);

  uad_scoring_config_default(&cfg);
  CHECK(cfg.n_reconstructions == 10 && cfg.t_test == 500 && cfg.lambda == 1e-5);
  CHECK(uad_score_case(img, stack, &cfg, &scored) == UAD_OK);
  CHECK(uad_scored_case_scalars(scored, &diag, &full) == UAD_OK);
  CHECK(isfinite(diag) && isfinite(full) && full > 0.0);
  CHECK(uad_scored_case_map(scored, UAD_MAP_S_SMHD, &map) == UAD_OK);
  CHECK(uad_image_height(map) == 4);
  uad_image_free(map);
  map = NULL;

  CHECK(uad_mhd_map(stack, img, 0.0, 1, &map, NULL) == UAD_ERR_PARAMETER);
  CHECK(map == NULL);

  uad_reconstructor_free(rec);
  rec = NULL;
  uad_stack_free(stack);
  stack = NULL;
  CHECK(uad_reconstructor_from_callback(failing_reconstructor, NULL, &rec) == UAD_OK);
  CHECK(uad_sample_stack(rec, img, 10, 3, sched, UAD_NOISE_GAUSSIAN, 1, &stack) ==
        UAD_ERR_RECONSTRUCTION);
  CHECK(stack == NULL);

  /* Freeing NULL handles is a no-op. */
  uad_image_free(NULL);
  uad_stack_free(NULL);
  uad_scored_case_free(scored);
  uad_reconstructor_free(rec);
  uad_schedule_free(sched);
  uad_image_free(img);

  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return EXIT_FAILURE;
  }
  printf("C API smoke test passed\n");
  return EXIT_SUCCESS;
}
