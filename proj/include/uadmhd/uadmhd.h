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

/*
 * uadmhd C API.
 *
 * Every object is an opaque handle created by a `*_create`/producer call and
 * released with the matching `*_free`. Calls return a uad_status; on failure
 * uad_last_error() holds a message for the calling thread and output handles
 * are left untouched. Images are row-major doubles, masks are 0/1 bytes.
 * All functions are safe to call concurrently on distinct or shared const
 * handles.
 */
#ifndef UADMHD_UADMHD_H_
#define UADMHD_UADMHD_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(UADMHD_BUILDING_LIBRARY)
#define UADMHD_API __declspec(dllexport)
#else
#define UADMHD_API __declspec(dllimport)
#endif
#else
#define UADMHD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum uad_status {
  UAD_OK = 0,
  UAD_ERR_NULL_ARGUMENT = 1,
  UAD_ERR_DIMENSION = 2,
  UAD_ERR_PARAMETER = 3,
  UAD_ERR_NUMERIC = 4,
  UAD_ERR_INSUFFICIENT_SAMPLES = 5,
  UAD_ERR_UNDEFINED_METRIC = 6,
  UAD_ERR_FORMAT = 7,
  UAD_ERR_IO = 8,
  UAD_ERR_GENERATION = 9,
  UAD_ERR_RECONSTRUCTION = 10,
  UAD_ERR_INTERNAL = 99
} uad_status;

UADMHD_API const char* uad_version(void);
UADMHD_API const char* uad_status_string(uad_status status);
/* Message of the most recent failure on this thread ("" if none). */
UADMHD_API const char* uad_last_error(void);

/* Child seed for item `index`; the same derivation the library uses internally. */
UADMHD_API uint64_t uad_derive_seed(uint64_t seed, uint64_t index);

/* ---- images and masks ------------------------------------------------- */

typedef struct uad_image uad_image;
typedef struct uad_mask uad_mask;
typedef struct uad_stack uad_stack;

/* `data` may be NULL for an all-zero image. Values must be finite. */
UADMHD_API uad_status uad_image_create(size_t height, size_t width, const double* data,
                                       uad_image** out);
UADMHD_API void uad_image_free(uad_image* img);
UADMHD_API size_t uad_image_height(const uad_image* img);
UADMHD_API size_t uad_image_width(const uad_image* img);
/* Borrowed pointer to height*width values, valid until the handle is freed. */
UADMHD_API const double* uad_image_data(const uad_image* img);

UADMHD_API uad_status uad_mask_create(size_t height, size_t width, const uint8_t* bits,
                                      uad_mask** out);
UADMHD_API void uad_mask_free(uad_mask* mask);
UADMHD_API size_t uad_mask_height(const uad_mask* mask);
UADMHD_API size_t uad_mask_width(const uad_mask* mask);
UADMHD_API const uint8_t* uad_mask_data(const uad_mask* mask);
UADMHD_API size_t uad_mask_count(const uad_mask* mask);

/* Copies `n` equally shaped images into a new stack. */
UADMHD_API uad_status uad_stack_create(const uad_image* const* images, size_t n,
                                       uad_stack** out);
UADMHD_API void uad_stack_free(uad_stack* stack);
UADMHD_API size_t uad_stack_size(const uad_stack* stack);
/* Copy of image i. */
UADMHD_API uad_status uad_stack_get(const uad_stack* stack, size_t i, uad_image** out);

UADMHD_API uad_status uad_gaussian_filter(const uad_image* img, double sigma, uad_image** out);

/* ---- diffusion -------------------------------------------------------- */

typedef struct uad_schedule uad_schedule;

typedef enum uad_noise_kind { UAD_NOISE_GAUSSIAN = 0, UAD_NOISE_SIMPLEX = 1 } uad_noise_kind;

typedef struct uad_simplex_params {
  int octaves;
  double persistence;
  double lacunarity;
  double base_frequency; /* cycles per pixel */
  uint64_t seed;
} uad_simplex_params;

UADMHD_API void uad_simplex_params_default(uad_simplex_params* params);

UADMHD_API uad_status uad_schedule_linear(int t_max, double beta_start, double beta_end,
                                          uad_schedule** out);
UADMHD_API void uad_schedule_free(uad_schedule* sched);
UADMHD_API int uad_schedule_t_max(const uad_schedule* sched);
UADMHD_API uad_status uad_schedule_alpha_bar(const uad_schedule* sched, int t, double* out);

UADMHD_API uad_status uad_simplex_noise(size_t height, size_t width,
                                        const uad_simplex_params* params, uad_image** out);
UADMHD_API uad_status uad_gaussian_noise(size_t height, size_t width, uint64_t seed,
                                         uad_image** out);

UADMHD_API uad_status uad_forward_noise(const uad_image* x0, int t, const uad_schedule* sched,
                                        const uad_image* eps, uad_image** out);
UADMHD_API uad_status uad_simple_loss(const uad_image* eps, const uad_image* eps_hat,
                                      double* out);
/* `z` may be NULL only at t = 1. */
UADMHD_API uad_status uad_denoise_step(const uad_image* xt, int t, const uad_image* eps_hat,
                                       const uad_schedule* sched, const uad_image* z,
                                       uad_image** out);
UADMHD_API uad_status uad_estimate_x0(const uad_image* xt, int t, const uad_image* eps_hat,
                                      const uad_schedule* sched, uad_image** out);

/* ---- reconstructors --------------------------------------------------- */

typedef struct uad_reconstructor uad_reconstructor;

/*
 * User reconstruction callback. Must write height*width finite values to
 * `out` and return 0; any other return value aborts stack sampling with
 * UAD_ERR_RECONSTRUCTION. Must be deterministic in `seed`.
 */
typedef int (*uad_reconstruct_fn)(void* user_data, const double* xt, size_t height,
                                  size_t width, int t, uint64_t seed, double* out);

UADMHD_API uad_status uad_reconstructor_from_callback(uad_reconstruct_fn fn, void* user_data,
                                                      uad_reconstructor** out);
UADMHD_API void uad_reconstructor_free(uad_reconstructor* rec);

UADMHD_API uad_status uad_sample_stack(const uad_reconstructor* rec, const uad_image* x0,
                                       int t_test, size_t n, const uad_schedule* sched,
                                       uad_noise_kind noise_kind, uint64_t seed,
                                       uad_stack** out);

/* ---- scoring ---------------------------------------------------------- */

typedef struct uad_ssim_params {
  double kernel_sigma;
  double data_range;
  double c1;
  double c2;
} uad_ssim_params;

typedef struct uad_scoring_config {
  size_t n_reconstructions;
  int t_test;
  double lambda;
  double mhd_smooth_sigma;
  uad_ssim_params ssim;
  uad_noise_kind noise_kind;
  uint64_t seed;
} uad_scoring_config;

typedef enum uad_map_variant {
  UAD_MAP_S_MEAN = 0,
  UAD_MAP_S_MHD = 1,
  UAD_MAP_S_SMHD = 2
} uad_map_variant;

typedef struct uad_scored_case uad_scored_case;

UADMHD_API void uad_ssim_params_default(uad_ssim_params* params);
UADMHD_API void uad_scoring_config_default(uad_scoring_config* cfg);

UADMHD_API uad_status uad_ssim_map(const uad_image* x, const uad_image* y,
                                   const uad_ssim_params* params, uad_image** out);
UADMHD_API uad_status uad_s_mean(const uad_image* x, const uad_image* mu,
                                 const uad_ssim_params* params, uad_image** out);

/* Unsmoothed MHD map of x against the distribution summarized from `stack`.
 * `full` selects full covariance (1) or diagonal (0). `scalar` may be NULL. */
UADMHD_API uad_status uad_mhd_map(const uad_stack* stack, const uad_image* x, double lambda,
                                  int full, uad_image** map, double* scalar);

UADMHD_API uad_status uad_score_case(const uad_image* x, const uad_stack* stack,
                                     const uad_scoring_config* cfg, uad_scored_case** out);
UADMHD_API void uad_scored_case_free(uad_scored_case* sc);
UADMHD_API uad_status uad_scored_case_map(const uad_scored_case* sc, uad_map_variant variant,
                                          uad_image** out);
UADMHD_API uad_status uad_scored_case_scalars(const uad_scored_case* sc, double* mhd_diag,
                                              double* mhd_full);

UADMHD_API uad_status uad_population_cm_score(const uad_image* x, const uad_stack* healthy_set,
                                              const uad_scoring_config* cfg, uad_image** out);
UADMHD_API uad_status uad_binarize(const uad_image* map, double threshold, uad_mask** out);

/* ---- metrics ---------------------------------------------------------- */

typedef struct uad_best_dice_result {
  double dice;
  double threshold;
  int no_positives;
} uad_best_dice_result;

typedef struct uad_eval_result {
  double auprc;
  double dice_best;
  double dice_threshold;
  size_t n_pos;
  size_t n_neg;
} uad_eval_result;

UADMHD_API uad_status uad_dice(const uint8_t* pred, const uint8_t* gt, size_t n, double* out);
/* quantile_mode = 0 sweeps every distinct score, 1 sweeps 1001 quantiles. */
UADMHD_API uad_status uad_best_dice(const double* scores, const uint8_t* labels, size_t n,
                                    int quantile_mode, uad_best_dice_result* out);
UADMHD_API uad_status uad_auprc(const double* scores, const uint8_t* labels, size_t n,
                                double* out);
/* `eval_mask` may be NULL to evaluate every voxel. */
UADMHD_API uad_status uad_evaluate(const double* scores, const uint8_t* labels,
                                   const uint8_t* eval_mask, size_t n, uad_eval_result* out);
/* Two-sided test on |mean(a) - mean(b)|; `paired` flips signs of a_i - b_i
 * instead of shuffling the pooled sample (requires na == nb). */
UADMHD_API uad_status uad_permutation_test(const double* a, size_t na, const double* b,
                                           size_t nb, size_t rounds, uint64_t seed,
                                           int paired, double* p_value);

/* ---- synthetic phantoms ----------------------------------------------- */

typedef struct uad_phantom_config {
  size_t size;
  double texture_frequency;
  double texture_amplitude;
  double lesion_radius_min;
  double lesion_radius_max;
  double lesion_contrast_min;
  double lesion_contrast_max;
  double ellipse_axis_vertical;
  double ellipse_axis_horizontal;
} uad_phantom_config;

typedef struct uad_perturbation_config {
  double bias_field_frequency;
  double bias_amplitude;
  double pixel_noise_sigma;
  double symmetry_coupling;
} uad_perturbation_config;

UADMHD_API void uad_phantom_config_default(uad_phantom_config* cfg);
UADMHD_API void uad_perturbation_config_default(uad_perturbation_config* cfg);

/* One lesioned case from its seed. Any output pointer may be NULL. */
UADMHD_API uad_status uad_phantom_case(const uad_phantom_config* cfg, uint64_t case_seed,
                                       uad_image** healthy, uad_mask** brain,
                                       uad_image** image, uad_mask** lesion);
UADMHD_API uad_status uad_phantom_population(const uad_phantom_config* cfg, size_t k,
                                             uint64_t seed, uad_stack** out);
UADMHD_API uad_status uad_oracle_reconstructor_create(const uad_image* healthy,
                                                      const uad_mask* brain,
                                                      const uad_perturbation_config* pert,
                                                      uad_reconstructor** out);

/* ---- files ------------------------------------------------------------ */

typedef enum uad_dtype { UAD_DTYPE_F32 = 0, UAD_DTYPE_U8 = 1 } uad_dtype;

/* Validates a VOLB file and reports its kind. dims are slowest first; unused
 * trailing entries are set to 0. */
UADMHD_API uad_status uad_volume_probe(const char* path, uad_dtype* dtype, int* ndim,
                                       uint32_t dims[3]);
UADMHD_API uad_status uad_write_image(const char* path, const uad_image* img);
UADMHD_API uad_status uad_read_image(const char* path, uad_image** out);
UADMHD_API uad_status uad_write_mask(const char* path, const uad_mask* mask);
UADMHD_API uad_status uad_read_mask(const char* path, uad_mask** out);
/* Stacks are stored as 3D f32 volumes, one slice per image. */
UADMHD_API uad_status uad_write_stack(const char* path, const uad_stack* stack);
UADMHD_API uad_status uad_read_stack(const char* path, uad_stack** out);
UADMHD_API uad_status uad_export_pgm(const char* path, const uad_image* img);

#ifdef __cplusplus
}
#endif

#endif /* UADMHD_UADMHD_H_ */
