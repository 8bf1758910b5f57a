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

#include "uadmhd/uadmhd.h"

#include <algorithm>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "uadmhd/diffusion.hpp"
#include "uadmhd/errors.hpp"
#include "uadmhd/mahalanobis.hpp"
#include "uadmhd/metrics.hpp"
#include "uadmhd/phantom.hpp"
#include "uadmhd/pseudostats.hpp"
#include "uadmhd/random.hpp"
#include "uadmhd/scoring.hpp"
#include "uadmhd/ssim.hpp"
#include "uadmhd/volume.hpp"
#include "uadmhd/volume_io.hpp"

struct uad_image {
  uadmhd::Image2D value;
};
struct uad_mask {
  uadmhd::BinaryMask value;
};
struct uad_stack {
  uadmhd::ReconstructionStack value;
};
struct uad_schedule {
  uadmhd::diffusion::NoiseSchedule value;
};
struct uad_reconstructor {
  std::shared_ptr<const uadmhd::diffusion::Reconstructor> value;
};
struct uad_scored_case {
  uadmhd::scoring::ScoredCase value;
};

namespace {

namespace ud = uadmhd::diffusion;

thread_local std::string g_last_error;

uad_status status_for(uadmhd::ErrorKind kind) {
  using uadmhd::ErrorKind;
  switch (kind) {
    case ErrorKind::kDimension: return UAD_ERR_DIMENSION;
    case ErrorKind::kParameter: return UAD_ERR_PARAMETER;
    case ErrorKind::kNumeric: return UAD_ERR_NUMERIC;
    case ErrorKind::kInsufficientSamples: return UAD_ERR_INSUFFICIENT_SAMPLES;
    case ErrorKind::kUndefinedMetric: return UAD_ERR_UNDEFINED_METRIC;
    case ErrorKind::kFormat: return UAD_ERR_FORMAT;
    case ErrorKind::kIo: return UAD_ERR_IO;
    case ErrorKind::kGeneration: return UAD_ERR_GENERATION;
    case ErrorKind::kReconstruction: return UAD_ERR_RECONSTRUCTION;
  }
  return UAD_ERR_INTERNAL;
}

struct NullArgument : std::invalid_argument {
  explicit NullArgument(const char* names)
      : std::invalid_argument(std::string("null argument among: ") + names) {}
};

// Throws NullArgument if any pointer is null; `names` lists them for the message.
template <typename... Ptrs>
void require(const char* names, Ptrs... ptrs) {
  if (((ptrs == nullptr) || ...)) throw NullArgument(names);
}

// Runs `body`, translating exceptions into status codes at the ABI boundary.
template <typename F>
uad_status guarded(F&& body) noexcept {
  try {
    body();
    g_last_error.clear();
    return UAD_OK;
  } catch (const NullArgument& e) {
    g_last_error = e.what();
    return UAD_ERR_NULL_ARGUMENT;
  } catch (const uadmhd::Error& e) {
    g_last_error = e.what();
    return status_for(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return UAD_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return UAD_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return UAD_ERR_INTERNAL;
  }
}

uad_image* wrap(uadmhd::Image2D img) { return new uad_image{std::move(img)}; }
uad_mask* wrap(uadmhd::BinaryMask m) { return new uad_mask{std::move(m)}; }
uad_stack* wrap(uadmhd::ReconstructionStack s) { return new uad_stack{std::move(s)}; }

// Adapts a C callback to the Reconstructor interface.
class CallbackReconstructor final : public ud::Reconstructor {
 public:
  CallbackReconstructor(uad_reconstruct_fn fn, void* user) : fn_(fn), user_(user) {}

  uadmhd::Image2D reconstruct(const uadmhd::Image2D& xt, int t, const ud::NoiseSchedule&,
                              std::uint64_t seed) const override {
    std::vector<double> out(xt.size(), 0.0);
    const int rc = fn_(user_, xt.values().data(), xt.height(), xt.width(), t, seed, out.data());
    if (rc != 0) {
      throw std::runtime_error("callback returned " + std::to_string(rc));
    }
    return uadmhd::Image2D(xt.height(), xt.width(), std::move(out));
  }

 private:
  uad_reconstruct_fn fn_;
  void* user_;
};

uadmhd::ssim::SsimParams to_cpp(const uad_ssim_params& p) {
  return uadmhd::ssim::SsimParams{p.kernel_sigma, p.data_range, p.c1, p.c2};
}

uadmhd::scoring::ScoringConfig to_cpp(const uad_scoring_config& c) {
  uadmhd::scoring::ScoringConfig cfg;
  cfg.n_reconstructions = c.n_reconstructions;
  cfg.t_test = c.t_test;
  cfg.lambda = c.lambda;
  cfg.mhd_smooth_sigma = c.mhd_smooth_sigma;
  cfg.ssim = to_cpp(c.ssim);
  cfg.noise_kind = c.noise_kind == UAD_NOISE_GAUSSIAN ? ud::NoiseKind::kGaussian
                                                      : ud::NoiseKind::kSimplex;
  cfg.seed = c.seed;
  return cfg;
}

uadmhd::phantom::PhantomConfig to_cpp(const uad_phantom_config& c) {
  return uadmhd::phantom::PhantomConfig{c.size,
                                        c.texture_frequency,
                                        c.texture_amplitude,
                                        c.lesion_radius_min,
                                        c.lesion_radius_max,
                                        c.lesion_contrast_min,
                                        c.lesion_contrast_max,
                                        c.ellipse_axis_vertical,
                                        c.ellipse_axis_horizontal};
}

uadmhd::phantom::PerturbationConfig to_cpp(const uad_perturbation_config& c) {
  return uadmhd::phantom::PerturbationConfig{c.bias_field_frequency, c.bias_amplitude,
                                             c.pixel_noise_sigma, c.symmetry_coupling};
}

}  // namespace

extern "C" {

const char* uad_version(void) { return "0.1.0"; }

const char* uad_status_string(uad_status status) {
  switch (status) {
    case UAD_OK: return "ok";
    case UAD_ERR_NULL_ARGUMENT: return "null argument";
    case UAD_ERR_DIMENSION: return "dimension error";
    case UAD_ERR_PARAMETER: return "parameter error";
    case UAD_ERR_NUMERIC: return "numeric error";
    case UAD_ERR_INSUFFICIENT_SAMPLES: return "insufficient samples";
    case UAD_ERR_UNDEFINED_METRIC: return "undefined metric";
    case UAD_ERR_FORMAT: return "format error";
    case UAD_ERR_IO: return "i/o error";
    case UAD_ERR_GENERATION: return "generation error";
    case UAD_ERR_RECONSTRUCTION: return "reconstruction error";
    case UAD_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* uad_last_error(void) { return g_last_error.c_str(); }

uint64_t uad_derive_seed(uint64_t seed, uint64_t index) {
  return uadmhd::derive_seed(seed, index);
}

}  // extern "C"

extern "C" {

/* images and masks */

uad_status uad_image_create(size_t height, size_t width, const double* data, uad_image** out) {
  return guarded([&] {
    require("out", out);
    if (data == nullptr) {
      *out = wrap(uadmhd::Image2D(height, width));
    } else {
      *out = wrap(uadmhd::Image2D(height, width,
                                  std::vector<double>(data, data + height * width)));
    }
  });
}

void uad_image_free(uad_image* img) { delete img; }
size_t uad_image_height(const uad_image* img) { return img ? img->value.height() : 0; }
size_t uad_image_width(const uad_image* img) { return img ? img->value.width() : 0; }
const double* uad_image_data(const uad_image* img) {
  return img ? img->value.values().data() : nullptr;
}

uad_status uad_mask_create(size_t height, size_t width, const uint8_t* bits, uad_mask** out) {
  return guarded([&] {
    require("out", out);
    if (bits == nullptr) {
      *out = wrap(uadmhd::BinaryMask(height, width));
    } else {
      *out = wrap(uadmhd::BinaryMask(height, width,
                                     std::vector<std::uint8_t>(bits, bits + height * width)));
    }
  });
}

void uad_mask_free(uad_mask* mask) { delete mask; }
size_t uad_mask_height(const uad_mask* mask) { return mask ? mask->value.height() : 0; }
size_t uad_mask_width(const uad_mask* mask) { return mask ? mask->value.width() : 0; }
const uint8_t* uad_mask_data(const uad_mask* mask) {
  return mask ? mask->value.bits().data() : nullptr;
}
size_t uad_mask_count(const uad_mask* mask) { return mask ? mask->value.count() : 0; }

uad_status uad_stack_create(const uad_image* const* images, size_t n, uad_stack** out) {
  return guarded([&] {
    require("images, out", images, out);
    std::vector<uadmhd::Image2D> copies;
    copies.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      require("images[i]", images[i]);
      copies.push_back(images[i]->value);
    }
    *out = wrap(uadmhd::ReconstructionStack(std::move(copies)));
  });
}

void uad_stack_free(uad_stack* stack) { delete stack; }
size_t uad_stack_size(const uad_stack* stack) { return stack ? stack->value.n() : 0; }

uad_status uad_stack_get(const uad_stack* stack, size_t i, uad_image** out) {
  return guarded([&] {
    require("stack, out", stack, out);
    if (i >= stack->value.n()) throw uadmhd::ParameterError("stack index out of range");
    *out = wrap(stack->value[i]);
  });
}

uad_status uad_gaussian_filter(const uad_image* img, double sigma, uad_image** out) {
  return guarded([&] {
    require("img, out", img, out);
    *out = wrap(uadmhd::gaussian_filter(img->value, sigma));
  });
}

/* diffusion */

void uad_simplex_params_default(uad_simplex_params* params) {
  if (!params) return;
  const ud::SimplexParams d;
  *params = uad_simplex_params{d.octaves, d.persistence, d.lacunarity, d.base_frequency, d.seed};
}

uad_status uad_schedule_linear(int t_max, double beta_start, double beta_end,
                               uad_schedule** out) {
  return guarded([&] {
    require("out", out);
    *out = new uad_schedule{ud::make_linear_schedule(t_max, beta_start, beta_end)};
  });
}

void uad_schedule_free(uad_schedule* sched) { delete sched; }
int uad_schedule_t_max(const uad_schedule* sched) { return sched ? sched->value.t_max() : 0; }

uad_status uad_schedule_alpha_bar(const uad_schedule* sched, int t, double* out) {
  return guarded([&] {
    require("sched, out", sched, out);
    *out = sched->value.alpha_bar(t);
  });
}

uad_status uad_simplex_noise(size_t height, size_t width, const uad_simplex_params* params,
                             uad_image** out) {
  return guarded([&] {
    require("params, out", params, out);
    const ud::SimplexParams p{params->octaves, params->persistence, params->lacunarity,
                              params->base_frequency, params->seed};
    *out = wrap(ud::simplex_noise(height, width, p));
  });
}

uad_status uad_gaussian_noise(size_t height, size_t width, uint64_t seed, uad_image** out) {
  return guarded([&] {
    require("out", out);
    *out = wrap(ud::gaussian_noise(height, width, seed));
  });
}

uad_status uad_forward_noise(const uad_image* x0, int t, const uad_schedule* sched,
                             const uad_image* eps, uad_image** out) {
  return guarded([&] {
    require("x0, sched, eps, out", x0, sched, eps, out);
    *out = wrap(ud::forward_noise(x0->value, t, sched->value, eps->value));
  });
}

uad_status uad_simple_loss(const uad_image* eps, const uad_image* eps_hat, double* out) {
  return guarded([&] {
    require("eps, eps_hat, out", eps, eps_hat, out);
    *out = ud::simple_loss(eps->value, eps_hat->value);
  });
}

uad_status uad_denoise_step(const uad_image* xt, int t, const uad_image* eps_hat,
                            const uad_schedule* sched, const uad_image* z, uad_image** out) {
  return guarded([&] {
    require("xt, eps_hat, sched, out", xt, eps_hat, sched, out);
    std::optional<uadmhd::Image2D> noise;
    if (z) noise = z->value;
    *out = wrap(ud::denoise_step(xt->value, t, eps_hat->value, sched->value, noise));
  });
}

uad_status uad_estimate_x0(const uad_image* xt, int t, const uad_image* eps_hat,
                           const uad_schedule* sched, uad_image** out) {
  return guarded([&] {
    require("xt, eps_hat, sched, out", xt, eps_hat, sched, out);
    *out = wrap(ud::estimate_x0(xt->value, t, eps_hat->value, sched->value));
  });
}

/* reconstructors */

uad_status uad_reconstructor_from_callback(uad_reconstruct_fn fn, void* user_data,
                                           uad_reconstructor** out) {
  return guarded([&] {
    require("fn, out", fn, out);
    *out = new uad_reconstructor{std::make_shared<CallbackReconstructor>(fn, user_data)};
  });
}

void uad_reconstructor_free(uad_reconstructor* rec) { delete rec; }

uad_status uad_sample_stack(const uad_reconstructor* rec, const uad_image* x0, int t_test,
                            size_t n, const uad_schedule* sched, uad_noise_kind noise_kind,
                            uint64_t seed, uad_stack** out) {
  return guarded([&] {
    require("rec, x0, sched, out", rec, x0, sched, out);
    const auto kind =
        noise_kind == UAD_NOISE_GAUSSIAN ? ud::NoiseKind::kGaussian : ud::NoiseKind::kSimplex;
    *out = wrap(ud::sample_stack(*rec->value, x0->value, t_test, n, sched->value, kind, seed));
  });
}

/* scoring */

void uad_ssim_params_default(uad_ssim_params* params) {
  if (!params) return;
  const uadmhd::ssim::SsimParams d;
  *params = uad_ssim_params{d.kernel_sigma, d.data_range, d.c1, d.c2};
}

void uad_scoring_config_default(uad_scoring_config* cfg) {
  if (!cfg) return;
  const uadmhd::scoring::ScoringConfig d;
  cfg->n_reconstructions = d.n_reconstructions;
  cfg->t_test = d.t_test;
  cfg->lambda = d.lambda;
  cfg->mhd_smooth_sigma = d.mhd_smooth_sigma;
  uad_ssim_params_default(&cfg->ssim);
  cfg->noise_kind = UAD_NOISE_SIMPLEX;
  cfg->seed = d.seed;
}

uad_status uad_ssim_map(const uad_image* x, const uad_image* y, const uad_ssim_params* params,
                        uad_image** out) {
  return guarded([&] {
    require("x, y, out", x, y, out);
    const auto p = params ? to_cpp(*params) : uadmhd::ssim::SsimParams{};
    *out = wrap(uadmhd::ssim::ssim_map(x->value, y->value, p));
  });
}

uad_status uad_s_mean(const uad_image* x, const uad_image* mu, const uad_ssim_params* params,
                      uad_image** out) {
  return guarded([&] {
    require("x, mu, out", x, mu, out);
    const auto p = params ? to_cpp(*params) : uadmhd::ssim::SsimParams{};
    *out = wrap(uadmhd::ssim::s_mean(x->value, mu->value, p));
  });
}

uad_status uad_mhd_map(const uad_stack* stack, const uad_image* x, double lambda, int full,
                       uad_image** map, double* scalar) {
  return guarded([&] {
    require("stack, x, map", stack, x, map);
    const auto dist = uadmhd::summarize(stack->value);
    auto result = full ? uadmhd::mahalanobis::mhd_full_map(dist, x->value, lambda)
                       : uadmhd::mahalanobis::mhd_diag_map(dist, x->value, lambda);
    if (scalar) *scalar = result.scalar;
    *map = wrap(std::move(result.map));
  });
}

uad_status uad_score_case(const uad_image* x, const uad_stack* stack,
                          const uad_scoring_config* cfg, uad_scored_case** out) {
  return guarded([&] {
    require("x, stack, out", x, stack, out);
    uad_scoring_config c;
    uad_scoring_config_default(&c);
    if (cfg) c = *cfg;
    *out = new uad_scored_case{uadmhd::scoring::score_case(x->value, stack->value, to_cpp(c))};
  });
}

void uad_scored_case_free(uad_scored_case* sc) { delete sc; }

uad_status uad_scored_case_map(const uad_scored_case* sc, uad_map_variant variant,
                               uad_image** out) {
  return guarded([&] {
    require("sc, out", sc, out);
    switch (variant) {
      case UAD_MAP_S_MEAN: *out = wrap(sc->value.s_mean); return;
      case UAD_MAP_S_MHD: *out = wrap(sc->value.s_mhd); return;
      case UAD_MAP_S_SMHD: *out = wrap(sc->value.s_smhd); return;
    }
    throw uadmhd::ParameterError("unknown map variant");
  });
}

uad_status uad_scored_case_scalars(const uad_scored_case* sc, double* mhd_diag,
                                   double* mhd_full) {
  return guarded([&] {
    require("sc", sc);
    if (mhd_diag) *mhd_diag = sc->value.mhd_scalar_diag;
    if (mhd_full) *mhd_full = sc->value.mhd_scalar_full;
  });
}

uad_status uad_population_cm_score(const uad_image* x, const uad_stack* healthy_set,
                                   const uad_scoring_config* cfg, uad_image** out) {
  return guarded([&] {
    require("x, healthy_set, out", x, healthy_set, out);
    uad_scoring_config c;
    uad_scoring_config_default(&c);
    if (cfg) c = *cfg;
    *out = wrap(uadmhd::scoring::population_cm_score(x->value, healthy_set->value, to_cpp(c)));
  });
}

uad_status uad_binarize(const uad_image* map, double threshold, uad_mask** out) {
  return guarded([&] {
    require("map, out", map, out);
    *out = wrap(uadmhd::scoring::binarize(map->value, threshold));
  });
}

/* metrics */

uad_status uad_dice(const uint8_t* pred, const uint8_t* gt, size_t n, double* out) {
  return guarded([&] {
    require("pred, gt, out", pred, gt, out);
    *out = uadmhd::metrics::dice(std::span(pred, n), std::span(gt, n));
  });
}

uad_status uad_best_dice(const double* scores, const uint8_t* labels, size_t n,
                         int quantile_mode, uad_best_dice_result* out) {
  return guarded([&] {
    require("scores, labels, out", scores, labels, out);
    const auto r = uadmhd::metrics::best_dice(
        std::span(scores, n), std::span(labels, n),
        quantile_mode ? uadmhd::metrics::SweepMode::kQuantile
                      : uadmhd::metrics::SweepMode::kExact);
    *out = uad_best_dice_result{r.dice, r.threshold, r.no_positives ? 1 : 0};
  });
}

uad_status uad_auprc(const double* scores, const uint8_t* labels, size_t n, double* out) {
  return guarded([&] {
    require("scores, labels, out", scores, labels, out);
    *out = uadmhd::metrics::auprc(std::span(scores, n), std::span(labels, n));
  });
}

uad_status uad_evaluate(const double* scores, const uint8_t* labels, const uint8_t* eval_mask,
                        size_t n, uad_eval_result* out) {
  return guarded([&] {
    require("scores, labels, out", scores, labels, out);
    std::span<const std::uint8_t> mask;
    if (eval_mask) mask = std::span(eval_mask, n);
    const auto r = uadmhd::metrics::evaluate(std::span(scores, n), std::span(labels, n), mask);
    *out = uad_eval_result{r.auprc, r.dice_best, r.dice_threshold, r.n_pos, r.n_neg};
  });
}

uad_status uad_permutation_test(const double* a, size_t na, const double* b, size_t nb,
                                size_t rounds, uint64_t seed, int paired, double* p_value) {
  return guarded([&] {
    require("a, b, p_value", a, b, p_value);
    *p_value = paired ? uadmhd::metrics::paired_permutation_test(std::span(a, na),
                                                                 std::span(b, nb), rounds, seed)
                      : uadmhd::metrics::permutation_test(std::span(a, na), std::span(b, nb),
                                                          rounds, seed);
  });
}

/* phantoms */

void uad_phantom_config_default(uad_phantom_config* cfg) {
  if (!cfg) return;
  const uadmhd::phantom::PhantomConfig d;
  *cfg = uad_phantom_config{d.size,
                            d.texture_frequency,
                            d.texture_amplitude,
                            d.lesion_radius_min,
                            d.lesion_radius_max,
                            d.lesion_contrast_min,
                            d.lesion_contrast_max,
                            d.ellipse_axis_vertical,
                            d.ellipse_axis_horizontal};
}

void uad_perturbation_config_default(uad_perturbation_config* cfg) {
  if (!cfg) return;
  const uadmhd::phantom::PerturbationConfig d;
  *cfg = uad_perturbation_config{d.bias_field_frequency, d.bias_amplitude, d.pixel_noise_sigma,
                                 d.symmetry_coupling};
}

uad_status uad_phantom_case(const uad_phantom_config* cfg, uint64_t case_seed,
                            uad_image** healthy, uad_mask** brain, uad_image** image,
                            uad_mask** lesion) {
  return guarded([&] {
    require("cfg", cfg);
    auto c = uadmhd::phantom::gen_case(to_cpp(*cfg), uadmhd::phantom::PerturbationConfig{},
                                       case_seed);
    // Allocate everything before publishing so a failure leaks nothing.
    std::unique_ptr<uad_image> h(wrap(std::move(c.healthy)));
    std::unique_ptr<uad_mask> b(wrap(std::move(c.brain)));
    std::unique_ptr<uad_image> i(wrap(std::move(c.image)));
    std::unique_ptr<uad_mask> l(wrap(std::move(c.lesion)));
    if (healthy) *healthy = h.release();
    if (brain) *brain = b.release();
    if (image) *image = i.release();
    if (lesion) *lesion = l.release();
  });
}

uad_status uad_phantom_population(const uad_phantom_config* cfg, size_t k, uint64_t seed,
                                  uad_stack** out) {
  return guarded([&] {
    require("cfg, out", cfg, out);
    *out = wrap(uadmhd::phantom::gen_population(to_cpp(*cfg), k, seed));
  });
}

uad_status uad_oracle_reconstructor_create(const uad_image* healthy, const uad_mask* brain,
                                           const uad_perturbation_config* pert,
                                           uad_reconstructor** out) {
  return guarded([&] {
    require("healthy, brain, out", healthy, brain, out);
    const auto p = pert ? to_cpp(*pert) : uadmhd::phantom::PerturbationConfig{};
    *out = new uad_reconstructor{
        uadmhd::phantom::make_oracle_reconstructor(healthy->value, brain->value, p)};
  });
}

/* files */

uad_status uad_volume_probe(const char* path, uad_dtype* dtype, int* ndim, uint32_t dims[3]) {
  return guarded([&] {
    require("path", path);
    const auto v = uadmhd::io::read_volume(path);
    uad_dtype t = UAD_DTYPE_F32;
    int nd = 2;
    uint32_t d[3] = {0, 0, 0};
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, uadmhd::Image2D> ||
                        std::is_same_v<T, uadmhd::BinaryMask>) {
            t = std::is_same_v<T, uadmhd::Image2D> ? UAD_DTYPE_F32 : UAD_DTYPE_U8;
            d[0] = static_cast<uint32_t>(x.height());
            d[1] = static_cast<uint32_t>(x.width());
          } else if constexpr (std::is_same_v<T, uadmhd::Volume3D>) {
            nd = 3;
            d[0] = static_cast<uint32_t>(x.slices());
            d[1] = static_cast<uint32_t>(x.height());
            d[2] = static_cast<uint32_t>(x.width());
          } else {
            t = UAD_DTYPE_U8;
            nd = 3;
            d[0] = static_cast<uint32_t>(x.size());
            d[1] = static_cast<uint32_t>(x.front().height());
            d[2] = static_cast<uint32_t>(x.front().width());
          }
        },
        v);
    if (dtype) *dtype = t;
    if (ndim) *ndim = nd;
    if (dims) std::copy(d, d + 3, dims);
  });
}

uad_status uad_write_image(const char* path, const uad_image* img) {
  return guarded([&] {
    require("path, img", path, img);
    uadmhd::io::write_volume(img->value, path);
  });
}

uad_status uad_read_image(const char* path, uad_image** out) {
  return guarded([&] {
    require("path, out", path, out);
    *out = wrap(uadmhd::io::read_image(path));
  });
}

uad_status uad_write_mask(const char* path, const uad_mask* mask) {
  return guarded([&] {
    require("path, mask", path, mask);
    uadmhd::io::write_volume(mask->value, path);
  });
}

uad_status uad_read_mask(const char* path, uad_mask** out) {
  return guarded([&] {
    require("path, out", path, out);
    *out = wrap(uadmhd::io::read_mask(path));
  });
}

uad_status uad_write_stack(const char* path, const uad_stack* stack) {
  return guarded([&] {
    require("path, stack", path, stack);
    uadmhd::io::write_volume(uadmhd::Volume3D(stack->value.images()), path);
  });
}

uad_status uad_read_stack(const char* path, uad_stack** out) {
  return guarded([&] {
    require("path, out", path, out);
    auto vol = uadmhd::io::read_volume3d(path);
    *out = wrap(uadmhd::ReconstructionStack(vol.all()));
  });
}

uad_status uad_export_pgm(const char* path, const uad_image* img) {
  return guarded([&] {
    require("path, img", path, img);
    uadmhd::io::export_pgm(img->value, path);
  });
}

}  // extern "C"
