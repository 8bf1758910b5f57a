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

#include "uadmhd/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "uadmhd/errors.hpp"
#include "uadmhd/random.hpp"

namespace uadmhd::phantom {

void PhantomConfig::validate() const {
  if (size < 16) throw ParameterError("phantom size must be at least 16");
  if (!(texture_frequency > 0.0)) throw ParameterError("texture_frequency must be positive");
  if (!(texture_amplitude >= 0.0)) throw ParameterError("texture_amplitude must be >= 0");
  if (!(lesion_radius_min > 0.0 && lesion_radius_min <= lesion_radius_max)) {
    throw ParameterError("lesion radius range must satisfy 0 < min <= max");
  }
  if (!(lesion_contrast_min > 0.0 && lesion_contrast_min <= lesion_contrast_max)) {
    throw ParameterError("lesion contrast range must satisfy 0 < min <= max");
  }
  if (!(ellipse_axis_vertical > 0.0 && ellipse_axis_vertical <= 1.0 &&
        ellipse_axis_horizontal > 0.0 && ellipse_axis_horizontal <= 1.0)) {
    throw ParameterError("ellipse axis fractions must lie in (0, 1]");
  }
}

void PerturbationConfig::validate() const {
  if (!(bias_field_frequency > 0.0)) throw ParameterError("bias_field_frequency must be positive");
  if (!(bias_amplitude >= 0.0) || !(pixel_noise_sigma >= 0.0)) {
    throw ParameterError("perturbation amplitudes must be >= 0");
  }
  if (!(symmetry_coupling >= 0.0 && symmetry_coupling <= 1.0)) {
    throw ParameterError("symmetry_coupling must lie in [0, 1]");
  }
}

HealthyPhantom gen_healthy(const PhantomConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const std::size_t n = cfg.size;
  diffusion::SimplexParams tex;
  tex.octaves = 3;
  tex.base_frequency = cfg.texture_frequency;
  tex.seed = derive_seed(seed, 0);
  const Image2D texture = diffusion::simplex_noise(n, n, tex);

  const double center = (static_cast<double>(n) - 1.0) / 2.0;
  const double half = static_cast<double>(n) / 2.0;
  const double a = cfg.ellipse_axis_vertical * half;
  const double b = cfg.ellipse_axis_horizontal * half;

  HealthyPhantom out{Image2D(n, n), BinaryMask(n, n)};
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const double dy = (static_cast<double>(r) - center) / a;
      const double dx = (static_cast<double>(c) - center) / b;
      if (dx * dx + dy * dy > 1.0) continue;
      out.brain.set(r, c, true);
      out.image(r, c) = std::clamp(0.5 + cfg.texture_amplitude * texture(r, c), 0.0, 1.0);
    }
  }
  return out;
}

LesionedImage inject_lesion(const Image2D& img, const BinaryMask& brain,
                            const PhantomConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  if (!brain.matches(img)) throw DimensionError("inject_lesion: brain mask shape differs");
  if (brain.count() == 0) throw GenerationError("inject_lesion: brain mask is empty");

  SplitMix64 rng(seed);
  const auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  const double rx = uniform(cfg.lesion_radius_min, cfg.lesion_radius_max);
  const double ry = uniform(cfg.lesion_radius_min, cfg.lesion_radius_max);
  const double magnitude = uniform(cfg.lesion_contrast_min, cfg.lesion_contrast_max);
  const double contrast = (rng() & 1) ? magnitude : -magnitude;

  // The profile is cut to zero three edge widths outside the nominal ellipse.
  const double scale = std::sqrt(rx * ry);
  const double cutoff = 3.0 * kLesionEdgeWidth;
  const double rho_max = 1.0 + cutoff / scale;
  const double sx = rx * rho_max;
  const double sy = ry * rho_max;

  const auto h = static_cast<std::ptrdiff_t>(img.height());
  const auto w = static_cast<std::ptrdiff_t>(img.width());
  const auto fits = [&](std::ptrdiff_t cr, std::ptrdiff_t cc) {
    const auto ey = static_cast<std::ptrdiff_t>(std::ceil(sy));
    const auto ex = static_cast<std::ptrdiff_t>(std::ceil(sx));
    for (std::ptrdiff_t r = cr - ey; r <= cr + ey; ++r) {
      for (std::ptrdiff_t c = cc - ex; c <= cc + ex; ++c) {
        const double dy = static_cast<double>(r - cr) / sy;
        const double dx = static_cast<double>(c - cc) / sx;
        if (dx * dx + dy * dy >= 1.0) continue;
        if (r < 0 || r >= h || c < 0 || c >= w) return false;
        if (!brain(static_cast<std::size_t>(r), static_cast<std::size_t>(c))) return false;
      }
    }
    return true;
  };

  std::vector<std::pair<std::ptrdiff_t, std::ptrdiff_t>> centers;
  for (std::ptrdiff_t r = 0; r < h; ++r) {
    for (std::ptrdiff_t c = 0; c < w; ++c) {
      if (brain(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) && fits(r, c)) {
        centers.emplace_back(r, c);
      }
    }
  }
  if (centers.empty()) {
    throw GenerationError("brain region too small for a lesion of radius " +
                          std::to_string(std::max(rx, ry)));
  }
  const auto [cr, cc] = centers[rng.below(centers.size())];

  const auto sigmoid = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };
  const double peak = std::abs(contrast) * sigmoid(scale / kLesionEdgeWidth);

  LesionedImage out{img, BinaryMask(img.height(), img.width())};
  for (std::ptrdiff_t r = 0; r < h; ++r) {
    for (std::ptrdiff_t c = 0; c < w; ++c) {
      const double dy = static_cast<double>(r - cr) / ry;
      const double dx = static_cast<double>(c - cc) / rx;
      const double signed_dist = (1.0 - std::sqrt(dx * dx + dy * dy)) * scale;
      if (signed_dist <= -cutoff) continue;
      const double added = contrast * sigmoid(signed_dist / kLesionEdgeWidth);
      const auto ur = static_cast<std::size_t>(r);
      const auto uc = static_cast<std::size_t>(c);
      out.image(ur, uc) = std::clamp(img(ur, uc) + added, 0.0, 1.0);
      if (std::abs(added) > 0.5 * peak) out.lesion.set(ur, uc, true);
    }
  }
  return out;
}

OracleReconstructor::OracleReconstructor(Image2D healthy, BinaryMask brain,
                                         PerturbationConfig pert)
    : healthy_(std::move(healthy)), brain_(std::move(brain)), pert_(pert) {
  pert_.validate();
  if (!brain_.matches(healthy_)) throw DimensionError("oracle: brain mask shape differs");

  // Cosine modes cos(pi kx (c + 1/2) / W) cos(pi ky (r + 1/2) / H), kx + ky <= order.
  const std::size_t h = healthy_.height();
  const std::size_t w = healthy_.width();
  const auto order = std::max<long>(
      1, std::lround(pert_.bias_field_frequency * static_cast<double>(std::max(h, w))));
  double mean_square = 0.0;
  for (long ky = 0; ky <= order; ++ky) {
    for (long kx = 0; kx + ky <= order; ++kx) {
      Image2D mode(h, w);
      for (std::size_t r = 0; r < h; ++r) {
        const double fy = std::cos(std::numbers::pi * static_cast<double>(ky) *
                                   (static_cast<double>(r) + 0.5) / static_cast<double>(h));
        for (std::size_t c = 0; c < w; ++c) {
          const double fx = std::cos(std::numbers::pi * static_cast<double>(kx) *
                                     (static_cast<double>(c) + 0.5) / static_cast<double>(w));
          mode(r, c) = fx * fy;
        }
      }
      mean_square += (kx == 0 ? 1.0 : 0.5) * (ky == 0 ? 1.0 : 0.5);
      basis_.push_back(std::move(mode));
    }
  }
  coef_scale_ = pert_.bias_amplitude / std::sqrt(mean_square);
}

Image2D OracleReconstructor::reconstruct(const Image2D& xt, int /*t*/,
                                         const diffusion::NoiseSchedule& /*sched*/,
                                         std::uint64_t seed) const {
  require_same_shape(healthy_, xt, "oracle reconstructor input");
  const std::size_t h = healthy_.height();
  const std::size_t w = healthy_.width();

  SplitMix64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Image2D bias(h, w);
  for (const auto& mode : basis_) {
    const double coef = coef_scale_ * normal(rng);
    auto bv = bias.values();
    for (std::size_t k = 0; k < bv.size(); ++k) bv[k] += coef * mode.values()[k];
  }

  const double s = pert_.symmetry_coupling;
  Image2D out = healthy_;
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const double noise = pert_.pixel_noise_sigma * normal(rng);
      if (!brain_(r, c)) continue;
      const double mirrored = 0.5 * (bias(r, c) + bias(r, w - 1 - c));
      const double field = (1.0 - s) * bias(r, c) + s * mirrored;
      out(r, c) = std::clamp(healthy_(r, c) + field + noise, 0.0, 1.0);
    }
  }
  return out;
}

std::shared_ptr<const OracleReconstructor> make_oracle_reconstructor(
    const Image2D& healthy, const BinaryMask& brain, const PerturbationConfig& pert) {
  return std::make_shared<const OracleReconstructor>(healthy, brain, pert);
}

PhantomCase gen_case(const PhantomConfig& cfg, const PerturbationConfig& pert,
                     std::uint64_t case_seed) {
  auto healthy = gen_healthy(cfg, derive_seed(case_seed, 0));
  auto lesioned = inject_lesion(healthy.image, healthy.brain, cfg, derive_seed(case_seed, 1));
  auto rec = make_oracle_reconstructor(healthy.image, healthy.brain, pert);
  return PhantomCase{case_seed,
                     std::move(healthy.image),
                     std::move(healthy.brain),
                     std::move(lesioned.image),
                     std::move(lesioned.lesion),
                     std::move(rec)};
}

std::vector<PhantomCase> gen_dataset(const PhantomConfig& cfg, const PerturbationConfig& pert,
                                     std::size_t n_cases, std::uint64_t seed) {
  if (n_cases < 1) throw ParameterError("gen_dataset needs at least one case");
  std::vector<PhantomCase> cases;
  cases.reserve(n_cases);
  for (std::size_t i = 0; i < n_cases; ++i) cases.push_back(gen_case(cfg, pert, derive_seed(seed, i)));
  return cases;
}

ReconstructionStack gen_population(const PhantomConfig& cfg, std::size_t k,
                                   std::uint64_t seed) {
  if (k < 2) throw ParameterError("population needs at least two healthy images");
  std::vector<Image2D> images;
  images.reserve(k);
  for (std::size_t i = 0; i < k; ++i) images.push_back(gen_healthy(cfg, derive_seed(seed, i)).image);
  return ReconstructionStack(std::move(images));
}

}  // namespace uadmhd::phantom
