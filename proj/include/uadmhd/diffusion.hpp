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

#ifndef UADMHD_DIFFUSION_HPP_
#define UADMHD_DIFFUSION_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "uadmhd/volume.hpp"

namespace uadmhd::diffusion {

/// Linear-beta DDPM schedule. Timesteps are 1-based: beta(1)..beta(T).
class NoiseSchedule {
 public:
  /// Takes ownership of explicit betas; each must lie in (0, 1).
  explicit NoiseSchedule(std::vector<double> betas);

  int t_max() const noexcept { return static_cast<int>(betas_.size()); }
  double beta(int t) const;
  /// Cumulative product of (1 - beta_s) for s <= t. alpha_bar(0) is 1.
  double alpha_bar(int t) const;

  std::span<const double> betas() const noexcept { return betas_; }
  std::span<const double> alpha_bars() const noexcept { return alpha_bars_; }

  /// Posterior variance ((1 - abar_{t-1}) / (1 - abar_t)) * beta_t.
  double posterior_variance(int t) const;

 private:
  void check_t(int t) const;

  std::vector<double> betas_;
  std::vector<double> alpha_bars_;
};

inline constexpr int kDefaultTMax = 1000;
inline constexpr double kDefaultBetaStart = 1e-4;
inline constexpr double kDefaultBetaEnd = 0.02;

NoiseSchedule make_linear_schedule(int t_max = kDefaultTMax,
                                   double beta_start = kDefaultBetaStart,
                                   double beta_end = kDefaultBetaEnd);

struct SimplexParams {
  int octaves = 6;
  double persistence = 0.8;
  double lacunarity = 2.0;
  double base_frequency = 1.0 / 64.0;  // cycles per pixel
  std::uint64_t seed = 0;
};

/// Multi-octave 2D simplex noise, standardized to zero mean and unit variance
/// over the image. A field with zero spread is returned as all zeros.
Image2D simplex_noise(std::size_t height, std::size_t width, const SimplexParams& params);

/// i.i.d. standard normal field.
Image2D gaussian_noise(std::size_t height, std::size_t width, std::uint64_t seed);

enum class NoiseKind { kGaussian, kSimplex };

/// Noise field of the requested kind; simplex uses default octave settings.
Image2D make_noise(NoiseKind kind, std::size_t height, std::size_t width,
                   std::uint64_t seed);

/// sqrt(abar_t) * x0 + sqrt(1 - abar_t) * eps.
Image2D forward_noise(const Image2D& x0, int t, const NoiseSchedule& sched,
                      const Image2D& eps);

/// Squared L2 distance between true and predicted noise.
double simple_loss(const Image2D& eps, const Image2D& eps_hat);

/// One ancestral step x_t -> x_{t-1} given a noise prediction. `z` must be
/// supplied for t > 1 and is ignored (may be empty) at t = 1.
Image2D denoise_step(const Image2D& xt, int t, const Image2D& eps_hat,
                     const NoiseSchedule& sched, const std::optional<Image2D>& z);

/// Single-shot x0 estimate (x_t - sqrt(1 - abar_t) eps_hat) / sqrt(abar_t).
Image2D estimate_x0(const Image2D& xt, int t, const Image2D& eps_hat,
                    const NoiseSchedule& sched);

/// Produces one pseudo-healthy reconstruction of a noised input.
///
/// Implementations must return an image shaped like `xt` with finite values,
/// and must be deterministic in `seed`. Implementations that are safe to call
/// concurrently should report `reentrant() == true`.
class Reconstructor {
 public:
  virtual ~Reconstructor() = default;

  virtual Image2D reconstruct(const Image2D& xt, int t, const NoiseSchedule& sched,
                              std::uint64_t seed) const = 0;

  virtual bool reentrant() const noexcept { return false; }
};

/// Draws `n` fresh noise fields, noises `x0` to `t_test` and reconstructs each.
/// Item i uses derive_seed(seed, i) for its noise and derive_seed of that for
/// the reconstructor, so the stack is reproducible for fixed arguments.
ReconstructionStack sample_stack(const Reconstructor& rec, const Image2D& x0,
                                 int t_test, std::size_t n, const NoiseSchedule& sched,
                                 NoiseKind noise_kind, std::uint64_t seed);

}  // namespace uadmhd::diffusion

#endif  // UADMHD_DIFFUSION_HPP_
