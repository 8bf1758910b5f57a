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

#ifndef UADMHD_PHANTOM_HPP_
#define UADMHD_PHANTOM_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "uadmhd/diffusion.hpp"
#include "uadmhd/volume.hpp"

namespace uadmhd::phantom {

struct PhantomConfig {
  std::size_t size = 64;
  double texture_frequency = 1.0 / 16.0;
  double texture_amplitude = 0.15;
  double lesion_radius_min = 3.0;
  double lesion_radius_max = 9.0;
  double lesion_contrast_min = 0.25;
  double lesion_contrast_max = 0.5;
  /// Semi-axes of the brain ellipse as fractions of size/2 (vertical, horizontal).
  double ellipse_axis_vertical = 0.8;
  double ellipse_axis_horizontal = 0.65;

  void validate() const;
};

struct PerturbationConfig {
  double bias_field_frequency = 1.0 / 32.0;
  double bias_amplitude = 0.05;
  double pixel_noise_sigma = 0.01;
  /// 0 keeps each bias field as drawn; 1 makes it exactly left-right symmetric.
  double symmetry_coupling = 0.5;

  void validate() const;
};

/// Width in pixels of the sigmoid edge of injected lesions.
inline constexpr double kLesionEdgeWidth = 1.5;

struct HealthyPhantom {
  Image2D image;
  BinaryMask brain;
};

/// Elliptical brain at intensity 0.5 plus simplex texture, clamped to [0, 1].
/// Background is exactly 0.
HealthyPhantom gen_healthy(const PhantomConfig& cfg, std::uint64_t seed);

struct LesionedImage {
  Image2D image;
  BinaryMask lesion;
};

/// Adds one smooth-edged elliptical lesion whose whole support lies inside
/// the brain. Pixels outside the support are left untouched.
LesionedImage inject_lesion(const Image2D& img, const BinaryMask& brain,
                            const PhantomConfig& cfg, std::uint64_t seed);

/// Synthetic stand-in for a trained denoiser: ignores its noised input and
/// returns the known healthy image plus a smooth, partly mirror-symmetric bias
/// field and white noise, both confined to the brain and drawn from the call
/// seed. The bias fields live in a fixed low-order cosine basis, so the
/// imperfections of a stack are strongly correlated across pixels.
class OracleReconstructor final : public diffusion::Reconstructor {
 public:
  OracleReconstructor(Image2D healthy, BinaryMask brain, PerturbationConfig pert);

  Image2D reconstruct(const Image2D& xt, int t, const diffusion::NoiseSchedule& sched,
                      std::uint64_t seed) const override;
  bool reentrant() const noexcept override { return true; }

  const Image2D& healthy() const noexcept { return healthy_; }
  /// Number of cosine modes spanning the bias fields.
  std::size_t bias_rank() const noexcept { return basis_.size(); }

 private:
  Image2D healthy_;
  BinaryMask brain_;
  PerturbationConfig pert_;
  std::vector<Image2D> basis_;
  double coef_scale_ = 0.0;
};

std::shared_ptr<const OracleReconstructor> make_oracle_reconstructor(
    const Image2D& healthy, const BinaryMask& brain, const PerturbationConfig& pert);

struct PhantomCase {
  std::uint64_t seed;
  Image2D healthy;
  BinaryMask brain;
  Image2D image;  // lesioned input
  BinaryMask lesion;
  std::shared_ptr<const OracleReconstructor> reconstructor;
};

/// One case from its own seed; gen_dataset uses derive_seed(seed, i) for case i.
PhantomCase gen_case(const PhantomConfig& cfg, const PerturbationConfig& pert,
                     std::uint64_t case_seed);

std::vector<PhantomCase> gen_dataset(const PhantomConfig& cfg, const PerturbationConfig& pert,
                                     std::size_t n_cases, std::uint64_t seed);

/// K registered healthy phantoms (image i from derive_seed(seed, i)), the
/// reference set of the population covariance baseline.
ReconstructionStack gen_population(const PhantomConfig& cfg, std::size_t k,
                                   std::uint64_t seed);

}  // namespace uadmhd::phantom

#endif  // UADMHD_PHANTOM_HPP_
