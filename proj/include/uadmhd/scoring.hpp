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

#ifndef UADMHD_SCORING_HPP_
#define UADMHD_SCORING_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "uadmhd/diffusion.hpp"
#include "uadmhd/ssim.hpp"
#include "uadmhd/volume.hpp"

namespace uadmhd::scoring {

struct ScoringConfig {
  std::size_t n_reconstructions = 10;
  int t_test = 500;
  double lambda = 1e-5;
  double mhd_smooth_sigma = 1.0;
  ssim::SsimParams ssim;
  diffusion::NoiseKind noise_kind = diffusion::NoiseKind::kSimplex;
  std::uint64_t seed = 0;
};

/// The three anomaly maps of one slice.
struct ScoredCase {
  Image2D input;
  std::optional<BinaryMask> ground_truth;
  Image2D s_mean;
  Image2D s_mhd;   // s_mean * smoothed diagonal MHD map
  Image2D s_smhd;  // s_mean * smoothed full-covariance MHD map
  double mhd_scalar_diag = 0.0;
  double mhd_scalar_full = 0.0;
};

ScoredCase score_case(const Image2D& x, const ReconstructionStack& stack,
                      const ScoringConfig& cfg = {});

/// Samples cfg.n_reconstructions reconstructions of `x` at cfg.t_test with
/// cfg.seed, then scores them.
ScoredCase score_with_reconstructor(const Image2D& x, const diffusion::Reconstructor& rec,
                                    const diffusion::NoiseSchedule& sched,
                                    const ScoringConfig& cfg = {});

/// Covariance-model baseline: smoothed full-covariance MHD of `x` against a
/// population of registered healthy images. No SSIM factor.
Image2D population_cm_score(const Image2D& x, const ReconstructionStack& healthy_set,
                            const ScoringConfig& cfg = {});

/// Pixel is set iff its value is strictly greater than `threshold`.
BinaryMask binarize(const Image2D& map, double threshold);

struct VolumeScores {
  Volume3D s_mean;
  Volume3D s_mhd;
  Volume3D s_smhd;
};

/// Slice-wise scoring of a volume; `stacks[s]` reconstructs slice s.
VolumeScores score_volume(const Volume3D& x, const std::vector<ReconstructionStack>& stacks,
                          const ScoringConfig& cfg = {});

}  // namespace uadmhd::scoring

#endif  // UADMHD_SCORING_HPP_
