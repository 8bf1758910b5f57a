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

#include "uadmhd/scoring.hpp"

#include "uadmhd/errors.hpp"
#include "uadmhd/mahalanobis.hpp"
#include "uadmhd/pseudostats.hpp"

namespace uadmhd::scoring {

namespace {

Image2D multiply(const Image2D& a, const Image2D& b) {
  Image2D out(a.height(), a.width());
  auto o = out.values();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = a.values()[k] * b.values()[k];
  return out;
}

}  // namespace

ScoredCase score_case(const Image2D& x, const ReconstructionStack& stack,
                      const ScoringConfig& cfg) {
  require_same_shape(stack[0], x, "score_case input");
  const auto dist = summarize(stack);

  Image2D sm = ssim::s_mean(x, dist.mean(), cfg.ssim);
  const auto diag = mahalanobis::mhd_diag_map(dist, x, cfg.lambda);
  const auto full = mahalanobis::mhd_full_map(dist, x, cfg.lambda);
  Image2D s_mhd = multiply(sm, mahalanobis::smooth_mhd(diag, cfg.mhd_smooth_sigma));
  Image2D s_smhd = multiply(sm, mahalanobis::smooth_mhd(full, cfg.mhd_smooth_sigma));

  return ScoredCase{x,
                    std::nullopt,
                    std::move(sm),
                    std::move(s_mhd),
                    std::move(s_smhd),
                    diag.scalar,
                    full.scalar};
}

ScoredCase score_with_reconstructor(const Image2D& x, const diffusion::Reconstructor& rec,
                                    const diffusion::NoiseSchedule& sched,
                                    const ScoringConfig& cfg) {
  const auto stack = diffusion::sample_stack(rec, x, cfg.t_test, cfg.n_reconstructions,
                                             sched, cfg.noise_kind, cfg.seed);
  return score_case(x, stack, cfg);
}

Image2D population_cm_score(const Image2D& x, const ReconstructionStack& healthy_set,
                            const ScoringConfig& cfg) {
  require_same_shape(healthy_set[0], x, "population_cm_score input");
  const auto dist = summarize(healthy_set);
  const auto full = mahalanobis::mhd_full_map(dist, x, cfg.lambda);
  return mahalanobis::smooth_mhd(full, cfg.mhd_smooth_sigma);
}

BinaryMask binarize(const Image2D& map, double threshold) {
  BinaryMask out(map.height(), map.width());
  for (std::size_t r = 0; r < map.height(); ++r) {
    for (std::size_t c = 0; c < map.width(); ++c) out.set(r, c, map(r, c) > threshold);
  }
  return out;
}

VolumeScores score_volume(const Volume3D& x, const std::vector<ReconstructionStack>& stacks,
                          const ScoringConfig& cfg) {
  if (stacks.size() != x.slices()) {
    throw DimensionError("score_volume needs one reconstruction stack per slice");
  }
  std::vector<Image2D> mean, mhd, smhd;
  for (std::size_t s = 0; s < x.slices(); ++s) {
    auto scored = score_case(x.slice(s), stacks[s], cfg);
    mean.push_back(std::move(scored.s_mean));
    mhd.push_back(std::move(scored.s_mhd));
    smhd.push_back(std::move(scored.s_smhd));
  }
  return VolumeScores{Volume3D(std::move(mean)), Volume3D(std::move(mhd)),
                      Volume3D(std::move(smhd))};
}

}  // namespace uadmhd::scoring
