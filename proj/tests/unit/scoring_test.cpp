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

#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"
#include "uadmhd/diffusion.hpp"
#include "uadmhd/errors.hpp"
#include "uadmhd/mahalanobis.hpp"
#include "uadmhd/scoring.hpp"
#include "uadmhd/ssim.hpp"

namespace uadmhd::scoring {
namespace {

using testing::random_image;
using testing::random_stack;

TEST(ScoreCaseTest, ComposesSsimAndSmoothedMahalanobis) {
  SplitMix64 rng(41);
  const auto stack = random_stack(12, 10, 6, rng, 0.05);
  const Image2D x = random_image(12, 10, rng, 0.3, 0.5);
  ScoringConfig cfg;
  cfg.lambda = 1e-4;
  cfg.mhd_smooth_sigma = 1.5;
  const auto sc = score_case(x, stack, cfg);

  const auto dist = summarize(stack);
  const Image2D sm = ssim::s_mean(x, dist.mean(), cfg.ssim);
  const auto diag = mahalanobis::mhd_diag_map(dist, x, cfg.lambda);
  const auto full = mahalanobis::mhd_full_map(dist, x, cfg.lambda);
  const Image2D gd = gaussian_filter(diag.map, 1.5);
  const Image2D gf = gaussian_filter(full.map, 1.5);
  EXPECT_EQ(sc.s_mean, sm);
  for (std::size_t k = 0; k < x.size(); ++k) {
    EXPECT_DOUBLE_EQ(sc.s_mhd.values()[k], sm.values()[k] * gd.values()[k]);
    EXPECT_DOUBLE_EQ(sc.s_smhd.values()[k], sm.values()[k] * gf.values()[k]);
  }
  EXPECT_EQ(sc.mhd_scalar_diag, diag.scalar);
  EXPECT_EQ(sc.mhd_scalar_full, full.scalar);
  EXPECT_EQ(sc.input, x);
}

TEST(ScoreCaseTest, InputEqualToEveryReconstructionScoresZero) {
  const Image2D g(6, 6, 0.4);
  const auto sc = score_case(g, ReconstructionStack({g, g, g}));
  for (double v : sc.s_mean.values()) EXPECT_NEAR(v, 0.0, 1e-12);
  for (double v : sc.s_smhd.values()) EXPECT_NEAR(v, 0.0, 1e-12);
  EXPECT_EQ(sc.mhd_scalar_full, 0.0);
}

TEST(ScoreCaseTest, ShapeMismatchAndTooFewSamples) {
  SplitMix64 rng(42);
  EXPECT_THROW(score_case(Image2D(3, 3), random_stack(3, 4, 3, rng)), DimensionError);
  EXPECT_THROW(score_case(Image2D(3, 3), ReconstructionStack({Image2D(3, 3)})),
               InsufficientSamplesError);
}

class ShiftReconstructor : public diffusion::Reconstructor {
 public:
  Image2D reconstruct(const Image2D& xt, int t, const diffusion::NoiseSchedule& s,
                      std::uint64_t seed) const override {
    Image2D out(xt.height(), xt.width(), 0.5);
    SplitMix64 rng(seed);
    for (double& v : out.values()) v += 0.01 * testing::normal(rng);
    (void)t;
    (void)s;
    return out;
  }
};

TEST(ScoreCaseTest, WithReconstructorEqualsExplicitStack) {
  SplitMix64 rng(43);
  const Image2D x = random_image(8, 8, rng, 0.1, 0.5);
  const auto sched = diffusion::make_linear_schedule();
  ScoringConfig cfg;
  cfg.n_reconstructions = 4;
  cfg.seed = 77;
  const ShiftReconstructor rec;
  const auto a = score_with_reconstructor(x, rec, sched, cfg);
  const auto stack = diffusion::sample_stack(rec, x, cfg.t_test, 4, sched, cfg.noise_kind, 77);
  const auto b = score_case(x, stack, cfg);
  EXPECT_EQ(a.s_smhd, b.s_smhd);
  EXPECT_EQ(a.s_mhd, b.s_mhd);
}

TEST(PopulationScoreTest, SmoothedFullMahalanobis) {
  SplitMix64 rng(44);
  const auto pop = random_stack(7, 7, 5, rng);
  const Image2D x = random_image(7, 7, rng);
  const auto cm = population_cm_score(x, pop);
  const auto full = mahalanobis::mhd_full_map(summarize(pop), x, 1e-5);
  EXPECT_EQ(cm, gaussian_filter(full.map, 1.0));
}

TEST(BinarizeTest, StrictlyAboveThreshold) {
  const Image2D m(1, 4, std::vector<double>{0.1, 0.5, 0.5000001, 2.0});
  const auto b = binarize(m, 0.5);
  EXPECT_EQ(b.bits()[0], 0);
  EXPECT_EQ(b.bits()[1], 0);
  EXPECT_EQ(b.bits()[2], 1);
  EXPECT_EQ(b.bits()[3], 1);
}

TEST(ScoreVolumeTest, SliceWise) {
  SplitMix64 rng(45);
  std::vector<Image2D> slices;
  std::vector<ReconstructionStack> stacks;
  for (int s = 0; s < 3; ++s) {
    slices.push_back(random_image(5, 5, rng));
    stacks.push_back(random_stack(5, 5, 4, rng));
  }
  const Volume3D vol(slices);
  const auto vs = score_volume(vol, stacks);
  for (std::size_t s = 0; s < 3; ++s) {
    EXPECT_EQ(vs.s_smhd.slice(s), score_case(slices[s], stacks[s]).s_smhd);
  }
  stacks.pop_back();
  EXPECT_THROW(score_volume(vol, stacks), DimensionError);
}

}  // namespace
}  // namespace uadmhd::scoring
