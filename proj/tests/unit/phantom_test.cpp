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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "uadmhd/diffusion.hpp"
#include "uadmhd/errors.hpp"
#include "uadmhd/phantom.hpp"
#include "uadmhd/random.hpp"

namespace uadmhd::phantom {
namespace {

const auto kSched = diffusion::make_linear_schedule();

TEST(HealthyPhantomTest, EllipticBrainWithTexture) {
  const PhantomConfig cfg;
  const auto hp = gen_healthy(cfg, 5);
  ASSERT_EQ(hp.image.height(), 64u);
  // Ellipse area pi * a * b with semi-axes 0.8 * 32 and 0.65 * 32.
  const double area = std::numbers::pi * 0.8 * 32 * 0.65 * 32;
  EXPECT_NEAR(static_cast<double>(hp.brain.count()), area, 0.03 * area);
  double mean = 0.0;
  for (std::size_t r = 0; r < 64; ++r) {
    for (std::size_t c = 0; c < 64; ++c) {
      const double v = hp.image(r, c);
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
      if (!hp.brain(r, c)) EXPECT_EQ(v, 0.0);
      if (hp.brain(r, c)) mean += v;
    }
  }
  EXPECT_NEAR(mean / static_cast<double>(hp.brain.count()), 0.5, 0.05);
  EXPECT_EQ(gen_healthy(cfg, 5).image, hp.image);
  EXPECT_NE(gen_healthy(cfg, 6).image, hp.image);
}

TEST(HealthyPhantomTest, ValidatesConfig) {
  PhantomConfig cfg;
  cfg.size = 8;
  EXPECT_THROW(gen_healthy(cfg, 0), ParameterError);
  cfg = {};
  cfg.lesion_radius_min = 10;
  EXPECT_THROW(gen_healthy(cfg, 0), ParameterError);
  cfg = {};
  cfg.ellipse_axis_vertical = 1.5;
  EXPECT_THROW(gen_healthy(cfg, 0), ParameterError);
}

TEST(LesionTest, LesionInsideBrainAndLocal) {
  const PhantomConfig cfg;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto hp = gen_healthy(cfg, seed);
    const auto les = inject_lesion(hp.image, hp.brain, cfg, seed + 100);
    EXPECT_GT(les.lesion.count(), 10u) << "seed " << seed;
    // Outside the mask the added profile is below half its peak.
    double max_inside = 0.0, max_outside = 0.0;
    for (std::size_t r = 0; r < 64; ++r) {
      for (std::size_t c = 0; c < 64; ++c) {
        if (les.lesion(r, c)) EXPECT_TRUE(hp.brain(r, c));
        if (!hp.brain(r, c)) EXPECT_EQ(les.image(r, c), hp.image(r, c));
        const double change = std::abs(les.image(r, c) - hp.image(r, c));
        (les.lesion(r, c) ? max_inside : max_outside) =
            std::max(les.lesion(r, c) ? max_inside : max_outside, change);
      }
    }
    EXPECT_LE(max_outside, 0.5 * cfg.lesion_contrast_max + 1e-12);
    EXPECT_GT(max_inside, max_outside);
  }
}

TEST(LesionTest, LesionTooLargeForBrain) {
  PhantomConfig cfg;
  cfg.lesion_radius_min = 30;
  cfg.lesion_radius_max = 30;
  const auto hp = gen_healthy(PhantomConfig{}, 1);
  EXPECT_THROW(inject_lesion(hp.image, hp.brain, cfg, 1), GenerationError);
  EXPECT_THROW(inject_lesion(hp.image, BinaryMask(64, 64), PhantomConfig{}, 1), GenerationError);
}

TEST(OracleTest, IgnoresInputAndIsSeeded) {
  const auto hp = gen_healthy(PhantomConfig{}, 3);
  const auto rec = make_oracle_reconstructor(hp.image, hp.brain, PerturbationConfig{});
  EXPECT_TRUE(rec->reentrant());
  EXPECT_EQ(rec->bias_rank(), 6u);
  const Image2D a = rec->reconstruct(Image2D(64, 64, 0.1), 500, kSched, 11);
  const Image2D b = rec->reconstruct(Image2D(64, 64, 0.9), 20, kSched, 11);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, rec->reconstruct(Image2D(64, 64, 0.1), 500, kSched, 12));
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!hp.brain.bits()[k]) EXPECT_EQ(a.values()[k], 0.0);
  }
  EXPECT_THROW(rec->reconstruct(Image2D(32, 32), 500, kSched, 1), DimensionError);
}

TEST(OracleTest, PerturbationMagnitudes) {
  const auto hp = gen_healthy(PhantomConfig{}, 4);
  PerturbationConfig pert;
  pert.pixel_noise_sigma = 0.0;
  pert.symmetry_coupling = 0.0;
  const OracleReconstructor rec(hp.image, hp.brain, pert);
  // With no pixel noise the deviation is the bias field; its RMS over many
  // draws approaches the configured amplitude.
  double ss = 0.0;
  std::size_t n = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Image2D out = rec.reconstruct(hp.image, 1, kSched, seed);
    for (std::size_t k = 0; k < out.size(); ++k) {
      const double v = hp.image.values()[k];
      if (!hp.brain.bits()[k] || v < 0.2 || v > 0.8) continue;
      const double d = out.values()[k] - v;
      ss += d * d;
      ++n;
    }
  }
  EXPECT_NEAR(std::sqrt(ss / static_cast<double>(n)), pert.bias_amplitude, 0.2 * pert.bias_amplitude);
}

TEST(OracleTest, FullSymmetryCouplingMirrorsField) {
  const HealthyPhantom flat{Image2D(32, 32, 0.5), BinaryMask(32, 32, true)};
  PerturbationConfig pert;
  pert.pixel_noise_sigma = 0.0;
  pert.symmetry_coupling = 1.0;
  const OracleReconstructor rec(flat.image, flat.brain, pert);
  const Image2D out = rec.reconstruct(flat.image, 1, kSched, 8);
  for (std::size_t r = 0; r < 32; ++r) {
    for (std::size_t c = 0; c < 32; ++c) EXPECT_NEAR(out(r, c), out(r, 31 - c), 1e-12);
  }
}

TEST(OracleTest, ValidatesPerturbation) {
  const auto hp = gen_healthy(PhantomConfig{}, 4);
  PerturbationConfig pert;
  pert.symmetry_coupling = 2.0;
  EXPECT_THROW(OracleReconstructor(hp.image, hp.brain, pert), ParameterError);
  EXPECT_THROW(OracleReconstructor(hp.image, BinaryMask(8, 8), PerturbationConfig{}),
               DimensionError);
}

TEST(DatasetTest, CasesDerivedFromSeed) {
  const auto ds = gen_dataset(PhantomConfig{}, PerturbationConfig{}, 3, 42);
  ASSERT_EQ(ds.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(ds[i].seed, derive_seed(42, i));
    const auto again = gen_case(PhantomConfig{}, PerturbationConfig{}, ds[i].seed);
    EXPECT_EQ(again.image, ds[i].image);
    EXPECT_EQ(again.lesion, ds[i].lesion);
  }
  EXPECT_NE(ds[0].image, ds[1].image);
  EXPECT_THROW(gen_dataset(PhantomConfig{}, PerturbationConfig{}, 0, 1), ParameterError);
}

TEST(DatasetTest, PopulationIsHealthy) {
  const auto pop = gen_population(PhantomConfig{}, 4, 9);
  ASSERT_EQ(pop.n(), 4u);
  EXPECT_EQ(pop[2], gen_healthy(PhantomConfig{}, derive_seed(9, 2)).image);
  EXPECT_THROW(gen_population(PhantomConfig{}, 1, 9), ParameterError);
}

}  // namespace
}  // namespace uadmhd::phantom
