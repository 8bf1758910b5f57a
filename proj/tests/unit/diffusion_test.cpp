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
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "test_support.hpp"
#include "uadmhd/diffusion.hpp"
#include "uadmhd/errors.hpp"

namespace uadmhd::diffusion {
namespace {

using testing::random_image;

TEST(ScheduleTest, LinearEndpoints) {
  const auto s = make_linear_schedule();
  EXPECT_EQ(s.t_max(), 1000);
  EXPECT_DOUBLE_EQ(s.beta(1), 1e-4);
  EXPECT_DOUBLE_EQ(s.beta(1000), 0.02);
  EXPECT_EQ(s.alpha_bar(0), 1.0);
  EXPECT_THROW(s.beta(0), ParameterError);
  EXPECT_THROW(s.alpha_bar(1001), ParameterError);
}

TEST(ScheduleTest, AlphaBarMatchesExtendedPrecisionProduct) {
  const auto s = make_linear_schedule();
  long double prod = 1.0L;
  for (int t = 1; t <= 1000; ++t) {
    const long double beta = 1e-4L + (0.02L - 1e-4L) * static_cast<long double>(t - 1) / 999.0L;
    prod *= 1.0L - beta;
    EXPECT_NEAR(s.alpha_bar(t), static_cast<double>(prod), 1e-13 * static_cast<double>(prod) + 1e-300)
        << "t=" << t;
  }
}

TEST(ScheduleTest, AlphaBarStrictlyDecreasing) {
  const auto s = make_linear_schedule(50, 1e-3, 0.1);
  for (int t = 1; t <= 50; ++t) {
    EXPECT_LT(s.alpha_bar(t), s.alpha_bar(t - 1));
    EXPECT_GT(s.alpha_bar(t), 0.0);
  }
}

TEST(ScheduleTest, PosteriorVariance) {
  const auto s = make_linear_schedule();
  for (int t : {2, 10, 500, 1000}) {
    const double expect =
        s.beta(t) * (1.0 - s.alpha_bar(t - 1)) / (1.0 - s.alpha_bar(t));
    EXPECT_NEAR(s.posterior_variance(t), expect, 1e-15);
  }
}

TEST(ScheduleTest, RejectsBadParameters) {
  EXPECT_THROW(make_linear_schedule(0), ParameterError);
  EXPECT_THROW(make_linear_schedule(10, 0.0, 0.1), ParameterError);
  EXPECT_THROW(make_linear_schedule(10, 0.2, 0.1), ParameterError);
  EXPECT_THROW(NoiseSchedule({0.1, 1.0}), ParameterError);
  EXPECT_NO_THROW(make_linear_schedule(1));
}

TEST(ForwardNoiseTest, ClosedForm) {
  SplitMix64 rng(1);
  const auto s = make_linear_schedule();
  const Image2D x0 = random_image(6, 5, rng);
  const Image2D eps = random_image(6, 5, rng);
  const Image2D xt = forward_noise(x0, 300, s, eps);
  const double a = s.alpha_bar(300);
  for (std::size_t k = 0; k < xt.size(); ++k) {
    EXPECT_NEAR(xt.values()[k], std::sqrt(a) * x0.values()[k] + std::sqrt(1 - a) * eps.values()[k],
                1e-15);
  }
  EXPECT_THROW(forward_noise(x0, 0, s, eps), ParameterError);
  EXPECT_THROW(forward_noise(x0, 1, s, Image2D(5, 6)), DimensionError);
}

TEST(ForwardNoiseTest, EstimateX0InvertsWithTrueNoise) {
  SplitMix64 rng(2);
  const auto s = make_linear_schedule();
  for (int t : {1, 37, 500, 999}) {
    const Image2D x0 = random_image(4, 4, rng);
    const Image2D eps = random_image(4, 4, rng);
    const Image2D back = estimate_x0(forward_noise(x0, t, s, eps), t, eps, s);
    for (std::size_t k = 0; k < x0.size(); ++k) {
      EXPECT_NEAR(back.values()[k], x0.values()[k], 1e-9);
    }
  }
}

TEST(DenoiseStepTest, PosteriorMeanPlusNoise) {
  SplitMix64 rng(3);
  const auto s = make_linear_schedule();
  const Image2D xt = random_image(3, 3, rng);
  const Image2D e = random_image(3, 3, rng);
  const Image2D z = random_image(3, 3, rng);
  const int t = 400;
  const Image2D out = denoise_step(xt, t, e, s, z);
  const double alpha = 1.0 - s.beta(t);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double mean = (xt.values()[k] - s.beta(t) / std::sqrt(1 - s.alpha_bar(t)) * e.values()[k]) /
                        std::sqrt(alpha);
    EXPECT_NEAR(out.values()[k], mean + std::sqrt(s.posterior_variance(t)) * z.values()[k], 1e-12);
  }
  EXPECT_THROW(denoise_step(xt, t, e, s, std::nullopt), ParameterError);
  EXPECT_NO_THROW(denoise_step(xt, 1, e, s, std::nullopt));
}

TEST(SimpleLossTest, SumOfSquares) {
  const Image2D a(1, 3, std::vector<double>{1, 2, 3});
  const Image2D b(1, 3, std::vector<double>{1, 0, 6});
  EXPECT_DOUBLE_EQ(simple_loss(a, b), 13.0);
  EXPECT_EQ(simple_loss(a, a), 0.0);
}

TEST(NoiseTest, GaussianMoments) {
  const Image2D g = gaussian_noise(128, 128, 5);
  double m = 0.0, v = 0.0;
  for (double x : g.values()) m += x;
  m /= static_cast<double>(g.size());
  for (double x : g.values()) v += (x - m) * (x - m);
  v /= static_cast<double>(g.size());
  EXPECT_NEAR(m, 0.0, 0.03);
  EXPECT_NEAR(v, 1.0, 0.05);
  EXPECT_EQ(gaussian_noise(8, 8, 5), gaussian_noise(8, 8, 5));
  EXPECT_NE(gaussian_noise(8, 8, 5), gaussian_noise(8, 8, 6));
}

TEST(NoiseTest, SimplexStandardizedAndSeeded) {
  SimplexParams p;
  p.seed = 17;
  const Image2D f = simplex_noise(48, 40, p);
  double m = 0.0, v = 0.0;
  for (double x : f.values()) m += x;
  m /= static_cast<double>(f.size());
  for (double x : f.values()) v += (x - m) * (x - m);
  v /= static_cast<double>(f.size());
  EXPECT_NEAR(m, 0.0, 1e-12);
  EXPECT_NEAR(v, 1.0, 1e-12);
  EXPECT_EQ(simplex_noise(48, 40, p), f);
  p.seed = 18;
  EXPECT_NE(simplex_noise(48, 40, p), f);
}

TEST(NoiseTest, SimplexRejectsBadParameters) {
  SimplexParams p;
  p.octaves = 0;
  EXPECT_THROW(simplex_noise(4, 4, p), ParameterError);
  p = {};
  p.persistence = 1.5;
  EXPECT_THROW(simplex_noise(4, 4, p), ParameterError);
  p = {};
  p.lacunarity = 1.0;
  EXPECT_THROW(simplex_noise(4, 4, p), ParameterError);
  p = {};
  p.base_frequency = 0.0;
  EXPECT_THROW(simplex_noise(4, 4, p), ParameterError);
}

// Power spectrum by direct DFT, radially binned in cycles per pixel.
std::vector<double> radial_power(const Image2D& f, int bins) {
  const int n = static_cast<int>(f.height());
  std::vector<double> power(bins, 0.0);
  std::vector<int> counts(bins, 0);
  const double two_pi = 2.0 * std::numbers::pi;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      std::complex<double> acc = 0.0;
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
          acc += f(r, c) * std::polar(1.0, -two_pi * (u * r + v * c) / n);
        }
      }
      const double fu = (u <= n / 2 ? u : u - n) / static_cast<double>(n);
      const double fv = (v <= n / 2 ? v : v - n) / static_cast<double>(n);
      const double radius = std::sqrt(fu * fu + fv * fv);
      const int b = static_cast<int>(radius / 0.5 * bins);
      if (b == 0 && u == 0 && v == 0) continue;
      if (b >= bins) continue;
      power[b] += std::norm(acc);
      ++counts[b];
    }
  }
  for (int b = 0; b < bins; ++b) power[b] /= std::max(counts[b], 1);
  return power;
}

TEST(NoiseTest, SimplexSpectrumIsLowPass) {
  // Average over seeds; white noise would give a flat spectrum.
  const int n = 48, bins = 8;
  std::vector<double> simplex(bins, 0.0), white(bins, 0.0);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    SimplexParams p;
    p.seed = seed;
    const auto ps = radial_power(simplex_noise(n, n, p), bins);
    const auto pw = radial_power(gaussian_noise(n, n, seed), bins);
    for (int b = 0; b < bins; ++b) {
      simplex[b] += ps[b];
      white[b] += pw[b];
    }
  }
  EXPECT_GT(simplex[0], 10.0 * simplex[bins - 1]);
  for (int b = 1; b < bins; ++b) EXPECT_LT(simplex[b], 1.05 * simplex[b - 1]) << "bin " << b;
  EXPECT_LT(white[0], 3.0 * white[bins - 1]);
}

class RecordingReconstructor : public Reconstructor {
 public:
  Image2D reconstruct(const Image2D& xt, int, const NoiseSchedule&,
                      std::uint64_t seed) const override {
    Image2D out = xt;
    out(0, 0) = static_cast<double>(seed % 1000003);
    return out;
  }
};

class FailingReconstructor : public Reconstructor {
 public:
  Image2D reconstruct(const Image2D& xt, int, const NoiseSchedule&,
                      std::uint64_t) const override {
    if (++calls_ == 3) throw std::runtime_error("boom");
    return xt;
  }
  mutable int calls_ = 0;
};

TEST(SampleStackTest, DeterministicWithDistinctSeeds) {
  SplitMix64 rng(4);
  const auto s = make_linear_schedule();
  const Image2D x0 = random_image(8, 8, rng);
  const RecordingReconstructor rec;
  const auto a = sample_stack(rec, x0, 250, 5, s, NoiseKind::kSimplex, 9);
  const auto b = sample_stack(rec, x0, 250, 5, s, NoiseKind::kSimplex, 9);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.n(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = i + 1; j < 5; ++j) EXPECT_NE(a[i], a[j]);
  }
  EXPECT_NE(sample_stack(rec, x0, 250, 5, s, NoiseKind::kSimplex, 10), a);
}

TEST(SampleStackTest, ErrorsCarryIndex) {
  const auto s = make_linear_schedule();
  const Image2D x0(4, 4, 0.5);
  FailingReconstructor rec;
  try {
    sample_stack(rec, x0, 10, 5, s, NoiseKind::kGaussian, 1);
    FAIL() << "expected ReconstructionError";
  } catch (const ReconstructionError& e) {
    EXPECT_EQ(e.index(), 2u);
  }
  EXPECT_THROW(sample_stack(RecordingReconstructor{}, x0, 10, 1, s, NoiseKind::kGaussian, 1),
               ParameterError);
  EXPECT_THROW(sample_stack(RecordingReconstructor{}, x0, 0, 3, s, NoiseKind::kGaussian, 1),
               ParameterError);
}

}  // namespace
}  // namespace uadmhd::diffusion
