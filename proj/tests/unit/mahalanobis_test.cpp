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
#include <vector>

#include "test_support.hpp"
#include "uadmhd/errors.hpp"
#include "uadmhd/mahalanobis.hpp"
#include "uadmhd/pseudostats.hpp"

namespace uadmhd {
namespace {

using testing::random_image;
using testing::random_stack;
using testing::rel_diff;

TEST(SummarizeTest, MatchesNaiveMoments) {
  SplitMix64 rng(21);
  const auto stack = random_stack(5, 6, 7, rng, 0.3);
  const auto dist = summarize(stack);
  ASSERT_EQ(dist.n(), 7u);
  ASSERT_EQ(dist.pixels(), 30u);
  for (std::size_t k = 0; k < 30; ++k) {
    long double m = 0.0L;
    for (std::size_t i = 0; i < 7; ++i) m += stack[i].values()[k];
    m /= 7.0L;
    long double v = 0.0L;
    for (std::size_t i = 0; i < 7; ++i) {
      const long double e = stack[i].values()[k] - m;
      v += e * e;
    }
    v /= 6.0L;
    EXPECT_NEAR(dist.mean().values()[k], static_cast<double>(m), 1e-14);
    EXPECT_NEAR(dist.variance().values()[k], static_cast<double>(v), 1e-14);
    double col_sum = 0.0;
    for (std::size_t i = 0; i < 7; ++i) {
      EXPECT_NEAR(dist.column(i)[k], stack[i].values()[k] - static_cast<double>(m), 1e-14);
      col_sum += dist.column(i)[k];
    }
    EXPECT_NEAR(col_sum, 0.0, 1e-13);
  }
}

TEST(SummarizeTest, NeedsTwoSamples) {
  EXPECT_THROW(summarize(ReconstructionStack({Image2D(2, 2)})), InsufficientSamplesError);
}

TEST(SummarizeTest, IdenticalImagesGiveZeroVariance) {
  const Image2D img(3, 3, 0.25);
  const auto dist = summarize(ReconstructionStack({img, img, img}));
  for (double v : dist.variance().values()) EXPECT_EQ(v, 0.0);
}

namespace mhd = mahalanobis;

// Independent dense reference: Gauss-Jordan with partial pivoting in long double.
std::vector<long double> dense_solve(const PseudoHealthyDistribution& dist,
                                     const std::vector<double>& d, double lambda) {
  const std::size_t n = dist.pixels();
  std::vector<long double> a(n * (n + 1));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      long double s = 0.0L;
      for (std::size_t i = 0; i < dist.n(); ++i) {
        s += static_cast<long double>(dist.column(i)[r]) * dist.column(i)[c];
      }
      a[r * (n + 1) + c] = s / static_cast<long double>(dist.n() - 1) + (r == c ? lambda : 0.0);
    }
    a[r * (n + 1) + n] = d[r];
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * (n + 1) + col]) > std::abs(a[piv * (n + 1) + col])) piv = r;
    }
    for (std::size_t c = 0; c <= n; ++c) std::swap(a[col * (n + 1) + c], a[piv * (n + 1) + c]);
    const long double p = a[col * (n + 1) + col];
    for (std::size_t c = 0; c <= n; ++c) a[col * (n + 1) + c] /= p;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const long double f = a[r * (n + 1) + col];
      if (f == 0.0L) continue;
      for (std::size_t c = 0; c <= n; ++c) a[r * (n + 1) + c] -= f * a[col * (n + 1) + c];
    }
  }
  std::vector<long double> v(n);
  for (std::size_t r = 0; r < n; ++r) v[r] = a[r * (n + 1) + n];
  return v;
}

std::vector<double> deviation(const PseudoHealthyDistribution& dist, const Image2D& x) {
  std::vector<double> d(x.size());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = x.values()[k] - dist.mean().values()[k];
  return d;
}

TEST(MahalanobisTest, DiagonalClosedForm) {
  SplitMix64 rng(7);
  const auto dist = summarize(random_stack(4, 4, 6, rng));
  const Image2D x = random_image(4, 4, rng);
  const auto r = mhd::mhd_diag_map(dist, x, 1e-3);
  double total = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dk = x.values()[k] - dist.mean().values()[k];
    const double expect = std::abs(dk) / std::sqrt(dist.variance().values()[k] + 1e-3);
    EXPECT_NEAR(r.map.values()[k], expect, 1e-12 * expect + 1e-15);
    total += expect * expect;
  }
  EXPECT_NEAR(r.scalar, std::sqrt(total), 1e-12 * std::sqrt(total));
  EXPECT_EQ(r.lambda, 1e-3);
}

TEST(MahalanobisTest, WoodburyMatchesIndependentDenseSolve) {
  SplitMix64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t h = 1 + rng.below(6), w = 1 + rng.below(6);
    const std::size_t n = 2 + rng.below(12);  // includes N > D
    const double lambda = std::pow(10.0, -1.0 - 5.0 * rng.uniform());
    const auto dist = summarize(random_stack(h, w, n, rng, 0.05 + rng.uniform()));
    const Image2D x = random_image(h, w, rng);
    const auto d = deviation(dist, x);
    const auto v = mhd::woodbury_solve(dist, d, lambda);
    const auto ref = dense_solve(dist, d, lambda);
    long double q = 0.0L;
    for (std::size_t k = 0; k < d.size(); ++k) q += ref[k] * d[k];
    const auto full = mhd::mhd_full_map(dist, x, lambda);
    EXPECT_LT(rel_diff(full.scalar, std::sqrt(static_cast<double>(q))), 1e-7)
        << "trial " << trial;
    for (std::size_t k = 0; k < d.size(); ++k) {
      EXPECT_NEAR(v[k], static_cast<double>(ref[k]),
                  1e-7 * std::abs(static_cast<double>(ref[k])) + 1e-9 * std::sqrt(static_cast<double>(q)) / std::sqrt(lambda));
    }
  }
}

TEST(MahalanobisTest, DenseOracleAgreesWithFullPath) {
  SplitMix64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const auto dist = summarize(random_stack(8, 8, 10, rng));
    const Image2D x = random_image(8, 8, rng);
    const auto a = mhd::mhd_full_map(dist, x);
    const auto b = mhd::dense_mhd_oracle(dist, x);
    EXPECT_LT(rel_diff(a.scalar, b.scalar), 1e-6);
  }
  const auto big = summarize(random_stack(65, 64, 2, rng));
  EXPECT_THROW(mhd::dense_mhd_oracle(big, Image2D(65, 64)), ParameterError);
}

TEST(MahalanobisTest, ZeroAtMean) {
  SplitMix64 rng(10);
  const auto dist = summarize(random_stack(5, 5, 4, rng));
  for (const auto& r : {mhd::mhd_diag_map(dist, dist.mean()), mhd::mhd_full_map(dist, dist.mean())}) {
    EXPECT_EQ(r.scalar, 0.0);
    for (double v : r.map.values()) EXPECT_EQ(v, 0.0);
  }
}

TEST(MahalanobisTest, ContributionsSumToSquaredDistance) {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto dist = summarize(random_stack(6, 7, 2 + rng.below(10), rng));
    const Image2D x = random_image(6, 7, rng);
    for (const auto& r : {mhd::mhd_diag_map(dist, x), mhd::mhd_full_map(dist, x)}) {
      double sum = 0.0;
      for (double c : r.contributions) sum += c;
      EXPECT_LT(rel_diff(sum, r.scalar * r.scalar), 1e-9);
    }
  }
}

TEST(MahalanobisTest, FullPathContributionsMayBeNegative) {
  // Strongly correlated pixels with a deviation against the correlation:
  // individual d_k v_k terms go negative and the map clamps them to zero.
  std::vector<Image2D> imgs;
  for (int i = 0; i < 6; ++i) {
    const double a = static_cast<double>(i) - 2.5;
    imgs.emplace_back(1, 2, std::vector<double>{a, a + 0.01 * (i % 2 ? 1 : -1)});
  }
  const auto dist = summarize(ReconstructionStack(std::move(imgs)));
  const Image2D x(1, 2, std::vector<double>{1.0, 0.2});
  const auto r = mhd::mhd_full_map(dist, x, 1e-5);
  const bool any_negative = r.contributions[0] < 0.0 || r.contributions[1] < 0.0;
  EXPECT_TRUE(any_negative);
  for (std::size_t k = 0; k < 2; ++k) {
    if (r.contributions[k] < 0.0) EXPECT_EQ(r.map.values()[k], 0.0);
  }
  EXPECT_GT(r.scalar, 0.0);
}

TEST(MahalanobisTest, DiagonalCovarianceMakesPathsAgree) {
  const auto stack = testing::helmert_stack({0.1, 0.5, -0.2, 0.9}, {0.3, 0.05, 0.2, 1.0}, 5, 2);
  const auto dist = summarize(stack);
  const auto full_dist = dist;
  const Image2D x(2, 2, std::vector<double>{0.7, 0.45, 0.1, 2.0});
  const auto a = mhd::mhd_diag_map(dist, x);
  const auto b = mhd::mhd_full_map(full_dist, x);
  EXPECT_NEAR(a.scalar, b.scalar, 1e-8);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(a.map.values()[k], b.map.values()[k], 1e-8);
}

TEST(MahalanobisTest, JointScalingInvariance) {
  SplitMix64 rng(13);
  const auto stack = random_stack(5, 4, 8, rng);
  const Image2D x = random_image(5, 4, rng);
  const double lambda = 1e-3;
  const auto base_full = mhd::mhd_full_map(summarize(stack), x, lambda);
  const auto base_diag = mhd::mhd_diag_map(summarize(stack), x, lambda);
  for (double k : {0.1, 3.0, 100.0}) {
    std::vector<Image2D> scaled;
    for (const auto& img : stack.images()) {
      Image2D s = img;
      for (double& v : s.values()) v *= k;
      scaled.push_back(std::move(s));
    }
    Image2D xs = x;
    for (double& v : xs.values()) v *= k;
    const auto dist = summarize(ReconstructionStack(std::move(scaled)));
    const auto full = mhd::mhd_full_map(dist, xs, k * k * lambda);
    const auto diag = mhd::mhd_diag_map(dist, xs, k * k * lambda);
    EXPECT_LT(rel_diff(full.scalar, base_full.scalar), 1e-9);
    EXPECT_LT(rel_diff(diag.scalar, base_diag.scalar), 1e-9);
  }
}

TEST(MahalanobisTest, FullNeverExceedsLambdaOnlyBound) {
  // Sigma + lambda I >= lambda I, so MHD^2 <= |d|^2 / lambda.
  SplitMix64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const auto dist = summarize(random_stack(4, 4, 5, rng));
    const Image2D x = random_image(4, 4, rng);
    const double lambda = 0.01;
    const auto d = deviation(dist, x);
    double norm2 = 0.0;
    for (double v : d) norm2 += v * v;
    EXPECT_LE(mhd::mhd_full_map(dist, x, lambda).scalar, std::sqrt(norm2 / lambda) * (1 + 1e-12));
  }
}

TEST(MahalanobisTest, RejectsBadInput) {
  SplitMix64 rng(15);
  const auto dist = summarize(random_stack(3, 3, 3, rng));
  EXPECT_THROW(mhd::mhd_full_map(dist, Image2D(3, 3), 0.0), ParameterError);
  EXPECT_THROW(mhd::mhd_diag_map(dist, Image2D(3, 3), -1.0), ParameterError);
  EXPECT_THROW(mhd::mhd_full_map(dist, Image2D(3, 4)), DimensionError);
  EXPECT_THROW(mhd::woodbury_solve(dist, std::vector<double>(5), 1e-5), DimensionError);
}

TEST(MahalanobisTest, SmoothingIsGaussianFilterOfMap) {
  SplitMix64 rng(16);
  const auto dist = summarize(random_stack(9, 9, 4, rng));
  const auto r = mhd::mhd_full_map(dist, random_image(9, 9, rng));
  EXPECT_EQ(mhd::smooth_mhd(r, 1.0), gaussian_filter(r.map, 1.0));
}

}  // namespace
}  // namespace uadmhd
