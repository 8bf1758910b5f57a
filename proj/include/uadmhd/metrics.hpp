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

#ifndef UADMHD_METRICS_HPP_
#define UADMHD_METRICS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>

#include "uadmhd/volume.hpp"

namespace uadmhd::metrics {

/// 2|A and B| / (|A| + |B|); 1 when both are empty.
double dice(const BinaryMask& pred, const BinaryMask& gt);
double dice(std::span<const std::uint8_t> pred, std::span<const std::uint8_t> gt);

enum class SweepMode { kExact, kQuantile };

struct BestDice {
  double dice = 0.0;
  /// binarize(scores, threshold) reproduces the maximizing segmentation.
  double threshold = 0.0;
  /// Set when there were no positive labels; dice is then 1 by convention
  /// and threshold is +inf (predict nothing).
  bool no_positives = false;
};

/// Best Dice over thresholds. Exact mode sweeps every distinct score; quantile
/// mode tries 1001 evenly spaced score quantiles. Ties go to the lowest threshold.
BestDice best_dice(std::span<const double> scores, std::span<const std::uint8_t> labels,
                   SweepMode mode = SweepMode::kExact);
BestDice best_dice(const Image2D& scores, const BinaryMask& gt,
                   SweepMode mode = SweepMode::kExact);

/// Step-wise average precision, sum over cuts of (R_i - R_{i-1}) * P_i, with
/// equal scores grouped into one cut. Throws UndefinedMetricError if no positives.
double auprc(std::span<const double> scores, std::span<const std::uint8_t> labels);

/// Two-sided two-sample permutation test on |mean(a) - mean(b)|.
/// p = (1 + #{permuted >= observed}) / (1 + rounds).
double permutation_test(std::span<const double> a, std::span<const double> b,
                        std::size_t rounds, std::uint64_t seed);

/// Paired variant: random sign flips of a_i - b_i, statistic |mean(diff)|.
double paired_permutation_test(std::span<const double> a, std::span<const double> b,
                               std::size_t rounds, std::uint64_t seed);

struct EvalResult {
  double auprc = 0.0;
  double dice_best = 0.0;
  double dice_threshold = 0.0;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
};

/// AUPRC and exact best Dice over the voxels selected by `eval_mask`
/// (all voxels when the mask is empty).
EvalResult evaluate(std::span<const double> scores, std::span<const std::uint8_t> labels,
                    std::span<const std::uint8_t> eval_mask = {});

}  // namespace uadmhd::metrics

#endif  // UADMHD_METRICS_HPP_
