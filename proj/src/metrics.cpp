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

#include "uadmhd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "uadmhd/errors.hpp"
#include "uadmhd/random.hpp"

namespace uadmhd::metrics {

namespace {

void check_sizes(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": length " + std::to_string(a) +
                         " does not match " + std::to_string(b));
  }
}

// Indices ordered by descending score; stable so equal scores keep input order.
std::vector<std::size_t> descending_order(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return scores[i] > scores[j]; });
  return order;
}

// A threshold t with lower < t < upper under strict '>' binarization, so that
// every score >= upper is kept and every score <= lower is dropped.
double threshold_between(double lower, double upper) {
  const double mid = lower + (upper - lower) / 2.0;
  return mid < upper ? mid : lower;
}

double dice_from_counts(std::size_t tp, std::size_t predicted, std::size_t positives) {
  const std::size_t denom = predicted + positives;
  return denom == 0 ? 1.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

double abs_mean_diff(std::span<const double> pooled, std::size_t na) {
  double sa = 0.0;
  double sb = 0.0;
  for (std::size_t i = 0; i < pooled.size(); ++i) (i < na ? sa : sb) += pooled[i];
  return std::abs(sa / static_cast<double>(na) -
                  sb / static_cast<double>(pooled.size() - na));
}

bool at_least(double stat, double observed) {
  return stat >= observed - 1e-12 * std::max(1.0, std::abs(observed));
}

}  // namespace

double dice(std::span<const std::uint8_t> pred, std::span<const std::uint8_t> gt) {
  check_sizes(pred.size(), gt.size(), "dice");
  std::size_t inter = 0, np = 0, ng = 0;
  for (std::size_t k = 0; k < pred.size(); ++k) {
    const bool p = pred[k] != 0;
    const bool g = gt[k] != 0;
    inter += p && g;
    np += p;
    ng += g;
  }
  return dice_from_counts(inter, np, ng);
}

double dice(const BinaryMask& pred, const BinaryMask& gt) {
  if (pred.height() != gt.height() || pred.width() != gt.width()) {
    throw DimensionError("dice: mask shapes differ");
  }
  return dice(pred.bits(), gt.bits());
}

BestDice best_dice(std::span<const double> scores, std::span<const std::uint8_t> labels,
                   SweepMode mode) {
  check_sizes(scores.size(), labels.size(), "best_dice");
  const std::size_t positives = static_cast<std::size_t>(
      std::count_if(labels.begin(), labels.end(), [](std::uint8_t l) { return l != 0; }));
  if (positives == 0 || scores.empty()) {
    return BestDice{1.0, std::numeric_limits<double>::infinity(), true};
  }

  const auto order = descending_order(scores);
  BestDice best{0.0, std::numeric_limits<double>::infinity(), false};

  if (mode == SweepMode::kExact) {
    std::size_t tp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
      const double s = scores[order[i]];
      while (i < order.size() && scores[order[i]] == s) tp += labels[order[i++]] != 0;
      const double d = dice_from_counts(tp, i, positives);
      const double thr = i < order.size() ? threshold_between(scores[order[i]], s)
                                          : std::nextafter(s, -std::numeric_limits<double>::infinity());
      if (d >= best.dice) best = BestDice{d, thr, false};
    }
    return best;
  }

  // Quantile sweep: prefix counts over the descending order answer
  // "how many scores >= q" by binary search.
  std::vector<std::size_t> tp_prefix(order.size() + 1, 0);
  std::vector<double> sorted(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted[i] = scores[order[i]];
    tp_prefix[i + 1] = tp_prefix[i] + (labels[order[i]] != 0);
  }
  constexpr std::size_t kSteps = 1000;
  const std::size_t v = sorted.size();
  // j = 0 is the largest score, j = kSteps the smallest; later (lower) wins ties.
  for (std::size_t j = 0; j <= kSteps; ++j) {
    const std::size_t idx = (v - 1) - (j * (v - 1)) / kSteps;
    const double q = sorted[idx];
    const auto kept = static_cast<std::size_t>(
        std::upper_bound(sorted.begin(), sorted.end(), q, std::greater<>()) - sorted.begin());
    const double d = dice_from_counts(tp_prefix[kept], kept, positives);
    if (d >= best.dice) {
      best = BestDice{d, std::nextafter(q, -std::numeric_limits<double>::infinity()), false};
    }
  }
  return best;
}

BestDice best_dice(const Image2D& scores, const BinaryMask& gt, SweepMode mode) {
  if (!gt.matches(scores)) throw DimensionError("best_dice: mask shape differs from scores");
  return best_dice(scores.values(), gt.bits(), mode);
}

double auprc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  check_sizes(scores.size(), labels.size(), "auprc");
  const std::size_t positives = static_cast<std::size_t>(
      std::count_if(labels.begin(), labels.end(), [](std::uint8_t l) { return l != 0; }));
  if (positives == 0) throw UndefinedMetricError("AUPRC is undefined without positive labels");

  const auto order = descending_order(scores);
  double area = 0.0;
  double prev_recall = 0.0;
  std::size_t tp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) tp += labels[order[i++]] != 0;
    const double recall = static_cast<double>(tp) / static_cast<double>(positives);
    const double precision = static_cast<double>(tp) / static_cast<double>(i);
    area += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  return area;
}

double permutation_test(std::span<const double> a, std::span<const double> b,
                        std::size_t rounds, std::uint64_t seed) {
  if (a.empty() || b.empty()) throw ParameterError("permutation_test needs nonempty samples");
  if (rounds < 1) throw ParameterError("permutation_test needs at least one round");

  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const double observed = abs_mean_diff(pooled, a.size());

  std::size_t hits = 0;
  std::vector<double> work(pooled.size());
  for (std::size_t r = 0; r < rounds; ++r) {
    SplitMix64 rng(derive_seed(seed, r));
    std::copy(pooled.begin(), pooled.end(), work.begin());
    for (std::size_t i = work.size() - 1; i > 0; --i) {
      std::swap(work[i], work[rng.below(i + 1)]);
    }
    hits += at_least(abs_mean_diff(work, a.size()), observed);
  }
  return static_cast<double>(1 + hits) / static_cast<double>(1 + rounds);
}

double paired_permutation_test(std::span<const double> a, std::span<const double> b,
                               std::size_t rounds, std::uint64_t seed) {
  if (a.empty()) throw ParameterError("paired_permutation_test needs nonempty samples");
  check_sizes(a.size(), b.size(), "paired_permutation_test");
  if (rounds < 1) throw ParameterError("paired_permutation_test needs at least one round");

  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  const double n = static_cast<double>(diff.size());
  const double observed = std::abs(std::accumulate(diff.begin(), diff.end(), 0.0) / n);

  std::size_t hits = 0;
  for (std::size_t r = 0; r < rounds; ++r) {
    SplitMix64 rng(derive_seed(seed, r));
    double sum = 0.0;
    for (std::size_t i = 0; i < diff.size(); i += 64) {
      std::uint64_t signs = rng();
      for (std::size_t j = i; j < std::min(diff.size(), i + 64); ++j, signs >>= 1) {
        sum += (signs & 1) ? -diff[j] : diff[j];
      }
    }
    hits += at_least(std::abs(sum / n), observed);
  }
  return static_cast<double>(1 + hits) / static_cast<double>(1 + rounds);
}

EvalResult evaluate(std::span<const double> scores, std::span<const std::uint8_t> labels,
                    std::span<const std::uint8_t> eval_mask) {
  check_sizes(scores.size(), labels.size(), "evaluate");
  std::vector<double> s;
  std::vector<std::uint8_t> l;
  if (eval_mask.empty()) {
    s.assign(scores.begin(), scores.end());
    l.resize(labels.size());
    std::transform(labels.begin(), labels.end(), l.begin(),
                   [](std::uint8_t v) -> std::uint8_t { return v != 0 ? 1 : 0; });
  } else {
    check_sizes(scores.size(), eval_mask.size(), "evaluate mask");
    for (std::size_t k = 0; k < scores.size(); ++k) {
      if (eval_mask[k] == 0) continue;
      s.push_back(scores[k]);
      l.push_back(labels[k] != 0 ? 1 : 0);
    }
  }
  EvalResult out;
  out.n_pos = static_cast<std::size_t>(std::count(l.begin(), l.end(), 1));
  out.n_neg = l.size() - out.n_pos;
  out.auprc = auprc(s, l);
  const auto bd = best_dice(s, l, SweepMode::kExact);
  out.dice_best = bd.dice;
  out.dice_threshold = bd.threshold;
  return out;
}

}  // namespace uadmhd::metrics
