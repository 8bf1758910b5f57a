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

#include "uadmhd/pseudostats.hpp"

#include <string>

#include "uadmhd/errors.hpp"

namespace uadmhd {

PseudoHealthyDistribution::PseudoHealthyDistribution(Image2D mean, Image2D variance,
                                                     std::vector<double> centered,
                                                     std::size_t n)
    : mean_(std::move(mean)),
      variance_(std::move(variance)),
      centered_(std::move(centered)),
      n_(n) {
  require_same_shape(mean_, variance_, "variance image");
  if (n_ < 2) throw InsufficientSamplesError("pseudo-healthy distribution needs N >= 2");
  if (centered_.size() != n_ * mean_.size()) {
    throw DimensionError("centered matrix must be D x N");
  }
}

PseudoHealthyDistribution summarize(const ReconstructionStack& stack) {
  const std::size_t n = stack.n();
  if (n < 2) {
    throw InsufficientSamplesError("need at least 2 reconstructions, got " +
                                   std::to_string(n));
  }
  const std::size_t d = stack.pixels();

  std::vector<double> mean(d, 0.0);
  for (const auto& img : stack.images()) {
    const auto v = img.values();
    for (std::size_t k = 0; k < d; ++k) mean[k] += v[k];
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (double& m : mean) m *= inv_n;

  std::vector<double> centered(d * n);
  std::vector<double> variance(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = stack[i].values();
    double* col = centered.data() + i * d;
    for (std::size_t k = 0; k < d; ++k) {
      col[k] = v[k] - mean[k];
      variance[k] += col[k] * col[k];
    }
  }
  const double inv_dof = 1.0 / static_cast<double>(n - 1);
  for (double& s : variance) s *= inv_dof;

  const std::size_t h = stack.height();
  const std::size_t w = stack.width();
  return PseudoHealthyDistribution(Image2D(h, w, std::move(mean)),
                                   Image2D(h, w, std::move(variance)),
                                   std::move(centered), n);
}

}  // namespace uadmhd
