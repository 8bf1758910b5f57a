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

#ifndef UADMHD_PSEUDOSTATS_HPP_
#define UADMHD_PSEUDOSTATS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "uadmhd/volume.hpp"

namespace uadmhd {

/// Pseudo-healthy distribution of one slice, summarized from N reconstructions.
///
/// The full pixel covariance is C * C^T / (N - 1) where C is the D x N matrix
/// of mean-centered reconstructions. It is never formed; only C is stored,
/// column-major by reconstruction index so that each column is one contiguous
/// flattened image.
class PseudoHealthyDistribution {
 public:
  PseudoHealthyDistribution(Image2D mean, Image2D variance, std::vector<double> centered,
                            std::size_t n);

  const Image2D& mean() const noexcept { return mean_; }
  /// Unbiased per-pixel variance (divides by N - 1).
  const Image2D& variance() const noexcept { return variance_; }

  std::size_t n() const noexcept { return n_; }
  std::size_t pixels() const noexcept { return mean_.size(); }

  /// Column i of C: flatten(x_i) - flatten(mean).
  std::span<const double> column(std::size_t i) const {
    return std::span<const double>(centered_).subspan(i * pixels(), pixels());
  }
  std::span<const double> centered() const noexcept { return centered_; }

 private:
  Image2D mean_;
  Image2D variance_;
  std::vector<double> centered_;
  std::size_t n_;
};

/// Two-pass mean, centering and variance. Throws InsufficientSamplesError for N < 2.
PseudoHealthyDistribution summarize(const ReconstructionStack& stack);

}  // namespace uadmhd

#endif  // UADMHD_PSEUDOSTATS_HPP_
