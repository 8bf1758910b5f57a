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

#ifndef UADMHD_SSIM_HPP_
#define UADMHD_SSIM_HPP_

#include "uadmhd/volume.hpp"

namespace uadmhd::ssim {

struct SsimParams {
  double kernel_sigma = 1.0;
  double data_range = 1.0;
  double c1 = 1e-4;  // (0.01 * data_range)^2
  double c2 = 9e-4;  // (0.03 * data_range)^2

  /// Default stabilizers rescaled for a different dynamic range.
  static SsimParams for_range(double data_range);
};

/// Local SSIM with a Gaussian window (truncated at 3 sigma, reflected borders).
Image2D ssim_map(const Image2D& x, const Image2D& y, const SsimParams& params = {});

/// Inverted SSIM anomaly map 1 - SSIM(x, mu), in [0, 2].
Image2D s_mean(const Image2D& x, const Image2D& mu, const SsimParams& params = {});

}  // namespace uadmhd::ssim

#endif  // UADMHD_SSIM_HPP_
