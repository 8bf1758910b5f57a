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

#include "uadmhd/ssim.hpp"

#include <algorithm>
#include <cmath>

#include "uadmhd/errors.hpp"

namespace uadmhd::ssim {

SsimParams SsimParams::for_range(double data_range) {
  if (!(data_range > 0.0)) throw ParameterError("SSIM data range must be positive");
  SsimParams p;
  p.data_range = data_range;
  p.c1 = (0.01 * data_range) * (0.01 * data_range);
  p.c2 = (0.03 * data_range) * (0.03 * data_range);
  return p;
}

Image2D ssim_map(const Image2D& x, const Image2D& y, const SsimParams& params) {
  require_same_shape(x, y, "ssim_map");
  if (!(params.c1 > 0.0) || !(params.c2 > 0.0)) {
    throw ParameterError("SSIM stabilizers c1, c2 must be positive");
  }
  const std::size_t h = x.height();
  const std::size_t w = x.width();
  Image2D xx(h, w), yy(h, w), xy(h, w);
  {
    const auto a = x.values();
    const auto b = y.values();
    auto pxx = xx.values();
    auto pyy = yy.values();
    auto pxy = xy.values();
    for (std::size_t k = 0; k < a.size(); ++k) {
      pxx[k] = a[k] * a[k];
      pyy[k] = b[k] * b[k];
      pxy[k] = a[k] * b[k];
    }
  }
  const double s = params.kernel_sigma;
  const Image2D mu_x = gaussian_filter(x, s);
  const Image2D mu_y = gaussian_filter(y, s);
  const Image2D e_xx = gaussian_filter(xx, s);
  const Image2D e_yy = gaussian_filter(yy, s);
  const Image2D e_xy = gaussian_filter(xy, s);

  Image2D out(h, w);
  auto o = out.values();
  for (std::size_t k = 0; k < o.size(); ++k) {
    const double mx = mu_x.values()[k];
    const double my = mu_y.values()[k];
    const double vx = e_xx.values()[k] - mx * mx;
    const double vy = e_yy.values()[k] - my * my;
    const double cov = e_xy.values()[k] - mx * my;
    const double num = (2.0 * mx * my + params.c1) * (2.0 * cov + params.c2);
    const double den = (mx * mx + my * my + params.c1) * (vx + vy + params.c2);
    // Round-off in the variance terms can push the ratio a hair past the bounds.
    o[k] = std::clamp(num / den, -1.0, 1.0);
  }
  return out;
}

Image2D s_mean(const Image2D& x, const Image2D& mu, const SsimParams& params) {
  Image2D out = ssim_map(x, mu, params);
  for (double& v : out.values()) v = 1.0 - v;
  return out;
}

}  // namespace uadmhd::ssim
