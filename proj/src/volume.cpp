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

#include "uadmhd/volume.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uadmhd/errors.hpp"

namespace uadmhd {

namespace {

void check_dims(std::size_t height, std::size_t width) {
  if (height == 0 || width == 0) {
    throw DimensionError("image dimensions must be positive, got " +
                         std::to_string(height) + "x" + std::to_string(width));
  }
}

}  // namespace

Image2D::Image2D(std::size_t height, std::size_t width, double fill)
    : height_(height), width_(width) {
  check_dims(height, width);
  if (!std::isfinite(fill)) throw NumericError("non-finite image fill value");
  data_.assign(height * width, fill);
}

Image2D::Image2D(std::size_t height, std::size_t width, std::vector<double> data)
    : height_(height), width_(width), data_(std::move(data)) {
  check_dims(height, width);
  if (data_.size() != height * width) {
    throw DimensionError("image data has " + std::to_string(data_.size()) +
                         " values, expected " + std::to_string(height * width));
  }
  if (!std::all_of(data_.begin(), data_.end(),
                   [](double v) { return std::isfinite(v); })) {
    throw NumericError("image data contains NaN or Inf");
  }
}

BinaryMask::BinaryMask(std::size_t height, std::size_t width, bool fill)
    : height_(height), width_(width), bits_(height * width, fill ? 1 : 0) {
  check_dims(height, width);
}

BinaryMask::BinaryMask(std::size_t height, std::size_t width,
                       std::vector<std::uint8_t> bits)
    : height_(height), width_(width), bits_(std::move(bits)) {
  check_dims(height, width);
  if (bits_.size() != height * width) {
    throw DimensionError("mask data has " + std::to_string(bits_.size()) +
                         " values, expected " + std::to_string(height * width));
  }
  for (auto& b : bits_) b = b != 0 ? 1 : 0;
}

std::size_t BinaryMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

Volume3D::Volume3D(std::vector<Image2D> slices) : slices_(std::move(slices)) {
  if (slices_.empty()) throw DimensionError("volume needs at least one slice");
  for (const auto& s : slices_) require_same_shape(slices_.front(), s, "volume slice");
}

ReconstructionStack::ReconstructionStack(std::vector<Image2D> images)
    : images_(std::move(images)) {
  if (images_.empty()) throw DimensionError("reconstruction stack is empty");
  for (const auto& img : images_) require_same_shape(images_.front(), img, "reconstruction");
}

void require_same_shape(const Image2D& a, const Image2D& b, const char* what) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(what) + ": shape " + std::to_string(b.height()) +
                         "x" + std::to_string(b.width()) + " does not match " +
                         std::to_string(a.height()) + "x" + std::to_string(a.width()));
  }
}

std::vector<double> flatten(const Image2D& img) {
  return {img.values().begin(), img.values().end()};
}

Image2D reshape(std::span<const double> v, std::size_t height, std::size_t width) {
  if (v.size() != height * width) {
    throw DimensionError("cannot reshape " + std::to_string(v.size()) +
                         " values to " + std::to_string(height) + "x" +
                         std::to_string(width));
  }
  return Image2D(height, width, std::vector<double>(v.begin(), v.end()));
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ParameterError("gaussian sigma must be positive and finite");
  }
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  const double denom = 2.0 * sigma * sigma;
  for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
    taps[static_cast<std::size_t>(i + radius)] =
        std::exp(-static_cast<double>(i * i) / denom);
  }
  double sum = 0.0;
  for (double t : taps) sum += t;
  for (double& t : taps) t /= sum;
  return taps;
}

std::ptrdiff_t reflect_index(std::ptrdiff_t i, std::ptrdiff_t n) noexcept {
  if (n == 1) return 0;
  const std::ptrdiff_t period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

Image2D gaussian_filter(const Image2D& img, double sigma) {
  const auto taps = gaussian_kernel(sigma);
  const auto radius = static_cast<std::ptrdiff_t>(taps.size() / 2);
  const auto h = static_cast<std::ptrdiff_t>(img.height());
  const auto w = static_cast<std::ptrdiff_t>(img.width());

  // Rows first, then columns; each pass gathers into a padded line buffer.
  Image2D tmp(img.height(), img.width());
  std::vector<double> line(static_cast<std::size_t>(std::max(h, w) + 2 * radius));
  for (std::ptrdiff_t r = 0; r < h; ++r) {
    for (std::ptrdiff_t c = -radius; c < w + radius; ++c) {
      line[static_cast<std::size_t>(c + radius)] =
          img(static_cast<std::size_t>(r), static_cast<std::size_t>(reflect_index(c, w)));
    }
    for (std::ptrdiff_t c = 0; c < w; ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < taps.size(); ++k) {
        acc += taps[k] * line[static_cast<std::size_t>(c) + k];
      }
      tmp(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = acc;
    }
  }

  Image2D out(img.height(), img.width());
  for (std::ptrdiff_t c = 0; c < w; ++c) {
    for (std::ptrdiff_t r = -radius; r < h + radius; ++r) {
      line[static_cast<std::size_t>(r + radius)] =
          tmp(static_cast<std::size_t>(reflect_index(r, h)), static_cast<std::size_t>(c));
    }
    for (std::ptrdiff_t r = 0; r < h; ++r) {
      double acc = 0.0;
      for (std::size_t k = 0; k < taps.size(); ++k) {
        acc += taps[k] * line[static_cast<std::size_t>(r) + k];
      }
      out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = acc;
    }
  }
  return out;
}

}  // namespace uadmhd
