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

#ifndef UADMHD_VOLUME_HPP_
#define UADMHD_VOLUME_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace uadmhd {

/// Dense single-channel 2D scalar field, row-major (row index slowest).
///
/// Construction rejects zero dimensions, size mismatches and non-finite
/// values, so every Image2D in circulation holds exactly H*W finite doubles.
class Image2D {
 public:
  Image2D(std::size_t height, std::size_t width, double fill = 0.0);
  Image2D(std::size_t height, std::size_t width, std::vector<double> data);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }

  double operator()(std::size_t row, std::size_t col) const {
    return data_[row * width_ + col];
  }
  double& operator()(std::size_t row, std::size_t col) {
    return data_[row * width_ + col];
  }

  std::span<const double> values() const noexcept { return data_; }
  std::span<double> values() noexcept { return data_; }

  bool same_shape(const Image2D& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_;
  }

  friend bool operator==(const Image2D&, const Image2D&) = default;

 private:
  std::size_t height_;
  std::size_t width_;
  std::vector<double> data_;
};

/// One bit per pixel stored as 0/1 bytes; 1 marks anomalous / foreground.
class BinaryMask {
 public:
  BinaryMask(std::size_t height, std::size_t width, bool fill = false);
  BinaryMask(std::size_t height, std::size_t width, std::vector<std::uint8_t> bits);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return bits_.size(); }

  bool operator()(std::size_t row, std::size_t col) const {
    return bits_[row * width_ + col] != 0;
  }
  void set(std::size_t row, std::size_t col, bool value) {
    bits_[row * width_ + col] = value ? 1 : 0;
  }

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  std::size_t count() const noexcept;

  bool matches(const Image2D& img) const noexcept {
    return height_ == img.height() && width_ == img.width();
  }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  std::size_t height_;
  std::size_t width_;
  std::vector<std::uint8_t> bits_;
};

/// Stack of equally shaped slices; volumes are processed slice by slice.
class Volume3D {
 public:
  explicit Volume3D(std::vector<Image2D> slices);

  std::size_t slices() const noexcept { return slices_.size(); }
  std::size_t height() const noexcept { return slices_.front().height(); }
  std::size_t width() const noexcept { return slices_.front().width(); }

  const Image2D& slice(std::size_t s) const { return slices_.at(s); }
  const std::vector<Image2D>& all() const noexcept { return slices_; }

  friend bool operator==(const Volume3D&, const Volume3D&) = default;

 private:
  std::vector<Image2D> slices_;
};

/// N reconstructions of one input slice.
class ReconstructionStack {
 public:
  explicit ReconstructionStack(std::vector<Image2D> images);

  std::size_t n() const noexcept { return images_.size(); }
  std::size_t height() const noexcept { return images_.front().height(); }
  std::size_t width() const noexcept { return images_.front().width(); }
  std::size_t pixels() const noexcept { return images_.front().size(); }

  const Image2D& operator[](std::size_t i) const { return images_[i]; }
  const std::vector<Image2D>& images() const noexcept { return images_; }

  friend bool operator==(const ReconstructionStack&,
                         const ReconstructionStack&) = default;

 private:
  std::vector<Image2D> images_;
};

/// Throws DimensionError unless `a` and `b` have identical shape.
void require_same_shape(const Image2D& a, const Image2D& b, const char* what);

std::vector<double> flatten(const Image2D& img);
Image2D reshape(std::span<const double> v, std::size_t height, std::size_t width);

/// Normalized 1D Gaussian taps of length 2*ceil(3*sigma)+1.
std::vector<double> gaussian_kernel(double sigma);

/// Maps an out-of-range index onto [0, n) by half-sample symmetric reflection
/// (... c b a | a b c ... ), repeating as often as needed.
std::ptrdiff_t reflect_index(std::ptrdiff_t i, std::ptrdiff_t n) noexcept;

/// Separable Gaussian smoothing with reflected borders.
Image2D gaussian_filter(const Image2D& img, double sigma);

}  // namespace uadmhd

#endif  // UADMHD_VOLUME_HPP_
