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

#ifndef UADMHD_VOLUME_IO_HPP_
#define UADMHD_VOLUME_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "uadmhd/volume.hpp"

namespace uadmhd::io {

/// VOLB layout, all integers little-endian:
///
///   0..3   magic "VOLB"
///   4      version (1)
///   5      dtype: 0 = f32 scalar field, 1 = u8 mask
///   6      ndim: 2 or 3
///   7      reserved (0)
///   8..    ndim x u32 dims, slowest first (slices, height, width)
///   ...    payload in C order (width fastest)
inline constexpr std::uint8_t kVolbVersion = 1;
inline constexpr std::uint32_t kMaxDim = 1u << 16;

enum class DType : std::uint8_t { kF32 = 0, kU8 = 1 };

using MaskVolume = std::vector<BinaryMask>;
using VolumeData = std::variant<Image2D, Volume3D, BinaryMask, MaskVolume>;

std::vector<std::uint8_t> encode_volume(const VolumeData& data);
/// Throws FormatError carrying the offending byte offset.
VolumeData decode_volume(std::span<const std::uint8_t> bytes);

void write_volume(const VolumeData& data, const std::filesystem::path& path);
VolumeData read_volume(const std::filesystem::path& path);

/// Typed readers; a file of another kind is a FormatError.
Image2D read_image(const std::filesystem::path& path);
Volume3D read_volume3d(const std::filesystem::path& path);
BinaryMask read_mask(const std::filesystem::path& path);

/// Binary 8-bit PGM (P5), min-max scaled to 0..255; a constant map is all zeros.
std::vector<std::uint8_t> encode_pgm(const Image2D& map);
void export_pgm(const Image2D& map, const std::filesystem::path& path);

}  // namespace uadmhd::io

#endif  // UADMHD_VOLUME_IO_HPP_
