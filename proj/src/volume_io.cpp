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

#include "uadmhd/volume_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "uadmhd/errors.hpp"

namespace uadmhd::io {

namespace {

constexpr std::size_t kPreamble = 8;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[at + static_cast<std::size_t>(i)]) << (8 * i);
  return v;
}

std::uint32_t checked_dim(std::size_t d) {
  if (d == 0 || d > kMaxDim) throw DimensionError("VOLB dimension out of range: " + std::to_string(d));
  return static_cast<std::uint32_t>(d);
}

void put_header(std::vector<std::uint8_t>& out, DType dtype,
                std::initializer_list<std::size_t> dims) {
  out.insert(out.end(), {'V', 'O', 'L', 'B', kVolbVersion, static_cast<std::uint8_t>(dtype),
                         static_cast<std::uint8_t>(dims.size()), 0});
  for (auto d : dims) put_u32(out, checked_dim(d));
}

void put_f32(std::vector<std::uint8_t>& out, const Image2D& img) {
  for (double v : img.values()) {
    const auto f = static_cast<float>(v);
    if (!std::isfinite(f)) throw NumericError("value " + std::to_string(v) + " overflows f32");
    put_u32(out, std::bit_cast<std::uint32_t>(f));
  }
}

void put_u8(std::vector<std::uint8_t>& out, const BinaryMask& m) {
  out.insert(out.end(), m.bits().begin(), m.bits().end());
}

Image2D get_image(std::span<const std::uint8_t> b, std::size_t at, std::size_t h, std::size_t w) {
  std::vector<double> values(h * w);
  for (std::size_t k = 0; k < values.size(); ++k) {
    const auto f = std::bit_cast<float>(get_u32(b, at + 4 * k));
    if (!std::isfinite(f)) throw FormatError("non-finite f32 payload value", at + 4 * k);
    values[k] = static_cast<double>(f);
  }
  return Image2D(h, w, std::move(values));
}

BinaryMask get_mask(std::span<const std::uint8_t> b, std::size_t at, std::size_t h, std::size_t w) {
  std::vector<std::uint8_t> bits(b.begin() + static_cast<std::ptrdiff_t>(at),
                                 b.begin() + static_cast<std::ptrdiff_t>(at + h * w));
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k] > 1) throw FormatError("mask byte is neither 0 nor 1", at + k);
  }
  return BinaryMask(h, w, std::move(bits));
}

}  // namespace

std::vector<std::uint8_t> encode_volume(const VolumeData& data) {
  std::vector<std::uint8_t> out;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Image2D>) {
          put_header(out, DType::kF32, {v.height(), v.width()});
          put_f32(out, v);
        } else if constexpr (std::is_same_v<T, Volume3D>) {
          put_header(out, DType::kF32, {v.slices(), v.height(), v.width()});
          for (const auto& s : v.all()) put_f32(out, s);
        } else if constexpr (std::is_same_v<T, BinaryMask>) {
          put_header(out, DType::kU8, {v.height(), v.width()});
          put_u8(out, v);
        } else {
          if (v.empty()) throw DimensionError("mask volume needs at least one slice");
          for (const auto& m : v) {
            if (m.height() != v.front().height() || m.width() != v.front().width()) {
              throw DimensionError("mask volume slices differ in shape");
            }
          }
          put_header(out, DType::kU8, {v.size(), v.front().height(), v.front().width()});
          for (const auto& m : v) put_u8(out, m);
        }
      },
      data);
  return out;
}

VolumeData decode_volume(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "VOLB", 4) != 0) {
    throw FormatError("bad magic, expected \"VOLB\"", 0);
  }
  if (bytes.size() < kPreamble) throw FormatError("truncated header", bytes.size());
  if (bytes[4] != kVolbVersion) {
    throw FormatError("unsupported version " + std::to_string(bytes[4]), 4);
  }
  if (bytes[5] > 1) throw FormatError("unknown dtype " + std::to_string(bytes[5]), 5);
  const auto dtype = static_cast<DType>(bytes[5]);
  const std::size_t ndim = bytes[6];
  if (ndim != 2 && ndim != 3) throw FormatError("ndim must be 2 or 3", 6);
  if (bytes[7] != 0) throw FormatError("reserved byte must be 0", 7);

  const std::size_t header = kPreamble + 4 * ndim;
  if (bytes.size() < header) throw FormatError("truncated dimension table", bytes.size());
  std::size_t dims[3] = {1, 1, 1};
  for (std::size_t i = 0; i < ndim; ++i) {
    const std::uint32_t d = get_u32(bytes, kPreamble + 4 * i);
    if (d == 0 || d > kMaxDim) {
      throw FormatError("dimension " + std::to_string(d) + " outside [1, 65536]",
                        kPreamble + 4 * i);
    }
    dims[3 - ndim + i] = d;
  }
  const std::size_t slices = dims[0], h = dims[1], w = dims[2];
  const std::size_t elem = dtype == DType::kF32 ? 4 : 1;
  const std::size_t expected = header + slices * h * w * elem;
  if (bytes.size() < expected) {
    throw FormatError("truncated payload: expected " + std::to_string(expected) +
                          " bytes, file has " + std::to_string(bytes.size()),
                      bytes.size());
  }
  if (bytes.size() > expected) throw FormatError("trailing bytes after payload", expected);

  const std::size_t plane = h * w * elem;
  if (dtype == DType::kF32) {
    if (ndim == 2) return get_image(bytes, header, h, w);
    std::vector<Image2D> out;
    for (std::size_t s = 0; s < slices; ++s) out.push_back(get_image(bytes, header + s * plane, h, w));
    return Volume3D(std::move(out));
  }
  if (ndim == 2) return get_mask(bytes, header, h, w);
  MaskVolume out;
  for (std::size_t s = 0; s < slices; ++s) out.push_back(get_mask(bytes, header + s * plane, h, w));
  return out;
}

void write_volume(const VolumeData& data, const std::filesystem::path& path) {
  const auto bytes = encode_volume(data);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("write failed for " + path.string());
}

VolumeData read_volume(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                        std::istreambuf_iterator<char>());
  try {
    return decode_volume(bytes);
  } catch (const FormatError& e) {
    std::string msg = e.what();
    msg.resize(msg.rfind(" (at byte offset"));
    throw FormatError(path.string() + ": " + msg, e.offset());
  }
}

Image2D read_image(const std::filesystem::path& path) {
  auto v = read_volume(path);
  if (auto* img = std::get_if<Image2D>(&v)) return std::move(*img);
  throw FormatError(path.string() + ": expected a 2D f32 image", 5);
}

Volume3D read_volume3d(const std::filesystem::path& path) {
  auto v = read_volume(path);
  if (auto* vol = std::get_if<Volume3D>(&v)) return std::move(*vol);
  throw FormatError(path.string() + ": expected a 3D f32 volume", 5);
}

BinaryMask read_mask(const std::filesystem::path& path) {
  auto v = read_volume(path);
  if (auto* m = std::get_if<BinaryMask>(&v)) return std::move(*m);
  throw FormatError(path.string() + ": expected a 2D u8 mask", 5);
}

std::vector<std::uint8_t> encode_pgm(const Image2D& map) {
  const auto v = map.values();
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double range = *hi - *lo;
  const std::string header = "P5\n" + std::to_string(map.width()) + " " +
                             std::to_string(map.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + v.size());
  for (double x : v) {
    const double scaled = range > 0.0 ? (x - *lo) / range * 255.0 : 0.0;
    out.push_back(static_cast<std::uint8_t>(std::clamp(std::lround(scaled), 0L, 255L)));
  }
  return out;
}

void export_pgm(const Image2D& map, const std::filesystem::path& path) {
  const auto bytes = encode_pgm(map);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("write failed for " + path.string());
}

}  // namespace uadmhd::io
