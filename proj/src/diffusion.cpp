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

#include "uadmhd/diffusion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "uadmhd/errors.hpp"
#include "uadmhd/random.hpp"

namespace uadmhd::diffusion {

NoiseSchedule::NoiseSchedule(std::vector<double> betas) : betas_(std::move(betas)) {
  if (betas_.empty()) throw ParameterError("noise schedule needs at least one step");
  alpha_bars_.resize(betas_.size());
  double running = 1.0;
  for (std::size_t i = 0; i < betas_.size(); ++i) {
    const double b = betas_[i];
    if (!(b > 0.0 && b < 1.0)) {
      throw ParameterError("beta_" + std::to_string(i + 1) + " must lie in (0, 1)");
    }
    running *= 1.0 - b;
    alpha_bars_[i] = running;
  }
}

void NoiseSchedule::check_t(int t) const {
  if (t < 1 || t > t_max()) {
    throw ParameterError("timestep " + std::to_string(t) + " outside [1, " +
                         std::to_string(t_max()) + "]");
  }
}

double NoiseSchedule::beta(int t) const {
  check_t(t);
  return betas_[static_cast<std::size_t>(t - 1)];
}

double NoiseSchedule::alpha_bar(int t) const {
  if (t == 0) return 1.0;
  check_t(t);
  return alpha_bars_[static_cast<std::size_t>(t - 1)];
}

double NoiseSchedule::posterior_variance(int t) const {
  check_t(t);
  return (1.0 - alpha_bar(t - 1)) / (1.0 - alpha_bar(t)) * beta(t);
}

NoiseSchedule make_linear_schedule(int t_max, double beta_start, double beta_end) {
  if (t_max < 1) throw ParameterError("t_max must be at least 1");
  if (!(beta_start > 0.0 && beta_start <= beta_end && beta_end < 1.0)) {
    throw ParameterError("linear schedule needs 0 < beta_start <= beta_end < 1");
  }
  std::vector<double> betas(static_cast<std::size_t>(t_max));
  if (t_max == 1) {
    betas[0] = beta_start;
  } else {
    const double step = (beta_end - beta_start) / static_cast<double>(t_max - 1);
    for (int i = 0; i < t_max; ++i) {
      betas[static_cast<std::size_t>(i)] = beta_start + step * i;
    }
    betas.back() = beta_end;
  }
  return NoiseSchedule(std::move(betas));
}

namespace {

// 2D simplex noise after Gustavson, with a seeded permutation table.
class Simplex2D {
 public:
  explicit Simplex2D(std::uint64_t seed) {
    std::array<std::uint8_t, 256> p{};
    std::iota(p.begin(), p.end(), 0);
    std::mt19937_64 rng(seed);
    // Fisher-Yates by hand: std::shuffle's draw sequence is unspecified.
    for (std::size_t i = p.size() - 1; i > 0; --i) {
      const auto j = static_cast<std::size_t>(rng() % (i + 1));
      std::swap(p[i], p[j]);
    }
    for (std::size_t i = 0; i < perm_.size(); ++i) perm_[i] = p[i & 255];
  }

  double operator()(double x, double y) const {
    static constexpr double kF2 = 0.36602540378443864676;  // (sqrt(3) - 1) / 2
    static constexpr double kG2 = 0.21132486540518711775;  // (3 - sqrt(3)) / 6

    const double s = (x + y) * kF2;
    const double i = std::floor(x + s);
    const double j = std::floor(y + s);
    const double t = (i + j) * kG2;
    const double x0 = x - (i - t);
    const double y0 = y - (j - t);

    const int i1 = x0 > y0 ? 1 : 0;
    const int j1 = 1 - i1;

    const double x1 = x0 - i1 + kG2;
    const double y1 = y0 - j1 + kG2;
    const double x2 = x0 - 1.0 + 2.0 * kG2;
    const double y2 = y0 - 1.0 + 2.0 * kG2;

    const int ii = static_cast<int>(static_cast<long long>(i) & 255);
    const int jj = static_cast<int>(static_cast<long long>(j) & 255);

    const double n0 = corner(hash(ii, jj), x0, y0);
    const double n1 = corner(hash(ii + i1, jj + j1), x1, y1);
    const double n2 = corner(hash(ii + 1, jj + 1), x2, y2);
    return 70.0 * (n0 + n1 + n2);
  }

 private:
  int hash(int i, int j) const { return perm_[static_cast<std::size_t>(i + perm_[static_cast<std::size_t>(j)])] % 12; }

  static double corner(int g, double x, double y) {
    static constexpr std::array<std::array<double, 2>, 12> kGrad = {{
        {1, 1}, {-1, 1}, {1, -1}, {-1, -1}, {1, 0}, {-1, 0},
        {0, 1}, {0, -1}, {1, 1}, {-1, 1}, {1, -1}, {-1, -1},
    }};
    double t = 0.5 - x * x - y * y;
    if (t < 0.0) return 0.0;
    t *= t;
    const auto& gr = kGrad[static_cast<std::size_t>(g)];
    return t * t * (gr[0] * x + gr[1] * y);
  }

  std::array<int, 512> perm_{};
};

void check_t_range(int t, const NoiseSchedule& sched) {
  if (t < 1 || t > sched.t_max()) {
    throw ParameterError("timestep " + std::to_string(t) + " outside [1, " +
                         std::to_string(sched.t_max()) + "]");
  }
}

}  // namespace

Image2D simplex_noise(std::size_t height, std::size_t width, const SimplexParams& params) {
  if (params.octaves < 1) throw ParameterError("simplex octaves must be >= 1");
  if (!(params.persistence > 0.0 && params.persistence <= 1.0)) {
    throw ParameterError("simplex persistence must lie in (0, 1]");
  }
  if (!(params.lacunarity > 1.0)) throw ParameterError("simplex lacunarity must exceed 1");
  if (!(params.base_frequency > 0.0)) {
    throw ParameterError("simplex base frequency must be positive");
  }

  Image2D field(height, width);
  double amplitude = 1.0;
  double frequency = params.base_frequency;
  for (int k = 0; k < params.octaves; ++k) {
    const std::uint64_t octave_seed = derive_seed(params.seed, static_cast<std::uint64_t>(k));
    const Simplex2D noise(octave_seed);
    // Random lattice offset so octaves do not share a zero at the origin.
    const double ox = static_cast<double>(octave_seed & 0xffff) / 256.0;
    const double oy = static_cast<double>((octave_seed >> 16) & 0xffff) / 256.0;
    for (std::size_t r = 0; r < height; ++r) {
      for (std::size_t c = 0; c < width; ++c) {
        field(r, c) += amplitude * noise(static_cast<double>(c) * frequency + ox,
                                         static_cast<double>(r) * frequency + oy);
      }
    }
    amplitude *= params.persistence;
    frequency *= params.lacunarity;
  }

  auto v = field.values();
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / n);
  for (double& x : v) x = sd > 0.0 ? (x - mean) / sd : 0.0;
  return field;
}

Image2D gaussian_noise(std::size_t height, std::size_t width, std::uint64_t seed) {
  Image2D field(height, width);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& x : field.values()) x = normal(rng);
  return field;
}

Image2D make_noise(NoiseKind kind, std::size_t height, std::size_t width,
                   std::uint64_t seed) {
  if (kind == NoiseKind::kGaussian) return gaussian_noise(height, width, seed);
  SimplexParams params;
  params.seed = seed;
  return simplex_noise(height, width, params);
}

Image2D forward_noise(const Image2D& x0, int t, const NoiseSchedule& sched,
                      const Image2D& eps) {
  check_t_range(t, sched);
  require_same_shape(x0, eps, "forward_noise eps");
  const double abar = sched.alpha_bar(t);
  const double signal = std::sqrt(abar);
  const double noise = std::sqrt(1.0 - abar);
  Image2D xt(x0.height(), x0.width());
  auto out = xt.values();
  const auto a = x0.values();
  const auto e = eps.values();
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = signal * a[k] + noise * e[k];
  return xt;
}

double simple_loss(const Image2D& eps, const Image2D& eps_hat) {
  require_same_shape(eps, eps_hat, "simple_loss");
  const auto a = eps.values();
  const auto b = eps_hat.values();
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    sum += d * d;
  }
  return sum;
}

Image2D denoise_step(const Image2D& xt, int t, const Image2D& eps_hat,
                     const NoiseSchedule& sched, const std::optional<Image2D>& z) {
  check_t_range(t, sched);
  require_same_shape(xt, eps_hat, "denoise_step eps_hat");
  if (t > 1) {
    if (!z) throw ParameterError("denoise_step needs a noise field z for t > 1");
    require_same_shape(xt, *z, "denoise_step z");
  }
  const double beta = sched.beta(t);
  const double scale = 1.0 / std::sqrt(1.0 - beta);
  const double eps_coef = beta / std::sqrt(1.0 - sched.alpha_bar(t));
  const double sigma = t > 1 ? std::sqrt(sched.posterior_variance(t)) : 0.0;

  Image2D out(xt.height(), xt.width());
  auto o = out.values();
  const auto x = xt.values();
  const auto e = eps_hat.values();
  for (std::size_t k = 0; k < o.size(); ++k) {
    o[k] = scale * (x[k] - eps_coef * e[k]);
    if (t > 1) o[k] += sigma * z->values()[k];
  }
  return out;
}

Image2D estimate_x0(const Image2D& xt, int t, const Image2D& eps_hat,
                    const NoiseSchedule& sched) {
  check_t_range(t, sched);
  require_same_shape(xt, eps_hat, "estimate_x0 eps_hat");
  const double abar = sched.alpha_bar(t);
  const double noise = std::sqrt(1.0 - abar);
  const double inv_signal = 1.0 / std::sqrt(abar);
  Image2D out(xt.height(), xt.width());
  auto o = out.values();
  const auto x = xt.values();
  const auto e = eps_hat.values();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = (x[k] - noise * e[k]) * inv_signal;
  return out;
}

ReconstructionStack sample_stack(const Reconstructor& rec, const Image2D& x0,
                                 int t_test, std::size_t n, const NoiseSchedule& sched,
                                 NoiseKind noise_kind, std::uint64_t seed) {
  if (n < 2) throw ParameterError("sample_stack needs n >= 2");
  check_t_range(t_test, sched);

  std::vector<Image2D> images;
  images.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t noise_seed = derive_seed(seed, i);
    try {
      const Image2D eps = make_noise(noise_kind, x0.height(), x0.width(), noise_seed);
      const Image2D xt = forward_noise(x0, t_test, sched, eps);
      Image2D out = rec.reconstruct(xt, t_test, sched, derive_seed(noise_seed, 1));
      if (!out.same_shape(x0)) throw DimensionError("reconstruction shape mismatch");
      images.push_back(std::move(out));
    } catch (const ReconstructionError&) {
      throw;
    } catch (const std::exception& e) {
      throw ReconstructionError(i, e.what());
    }
  }
  return ReconstructionStack(std::move(images));
}

}  // namespace uadmhd::diffusion
