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

#ifndef UADMHD_MAHALANOBIS_HPP_
#define UADMHD_MAHALANOBIS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "uadmhd/pseudostats.hpp"
#include "uadmhd/volume.hpp"

namespace uadmhd::mahalanobis {

inline constexpr double kDefaultLambda = 1e-5;
inline constexpr double kDefaultSmoothSigma = 1.0;
/// Largest D accepted by dense_mhd_oracle.
inline constexpr std::size_t kDenseOracleMaxPixels = 4096;

/// Mahalanobis distance of one image against a pseudo-healthy distribution.
///
/// With d = x - mu and v = (Sigma + lambda I)^-1 d, the per-pixel contribution
/// is m_k = d_k * v_k. The contributions sum to scalar^2; `map` holds
/// sqrt(max(0, m_k)) reshaped to the image grid.
struct MhdResult {
  Image2D map;
  double scalar = 0.0;
  double lambda = 0.0;
  std::vector<double> contributions;
};

/// Diagonal covariance: per-pixel |d_k| / sqrt(var_k + lambda).
MhdResult mhd_diag_map(const PseudoHealthyDistribution& dist, const Image2D& x,
                       double lambda = kDefaultLambda);

/// (C C^T / (N-1) + lambda I)^-1 d without forming any D x D matrix.
///
/// Uses the Woodbury identity: with G = C^T C / (N-1), solve
/// (lambda I_N + G) y = C^T d / (N-1) by Cholesky, then v = (d - C y) / lambda.
/// Cost is O(D N^2) time and O(D) extra memory.
std::vector<double> woodbury_solve(const PseudoHealthyDistribution& dist,
                                   std::span<const double> d, double lambda);

/// Full covariance map via woodbury_solve.
MhdResult mhd_full_map(const PseudoHealthyDistribution& dist, const Image2D& x,
                       double lambda = kDefaultLambda);

/// Reference path that materializes Sigma + lambda I and factors it densely.
/// Only for validation; refuses D > kDenseOracleMaxPixels.
MhdResult dense_mhd_oracle(const PseudoHealthyDistribution& dist, const Image2D& x,
                           double lambda = kDefaultLambda);

/// Gaussian-smoothed MHD map.
Image2D smooth_mhd(const MhdResult& result, double sigma = kDefaultSmoothSigma);

}  // namespace uadmhd::mahalanobis

#endif  // UADMHD_MAHALANOBIS_HPP_
