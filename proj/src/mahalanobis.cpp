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

#include "uadmhd/mahalanobis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "uadmhd/errors.hpp"

namespace uadmhd::mahalanobis {

namespace {

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ParameterError("regularization lambda must be positive and finite");
  }
}

std::vector<double> deviation(const PseudoHealthyDistribution& dist, const Image2D& x) {
  require_same_shape(dist.mean(), x, "mahalanobis input");
  const auto xv = x.values();
  const auto mv = dist.mean().values();
  std::vector<double> d(xv.size());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = xv[k] - mv[k];
  return d;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

MhdResult finish(const Image2D& shape, std::vector<double> d, std::span<const double> v,
                 double lambda) {
  std::vector<double> contrib(d.size());
  double total = 0.0;
  double norm2 = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    contrib[k] = d[k] * v[k];
    total += contrib[k];
    norm2 += d[k] * d[k];
  }
  if (!std::isfinite(total)) throw NumericError("non-finite Mahalanobis quadratic form");
  if (total < -1e-9 * norm2) {
    throw NumericError("negative Mahalanobis quadratic form " + std::to_string(total));
  }
  std::vector<double> map(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) map[k] = std::sqrt(std::max(0.0, contrib[k]));
  return MhdResult{Image2D(shape.height(), shape.width(), std::move(map)),
                   std::sqrt(std::max(0.0, total)), lambda, std::move(contrib)};
}

// In-place Cholesky of a small dense SPD matrix (row-major, lower factor).
void cholesky(std::vector<double>& a, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) diag -= a[j * n + k] * a[j * n + k];
    if (!(diag > 0.0)) throw NumericError("Woodbury core matrix is not positive definite");
    const double ljj = std::sqrt(diag);
    a[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = s / ljj;
    }
  }
}

void cholesky_solve(const std::vector<double>& l, std::size_t n, std::vector<double>& b) {
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l[i * n + k] * b[k];
    b[i] = s / l[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= l[k * n + i] * b[k];
    b[i] = s / l[i * n + i];
  }
}

}  // namespace

MhdResult mhd_diag_map(const PseudoHealthyDistribution& dist, const Image2D& x,
                       double lambda) {
  check_lambda(lambda);
  auto d = deviation(dist, x);
  const auto var = dist.variance().values();
  std::vector<double> v(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) v[k] = d[k] / (var[k] + lambda);
  return finish(x, std::move(d), v, lambda);
}

std::vector<double> woodbury_solve(const PseudoHealthyDistribution& dist,
                                   std::span<const double> d, double lambda) {
  check_lambda(lambda);
  const std::size_t pixels = dist.pixels();
  const std::size_t n = dist.n();
  if (d.size() != pixels) {
    throw DimensionError("woodbury_solve: vector has " + std::to_string(d.size()) +
                         " entries, expected " + std::to_string(pixels));
  }
  if (!std::all_of(d.begin(), d.end(), [](double x) { return std::isfinite(x); })) {
    throw NumericError("woodbury_solve: non-finite right-hand side");
  }

  const double inv_dof = 1.0 / static_cast<double>(n - 1);
  std::vector<double> core(n * n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ci = dist.column(i);
    for (std::size_t j = 0; j <= i; ++j) {
      const double g = dot(ci, dist.column(j)) * inv_dof;
      core[i * n + j] = g;
      core[j * n + i] = g;
    }
    core[i * n + i] += lambda;
    y[i] = dot(ci, d) * inv_dof;
  }

  cholesky(core, n);
  cholesky_solve(core, n, y);

  std::vector<double> v(d.begin(), d.end());
  for (std::size_t i = 0; i < n; ++i) {
    const auto ci = dist.column(i);
    const double yi = y[i];
    for (std::size_t k = 0; k < pixels; ++k) v[k] -= ci[k] * yi;
  }
  const double inv_lambda = 1.0 / lambda;
  for (double& vk : v) vk *= inv_lambda;
  return v;
}

MhdResult mhd_full_map(const PseudoHealthyDistribution& dist, const Image2D& x,
                       double lambda) {
  check_lambda(lambda);
  auto d = deviation(dist, x);
  const auto v = woodbury_solve(dist, d, lambda);
  return finish(x, std::move(d), v, lambda);
}

MhdResult dense_mhd_oracle(const PseudoHealthyDistribution& dist, const Image2D& x,
                           double lambda) {
  check_lambda(lambda);
  const std::size_t pixels = dist.pixels();
  if (pixels > kDenseOracleMaxPixels) {
    throw ParameterError("dense oracle limited to " +
                         std::to_string(kDenseOracleMaxPixels) + " pixels, got " +
                         std::to_string(pixels));
  }
  auto d = deviation(dist, x);
  const auto rows = static_cast<Eigen::Index>(pixels);
  const auto cols = static_cast<Eigen::Index>(dist.n());
  const Eigen::Map<const Eigen::MatrixXd> c(dist.centered().data(), rows, cols);
  Eigen::MatrixXd sigma = c * c.transpose() / static_cast<double>(dist.n() - 1);
  sigma.diagonal().array() += lambda;

  const Eigen::Map<const Eigen::VectorXd> rhs(d.data(), rows);
  const Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) throw NumericError("dense covariance factorization failed");
  const Eigen::VectorXd v = llt.solve(rhs);
  return finish(x, std::move(d), std::span<const double>(v.data(), pixels), lambda);
}

Image2D smooth_mhd(const MhdResult& result, double sigma) {
  return gaussian_filter(result.map, sigma);
}

}  // namespace uadmhd::mahalanobis
