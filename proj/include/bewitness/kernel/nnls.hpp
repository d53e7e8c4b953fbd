// Copyright 2026 The bewitness Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bewitness/kernel/matrix.hpp"

namespace bewitness {

/// Dense row-major real matrix, only what the least-squares routines need.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline RealVector matvec(const RealMatrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
  RealVector out(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * x[j];
  return out;
}

inline double residual_norm(const RealMatrix& a, std::span<const double> x, std::span<const double> b) {
  const RealVector ax = matvec(a, x);
  double acc = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) acc += (ax[i] - b[i]) * (ax[i] - b[i]);
  return std::sqrt(acc);
}

/// Unconstrained least squares on the selected columns of `a` by Householder
/// QR. Entries of the result outside `columns` are zero. Columns that turn
/// out numerically dependent get a zero coefficient.
inline RealVector least_squares(const RealMatrix& a, std::span<const double> b,
                                std::span<const std::size_t> columns) {
  const std::size_t m = a.rows();
  const std::size_t k = columns.size();
  RealMatrix r(m, k);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j) r(i, j) = a(i, columns[j]);
  RealVector y(b.begin(), b.end());

  const std::size_t steps = std::min(m, k);
  for (std::size_t j = 0; j < steps; ++j) {
    double col_norm = 0.0;
    for (std::size_t i = j; i < m; ++i) col_norm += r(i, j) * r(i, j);
    col_norm = std::sqrt(col_norm);
    if (col_norm == 0.0) continue;
    const double alpha = r(j, j) > 0.0 ? -col_norm : col_norm;
    RealVector v(m - j);
    for (std::size_t i = j; i < m; ++i) v[i - j] = r(i, j);
    v[0] -= alpha;
    double vv = 0.0;
    for (double x : v) vv += x * x;
    if (vv == 0.0) continue;
    for (std::size_t c = j; c < k; ++c) {
      double dot = 0.0;
      for (std::size_t i = j; i < m; ++i) dot += v[i - j] * r(i, c);
      const double f = 2.0 * dot / vv;
      for (std::size_t i = j; i < m; ++i) r(i, c) -= f * v[i - j];
    }
    double dot = 0.0;
    for (std::size_t i = j; i < m; ++i) dot += v[i - j] * y[i];
    const double f = 2.0 * dot / vv;
    for (std::size_t i = j; i < m; ++i) y[i] -= f * v[i - j];
  }

  double diag_max = 0.0;
  for (std::size_t j = 0; j < steps; ++j) diag_max = std::max(diag_max, std::abs(r(j, j)));
  const double cutoff = diag_max * 1e-13;

  RealVector z(k, 0.0);
  for (std::size_t jj = steps; jj-- > 0;) {
    if (std::abs(r(jj, jj)) <= cutoff) continue;
    double acc = y[jj];
    for (std::size_t c = jj + 1; c < steps; ++c) acc -= r(jj, c) * z[c];
    z[jj] = acc / r(jj, jj);
  }

  RealVector out(a.cols(), 0.0);
  for (std::size_t j = 0; j < k; ++j) out[columns[j]] = z[j];
  return out;
}

struct NnlsResult {
  RealVector x;
  double residual = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

/// min ||A x - b||_2 subject to x >= 0, Lawson-Hanson active-set method.
///
/// `max_iterations` caps the outer loop (default 3 * cols); hitting it leaves
/// `converged` false with the best iterate so far.
inline NnlsResult nnls(const RealMatrix& a, std::span<const double> b, std::size_t max_iterations = 0) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (b.size() != m) throw std::invalid_argument("nnls: b has " + std::to_string(b.size()) + " entries, expected " +
                                                 std::to_string(m));
  for (std::size_t i = 0; i < m; ++i) {
    if (!std::isfinite(b[i])) throw std::invalid_argument("nnls: non-finite entry in b");
    for (std::size_t j = 0; j < n; ++j)
      if (!std::isfinite(a(i, j))) throw std::invalid_argument("nnls: non-finite entry in A");
  }
  if (max_iterations == 0) max_iterations = 3 * std::max<std::size_t>(n, 1);

  double a_one_norm = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += std::abs(a(i, j));
    a_one_norm = std::max(a_one_norm, s);
  }
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() * a_one_norm * static_cast<double>(std::max(m, n));

  NnlsResult out;
  out.x.assign(n, 0.0);
  std::vector<bool> passive(n, false);

  auto gradient = [&]() {
    const RealVector ax = matvec(a, out.x);
    RealVector w(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < m; ++i) w[j] += a(i, j) * (b[i] - ax[i]);
    return w;
  };
  auto passive_set = [&]() {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < n; ++j)
      if (passive[j]) cols.push_back(j);
    return cols;
  };

  out.converged = false;
  while (true) {
    const RealVector w = gradient();
    std::size_t best = n;
    double best_w = tol;
    for (std::size_t j = 0; j < n; ++j)
      if (!passive[j] && w[j] > best_w) {
        best_w = w[j];
        best = j;
      }
    if (best == n) {
      out.converged = true;
      break;
    }
    if (out.iterations >= max_iterations) break;
    ++out.iterations;
    passive[best] = true;

    while (true) {
      const auto cols = passive_set();
      RealVector z = least_squares(a, b, cols);
      bool feasible = true;
      for (std::size_t j : cols)
        if (z[j] <= 0.0) feasible = false;
      if (feasible) {
        out.x = std::move(z);
        break;
      }
      double step = 1.0;
      for (std::size_t j : cols)
        if (z[j] <= 0.0) step = std::min(step, out.x[j] / (out.x[j] - z[j]));
      for (std::size_t j = 0; j < n; ++j) out.x[j] += step * (z[j] - out.x[j]);
      for (std::size_t j : cols)
        if (out.x[j] <= tol) {
          out.x[j] = 0.0;
          passive[j] = false;
        }
      if (passive_set().empty()) break;
    }
  }

  for (double& x : out.x) x = std::max(x, 0.0);
  out.residual = residual_norm(a, out.x, b);
  return out;
}

}  // namespace bewitness
