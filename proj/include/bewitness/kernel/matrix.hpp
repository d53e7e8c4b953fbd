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
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bewitness {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using RealVector = std::vector<double>;

/// Local dimensions of a bipartite system H_A (x) H_B.
///
/// The composite index of |i>_A |j>_B is i * dB + j. Every routine in the
/// library that maps between local and composite indices goes through here.
struct BipartiteDims {
  std::size_t dA = 0;
  std::size_t dB = 0;

  constexpr BipartiteDims() = default;
  constexpr BipartiteDims(std::size_t a, std::size_t b) : dA(a), dB(b) {
    if (a == 0 || b == 0) {
      throw std::invalid_argument("BipartiteDims: local dimensions must be positive");
    }
  }
  static constexpr BipartiteDims square(std::size_t d) { return {d, d}; }

  constexpr std::size_t total() const { return dA * dB; }
  constexpr std::size_t index(std::size_t i, std::size_t j) const { return i * dB + j; }

  friend constexpr bool operator==(const BipartiteDims&, const BipartiteDims&) = default;
};

/// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw std::invalid_argument("ComplexMatrix: entry count " + std::to_string(data_.size()) +
                                  " does not match " + std::to_string(rows_) + "x" +
                                  std::to_string(cols_));
    }
  }

  static ComplexMatrix zeros(std::size_t n) { return ComplexMatrix(n, n); }
  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static ComplexMatrix diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }
  /// Column matrix holding v.
  static ComplexMatrix column(std::span<const Complex> v) {
    return ComplexMatrix(v.size(), 1, std::vector<Complex>(v.begin(), v.end()));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Complex> data() const { return data_; }
  std::span<Complex> data() { return data_; }

  ComplexVector col(std::size_t c) const {
    ComplexVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o, "+=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o, "-=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  ComplexMatrix& operator*=(Complex s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= Complex(s); }
  friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= Complex(s); }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  void require_same_shape(const ComplexMatrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw std::invalid_argument(std::string("ComplexMatrix ") + op + ": shape mismatch");
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

inline ComplexMatrix adjoint(const ComplexMatrix& m) {
  ComplexMatrix out(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(c, r) = std::conj(m(r, c));
  return out;
}

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: inner dimension mismatch");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

inline ComplexVector matvec(const ComplexMatrix& m, std::span<const Complex> v) {
  if (m.cols() != v.size()) throw std::invalid_argument("matvec: dimension mismatch");
  ComplexVector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Complex acc{};
    for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

/// <a|b>, antilinear in the first argument.
inline Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner: dimension mismatch");
  Complex acc{};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

inline double norm(std::span<const Complex> v) {
  double acc = 0.0;
  for (const auto& x : v) acc += std::norm(x);
  return std::sqrt(acc);
}

inline ComplexVector normalized(std::span<const Complex> v) {
  const double n = norm(v);
  if (n == 0.0) throw std::invalid_argument("normalized: zero vector");
  ComplexVector out(v.begin(), v.end());
  for (auto& x : out) x /= n;
  return out;
}

inline ComplexVector conj(std::span<const Complex> v) {
  ComplexVector out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](Complex x) { return std::conj(x); });
  return out;
}

inline ComplexVector subtract(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw std::invalid_argument("subtract: dimension mismatch");
  ComplexVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

/// |a><b|
inline ComplexMatrix outer(std::span<const Complex> a, std::span<const Complex> b) {
  ComplexMatrix out(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out(i, j) = a[i] * std::conj(b[j]);
  return out;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

inline ComplexVector kron(std::span<const Complex> a, std::span<const Complex> b) {
  ComplexVector out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return out;
}

inline Complex trace(const ComplexMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("trace: matrix is not square");
  Complex acc{};
  for (std::size_t i = 0; i < m.rows(); ++i) acc += m(i, i);
  return acc;
}

/// Tr(a b) without forming the product.
inline Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) {
    throw std::invalid_argument("trace_product: shape mismatch");
  }
  Complex acc{};
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, i);
  return acc;
}

/// <v|M|v>
inline Complex expectation(const ComplexMatrix& m, std::span<const Complex> v) {
  return inner(v, matvec(m, v));
}

inline double max_abs(const ComplexMatrix& m) {
  double out = 0.0;
  for (const auto& x : m.data()) out = std::max(out, std::abs(x));
  return out;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  }
  double out = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) out = std::max(out, std::abs(a.data()[k] - b.data()[k]));
  return out;
}

/// max |M - M^dagger|
inline double hermitian_defect(const ComplexMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("hermitian_defect: matrix is not square");
  double out = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) out = std::max(out, std::abs(m(i, j) - std::conj(m(j, i))));
  return out;
}

/// (M + M^dagger) / 2
inline ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  ComplexMatrix out = m + adjoint(m);
  out *= 0.5;
  return out;
}

/// Partial transpose on the B factor: (rho^{T_B})_{(i,j),(k,l)} = rho_{(i,l),(k,j)}.
inline ComplexMatrix partial_transpose(const ComplexMatrix& rho, const BipartiteDims& dims) {
  const std::size_t D = dims.total();
  if (rho.rows() != D || rho.cols() != D) {
    throw std::invalid_argument("partial_transpose: matrix is " + std::to_string(rho.rows()) + "x" +
                                std::to_string(rho.cols()) + ", expected " + std::to_string(D) + "x" +
                                std::to_string(D));
  }
  ComplexMatrix out(D, D);
  for (std::size_t i = 0; i < dims.dA; ++i)
    for (std::size_t j = 0; j < dims.dB; ++j)
      for (std::size_t k = 0; k < dims.dA; ++k)
        for (std::size_t l = 0; l < dims.dB; ++l)
          out(dims.index(i, j), dims.index(k, l)) = rho(dims.index(i, l), dims.index(k, j));
  return out;
}

/// Standard basis vector e_k of length n.
inline ComplexVector basis_vector(std::size_t n, std::size_t k) {
  if (k >= n) throw std::invalid_argument("basis_vector: index out of range");
  ComplexVector v(n);
  v[k] = 1.0;
  return v;
}

}  // namespace bewitness
