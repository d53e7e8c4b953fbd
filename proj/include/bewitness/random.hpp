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

#include <cmath>
#include <cstdint>
#include <random>

#include "bewitness/kernel/matrix.hpp"

namespace bewitness {

inline constexpr std::uint64_t kDefaultSeed = 42;

/// Seeded source for every stochastic routine in the library. Identical
/// seeds replay identical draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = kDefaultSeed) : engine_(seed) {}

  /// Uniformly distributed (Haar) unit vector in C^n.
  ComplexVector unit_vector(std::size_t n) {
    ComplexVector v(n);
    double acc = 0.0;
    do {
      acc = 0.0;
      for (auto& x : v) {
        x = Complex(normal_(engine_), normal_(engine_));
        acc += std::norm(x);
      }
    } while (acc == 0.0);
    const double scale = 1.0 / std::sqrt(acc);
    for (auto& x : v) x *= scale;
    return v;
  }

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace bewitness
