// Copyright 2026 The IFIC Authors
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

#pragma once

#include <random>

#include <Eigen/Geometry>

#include "ific/geometry.hpp"

namespace ific::test {

inline Vector6 random_vector(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector6 v;
  for (int i = 0; i < 6; ++i) v[i] = u(rng);
  return v;
}

inline Rotation random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return Rotation(q.toRotationMatrix());
}

inline BinaryPattern random_pattern(std::mt19937_64& rng) {
  std::bernoulli_distribution b(0.5);
  std::array<int, 6> e{};
  for (auto& x : e) x = b(rng) ? 1 : 0;
  return BinaryPattern(e);
}

}  // namespace ific::test
