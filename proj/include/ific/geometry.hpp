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

#include <array>

#include "ific/types.hpp"

namespace ific {

/// Orientation of a frame relative to the world. Always a proper rotation.
class Rotation {
 public:
  Rotation() : matrix_(Matrix3::Identity()) {}
  /// Throws InvalidRotation unless RᵀR = I and det R = +1 within 1e-10.
  explicit Rotation(const Matrix3& matrix);

  static Rotation about_axis(const Vector3& axis, double angle);

  const Matrix3& matrix() const { return matrix_; }
  /// blockdiag(R, R), the map applied to 6-vectors.
  Matrix6 block() const;

  bool operator==(const Rotation& other) const { return matrix_ == other.matrix_; }

 private:
  Matrix3 matrix_;
};

/// Six entries, each exactly 0 or 1.
class BinaryPattern {
 public:
  BinaryPattern() { bits_.fill(false); }
  explicit BinaryPattern(std::array<int, 6> entries);

  /// Ones wherever |v_i| > 0.
  static BinaryPattern nonzeros_of(const Vector6& v);

  bool operator[](int i) const { return bits_[static_cast<std::size_t>(i)]; }
  int count() const;
  BinaryPattern complement() const;
  Vector6 as_vector() const;

  bool operator==(const BinaryPattern& other) const { return bits_ == other.bits_; }

 private:
  std::array<bool, 6> bits_;
};

struct DirectionalBasis {
  Matrix6 directions = Matrix6::Zero();  ///< D
  Matrix6 span = Matrix6::Zero();        ///< [D], projector onto the column space
  Matrix6 kernel = Matrix6::Identity();  ///< ⟨D⟩ = I − [D]
  int rank = 0;
};

struct InteractionPowers {
  double constrained = 0.0;    ///< P_c [W]
  double unconstrained = 0.0;  ///< P_u [W]
};

DirectionalBasis build_directional_basis(const Rotation& rotation, const BinaryPattern& pattern);

InteractionPowers interaction_powers(const Twist& velocity, const Wrench& wrench,
                                     const DirectionalBasis& force_basis);

/// blockdiag(R,R) · K · blockdiag(R,R)ᵀ
Matrix6 rotate_gain(const Matrix6& force_frame_gain, const Rotation& rotation);

/// Moore-Penrose pseudoinverse through SVD, singular values below
/// relative_cutoff·σ_max treated as zero.
Matrix6 pseudo_inverse(const Matrix6& m, double relative_cutoff = 1e-10);

}  // namespace ific
