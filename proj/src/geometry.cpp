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

#include "ific/geometry.hpp"

#include <cmath>

#include <Eigen/Geometry>
#include <Eigen/SVD>

namespace ific {

Rotation::Rotation(const Matrix3& matrix) : matrix_(matrix) {
  if (!matrix.allFinite()) {
    throw InvalidRotation("rotation contains non-finite entries");
  }
  const double orthogonality = (matrix.transpose() * matrix - Matrix3::Identity()).norm();
  const double det = matrix.determinant();
  if (orthogonality > 1e-10 || std::abs(det - 1.0) > 1e-10) {
    throw InvalidRotation("matrix is not a proper rotation (|RᵀR − I| = " +
                          std::to_string(orthogonality) + ", det = " + std::to_string(det) + ")");
  }
}

Rotation Rotation::about_axis(const Vector3& axis, double angle) {
  return Rotation(Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix());
}

Matrix6 Rotation::block() const {
  Matrix6 out = Matrix6::Zero();
  out.topLeftCorner<3, 3>() = matrix_;
  out.bottomRightCorner<3, 3>() = matrix_;
  return out;
}

BinaryPattern::BinaryPattern(std::array<int, 6> entries) {
  for (std::size_t i = 0; i < 6; ++i) {
    if (entries[i] != 0 && entries[i] != 1) {
      throw ConfigError("binary pattern entries must be 0 or 1");
    }
    bits_[i] = entries[i] == 1;
  }
}

BinaryPattern BinaryPattern::nonzeros_of(const Vector6& v) {
  std::array<int, 6> entries{};
  for (int i = 0; i < 6; ++i) entries[static_cast<std::size_t>(i)] = v[i] != 0.0 ? 1 : 0;
  return BinaryPattern(entries);
}

int BinaryPattern::count() const {
  int n = 0;
  for (bool b : bits_) n += b ? 1 : 0;
  return n;
}

BinaryPattern BinaryPattern::complement() const {
  BinaryPattern out;
  for (std::size_t i = 0; i < 6; ++i) out.bits_[i] = !bits_[i];
  return out;
}

Vector6 BinaryPattern::as_vector() const {
  Vector6 v;
  for (int i = 0; i < 6; ++i) v[i] = (*this)[i] ? 1.0 : 0.0;
  return v;
}

Matrix6 pseudo_inverse(const Matrix6& m, double relative_cutoff) {
  Eigen::JacobiSVD<Matrix6> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector6 sigma = svd.singularValues();
  const double cutoff = relative_cutoff * sigma[0];
  Vector6 inverted = Vector6::Zero();
  for (int i = 0; i < 6; ++i) {
    if (sigma[i] > cutoff && sigma[i] > 0.0) inverted[i] = 1.0 / sigma[i];
  }
  return svd.matrixV() * inverted.asDiagonal() * svd.matrixU().transpose();
}

DirectionalBasis build_directional_basis(const Rotation& rotation, const BinaryPattern& pattern) {
  DirectionalBasis basis;
  // Columns d_f,i = [R(:,i); 0] and d_m,j = [0; R(:,j)] masked by the pattern.
  basis.directions = rotation.block() * pattern.as_vector().asDiagonal();
  const Matrix6& d = basis.directions;
  basis.span = d * pseudo_inverse(d.transpose() * d) * d.transpose();
  basis.kernel = Matrix6::Identity() - basis.span;
  basis.rank = pattern.count();
  return basis;
}

InteractionPowers interaction_powers(const Twist& velocity, const Wrench& wrench,
                                     const DirectionalBasis& force_basis) {
  return {velocity.dot(force_basis.span * wrench), velocity.dot(force_basis.kernel * wrench)};
}

Matrix6 rotate_gain(const Matrix6& force_frame_gain, const Rotation& rotation) {
  const Matrix6 r = rotation.block();
  return r * force_frame_gain * r.transpose();
}

}  // namespace ific
