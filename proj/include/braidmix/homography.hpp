// Copyright 2026 The braidmix Authors
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

// Plane projective transforms between a rectangular cell and a quadrilateral
// cell of a curved region.

#ifndef BRAIDMIX_HOMOGRAPHY_HPP_
#define BRAIDMIX_HOMOGRAPHY_HPP_

#include <array>
#include <cmath>
#include <functional>

#include <Eigen/SVD>

#include "braidmix/types.hpp"

namespace braidmix {

// Corner order used throughout: bottom-left, bottom-right, top-right,
// top-left.
template <typename Scalar>
using Corners = std::array<Vector2<Scalar>, 4>;

template <typename Scalar>
class Homography {
 public:
  using Vec = Vector2<Scalar>;
  using Mat = Matrix3<Scalar>;

  Homography() : m_(Mat::Identity()), inv_(Mat::Identity()) {}

  // Throws NumericalError if `m` is singular.
  explicit Homography(const Mat& m) : m_(m) {
    using std::abs;
    if (abs(m_(2, 2)) > Eigen::NumTraits<Scalar>::epsilon() * m_.norm()) {
      m_ /= m_(2, 2);
    }
    const Scalar det = m_.determinant();
    if (!(abs(det) > Eigen::NumTraits<Scalar>::epsilon() * m_.norm() *
                         m_.norm() * m_.norm())) {
      throw NumericalError("singular homography");
    }
    inv_ = m_.inverse();
  }

  const Mat& matrix() const { return m_; }
  const Mat& inverse_matrix() const { return inv_; }
  Homography inverse() const { return Homography(inv_); }

  Vec map(const Vec& p) const { return apply(m_, p); }
  Vec inverse_map(const Vec& q) const { return apply(inv_, q); }

  // Derivative of the perspective-divided map at p.
  Matrix2<Scalar> jacobian(const Vec& p) const { return derivative(m_, p); }
  // Derivative of the inverse map at a target point q.
  Matrix2<Scalar> inverse_jacobian(const Vec& q) const {
    return derivative(inv_, q);
  }

 private:
  static Scalar checked_w(const Mat& m, const Vec& p) {
    using std::abs;
    const Scalar w = m(2, 0) * p.x() + m(2, 1) * p.y() + m(2, 2);
    const Scalar scale = abs(m(2, 0) * p.x()) + abs(m(2, 1) * p.y()) +
                         abs(m(2, 2));
    if (!(abs(w) > Scalar(1e3) * Eigen::NumTraits<Scalar>::epsilon() * scale)) {
      throw NumericalError("point maps to infinity");
    }
    return w;
  }

  static Vec apply(const Mat& m, const Vec& p) {
    const Scalar w = checked_w(m, p);
    return Vec((m(0, 0) * p.x() + m(0, 1) * p.y() + m(0, 2)) / w,
               (m(1, 0) * p.x() + m(1, 1) * p.y() + m(1, 2)) / w);
  }

  static Matrix2<Scalar> derivative(const Mat& m, const Vec& p) {
    const Scalar w = checked_w(m, p);
    const Vec q = apply(m, p);
    Matrix2<Scalar> j;
    for (int r = 0; r < 2; ++r) {
      j(r, 0) = (m(r, 0) - q(r) * m(2, 0)) / w;
      j(r, 1) = (m(r, 1) - q(r) * m(2, 1)) / w;
    }
    return j;
  }

  Mat m_;
  Mat inv_;
};

namespace detail {

template <typename Scalar>
bool has_collinear_triple(const Corners<Scalar>& c) {
  using std::abs;
  Scalar scale = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      scale = std::max<Scalar>(scale, (c[i] - c[j]).norm());
    }
  }
  if (!(scale > 0)) return true;
  const Scalar tol = Scalar(1e-10) * scale * scale;
  for (int skip = 0; skip < 4; ++skip) {
    std::array<Vector2<Scalar>, 3> t;
    for (int i = 0, k = 0; i < 4; ++i) {
      if (i != skip) t[k++] = c[i];
    }
    const Vector2<Scalar> a = t[1] - t[0];
    const Vector2<Scalar> b = t[2] - t[0];
    if (abs(a.x() * b.y() - a.y() * b.x()) <= tol) return true;
  }
  return false;
}

// Similarity moving the centroid to the origin with mean distance sqrt(2).
template <typename Scalar>
Matrix3<Scalar> normalizer(const Corners<Scalar>& c) {
  using std::sqrt;
  Vector2<Scalar> centroid = Vector2<Scalar>::Zero();
  for (const auto& p : c) centroid += p;
  centroid /= Scalar(4);
  Scalar mean = 0;
  for (const auto& p : c) mean += (p - centroid).norm();
  mean /= Scalar(4);
  const Scalar s = sqrt(Scalar(2)) / mean;
  Matrix3<Scalar> t = Matrix3<Scalar>::Identity();
  t(0, 0) = t(1, 1) = s;
  t(0, 2) = -s * centroid.x();
  t(1, 2) = -s * centroid.y();
  return t;
}

}  // namespace detail

// Normalized direct linear transform through the four correspondences
// src[i] -> dst[i]. Throws PreconditionError when three corners of either set
// are collinear.
template <typename Scalar>
Homography<Scalar> fit_homography(const Corners<Scalar>& src,
                                  const Corners<Scalar>& dst) {
  if (detail::has_collinear_triple(src) || detail::has_collinear_triple(dst)) {
    throw PreconditionError("degenerate homography corners (collinear)");
  }
  const Matrix3<Scalar> ts = detail::normalizer(src);
  const Matrix3<Scalar> td = detail::normalizer(dst);
  Eigen::Matrix<Scalar, 8, 9> a;
  for (int i = 0; i < 4; ++i) {
    const Vector2<Scalar> p = (ts * src[i].homogeneous()).hnormalized();
    const Vector2<Scalar> q = (td * dst[i].homogeneous()).hnormalized();
    a.row(2 * i) << -p.x(), -p.y(), -1, 0, 0, 0, q.x() * p.x(), q.x() * p.y(),
        q.x();
    a.row(2 * i + 1) << 0, 0, 0, -p.x(), -p.y(), -1, q.y() * p.x(),
        q.y() * p.y(), q.y();
  }
  Eigen::JacobiSVD<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> svd(
      a, Eigen::ComputeFullV);
  const Eigen::Matrix<Scalar, 9, 1> h = svd.matrixV().col(8);
  Matrix3<Scalar> hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  return Homography<Scalar>(td.inverse() * hn * ts);
}

template <typename Scalar>
Vector2<Scalar> map_point(const Homography<Scalar>& h,
                          const Vector2<Scalar>& p) {
  return h.map(p);
}

template <typename Scalar>
Vector2<Scalar> inverse_map_point(const Homography<Scalar>& h,
                                  const Vector2<Scalar>& q) {
  return h.inverse_map(q);
}

template <typename Scalar>
Matrix2<Scalar> jacobian(const Homography<Scalar>& h,
                         const Vector2<Scalar>& p) {
  return h.jacobian(p);
}

// Length in rectangle coordinates of a curve given in quadrilateral
// coordinates: integral over [0, 1] of |DT^-1(gamma) gamma'| by the composite
// midpoint rule.
template <typename Scalar>
Scalar metric_arclength(
    const std::function<Vector2<Scalar>(Scalar)>& position,
    const std::function<Vector2<Scalar>(Scalar)>& velocity,
    const Homography<Scalar>& h, int steps = 4096) {
  using std::isfinite;
  if (steps < 1) throw PreconditionError("quadrature needs >= 1 step");
  const Scalar dp = Scalar(1) / steps;
  Scalar sum = 0;
  for (int k = 0; k < steps; ++k) {
    const Scalar p = (Scalar(k) + Scalar(0.5)) * dp;
    const Scalar speed =
        (h.inverse_jacobian(position(p)) * velocity(p)).norm();
    if (!isfinite(speed)) throw NumericalError("metric blowup along curve");
    sum += speed;
  }
  return sum * dp;
}

// Rectangle-space length of the quadrilateral segment from `crossing` to
// crossing + sign * delta * direction, sign = +1 forward, -1 backward.
template <typename Scalar>
Scalar segment_metric_length(const Homography<Scalar>& h,
                             const Vector2<Scalar>& crossing,
                             const Vector2<Scalar>& direction, Scalar delta,
                             int sign, int steps = 1024) {
  const Vector2<Scalar> v = Scalar(sign) * delta * direction;
  return metric_arclength<Scalar>(
      [&](Scalar p) -> Vector2<Scalar> { return crossing + p * v; },
      [&](Scalar) -> Vector2<Scalar> { return v; }, h, steps);
}

// |DT(gamma_d) gamma_d'|: the quadrilateral-space speed of a rectangle-space
// trajectory.
template <typename Scalar>
Scalar mapped_parameter_speed(const Homography<Scalar>& h,
                              const Vector2<Scalar>& point,
                              const Vector2<Scalar>& velocity) {
  return (h.jacobian(point) * velocity).norm();
}

}  // namespace braidmix

#endif  // BRAIDMIX_HOMOGRAPHY_HPP_
