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

#include <Eigen/LU>
#include <cmath>
#include <random>

#include "braidmix/region.hpp"
#include "doctest.h"

using namespace braidmix;
using doctest::Approx;

namespace {

const Corners<double> kUnit{Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)};
const Corners<double> kWide{Vec2(0, 0), Vec2(2, 0), Vec2(2, 1), Vec2(0, 1)};
const Corners<double> kKite{Vec2(0.1, -0.2), Vec2(2.3, 0.1), Vec2(1.7, 1.9),
                            Vec2(-0.3, 1.2)};

// Direct 8x8 solve with h33 = 1.
Mat3 solve_eight(const Corners<double>& s, const Corners<double>& d) {
  Eigen::Matrix<double, 8, 8> a;
  Eigen::Matrix<double, 8, 1> b;
  for (int i = 0; i < 4; ++i) {
    const double x = s[i].x(), y = s[i].y(), u = d[i].x(), v = d[i].y();
    a.row(2 * i) << x, y, 1, 0, 0, 0, -u * x, -u * y;
    a.row(2 * i + 1) << 0, 0, 0, x, y, 1, -v * x, -v * y;
    b(2 * i) = u;
    b(2 * i + 1) = v;
  }
  const Eigen::Matrix<double, 8, 1> h = a.fullPivLu().solve(b);
  Mat3 m;
  m << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), 1.0;
  return m;
}

Vec2 random_inside(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return {u(rng), u(rng)};
}

Track lab_track() {
  Track t;
  t.width = 0.8;
  t.pieces = {{0.0, 4.0}, {1.0 / 3.0, 3.0 * M_PI / 2}, {0.0, 3.0},
              {-1.0 / 2.5, 2.5 * M_PI / 2}, {0.0, 4.5}};
  return t;
}

}  // namespace

TEST_CASE("homography fit examples") {
  const auto id = fit_homography(kUnit, kUnit);
  CHECK(id.matrix().isApprox(Mat3::Identity(), 1e-12));
  CHECK(map_point(id, Vec2(0.3, 0.7)).isApprox(Vec2(0.3, 0.7), 1e-12));
  CHECK(jacobian(id, Vec2(0.3, 0.7)).isApprox(Mat2::Identity(), 1e-12));

  const auto wide = fit_homography(kUnit, kWide);
  Mat3 expect = Mat3::Identity();
  expect(0, 0) = 2.0;
  CHECK(wide.matrix().isApprox(expect, 1e-12));
  CHECK(std::abs(wide.matrix()(2, 0)) < 1e-12);
  CHECK(std::abs(wide.matrix()(2, 1)) < 1e-12);
  for (const Vec2 p : {Vec2(0.1, 0.2), Vec2(0.9, 0.5)}) {
    CHECK(jacobian(wide, p).isApprox(Vec2(2, 1).asDiagonal().toDenseMatrix(), 1e-12));
  }

  const auto kite = fit_homography(kUnit, kKite);
  CHECK(std::abs(kite.matrix()(2, 0)) + std::abs(kite.matrix()(2, 1)) > 1e-3);
  for (int i = 0; i < 4; ++i) {
    CHECK((map_point(kite, kUnit[i]) - kKite[i]).norm() < 1e-9);
  }
  CHECK(kite.matrix().isApprox(solve_eight(kUnit, kKite), 1e-10));
}

TEST_CASE("homography fit matches an independent linear solve") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  int fitted = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Corners<double> src, dst;
    const double sx = 0.5 + std::abs(jitter(rng)) * 5, sy = 0.5 + std::abs(jitter(rng)) * 5;
    for (int i = 0; i < 4; ++i) {
      src[i] = Vec2(kUnit[i].x() * sx + 3, kUnit[i].y() * sy - 1);
      dst[i] = Vec2(kUnit[i].x() * 2 + jitter(rng), kUnit[i].y() * 2 + jitter(rng));
    }
    if (!is_convex(dst)) continue;
    ++fitted;
    const auto h = fit_homography(src, dst);
    CHECK(h.matrix().isApprox(solve_eight(src, dst), 1e-9));
    for (int i = 0; i < 4; ++i) CHECK((h.map(src[i]) - dst[i]).norm() < 1e-9);
  }
  CHECK(fitted > 150);
}

TEST_CASE("homography round trip and jacobian") {
  std::mt19937_64 rng(6);
  const auto kite = fit_homography(kUnit, kKite);
  const auto back = kite.inverse();
  for (int trial = 0; trial < 500; ++trial) {
    const Vec2 p = random_inside(rng);
    CHECK((inverse_map_point(kite, map_point(kite, p)) - p).norm() < 1e-9);
    CHECK((back.map(kite.map(p)) - p).norm() < 1e-9);

    const double e = 1e-6;
    Mat2 fd;
    fd.col(0) = (kite.map(p + Vec2(e, 0)) - kite.map(p - Vec2(e, 0))) / (2 * e);
    fd.col(1) = (kite.map(p + Vec2(0, e)) - kite.map(p - Vec2(0, e))) / (2 * e);
    CHECK((jacobian(kite, p) - fd).cwiseAbs().maxCoeff() < 1e-6);
    const Vec2 q = kite.map(p);
    CHECK((kite.inverse_jacobian(q) * kite.jacobian(p) - Mat2::Identity()).norm() < 1e-9);
    // Orientation preserved inside a convex, same-order cell.
    CHECK(jacobian(kite, p).determinant() > 0.0);
  }
}

TEST_CASE("homography errors") {
  const Corners<double> line{Vec2(0, 0), Vec2(1, 0), Vec2(2, 0), Vec2(0, 1)};
  CHECK_THROWS_AS(fit_homography(kUnit, line), PreconditionError);
  CHECK_THROWS_AS(fit_homography(line, kUnit), PreconditionError);
  CHECK_THROWS_AS(Homography<double>(Mat3::Zero()), NumericalError);
  Mat3 m = Mat3::Identity();
  m(2, 0) = 1.0;
  const Homography<double> h(m);
  CHECK_THROWS_AS(h.map(Vec2(-1.0, 0.0)), NumericalError);
}

TEST_CASE("homography in extended precision") {
  using L = long double;
  Corners<L> s, d;
  for (int i = 0; i < 4; ++i) {
    s[i] = kUnit[i].cast<L>();
    d[i] = kKite[i].cast<L>();
  }
  const auto h = fit_homography(s, d);
  for (int i = 0; i < 4; ++i) CHECK((h.map(s[i]) - d[i]).norm() < 1e-15L);
  CHECK((h.inverse_map(h.map(Vector2<L>(0.25L, 0.5L))) - Vector2<L>(0.25L, 0.5L)).norm() <
        1e-15L);
}

TEST_CASE("metric arclength") {
  using F = std::function<Vec2(double)>;
  const Homography<double> id;
  const F pos = [](double p) { return Vec2(3 * p, 4 * p); };
  const F vel = [](double) { return Vec2(3, 4); };
  CHECK(metric_arclength(pos, vel, id) == Approx(5.0));

  const auto wide = fit_homography(kUnit, kWide);
  const F hp = [](double p) { return Vec2(2 * p, 0); };
  const F hv = [](double) { return Vec2(2, 0); };
  CHECK(metric_arclength(hp, hv, wide) == Approx(1.0));

  // The metric length of a mapped curve is the length of the original.
  const auto kite = fit_homography(kUnit, kKite);
  const F rp = [](double p) { return Vec2(0.1 + 0.8 * p, 0.5 + 0.3 * std::sin(3 * p)); };
  const F rv = [](double p) { return Vec2(0.8, 0.9 * std::cos(3 * p)); };
  double rect_len = 0.0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) rect_len += rv((k + 0.5) / n).norm() / n;
  const F qp = [&](double p) { return kite.map(rp(p)); };
  const F qv = [&](double p) { return Vec2(kite.jacobian(rp(p)) * rv(p)); };
  CHECK(metric_arclength(qp, qv, kite, 20000) == Approx(rect_len).epsilon(1e-8));

  CHECK_THROWS_AS(metric_arclength(pos, vel, id, 0), PreconditionError);
}

TEST_CASE("curved safety margin") {
  const auto id = make_cell(1, 0, kUnit, kUnit);
  CHECK(curved_safety_margin(id, Vec2(0.5, 0.5), Vec2(1, 0), 0.2, CrossingRole::kUnder) ==
        Approx(0.2));
  const auto wide = make_cell(1, 0, kUnit, kWide);
  CHECK(curved_safety_margin(wide, Vec2(1, 0.5), Vec2(1, 0), 0.2, CrossingRole::kUnder) ==
        Approx(0.1));
  CHECK(curved_safety_margin(wide, Vec2(1, 0.5), Vec2(1, 0), 0.2, CrossingRole::kOver) ==
        Approx(0.1));
  CHECK(curved_safety_margin(wide, Vec2(1, 0.5), Vec2(0, 1), 0.2, CrossingRole::kOver) ==
        Approx(0.2));
  // Over walks backward: from near the left edge it leaves the cell.
  CHECK_THROWS_AS(
      curved_safety_margin(wide, Vec2(0.1, 0.5), Vec2(1, 0), 0.2, CrossingRole::kOver),
      PreconditionError);
  CHECK(curved_safety_margin(wide, Vec2(0.1, 0.5), Vec2(1, 0), 0.2, CrossingRole::kUnder) ==
        Approx(0.1));

  // Projective cell: matches the rectangle distance between the preimages.
  const auto kite = make_cell(1, 0, kUnit, kKite);
  const Vec2 c = kite.transform.map(Vec2(0.5, 0.5));
  const Vec2 dir = (kKite[2] - kKite[0]).normalized();
  const double dr = curved_safety_margin(kite, c, dir, 0.1, CrossingRole::kUnder);
  // A homography maps lines to lines, so the pullback is a straight segment.
  const double chord =
      (kite.transform.inverse_map(c + 0.1 * dir) - kite.transform.inverse_map(c)).norm();
  CHECK(dr == Approx(chord).epsilon(1e-6));
}

TEST_CASE("mapped parameter speed") {
  const Homography<double> id;
  CHECK(mapped_parameter_speed(id, Vec2(0.2, 0.3), Vec2(3, 4)) == Approx(5.0));
  const auto wide = fit_homography(kUnit, kWide);
  CHECK(mapped_parameter_speed(wide, Vec2(0.2, 0.3), Vec2(1, 0)) == Approx(2.0));

  const auto kite = fit_homography(kUnit, kKite);
  auto traj = [](double t) { return Vec2(0.2 + 0.5 * t, 0.3 + 0.4 * t * t); };
  auto dtraj = [](double t) { return Vec2(0.5, 0.8 * t); };
  for (double t : {0.1, 0.4, 0.9}) {
    const double e = 1e-6;
    const double fd = (kite.map(traj(t + e)) - kite.map(traj(t - e))).norm() / (2 * e);
    CHECK(std::abs(mapped_parameter_speed(kite, traj(t), dtraj(t)) - fd) < 1e-5);
  }
}

TEST_CASE("cell convexity") {
  CHECK(is_convex(kUnit));
  CHECK(is_convex(kKite));
  const Corners<double> dart{Vec2(0, 0), Vec2(2, 0), Vec2(0.5, 0.5), Vec2(0, 2)};
  CHECK_FALSE(is_convex(dart));
  CHECK_THROWS_AS(make_cell(1, 0, kUnit, dart), PreconditionError);
  const Corners<double> bow{Vec2(0, 0), Vec2(1, 1), Vec2(1, 0), Vec2(0, 1)};
  CHECK_FALSE(is_convex(bow));
  const auto cell = make_cell(1, 0, kUnit, kKite);
  CHECK(cell.convex());
  CHECK(cell.contains_rect(Vec2(1.0, 0.5)));
  CHECK_FALSE(cell.contains_rect(Vec2(1.1, 0.5)));
}

TEST_CASE("track geometry") {
  Track t;
  t.pieces = {{0.0, 2.0}, {1.0, M_PI / 2}};
  CHECK(t.length() == Approx(2.0 + M_PI / 2));
  const auto [p0, d0] = t.pose(0.0);
  CHECK(p0 == Vec2(0, 0));
  CHECK(d0.isApprox(Vec2(1, 0)));
  const auto [p1, d1] = t.pose(2.0);
  CHECK(p1.isApprox(Vec2(2, 0)));
  const auto [p2, d2] = t.pose(t.length());
  CHECK(p2.isApprox(Vec2(3, 1)));
  CHECK(d2.isApprox(Vec2(0, 1), 1e-12));
  const auto [p3, d3] = t.pose(100.0);
  CHECK(p3.isApprox(p2));
  // Right turn.
  Track r;
  r.pieces = {{-0.5, 2 * M_PI}};
  CHECK(r.pose(r.length()).first.isApprox(Vec2(0, -4), 1e-12));

  const auto region = sample_track(t, 3, 4);
  CHECK(region.agents() == 3);
  CHECK(region.steps() == 4);
  CHECK(region.point(0, 0).isApprox(Vec2(0, -0.5)));
  CHECK(region.point(0, 2).isApprox(Vec2(0, 0.5)));
  for (int q = 0; q <= 4; ++q) {
    CHECK((region.point(q, 2) - region.point(q, 0)).norm() == Approx(1.0));
    CHECK(((region.point(q, 0) + region.point(q, 2)) / 2 - t.pose(t.length() * q / 4).first)
              .norm() < 1e-12);
  }

  Track tight = t;
  tight.width = 2.5;
  CHECK_THROWS_AS(sample_track(tight, 3, 4), PreconditionError);
  CHECK_THROWS_AS(sample_track(t, 1, 4), PreconditionError);
  CHECK_THROWS_AS(sample_track(Track{}, 3, 4), PreconditionError);
}

TEST_CASE("curved region cells tile consistently") {
  const Track t = lab_track();
  const int n = 5, m = 80;
  const auto region = sample_track(t, n, m);
  const auto grid = braid_point_grid(n, m, {4.0, 20.0, 30.0});
  for (int q = 1; q <= m; ++q) {
    for (int r = 0; r + 1 < n; ++r) {
      const auto cell = region_cell(grid, region, q, r);
      CHECK(cell.convex());
      for (int i = 0; i < 4; ++i) CHECK((cell.transform.map(cell.rect[i]) - cell.quad[i]).norm() < 1e-9);
      const Vec2 mid = 0.5 * (cell.rect[0] + cell.rect[2]);
      CHECK(cell.transform.jacobian(mid).determinant() > 0.0);
      // The shared right edge lands on the same world segment in the next cell.
      if (q < m) {
        const auto next = region_cell(grid, region, q + 1, r);
        for (double s : {0.25, 0.5, 0.75}) {
          const Vec2 e = cell.rect[1] + s * (cell.rect[2] - cell.rect[1]);
          const Vec2 a = cell.transform.map(e);
          const Vec2 b = next.transform.map(e);
          const Vec2 lo = region.point(q, r), hi = region.point(q, r + 1);
          const Vec2 dir = (hi - lo).normalized();
          const Vec2 na = a - lo, nb = b - lo;
          CHECK(std::abs(na.x() * dir.y() - na.y() * dir.x()) < 1e-9);
          CHECK(std::abs(nb.x() * dir.y() - nb.y() * dir.x()) < 1e-9);
        }
      }
    }
  }
  CHECK_THROWS_AS(region_cell(grid, region, 0, 0), PreconditionError);
  CHECK_THROWS_AS(region_cell(grid, region, 1, n - 1), PreconditionError);
  CHECK_THROWS_AS(region_cell(braid_point_grid(n, 10, {4, 20, 30}), region, 1, 0),
                  PreconditionError);
}
