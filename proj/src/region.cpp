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

#include "braidmix/region.hpp"

#include <algorithm>
#include <cmath>

namespace braidmix {

bool is_convex(const Corners<double>& quad) {
  int sign = 0;
  for (int i = 0; i < 4; ++i) {
    const Vec2 a = quad[(i + 1) % 4] - quad[i];
    const Vec2 b = quad[(i + 2) % 4] - quad[(i + 1) % 4];
    const double cross = a.x() * b.y() - a.y() * b.x();
    if (cross == 0.0) return false;
    const int s = cross > 0.0 ? 1 : -1;
    if (sign == 0) {
      sign = s;
    } else if (s != sign) {
      return false;
    }
  }
  return true;
}

bool QuadCell::convex() const { return is_convex(quad); }

bool QuadCell::contains_rect(const Vec2& p, double tol) const {
  double x0 = rect[0].x(), x1 = rect[0].x(), y0 = rect[0].y(), y1 = rect[0].y();
  for (const auto& c : rect) {
    x0 = std::min(x0, c.x());
    x1 = std::max(x1, c.x());
    y0 = std::min(y0, c.y());
    y1 = std::max(y1, c.y());
  }
  return p.x() >= x0 - tol && p.x() <= x1 + tol && p.y() >= y0 - tol &&
         p.y() <= y1 + tol;
}

QuadCell make_cell(int column, int row, const Corners<double>& rect,
                   const Corners<double>& quad) {
  if (!is_convex(quad)) {
    throw PreconditionError("cell (" + std::to_string(column) + ", " +
                            std::to_string(row) + ") is not convex");
  }
  QuadCell cell;
  cell.column = column;
  cell.row = row;
  cell.rect = rect;
  cell.quad = quad;
  cell.transform = fit_homography(rect, quad);
  return cell;
}

double curved_safety_margin(const QuadCell& cell, const Vec2& crossing,
                            const Vec2& direction, double delta,
                            CrossingRole role) {
  if (!(delta >= 0.0)) throw PreconditionError("safety margin must be >= 0");
  const int sign = role == CrossingRole::kOver ? -1 : 1;
  const Vec2 tip = crossing + sign * delta * direction;
  const auto& h = cell.transform;
  if (!cell.contains_rect(h.inverse_map(crossing), 1e-9) ||
      !cell.contains_rect(h.inverse_map(tip), 1e-9)) {
    throw PreconditionError("safety segment leaves the cell");
  }
  return segment_metric_length(h, crossing, direction, delta, sign);
}

double Track::length() const {
  double total = 0.0;
  for (const auto& p : pieces) total += p.length;
  return total;
}

std::pair<Vec2, Vec2> Track::pose(double s) const {
  Vec2 point = origin;
  double theta = heading;
  s = std::clamp(s, 0.0, length());
  for (const auto& piece : pieces) {
    const double run = std::min(s, piece.length);
    if (piece.curvature == 0.0) {
      point += run * Vec2(std::cos(theta), std::sin(theta));
    } else {
      const double k = piece.curvature;
      const double next = theta + k * run;
      point += Vec2(std::sin(next) - std::sin(theta),
                    std::cos(theta) - std::cos(next)) /
               k;
      theta = next;
    }
    s -= run;
    if (s <= 0.0) break;
  }
  return {point, Vec2(std::cos(theta), std::sin(theta))};
}

CurvedRegion sample_track(const Track& track, int agents, int steps) {
  if (agents < 2 || steps < 1) {
    throw PreconditionError("track sampling needs N >= 2 and M >= 1");
  }
  if (!(track.width > 0.0) || track.pieces.empty()) {
    throw PreconditionError("track needs a positive width and pieces");
  }
  for (const auto& p : track.pieces) {
    if (!(p.length > 0.0)) throw PreconditionError("track piece length must be > 0");
    if (p.curvature != 0.0 && std::abs(1.0 / p.curvature) <= 0.5 * track.width) {
      throw PreconditionError("track turn radius must exceed half the width");
    }
  }
  CurvedRegion region;
  const double total = track.length();
  for (int q = 0; q <= steps; ++q) {
    const auto [center, tangent] = track.pose(total * q / steps);
    const Vec2 normal(-tangent.y(), tangent.x());
    Eigen::Matrix2Xd column(2, agents);
    for (int r = 0; r < agents; ++r) {
      const double offset = -0.5 * track.width + r * track.width / (agents - 1);
      column.col(r) = center + offset * normal;
    }
    region.columns.push_back(std::move(column));
  }
  return region;
}

QuadCell region_cell(const WaypointGrid& grid, const CurvedRegion& region,
                     int column, int row) {
  if (column < 1 || column > grid.steps || row < 0 || row + 1 >= grid.agents) {
    throw PreconditionError("cell index out of range");
  }
  if (region.steps() != grid.steps || region.agents() != grid.agents) {
    throw PreconditionError("curved region does not match the braid grid");
  }
  const Corners<double> rect{grid.braid_point(column - 1, row),
                             grid.braid_point(column, row),
                             grid.braid_point(column, row + 1),
                             grid.braid_point(column - 1, row + 1)};
  const Corners<double> quad{region.point(column - 1, row),
                             region.point(column, row),
                             region.point(column, row + 1),
                             region.point(column - 1, row + 1)};
  return make_cell(column, row, rect, quad);
}

}  // namespace braidmix
