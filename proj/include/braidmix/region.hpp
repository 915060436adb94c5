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

// Curved regions: world braid points per column, the rectangle-to-quad cell
// transforms between adjacent columns, and centerline tracks.

#ifndef BRAIDMIX_REGION_HPP_
#define BRAIDMIX_REGION_HPP_

#include <vector>

#include "braidmix/controllers.hpp"
#include "braidmix/geometry.hpp"
#include "braidmix/homography.hpp"

namespace braidmix {

// One cell between columns (column - 1, column) and rows (row, row + 1).
struct QuadCell {
  int column = 1;
  int row = 0;
  Corners<double> rect;
  Corners<double> quad;
  Homography<double> transform;

  bool convex() const;
  // Rectangle-space containment with absolute slack `tol`.
  bool contains_rect(const Vec2& p, double tol = 1e-9) const;
};

// Throws PreconditionError for a non-convex or degenerate quadrilateral.
QuadCell make_cell(int column, int row, const Corners<double>& rect,
                   const Corners<double>& quad);

bool is_convex(const Corners<double>& quad);

// delta_r: rectangle-space length of the quadrilateral segment of length
// `delta` from the crossing along `direction` (forward for under, backward
// for over). Throws PreconditionError if the segment leaves the cell.
double curved_safety_margin(const QuadCell& cell, const Vec2& crossing,
                            const Vec2& direction, double delta,
                            CrossingRole role);

// A planar centerline made of straight and circular pieces.
struct TrackPiece {
  // 0 for a straight piece.
  double curvature = 0.0;
  double length = 1.0;
};

struct Track {
  Vec2 origin = Vec2::Zero();
  double heading = 0.0;
  double width = 1.0;
  std::vector<TrackPiece> pieces;

  double length() const;
  // Centerline point and unit tangent at arclength s, clamped to the track.
  std::pair<Vec2, Vec2> pose(double s) const;
};

// World braid points of a curved region, one 2 x N matrix per column.
struct CurvedRegion {
  std::vector<Eigen::Matrix2Xd> columns;

  int agents() const {
    return columns.empty() ? 0 : static_cast<int>(columns.front().cols());
  }
  int steps() const { return static_cast<int>(columns.size()) - 1; }
  Vec2 point(int column, int row) const { return columns[column].col(row); }
};

// Column q sits at arclength q L / M; row r at lateral offset
// -w/2 + r w / (N - 1) along the left normal.
CurvedRegion sample_track(const Track& track, int agents, int steps);

// Cell between columns (column - 1, column) and rows (row, row + 1) mapping
// the matching rectangle of `grid` onto the curved region.
QuadCell region_cell(const WaypointGrid& grid, const CurvedRegion& region,
                     int column, int row);

}  // namespace braidmix

#endif  // BRAIDMIX_REGION_HPP_
