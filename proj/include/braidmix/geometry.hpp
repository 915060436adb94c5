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

// Braid points, waypoints and strand geometry in the rectangular design
// region [0, length] x [0, height].

#ifndef BRAIDMIX_GEOMETRY_HPP_
#define BRAIDMIX_GEOMETRY_HPP_

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "braidmix/braid.hpp"
#include "braidmix/types.hpp"

namespace braidmix {

struct RegionRect {
  double height = 1.0;
  double length = 1.0;
  double duration = 1.0;

  // Throws PreconditionError unless all three are strictly positive.
  void validate() const;
  double diagonal() const;
};

// Braid points per column plus the agent-to-row assignment per step.
//
// `braid_points[q]` is 2 x N; column r is the braid point on row r.
// `rows[i][j]` is the row agent j occupies at step i (empty for a skeleton).
struct WaypointGrid {
  int agents = 0;
  int steps = 0;
  RegionRect region;
  std::vector<Eigen::Matrix2Xd> braid_points;
  std::vector<double> times;
  std::vector<std::vector<int>> rows;

  Vec2 braid_point(int column, int row) const {
    return braid_points[column].col(row);
  }
  bool assigned() const { return !rows.empty(); }
  // xi(step, agent); requires an assignment.
  Vec2 waypoint(int step, int agent) const {
    return braid_points[step].col(rows[step][agent]);
  }
};

// Uniform braid points (q*l/M, r*h/(N-1)) and times t_i = i*T/M.
WaypointGrid braid_point_grid(int agents, int steps, const RegionRect& region);
// Same points with an explicit time partition 0 = t_0 < ... < t_M = T.
WaypointGrid braid_point_grid(int agents, int steps, const RegionRect& region,
                              std::vector<double> times);

// Fills `rows` by applying each step's row transpositions in turn.
// Requires steps.size() == grid.steps.
WaypointGrid waypoints(WaypointGrid grid, const std::vector<BraidStep>& steps);

enum class StrandKind { kStraight, kCityBlock, kCustom };

std::string to_string(StrandKind kind);
StrandKind strand_kind_from_string(const std::string& name);

// A strand gamma: [0,1] -> R^2 from `start` to `end`.
//
// Straight and city-block strands are parameterized proportionally to
// arclength. Custom strands keep their own parameter map; `at_fraction`
// resamples them by arclength through a cumulative table.
class StrandPath {
 public:
  using Curve = std::function<Vec2(double)>;

  static StrandPath straight(const Vec2& a, const Vec2& b);
  // Horizontal to the midway abscissa, vertical, horizontal.
  static StrandPath city_block(const Vec2& a, const Vec2& b);
  // `velocity` is d gamma / dp. `table_steps` controls the arclength table.
  static StrandPath custom(Curve position, Curve velocity,
                           int table_steps = 4096);

  StrandKind kind() const { return kind_; }
  Vec2 start() const { return position(0.0); }
  Vec2 end() const { return position(1.0); }
  double length() const { return length_; }

  Vec2 position(double p) const;
  Vec2 velocity(double p) const;

  // Point at arclength fraction u in [0, 1].
  Vec2 at_fraction(double u) const;
  // Unit tangent at arclength fraction u (zero for a degenerate strand).
  Vec2 tangent_at_fraction(double u) const;
  // Raw parameter p for arclength fraction u.
  double parameter_at_fraction(double u) const;

  // Polyline through `segments + 1` arclength-uniform samples; city-block
  // strands return their exact corners.
  std::vector<Vec2> polyline(int segments = 256) const;

 private:
  StrandKind kind_ = StrandKind::kStraight;
  Vec2 a_ = Vec2::Zero();
  Vec2 b_ = Vec2::Zero();
  double length_ = 0.0;
  Curve position_;
  Curve velocity_;
  // Cumulative arclength at p = k / (table.size() - 1), custom only.
  std::shared_ptr<const std::vector<double>> table_;
};

StrandPath strand_path(const Vec2& a, const Vec2& b, StrandKind kind);

// Composite midpoint rule for the integral of |gamma'(p)| over [0, 1].
// Throws NumericalError on a non-finite derivative sample.
double arclength(const StrandPath& path, int steps = 4096);

struct CrossingInfo {
  Vec2 point = Vec2::Zero();
  // Arclength fractions of the crossing on each strand.
  double param_j = 0.0;
  double param_k = 0.0;
  // Angle between the unit directions at the crossing, in (0, pi).
  double angle = 0.0;
  // Along-path half-width of the safety separation region, once computed.
  double margin = 0.0;
};

// Transversal crossing strictly inside both strands. Straight pairs are
// solved in closed form; other kinds are searched segment by segment on
// their polylines. Parallel, disjoint, overlapping and endpoint-only
// contacts yield nullopt.
std::optional<CrossingInfo> intersection(const StrandPath& path_j,
                                         const StrandPath& path_k);

// Along-path distance from the crossing to the boundary of the safety
// separation region.
//   straight:   min_sep / sin(angle)
//   city-block: min_sep + height / (2 (agents - 1))
//   custom:     see custom_safety_margin
// Throws PreconditionError if min_sep <= 0 or the margin exceeds either
// strand length.
double safety_margin(const StrandPath& path_j, const StrandPath& path_k,
                     const CrossingInfo& cross, double min_sep, int agents,
                     double height);
// Closed-form margin for straight or city-block pairs without the strand
// length check.
double safety_margin(const CrossingInfo& cross, double min_sep, StrandKind kind,
                     int agents, double height);

// Smallest delta, to within one sample spacing and rounded up, such that
// every point of either strand farther than delta (along the strand) from
// the crossing is at least min_sep from the whole other strand. Found by
// bisection over the arclength samples.
double custom_safety_margin(const StrandPath& path_j, const StrandPath& path_k,
                            const CrossingInfo& cross, double min_sep,
                            int samples = 2048);

}  // namespace braidmix

#endif  // BRAIDMIX_GEOMETRY_HPP_
