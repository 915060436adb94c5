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

// Braid controllers for single integrators: the Stop-Go-Stop hybrid
// strategy, piecewise-constant strand reparameterization, and mixing-limit
// bounds.

#ifndef BRAIDMIX_CONTROLLERS_HPP_
#define BRAIDMIX_CONTROLLERS_HPP_

#include <string>
#include <utility>
#include <vector>

#include "braidmix/braid.hpp"
#include "braidmix/geometry.hpp"
#include "braidmix/types.hpp"

namespace braidmix {

// "under" crosses the intersection first (fast, then slow); "over" crosses
// second. Agents without a crossing in a step have role none.
enum class CrossingRole { kNone, kUnder, kOver };

std::string to_string(CrossingRole role);

// Roles of the agents on rows (index-1, index) for one generator: sigma_k
// puts the lower-row strand over, its inverse puts it under.
std::pair<CrossingRole, CrossingRole> crossing_roles(const Generator& g);

// p(t) on [t_start, t_end] with two constant velocities switching at the
// half time. p(t_start) = 0, p(t_mid) = (L +- offset) / (2 L), p(t_end) = 1.
struct Parameterization {
  double t_start = 0.0;
  double t_mid = 0.5;
  double t_end = 1.0;
  double velocity_first = 1.0;
  double velocity_second = 1.0;
  CrossingRole role = CrossingRole::kNone;
  double strand_length = 1.0;
  double offset = 0.0;

  // Clamped to [0, 1] outside the step.
  double position(double t) const;
  double velocity(double t) const;
};

// Minimum-energy retiming of a strand of length `strand_length` so that it
// is (L + offset) / (2 L) along at mid-step for "under" and
// (L - offset) / (2 L) for "over"; role none ignores the offset.
// Throws PreconditionError unless 0 <= offset <= strand_length and
// t_end > t_start.
Parameterization reparameterize(double strand_length, double offset,
                                double t_start, double t_end,
                                CrossingRole role);

// Arclength bracket for strands between adjacent braid points:
// straight-line lower bound and city-block upper bound.
std::pair<double, double> arclength_bounds(int agents, int steps, double height,
                                           double length);

struct MixingBound {
  int agents = 2;
  double height = 0.0;
  double length = 0.0;
  double duration = 0.0;
  double max_separation = 0.0;
  double v_max = 0.0;
  // 2 sqrt(4h^2 - d^2 (N-1)^2) / (d h)
  double separation_term = 0.0;
  // (N-1)(v_max T - (l + d)) / h - 1/2
  double time_term = 0.0;
  int value = 0;
};

// Upper bound on the mixing limit for reparameterized braids. Zero when the
// braid points themselves are closer than `max_separation`.
// Throws PreconditionError on non-positive inputs.
MixingBound mixing_limit_upper(int agents, double height, double length,
                               double duration, double max_separation,
                               double v_max);

// cos(theta*) = (l/M) / sqrt(l^2/M^2 + h^2).
double cos_theta_star(int steps, double height, double length);

struct StopGoStopCheck {
  // cos(theta*) v_max (min step - (N-1) tau) >= sqrt(l^2/M^2 + h^2)
  bool inequality = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double tau = 0.0;
  // h / (N-1) >= d
  bool rows_separated = false;
  // Each braid point clears the crossing diagonal of its cell by d:
  // (l/M)(h/(N-1)) / sqrt((l/M)^2 + (h/(N-1))^2) >= d.
  bool diagonal_clearance = false;

  bool ok() const { return inequality && rows_separated && diagonal_clearance; }
};

StopGoStopCheck stop_go_stop_check(int agents, int steps, double height,
                                   double length, double max_separation,
                                   double v_max, const std::vector<double>& times);
bool stop_go_stop_feasible(int agents, int steps, double height, double length,
                           double duration, double max_separation, double v_max,
                           const std::vector<double>& times);
// Uniform partition of [0, duration].
bool stop_go_stop_feasible(int agents, int steps, double height, double length,
                           double duration, double max_separation,
                           double v_max);

// Largest M in [1, limit] whose uniform-partition braid passes the
// Stop-Go-Stop test, or 0.
int max_stop_go_stop_steps(int agents, double height, double length,
                           double duration, double max_separation, double v_max,
                           int limit = 1000);

struct StopGoStopLeg {
  // 0-based position in the release order s_i.
  int order = 0;
  double wait = 0.0;
  double release = 0.0;
  double arrival = 0.0;
  double speed = 0.0;
  double distance = 0.0;
  Vec2 heading = Vec2::UnitX();
  Vec2 from = Vec2::Zero();
  Vec2 to = Vec2::Zero();
};

enum class StopGoStopMode { kStopBefore, kGo, kStopAfter };

struct StopGoStopPlan {
  double tau = 0.0;
  double cos_theta_star = 1.0;
  StopGoStopCheck check;
  // legs[step][agent], step 0 is the move from column 0 to column 1.
  std::vector<std::vector<StopGoStopLeg>> legs;

  // Nominal position and mode of `agent` at time t within step `step`.
  Vec2 position(int step, int agent, double t) const;
  StopGoStopMode mode(int step, int agent, double t) const;
};

// Farthest-first release order per step (ties: lower agent index), waits
// (s_i(j) - 1) tau and GO speeds v_max cos(theta_first) / cos(theta_own).
// With `require_feasible` a failed stop_go_stop_check throws
// PreconditionError; otherwise the check is only recorded.
StopGoStopPlan stop_go_stop_plan(const WaypointGrid& grid, double v_max,
                                 double max_separation,
                                 bool require_feasible = true);

}  // namespace braidmix

#endif  // BRAIDMIX_CONTROLLERS_HPP_
