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

#include "braidmix/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace braidmix {

std::string to_string(CrossingRole role) {
  switch (role) {
    case CrossingRole::kNone:
      return "none";
    case CrossingRole::kUnder:
      return "under";
    case CrossingRole::kOver:
      return "over";
  }
  return "none";
}

std::pair<CrossingRole, CrossingRole> crossing_roles(const Generator& g) {
  if (g.is_identity()) return {CrossingRole::kNone, CrossingRole::kNone};
  if (g.inverse) return {CrossingRole::kUnder, CrossingRole::kOver};
  return {CrossingRole::kOver, CrossingRole::kUnder};
}

double Parameterization::position(double t) const {
  if (t <= t_start) return 0.0;
  if (t >= t_end) return 1.0;
  if (t <= t_mid) return velocity_first * (t - t_start);
  const double p_mid = velocity_first * (t_mid - t_start);
  // Anchored at the end so p(t_end) = 1 holds exactly.
  const double p = 1.0 - velocity_second * (t_end - t);
  return std::max(p, p_mid);
}

double Parameterization::velocity(double t) const {
  if (t < t_start || t > t_end) return 0.0;
  return t < t_mid ? velocity_first : velocity_second;
}

Parameterization reparameterize(double strand_length, double offset,
                                double t_start, double t_end,
                                CrossingRole role) {
  if (!(t_end > t_start)) {
    throw PreconditionError("reparameterization needs t_end > t_start");
  }
  if (!(strand_length >= 0.0)) {
    throw PreconditionError("strand length must be >= 0");
  }
  Parameterization p;
  p.t_start = t_start;
  p.t_end = t_end;
  p.t_mid = 0.5 * (t_start + t_end);
  p.role = role;
  p.strand_length = strand_length;
  const double span = t_end - t_start;
  if (role == CrossingRole::kNone) {
    p.offset = 0.0;
    p.velocity_first = p.velocity_second = 1.0 / span;
    return p;
  }
  if (!(offset >= 0.0) || offset > strand_length || strand_length == 0.0) {
    throw PreconditionError("safety offset " + std::to_string(offset) +
                            " must lie in [0, strand length " +
                            std::to_string(strand_length) + "]");
  }
  p.offset = offset;
  const double fast = (strand_length + offset) / (strand_length * span);
  const double slow = (strand_length - offset) / (strand_length * span);
  p.velocity_first = role == CrossingRole::kUnder ? fast : slow;
  p.velocity_second = role == CrossingRole::kUnder ? slow : fast;
  return p;
}

std::pair<double, double> arclength_bounds(int agents, int steps, double height,
                                           double length) {
  if (agents < 2 || steps < 1) {
    throw PreconditionError("arclength bounds need N >= 2 and M >= 1");
  }
  const double dy = height / (agents - 1);
  const double dx = length / steps;
  return {std::hypot(dx, dy), dx + dy};
}

MixingBound mixing_limit_upper(int agents, double height, double length,
                               double duration, double max_separation,
                               double v_max) {
  if (agents < 2) throw PreconditionError("mixing bound needs N >= 2");
  if (!(height > 0.0) || !(length > 0.0) || !(duration > 0.0) ||
      !(max_separation > 0.0) || !(v_max > 0.0)) {
    throw PreconditionError("mixing bound inputs must be > 0");
  }
  MixingBound b;
  b.agents = agents;
  b.height = height;
  b.length = length;
  b.duration = duration;
  b.max_separation = max_separation;
  b.v_max = v_max;
  const double n1 = agents - 1;
  const double d = max_separation;
  b.time_term = n1 * (v_max * duration - (length + d)) / height - 0.5;
  if (d > height / n1) {
    b.separation_term = 0.0;
    b.value = 0;
    return b;
  }
  b.separation_term =
      2.0 * std::sqrt(4.0 * height * height - d * d * n1 * n1) / (d * height);
  const double m = std::floor(std::min(b.separation_term, b.time_term));
  b.value = m > 0.0 ? static_cast<int>(m) : 0;
  return b;
}

double cos_theta_star(int steps, double height, double length) {
  const double dx = length / steps;
  return dx / std::hypot(dx, height);
}

StopGoStopCheck stop_go_stop_check(int agents, int steps, double height,
                                   double length, double max_separation,
                                   double v_max,
                                   const std::vector<double>& times) {
  if (agents < 2 || steps < 1) {
    throw PreconditionError("Stop-Go-Stop test needs N >= 2 and M >= 1");
  }
  if (times.size() != static_cast<std::size_t>(steps) + 1) {
    throw PreconditionError("time partition must have M + 1 entries");
  }
  StopGoStopCheck c;
  const double cs = cos_theta_star(steps, height, length);
  c.tau = max_separation / (v_max * cs);
  double min_step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < times.size(); ++i) {
    min_step = std::min(min_step, times[i] - times[i - 1]);
  }
  const double dx = length / steps;
  c.lhs = cs * v_max * (min_step - (agents - 1) * c.tau);
  c.rhs = std::hypot(dx, height);
  c.inequality = c.lhs >= c.rhs;
  const double dy = height / (agents - 1);
  c.rows_separated = dy >= max_separation;
  c.diagonal_clearance = dx * dy / std::hypot(dx, dy) >= max_separation;
  return c;
}

bool stop_go_stop_feasible(int agents, int steps, double height, double length,
                           double duration, double max_separation, double v_max,
                           const std::vector<double>& times) {
  if (times.empty() || times.back() != duration) {
    throw PreconditionError("time partition must end at T");
  }
  return stop_go_stop_check(agents, steps, height, length, max_separation,
                            v_max, times)
      .ok();
}

bool stop_go_stop_feasible(int agents, int steps, double height, double length,
                           double duration, double max_separation,
                           double v_max) {
  if (steps < 1) return false;
  std::vector<double> times(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) times[i] = duration * i / steps;
  times.back() = duration;
  return stop_go_stop_feasible(agents, steps, height, length, duration,
                               max_separation, v_max, times);
}

int max_stop_go_stop_steps(int agents, double height, double length,
                           double duration, double max_separation, double v_max,
                           int limit) {
  int best = 0;
  for (int m = 1; m <= limit; ++m) {
    if (stop_go_stop_feasible(agents, m, height, length, duration,
                              max_separation, v_max)) {
      best = m;
    }
  }
  return best;
}

Vec2 StopGoStopPlan::position(int step, int agent, double t) const {
  const auto& leg = legs[step][agent];
  if (t <= leg.release) return leg.from;
  if (t >= leg.arrival) return leg.to;
  return leg.from + leg.speed * (t - leg.release) * leg.heading;
}

StopGoStopMode StopGoStopPlan::mode(int step, int agent, double t) const {
  const auto& leg = legs[step][agent];
  if (t < leg.release) return StopGoStopMode::kStopBefore;
  if (t < leg.arrival) return StopGoStopMode::kGo;
  return StopGoStopMode::kStopAfter;
}

StopGoStopPlan stop_go_stop_plan(const WaypointGrid& grid, double v_max,
                                 double max_separation, bool require_feasible) {
  if (!grid.assigned()) {
    throw PreconditionError("Stop-Go-Stop planning needs waypoints");
  }
  if (!(v_max > 0.0) || !(max_separation > 0.0)) {
    throw PreconditionError("v_max and separation must be > 0");
  }
  const int n = grid.agents;
  const int m = grid.steps;
  StopGoStopPlan plan;
  plan.check = stop_go_stop_check(n, m, grid.region.height, grid.region.length,
                                  max_separation, v_max, grid.times);
  if (require_feasible && !plan.check.ok()) {
    throw PreconditionError("Stop-Go-Stop plan infeasible for this grid");
  }
  plan.cos_theta_star =
      cos_theta_star(m, grid.region.height, grid.region.length);
  plan.tau = plan.check.tau;

  plan.legs.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    auto& legs = plan.legs[i];
    legs.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      auto& leg = legs[j];
      leg.from = grid.waypoint(i, j);
      leg.to = grid.waypoint(i + 1, j);
      const Vec2 d = leg.to - leg.from;
      leg.distance = d.norm();
      if (leg.distance > 0.0) leg.heading = d / leg.distance;
    }
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return legs[a].distance > legs[b].distance;
    });
    const auto& first = legs[order.front()];
    const double cos_first = first.distance > 0.0 ? first.heading.x() : 1.0;
    for (int rank = 0; rank < n; ++rank) {
      auto& leg = legs[order[rank]];
      leg.order = rank;
      leg.wait = rank * plan.tau;
      leg.release = grid.times[i] + leg.wait;
      const double cos_own = leg.distance > 0.0 ? leg.heading.x() : 1.0;
      leg.speed = cos_own > 0.0 ? v_max * cos_first / cos_own : v_max;
      leg.arrival = leg.distance > 0.0 ? leg.release + leg.distance / leg.speed
                                       : leg.release;
    }
  }
  return plan;
}

}  // namespace braidmix
