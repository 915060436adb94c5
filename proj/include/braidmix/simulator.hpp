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

// Braid plans and the fixed-step multi-agent simulator.

#ifndef BRAIDMIX_SIMULATOR_HPP_
#define BRAIDMIX_SIMULATOR_HPP_

#include <optional>
#include <string>
#include <vector>

#include "braidmix/braid.hpp"
#include "braidmix/controllers.hpp"
#include "braidmix/geometry.hpp"
#include "braidmix/region.hpp"
#include "braidmix/scenario.hpp"

namespace braidmix {

// One agent's motion during one braid step.
struct AgentLeg {
  int row_from = 0;
  int row_to = 0;
  CrossingRole role = CrossingRole::kNone;
  int partner = -1;
  // Strand in rectangle coordinates.
  StrandPath strand;
  Parameterization timing;
  // Along-strand safety margin in rectangle coordinates.
  double margin = 0.0;
  // Curved regions only: the cell the strand is mapped through.
  std::optional<QuadCell> cell;

  Vec2 rect_position(double t) const;
  Vec2 world_position(double t) const;
  Vec2 world_point(const Vec2& rect) const;
};

struct BraidPlan {
  BraidWord word;
  std::vector<BraidStep> steps;
  WaypointGrid grid;
  std::optional<CurvedRegion> curved;
  // legs[step][agent] for the reparameterized controllers.
  std::vector<std::vector<AgentLeg>> legs;
  std::optional<StopGoStopPlan> stop_go_stop;
  // Violated controller preconditions; the plan still executes.
  std::vector<std::string> violations;

  int agents() const { return grid.agents; }
  int step_count() const { return grid.steps; }
  // Braid point of `agent` at time t_step in world coordinates.
  Vec2 world_waypoint(int step, int agent) const;
  // Desired world position of `agent` during `step` at time t.
  Vec2 reference(int step, int agent, double t) const;
};

// Parses and schedules the braid, builds the grid and the controller plan.
// Throws ParseError / PreconditionError for malformed words, Restriction
// violations and inconsistent scenarios.
BraidPlan plan(const Scenario& scenario);

struct TrajectoryLog {
  int agents = 0;
  bool headings = false;
  std::vector<double> times;
  // times.size() x 2N (x, y per agent).
  Eigen::MatrixXd positions;
  // times.size() x N, unicycle only.
  Eigen::MatrixXd heading;
  // Sample index of each t_i.
  std::vector<int> step_samples;
  std::string scenario_hash;

  Vec2 position(int sample, int agent) const {
    return positions.block<1, 2>(sample, 2 * agent).transpose();
  }
};

// Fixed-step simulation; each step [t_{i-1}, t_i] is split into
// ceil((t_i - t_{i-1}) / dt) equal substeps so every t_i is a sample.
// Throws NumericalError with step and time context if a controller fails.
TrajectoryLog simulate(const Scenario& scenario, const BraidPlan& plan);

// Sample indices of the t_i inside `times` (exact match).
std::vector<int> locate_steps(const std::vector<double>& times,
                              const std::vector<double>& step_times);

// Substep counts used by simulate for each braid step.
std::vector<int> substeps(const std::vector<double>& step_times, double dt);

}  // namespace braidmix

#endif  // BRAIDMIX_SIMULATOR_HPP_
