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

// Braid-point feasibility and collision checks on a trajectory log.

#ifndef BRAIDMIX_VERIFY_HPP_
#define BRAIDMIX_VERIFY_HPP_

#include <string>
#include <vector>

#include "braidmix/controllers.hpp"
#include "braidmix/scenario.hpp"
#include "braidmix/simulator.hpp"

namespace braidmix {

struct PairDistance {
  double distance = 0.0;
  int first = 0;
  int second = 1;
  double time = 0.0;
};

// Minimum distance over the piecewise-linear interpolation of the samples,
// solved exactly on every interval. Also returns, per pair, the minimum
// distance minus the required separation (smallest first).
struct DistanceSummary {
  PairDistance global;
  // Pair with the smallest distance - separation.
  PairDistance tightest;
  double tightest_margin = 0.0;
};

DistanceSummary min_pairwise_distance(const std::vector<double>& times,
                                      const Eigen::MatrixXd& positions,
                                      const Eigen::MatrixXd& separation);

// Closest approach of two agents moving linearly over [0, 1]:
// a0 -> a1 and b0 -> b1. Returns (distance, fraction).
std::pair<double, double> closest_approach(const Vec2& a0, const Vec2& a1,
                                           const Vec2& b0, const Vec2& b1);

struct VerificationReport {
  std::string scenario_hash;
  std::string controller;
  int agents = 0;
  int letters = 0;
  int steps = 0;

  DistanceSummary distance;
  double collision_slack = 0.0;
  bool collision_free = false;

  // max_j |y_j(t_i) - xi(i, j)| for i = 0..M.
  std::vector<double> step_errors;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool braid_point_feasible = false;

  MixingBound bound;
  bool exceeds_bound = false;
  StopGoStopCheck stop_go_stop;
  bool stop_go_stop_feasible = false;

  std::vector<std::string> violations;

  bool verified() const { return collision_free && braid_point_feasible; }
};

// Default braid-point tolerance: 1e-9 for exact and Stop-Go-Stop execution,
// 1e-3 times the region diagonal for tracking controllers.
double default_tolerance(const Scenario& scenario);

VerificationReport verify(const TrajectoryLog& log, const Scenario& scenario,
                          const BraidPlan& plan);

}  // namespace braidmix

#endif  // BRAIDMIX_VERIFY_HPP_
