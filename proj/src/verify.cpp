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

#include "braidmix/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace braidmix {

std::pair<double, double> closest_approach(const Vec2& a0, const Vec2& a1,
                                           const Vec2& b0, const Vec2& b1) {
  const Vec2 r0 = a0 - b0;
  const Vec2 dr = (a1 - a0) - (b1 - b0);
  const double den = dr.squaredNorm();
  double s = den > 0.0 ? std::clamp(-r0.dot(dr) / den, 0.0, 1.0) : 0.0;
  double d = (r0 + s * dr).norm();
  const double d1 = (r0 + dr).norm();
  if (d1 < d) {
    d = d1;
    s = 1.0;
  }
  return {d, s};
}

DistanceSummary min_pairwise_distance(const std::vector<double>& times,
                                      const Eigen::MatrixXd& positions,
                                      const Eigen::MatrixXd& separation) {
  const int n = static_cast<int>(positions.cols() / 2);
  DistanceSummary out;
  out.global.distance = std::numeric_limits<double>::infinity();
  out.tightest_margin = std::numeric_limits<double>::infinity();
  if (times.empty() || n < 2) return out;
  auto at = [&](Eigen::Index k, int j) {
    return Vec2(positions(k, 2 * j), positions(k, 2 * j + 1));
  };
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      PairDistance best{(at(0, a) - at(0, b)).norm(), a, b, times[0]};
      for (std::size_t k = 1; k < times.size(); ++k) {
        const auto [d, s] =
            closest_approach(at(k - 1, a), at(k, a), at(k - 1, b), at(k, b));
        if (d < best.distance) {
          best.distance = d;
          best.time = times[k - 1] + s * (times[k] - times[k - 1]);
        }
      }
      if (best.distance < out.global.distance) out.global = best;
      const double margin = best.distance - separation(a, b);
      if (margin < out.tightest_margin) {
        out.tightest_margin = margin;
        out.tightest = best;
      }
    }
  }
  return out;
}

double default_tolerance(const Scenario& scenario) {
  if (scenario.tolerance) return *scenario.tolerance;
  switch (scenario.controller) {
    case ControllerKind::kExact:
    case ControllerKind::kStopGoStop:
      return 1e-9;
    case ControllerKind::kLqSingle:
    case ControllerKind::kLqUnicycle:
      break;
  }
  return 1e-3 * scenario.region.diagonal();
}

VerificationReport verify(const TrajectoryLog& log, const Scenario& scenario,
                          const BraidPlan& plan) {
  VerificationReport r;
  r.scenario_hash = log.scenario_hash;
  r.controller = to_string(scenario.controller);
  r.agents = plan.agents();
  r.letters = static_cast<int>(plan.word.length());
  r.steps = plan.step_count();
  r.violations = plan.violations;

  r.distance = min_pairwise_distance(log.times, log.positions, scenario.separation);
  r.collision_slack = scenario.collision_slack;
  r.collision_free = r.distance.tightest_margin >= -scenario.collision_slack;

  r.tolerance = default_tolerance(scenario);
  r.braid_point_feasible = true;
  std::vector<int> hits;
  try {
    hits = locate_steps(log.times, plan.grid.times);
  } catch (const PreconditionError& e) {
    r.violations.push_back(e.what());
    r.braid_point_feasible = false;
  }
  for (std::size_t i = 0; i < hits.size(); ++i) {
    double err = 0.0;
    for (int j = 0; j < r.agents; ++j) {
      err = std::max(err, (log.position(hits[i], j) -
                           plan.world_waypoint(static_cast<int>(i), j))
                              .norm());
    }
    r.step_errors.push_back(err);
    r.max_error = std::max(r.max_error, err);
  }
  if (!(r.max_error <= r.tolerance)) r.braid_point_feasible = false;

  const auto& reg = scenario.region;
  const double sep = scenario.max_separation();
  r.bound = mixing_limit_upper(r.agents, reg.height, reg.length, reg.duration,
                               sep, scenario.v_max);
  r.exceeds_bound = r.steps > r.bound.value;
  r.stop_go_stop = stop_go_stop_check(r.agents, r.steps, reg.height, reg.length,
                                      sep, scenario.v_max, plan.grid.times);
  r.stop_go_stop_feasible = r.stop_go_stop.ok();
  return r;
}

}  // namespace braidmix
