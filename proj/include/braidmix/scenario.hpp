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

// Scenario description: braid, region, controller and numerical settings.
// The JSON form is documented in docs/scenario.schema.json.

#ifndef BRAIDMIX_SCENARIO_HPP_
#define BRAIDMIX_SCENARIO_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "braidmix/braid.hpp"
#include "braidmix/geometry.hpp"
#include "braidmix/region.hpp"

namespace braidmix {

enum class ControllerKind { kStopGoStop, kExact, kLqSingle, kLqUnicycle };

std::string to_string(ControllerKind kind);
// Accepts "stop-go-stop", "exact", "lq-single", "lq-unicycle".
ControllerKind controller_from_string(const std::string& name);

struct Scenario {
  // Braid text, or "random:<letters>" for a seeded random word.
  std::string braid = "s1";
  int agents = 2;
  bool honor_braces = true;
  // length, height and the time window T (duration).
  RegionRect region;
  // Curved region: either a centerline track or explicit world columns.
  std::optional<Track> track;
  std::optional<CurvedRegion> columns;
  // Explicit time partition t_0..t_M; uniform when empty.
  std::vector<double> times;
  StrandKind strand = StrandKind::kStraight;
  ControllerKind controller = ControllerKind::kExact;
  // Symmetric N x N pairwise separation; the diagonal is ignored.
  Eigen::MatrixXd separation;
  double v_max = 1.0;
  Mat2 Q = 10.0 * Mat2::Identity();
  Mat2 R = Mat2::Identity();
  double kappa = 5.0;
  // Integration step; 0 selects 1e-3 T.
  double dt = 0.0;
  // Minimum gain samples per unit of step horizon.
  int gain_steps_per_unit = 100;
  std::uint64_t seed = 0;
  // Braid-point tolerance override; unset selects the controller default.
  std::optional<double> tolerance;
  // Allowed shortfall below the pairwise separation.
  double collision_slack = 0.0;

  bool curved() const { return track.has_value() || columns.has_value(); }
  double max_separation() const;
  double step_size() const { return dt > 0.0 ? dt : 1e-3 * region.duration; }
  // Throws PreconditionError on inconsistent fields.
  void validate() const;
};

// Uniform separation matrix.
Eigen::MatrixXd uniform_separation(int agents, double value);

// Throws ParseError on malformed JSON or unknown fields.
Scenario parse_scenario(std::string_view json_text);
// Throws Error with the path on I/O failure.
Scenario load_scenario(const std::string& path);
// Canonical JSON text of the scenario (stable key order).
std::string scenario_json(const Scenario& scenario);
// FNV-1a 64 of scenario_json, as 16 hex digits.
std::string scenario_hash(const Scenario& scenario);

// The braid word of the scenario; random words draw letters sigma_k or their
// inverses uniformly with k in 1..N-1 from the seed.
BraidWord scenario_word(const Scenario& scenario);
BraidWord random_word(int strands, int letters, std::uint64_t seed);

}  // namespace braidmix

#endif  // BRAIDMIX_SCENARIO_HPP_
