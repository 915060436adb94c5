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

// Trajectory CSV, report JSON, plan JSON and SVG output.

#ifndef BRAIDMIX_OUTPUT_HPP_
#define BRAIDMIX_OUTPUT_HPP_

#include <string>

#include "braidmix/simulator.hpp"
#include "braidmix/verify.hpp"

namespace braidmix {

// Header "time,x0,y0,x1,..." then one row per sample, shortest round-trip
// decimal form. With `headings` (unicycle logs only) each agent also gets a
// heading column: "time,x0,y0,heading0,...".
std::string trajectory_csv(const TrajectoryLog& log, bool headings = false);
// Inverse of trajectory_csv. Throws ParseError on malformed input.
TrajectoryLog parse_trajectory_csv(const std::string& text);

std::string report_json(const VerificationReport& report);
std::string plan_json(const BraidPlan& plan);
// One polyline per agent trajectory and one per agent strand.
std::string trajectory_svg(const TrajectoryLog& log, const BraidPlan& plan);

// Throws Error naming the path on failure.
void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace braidmix

#endif  // BRAIDMIX_OUTPUT_HPP_
