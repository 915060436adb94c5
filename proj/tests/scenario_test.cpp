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

#include <cmath>

#include "braidmix/scenario.hpp"
#include "doctest.h"

using namespace braidmix;

namespace {

const char* kMinimal = R"({
  "braid": "s1.S1",
  "agents": 2,
  "region": {"length": 2.0, "height": 1.0},
  "duration": 4.0,
  "separation": 0.1
})";

std::string with(const std::string& extra) {
  std::string s = kMinimal;
  s.insert(s.rfind('}'), ",\n" + extra);
  return s;
}

}  // namespace

TEST_CASE("minimal scenario defaults") {
  const auto s = parse_scenario(kMinimal);
  CHECK(s.braid == "s1.S1");
  CHECK(s.agents == 2);
  CHECK(s.region.length == 2.0);
  CHECK(s.region.height == 1.0);
  CHECK(s.region.duration == 4.0);
  CHECK(s.controller == ControllerKind::kExact);
  CHECK(s.strand == StrandKind::kStraight);
  CHECK(s.separation(0, 1) == 0.1);
  CHECK(s.max_separation() == 0.1);
  CHECK(s.Q == 10.0 * Mat2::Identity());
  CHECK(s.R == Mat2::Identity());
  CHECK(s.kappa == 5.0);
  CHECK(s.step_size() == doctest::Approx(4e-3));
  CHECK_FALSE(s.curved());
  CHECK_NOTHROW(s.validate());
}

TEST_CASE("full scenario fields") {
  const auto s = parse_scenario(with(R"(
    "name": "demo", "description": "all fields",
    "honor_braces": false, "times": [0, 1, 4], "strand": "city-block",
    "controller": "lq-unicycle", "v_max": 2.5, "Q": 3, "R": [[2, 0.1], [0.1, 1]],
    "kappa": 7, "dt": 0.01, "gain_steps_per_unit": 250, "seed": 42,
    "tolerance": 0.002, "collision_slack": 0.001)"));
  CHECK_FALSE(s.honor_braces);
  CHECK(s.times == std::vector<double>{0, 1, 4});
  CHECK(s.strand == StrandKind::kCityBlock);
  CHECK(s.controller == ControllerKind::kLqUnicycle);
  CHECK(s.v_max == 2.5);
  CHECK(s.Q == 3.0 * Mat2::Identity());
  CHECK(s.R(0, 1) == 0.1);
  CHECK(s.kappa == 7.0);
  CHECK(s.step_size() == 0.01);
  CHECK(s.gain_steps_per_unit == 250);
  CHECK(s.seed == 42);
  CHECK(*s.tolerance == 0.002);
  CHECK(s.collision_slack == 0.001);
}

TEST_CASE("separation matrix and curved regions") {
  const auto s = parse_scenario(R"({
    "braid": "s1", "agents": 3, "duration": 5,
    "region": {"track": {"width": 1.0, "pieces": [{"line": 2}, {"arc": {"radius": 2, "angle": 1.5707963267948966}}]}},
    "separation": [[0, 0.1, 0.2], [0.1, 0, 0.15], [0.2, 0.15, 0]]
  })");
  CHECK(s.curved());
  REQUIRE(s.track);
  REQUIRE(s.track->pieces.size() == 2);
  CHECK(s.track->pieces[1].curvature == doctest::Approx(0.5));
  CHECK(s.track->pieces[1].length == doctest::Approx(M_PI));
  CHECK(s.max_separation() == 0.2);

  const auto c = parse_scenario(R"({
    "braid": "s1", "agents": 2, "duration": 5,
    "region": {"length": 2, "height": 1, "columns": [[[0, 0], [0, 1]], [[2, 0.2], [1.8, 1.1]]]},
    "separation": 0.1
  })");
  REQUIRE(c.columns);
  CHECK(c.columns->steps() == 1);
  CHECK(c.columns->point(1, 1) == Vec2(1.8, 1.1));
}

TEST_CASE("malformed scenarios") {
  CHECK_THROWS_AS(parse_scenario("{"), ParseError);
  CHECK_THROWS_AS(parse_scenario("[]"), ParseError);
  CHECK_THROWS_AS(parse_scenario(with(R"("colour": "red")")), ParseError);
  CHECK_THROWS_AS(parse_scenario(with(R"("controller": "pid")")), ParseError);
  CHECK_THROWS_AS(parse_scenario(with(R"("strand": "spline")")), ParseError);
  CHECK_THROWS_AS(parse_scenario(with(R"("Q": [[1, 2, 3]])")), ParseError);
  CHECK_THROWS_AS(parse_scenario(with(R"("v_max": "fast")")), ParseError);
  CHECK_THROWS_AS(parse_scenario(R"({"braid": "s1", "agents": 2, "duration": 1, "separation": 0.1})"),
                  ParseError);
  CHECK_THROWS_AS(parse_scenario(R"({"braid": "s1", "agents": 1, "duration": 1,
      "region": {"length": 1, "height": 1}, "separation": 0.1})"),
                  ParseError);
  CHECK_THROWS_AS(parse_scenario(R"({"braid": "s1", "agents": 2, "duration": 1,
      "region": {"length": 1, "height": 1}, "separation": [[0, 1], [1]]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_scenario(R"({"braid": "s1", "agents": 2, "duration": 1,
      "region": {"length": 1, "height": 1, "track": {"width": 1, "pieces": [{"line": 1, "arc": {"radius": 1, "angle": 1}}]}},
      "separation": 0.1})"),
                  ParseError);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), Error);
}

TEST_CASE("validation") {
  auto s = parse_scenario(kMinimal);
  s.v_max = 0.0;
  CHECK_THROWS_AS(s.validate(), PreconditionError);
  s = parse_scenario(kMinimal);
  s.separation(0, 1) = 0.3;
  CHECK_THROWS_AS(s.validate(), PreconditionError);
  s = parse_scenario(kMinimal);
  s.separation = uniform_separation(3, 0.1);
  CHECK_THROWS_AS(s.validate(), PreconditionError);
  s = parse_scenario(kMinimal);
  s.region.duration = 0.0;
  CHECK_THROWS_AS(s.validate(), PreconditionError);
  s = parse_scenario(kMinimal);
  s.dt = -1.0;
  CHECK_THROWS_AS(s.validate(), PreconditionError);
  s = parse_scenario(kMinimal);
  s.kappa = 0.0;
  CHECK_THROWS_AS(s.validate(), PreconditionError);

  const auto u = uniform_separation(3, 0.25);
  CHECK(u(0, 1) == 0.25);
  CHECK(u(2, 1) == 0.25);
}

TEST_CASE("random words are seeded") {
  const auto a = random_word(5, 40, 7);
  const auto b = random_word(5, 40, 7);
  const auto c = random_word(5, 40, 8);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  CHECK(a.length() == 40);
  bool inverse = false, plain = false;
  for (const auto& g : a.letters()) {
    CHECK(g.index >= 1);
    CHECK(g.index <= 4);
    (g.inverse ? inverse : plain) = true;
  }
  CHECK(inverse);
  CHECK(plain);

  auto s = parse_scenario(with(R"("seed": 3)"));
  s.braid = "random:12";
  CHECK(scenario_word(s) == random_word(2, 12, 3));
  s.braid = "random:x";
  CHECK_THROWS_AS(scenario_word(s), ParseError);
  s.braid = "random:0";
  CHECK_THROWS_AS(scenario_word(s), PreconditionError);
  s.braid = "{s1}.S1";
  CHECK(scenario_word(s).length() == 2);
}

TEST_CASE("canonical form and hash") {
  const auto a = parse_scenario(kMinimal);
  const auto b = parse_scenario(with(R"("name": "renamed")"));
  CHECK(scenario_hash(a) == scenario_hash(b));
  CHECK(scenario_hash(a).size() == 16);
  auto c = a;
  c.v_max = 1.5;
  CHECK(scenario_hash(a) != scenario_hash(c));
  // The canonical JSON parses back to the same scenario.
  const auto round = parse_scenario(scenario_json(a));
  CHECK(scenario_json(round) == scenario_json(a));
  CHECK(scenario_hash(round) == scenario_hash(a));

  const auto curved = parse_scenario(R"({
    "braid": "s1", "agents": 3, "duration": 5,
    "region": {"track": {"width": 1.0, "pieces": [{"line": 2}, {"arc": {"radius": 2, "angle": -0.7853981633974483}}]}},
    "separation": 0.1})");
  CHECK(scenario_json(parse_scenario(scenario_json(curved))) == scenario_json(curved));
}
