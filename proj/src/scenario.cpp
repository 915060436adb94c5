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

#include "braidmix/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

namespace braidmix {

using nlohmann::json;

std::string to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::kStopGoStop:
      return "stop-go-stop";
    case ControllerKind::kExact:
      return "exact";
    case ControllerKind::kLqSingle:
      return "lq-single";
    case ControllerKind::kLqUnicycle:
      return "lq-unicycle";
  }
  return "exact";
}

ControllerKind controller_from_string(const std::string& name) {
  if (name == "stop-go-stop") return ControllerKind::kStopGoStop;
  if (name == "exact") return ControllerKind::kExact;
  if (name == "lq-single") return ControllerKind::kLqSingle;
  if (name == "lq-unicycle") return ControllerKind::kLqUnicycle;
  throw ParseError("unknown controller '" + name +
                   "' (expected stop-go-stop, exact, lq-single, lq-unicycle)");
}

Eigen::MatrixXd uniform_separation(int agents, double value) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(agents, agents, value);
  m.diagonal().setZero();
  return m;
}

double Scenario::max_separation() const {
  double best = 0.0;
  for (int i = 0; i < separation.rows(); ++i) {
    for (int j = 0; j < separation.cols(); ++j) {
      if (i != j) best = std::max(best, separation(i, j));
    }
  }
  return best;
}

void Scenario::validate() const {
  if (agents < 2) throw PreconditionError("scenario needs at least 2 agents");
  region.validate();
  if (separation.rows() != agents || separation.cols() != agents) {
    throw PreconditionError("separation matrix must be N x N");
  }
  for (int i = 0; i < agents; ++i) {
    for (int j = 0; j < agents; ++j) {
      if (i == j) continue;
      if (!(separation(i, j) > 0.0)) {
        throw PreconditionError("pairwise separations must be > 0");
      }
      if (separation(i, j) != separation(j, i)) {
        throw PreconditionError("separation matrix must be symmetric");
      }
    }
  }
  if (!(v_max > 0.0)) throw PreconditionError("v_max must be > 0");
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw PreconditionError("dt must be > 0");
  if (!(kappa > 0.0)) throw PreconditionError("kappa must be > 0");
  if (gain_steps_per_unit < 1) {
    throw PreconditionError("gain_steps_per_unit must be >= 1");
  }
  if (!(collision_slack >= 0.0)) {
    throw PreconditionError("collision_slack must be >= 0");
  }
  if (tolerance && !(*tolerance >= 0.0)) {
    throw PreconditionError("tolerance must be >= 0");
  }
  if (track && columns) {
    throw PreconditionError("give either a track or explicit columns, not both");
  }
}

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!j.is_object()) throw ParseError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      throw ParseError("unknown field '" + key + "' in " + where);
    }
  }
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + " must be a number");
  return j.get<double>();
}

Vec2 point(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) {
    throw ParseError(where + " must be a [x, y] pair");
  }
  return {number(j[0], where), number(j[1], where)};
}

Mat2 weight(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>() * Mat2::Identity();
  if (!j.is_array() || j.size() != 2) {
    throw ParseError(where + " must be a number or a 2x2 matrix");
  }
  Mat2 m;
  for (int r = 0; r < 2; ++r) {
    if (!j[r].is_array() || j[r].size() != 2) {
      throw ParseError(where + " must be a number or a 2x2 matrix");
    }
    for (int c = 0; c < 2; ++c) m(r, c) = number(j[r][c], where);
  }
  return m;
}

Track parse_track(const json& j) {
  check_keys(j, {"origin", "heading", "width", "pieces"}, "track");
  Track t;
  if (j.contains("origin")) t.origin = point(j["origin"], "track.origin");
  if (j.contains("heading")) t.heading = number(j["heading"], "track.heading");
  if (!j.contains("width")) throw ParseError("track.width is required");
  t.width = number(j["width"], "track.width");
  if (!j.contains("pieces") || !j["pieces"].is_array()) {
    throw ParseError("track.pieces must be an array");
  }
  for (const auto& p : j["pieces"]) {
    check_keys(p, {"line", "arc"}, "track piece");
    if (p.contains("line") == p.contains("arc")) {
      throw ParseError("track piece needs exactly one of 'line' or 'arc'");
    }
    if (p.contains("line")) {
      t.pieces.push_back({0.0, number(p["line"], "track line")});
    } else {
      const auto& a = p["arc"];
      check_keys(a, {"radius", "angle"}, "track arc");
      const double radius = number(a.at("radius"), "arc radius");
      const double angle = number(a.at("angle"), "arc angle");
      if (!(radius > 0.0) || angle == 0.0) {
        throw ParseError("arc needs radius > 0 and a nonzero angle");
      }
      t.pieces.push_back(
          {(angle > 0.0 ? 1.0 : -1.0) / radius, radius * std::abs(angle)});
    }
  }
  return t;
}

CurvedRegion parse_columns(const json& j) {
  if (!j.is_array() || j.size() < 2) {
    throw ParseError("region.columns must list at least two columns");
  }
  CurvedRegion region;
  for (const auto& col : j) {
    if (!col.is_array() || col.size() < 2) {
      throw ParseError("each column must list at least two points");
    }
    Eigen::Matrix2Xd m(2, static_cast<Eigen::Index>(col.size()));
    for (std::size_t r = 0; r < col.size(); ++r) {
      m.col(static_cast<Eigen::Index>(r)) = point(col[r], "column point");
    }
    if (!region.columns.empty() && m.cols() != region.columns.front().cols()) {
      throw ParseError("all columns need the same number of points");
    }
    region.columns.push_back(std::move(m));
  }
  return region;
}

json track_json(const Track& t) {
  json pieces = json::array();
  for (const auto& p : t.pieces) {
    if (p.curvature == 0.0) {
      pieces.push_back({{"line", p.length}});
    } else {
      const double radius = 1.0 / std::abs(p.curvature);
      const double angle = (p.curvature > 0.0 ? 1.0 : -1.0) * p.length / radius;
      pieces.push_back({{"arc", {{"radius", radius}, {"angle", angle}}}});
    }
  }
  return {{"origin", {t.origin.x(), t.origin.y()}},
          {"heading", t.heading},
          {"width", t.width},
          {"pieces", pieces}};
}

}  // namespace

Scenario parse_scenario(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario JSON: ") + e.what());
  }
  check_keys(j,
             {"name", "description", "braid", "agents", "honor_braces",
              "region", "duration", "times", "strand", "controller",
              "separation", "v_max", "Q", "R", "kappa", "dt",
              "gain_steps_per_unit", "seed", "tolerance", "collision_slack"},
             "scenario");
  Scenario s;
  try {
    if (!j.contains("braid") || !j["braid"].is_string()) {
      throw ParseError("scenario.braid must be a string");
    }
    s.braid = j["braid"].get<std::string>();
    if (!j.contains("agents") || !j["agents"].is_number_integer()) {
      throw ParseError("scenario.agents must be an integer");
    }
    s.agents = j["agents"].get<int>();
    if (s.agents < 2) throw ParseError("scenario.agents must be >= 2");
    if (j.contains("honor_braces")) s.honor_braces = j["honor_braces"].get<bool>();
    if (!j.contains("duration")) throw ParseError("scenario.duration is required");
    s.region.duration = number(j["duration"], "duration");

    if (!j.contains("region")) throw ParseError("scenario.region is required");
    const auto& r = j["region"];
    check_keys(r, {"length", "height", "track", "columns"}, "region");
    if (r.contains("track")) s.track = parse_track(r["track"]);
    if (r.contains("columns")) s.columns = parse_columns(r["columns"]);
    if (s.track) {
      s.region.length = s.track->length();
      s.region.height = s.track->width;
    }
    if (r.contains("length")) s.region.length = number(r["length"], "region.length");
    if (r.contains("height")) s.region.height = number(r["height"], "region.height");
    if (!s.track && (!r.contains("length") || !r.contains("height"))) {
      throw ParseError("region needs length and height (or a track)");
    }

    if (j.contains("times")) {
      if (!j["times"].is_array()) throw ParseError("times must be an array");
      for (const auto& t : j["times"]) s.times.push_back(number(t, "times"));
    }
    if (j.contains("strand")) {
      s.strand = strand_kind_from_string(j["strand"].get<std::string>());
    }
    if (j.contains("controller")) {
      s.controller = controller_from_string(j["controller"].get<std::string>());
    }
    if (!j.contains("separation")) throw ParseError("scenario.separation is required");
    const auto& sep = j["separation"];
    if (sep.is_number()) {
      s.separation = uniform_separation(s.agents, sep.get<double>());
    } else if (sep.is_array() && sep.size() == static_cast<std::size_t>(s.agents)) {
      s.separation.resize(s.agents, s.agents);
      for (int a = 0; a < s.agents; ++a) {
        if (!sep[a].is_array() || sep[a].size() != static_cast<std::size_t>(s.agents)) {
          throw ParseError("separation must be a number or an N x N matrix");
        }
        for (int b = 0; b < s.agents; ++b) {
          s.separation(a, b) = number(sep[a][b], "separation");
        }
      }
      s.separation.diagonal().setZero();
    } else {
      throw ParseError("separation must be a number or an N x N matrix");
    }
    if (j.contains("v_max")) s.v_max = number(j["v_max"], "v_max");
    if (j.contains("Q")) s.Q = weight(j["Q"], "Q");
    if (j.contains("R")) s.R = weight(j["R"], "R");
    if (j.contains("kappa")) s.kappa = number(j["kappa"], "kappa");
    if (j.contains("dt")) s.dt = number(j["dt"], "dt");
    if (j.contains("gain_steps_per_unit")) {
      s.gain_steps_per_unit = j["gain_steps_per_unit"].get<int>();
    }
    if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("tolerance")) s.tolerance = number(j["tolerance"], "tolerance");
    if (j.contains("collision_slack")) {
      s.collision_slack = number(j["collision_slack"], "collision_slack");
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario field: ") + e.what());
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read scenario '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_scenario(text.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string scenario_json(const Scenario& s) {
  json j;
  j["braid"] = s.braid;
  j["agents"] = s.agents;
  j["honor_braces"] = s.honor_braces;
  j["duration"] = s.region.duration;
  json region = {{"length", s.region.length}, {"height", s.region.height}};
  if (s.track) region["track"] = track_json(*s.track);
  if (s.columns) {
    json cols = json::array();
    for (const auto& c : s.columns->columns) {
      json col = json::array();
      for (Eigen::Index r = 0; r < c.cols(); ++r) col.push_back({c(0, r), c(1, r)});
      cols.push_back(col);
    }
    region["columns"] = cols;
  }
  j["region"] = region;
  if (!s.times.empty()) j["times"] = s.times;
  j["strand"] = to_string(s.strand);
  j["controller"] = to_string(s.controller);
  json sep = json::array();
  for (int a = 0; a < s.separation.rows(); ++a) {
    json row = json::array();
    for (int b = 0; b < s.separation.cols(); ++b) row.push_back(s.separation(a, b));
    sep.push_back(row);
  }
  j["separation"] = sep;
  j["v_max"] = s.v_max;
  j["Q"] = {{s.Q(0, 0), s.Q(0, 1)}, {s.Q(1, 0), s.Q(1, 1)}};
  j["R"] = {{s.R(0, 0), s.R(0, 1)}, {s.R(1, 0), s.R(1, 1)}};
  j["kappa"] = s.kappa;
  j["dt"] = s.step_size();
  j["gain_steps_per_unit"] = s.gain_steps_per_unit;
  j["seed"] = s.seed;
  if (s.tolerance) j["tolerance"] = *s.tolerance;
  j["collision_slack"] = s.collision_slack;
  return j.dump(2);
}

std::string scenario_hash(const Scenario& scenario) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : scenario_json(scenario)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

BraidWord random_word(int strands, int letters, std::uint64_t seed) {
  if (strands < 2) throw PreconditionError("random word needs >= 2 strands");
  if (letters < 1) throw PreconditionError("random word needs >= 1 letter");
  std::mt19937_64 rng(seed);
  std::vector<Generator> out;
  for (int i = 0; i < letters; ++i) {
    const auto draw = rng();
    const int index = 1 + static_cast<int>((draw >> 1) % (strands - 1));
    out.push_back({index, (draw & 1U) != 0});
  }
  return BraidWord(strands, std::move(out));
}

BraidWord scenario_word(const Scenario& scenario) {
  constexpr std::string_view kRandom = "random:";
  const std::string_view text = scenario.braid;
  if (text.substr(0, kRandom.size()) == kRandom) {
    const std::string count(text.substr(kRandom.size()));
    int letters = 0;
    try {
      std::size_t used = 0;
      letters = std::stoi(count, &used);
      if (used != count.size()) throw std::invalid_argument(count);
    } catch (const std::exception&) {
      throw ParseError("malformed random braid '" + scenario.braid + "'");
    }
    return random_word(scenario.agents, letters, scenario.seed);
  }
  return parse_braid_word(text, scenario.agents);
}

}  // namespace braidmix
