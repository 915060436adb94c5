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

#include "braidmix/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace braidmix {

using nlohmann::json;

namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  out.push_back(field);
  return out;
}

double parse_number(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ParseError("malformed CSV number '" + s + "'");
  }
  return v;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json pair_json(const PairDistance& p) {
  return {{"distance", finite_or_null(p.distance)},
          {"agents", {p.first, p.second}},
          {"time", p.time}};
}

}  // namespace

std::string trajectory_csv(const TrajectoryLog& log, bool headings) {
  const bool with_heading = headings && log.headings;
  std::string out = "time";
  for (int j = 0; j < log.agents; ++j) {
    out += ",x" + std::to_string(j) + ",y" + std::to_string(j);
    if (with_heading) out += ",heading" + std::to_string(j);
  }
  out += "\r\n";
  for (std::size_t k = 0; k < log.times.size(); ++k) {
    append_number(out, log.times[k]);
    for (int j = 0; j < log.agents; ++j) {
      out += ',';
      append_number(out, log.positions(static_cast<Eigen::Index>(k), 2 * j));
      out += ',';
      append_number(out, log.positions(static_cast<Eigen::Index>(k), 2 * j + 1));
      if (with_heading) {
        out += ',';
        append_number(out, log.heading(static_cast<Eigen::Index>(k), j));
      }
    }
    out += "\r\n";
  }
  return out;
}

TrajectoryLog parse_trajectory_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty trajectory CSV");
  const auto header = split(line);
  if (header.empty() || header[0] != "time") {
    throw ParseError("trajectory CSV must start with a 'time' column");
  }
  TrajectoryLog log;
  log.headings = header.size() > 3 && header[3].rfind("heading", 0) == 0;
  const std::size_t per = log.headings ? 3 : 2;
  if ((header.size() - 1) % per != 0) {
    throw ParseError("trajectory CSV has a partial agent column group");
  }
  log.agents = static_cast<int>((header.size() - 1) / per);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw ParseError("trajectory CSV row has " + std::to_string(fields.size()) +
                       " fields, expected " + std::to_string(header.size()));
    }
    std::vector<double> row;
    for (const auto& f : fields) row.push_back(parse_number(f));
    rows.push_back(std::move(row));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  log.positions.resize(n, 2 * log.agents);
  if (log.headings) log.heading.resize(n, log.agents);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& row = rows[static_cast<std::size_t>(k)];
    log.times.push_back(row[0]);
    for (int j = 0; j < log.agents; ++j) {
      log.positions(k, 2 * j) = row[1 + per * j];
      log.positions(k, 2 * j + 1) = row[2 + per * j];
      if (log.headings) log.heading(k, j) = row[3 + per * j];
    }
  }
  return log;
}

std::string report_json(const VerificationReport& r) {
  json j;
  j["scenario_hash"] = r.scenario_hash;
  j["controller"] = r.controller;
  j["agents"] = r.agents;
  j["letters"] = r.letters;
  j["steps"] = r.steps;
  j["verified"] = r.verified();
  j["collision_free"] = r.collision_free;
  j["min_distance"] = pair_json(r.distance.global);
  j["tightest_pair"] = pair_json(r.distance.tightest);
  j["tightest_margin"] = finite_or_null(r.distance.tightest_margin);
  j["collision_slack"] = r.collision_slack;
  j["braid_point_feasible"] = r.braid_point_feasible;
  j["braid_point_errors"] = r.step_errors;
  j["max_braid_point_error"] = r.max_error;
  j["tolerance"] = r.tolerance;
  j["mixing_bound"] = {{"value", r.bound.value},
                       {"separation_term", r.bound.separation_term},
                       {"time_term", r.bound.time_term},
                       {"exceeded", r.exceeds_bound}};
  j["stop_go_stop"] = {{"feasible", r.stop_go_stop_feasible},
                       {"inequality", r.stop_go_stop.inequality},
                       {"lhs", r.stop_go_stop.lhs},
                       {"rhs", r.stop_go_stop.rhs},
                       {"tau", r.stop_go_stop.tau},
                       {"rows_separated", r.stop_go_stop.rows_separated},
                       {"diagonal_clearance", r.stop_go_stop.diagonal_clearance}};
  j["violations"] = r.violations;
  return j.dump(2) + "\n";
}

std::string plan_json(const BraidPlan& plan) {
  json j;
  j["word"] = to_string(plan.word);
  j["letters"] = plan.word.length();
  j["agents"] = plan.agents();
  j["permutation"] = induced_permutation(plan.word).image();
  json steps = json::array();
  for (int i = 0; i < plan.step_count(); ++i) {
    json s;
    json gens = json::array();
    for (const auto& g : plan.steps[i].generators) gens.push_back(to_string(g));
    s["generators"] = gens;
    s["t_start"] = plan.grid.times[i];
    s["t_end"] = plan.grid.times[i + 1];
    json agents = json::array();
    for (int a = 0; a < plan.agents(); ++a) {
      const Vec2 from = plan.world_waypoint(i, a);
      const Vec2 to = plan.world_waypoint(i + 1, a);
      json entry = {{"agent", a},
                    {"from", {from.x(), from.y()}},
                    {"to", {to.x(), to.y()}}};
      if (!plan.legs.empty()) {
        const auto& leg = plan.legs[i][a];
        entry["role"] = to_string(leg.role);
        entry["partner"] = leg.partner;
        entry["strand_length"] = leg.strand.length();
        entry["margin"] = leg.margin;
        entry["velocities"] = {leg.timing.velocity_first, leg.timing.velocity_second};
      }
      if (plan.stop_go_stop) {
        const auto& leg = plan.stop_go_stop->legs[i][a];
        entry["order"] = leg.order;
        entry["wait"] = leg.wait;
        entry["speed"] = leg.speed;
        entry["arrival"] = leg.arrival;
      }
      agents.push_back(entry);
    }
    s["agents"] = agents;
    steps.push_back(s);
  }
  j["steps"] = steps;
  j["violations"] = plan.violations;
  return j.dump(2) + "\n";
}

std::string trajectory_svg(const TrajectoryLog& log, const BraidPlan& plan) {
  // Strand polylines in world coordinates, per agent across all steps.
  std::vector<std::vector<Vec2>> strands(static_cast<std::size_t>(plan.agents()));
  for (int j = 0; j < plan.agents(); ++j) {
    strands[j].push_back(plan.world_waypoint(0, j));
    for (int i = 0; i < plan.step_count(); ++i) {
      if (!plan.legs.empty()) {
        const auto& leg = plan.legs[i][j];
        const auto pts = leg.strand.polyline(32);
        for (std::size_t k = 1; k < pts.size(); ++k) {
          strands[j].push_back(leg.world_point(pts[k]));
        }
      } else {
        strands[j].push_back(plan.world_waypoint(i + 1, j));
      }
    }
  }
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;
  auto grow = [&](const Vec2& p) {
    x0 = std::min(x0, p.x());
    x1 = std::max(x1, p.x());
    y0 = std::min(y0, p.y());
    y1 = std::max(y1, p.y());
  };
  for (const auto& s : strands) {
    for (const auto& p : s) grow(p);
  }
  for (Eigen::Index k = 0; k < log.positions.rows(); ++k) {
    for (int j = 0; j < log.agents; ++j) grow(log.position(static_cast<int>(k), j));
  }
  if (!std::isfinite(x0)) x0 = y0 = 0.0, x1 = y1 = 1.0;
  const double pad = 0.05 * std::max({x1 - x0, y1 - y0, 1e-9});
  x0 -= pad;
  y0 -= pad;
  x1 += pad;
  y1 += pad;
  const double scale = 800.0 / std::max(x1 - x0, y1 - y0);
  auto emit = [&](std::string& out, const Vec2& p) {
    append_number(out, std::round((p.x() - x0) * scale * 100.0) / 100.0);
    out += ',';
    append_number(out, std::round((y1 - p.y()) * scale * 100.0) / 100.0);
    out += ' ';
  };
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"";
  append_number(out, std::ceil((x1 - x0) * scale));
  out += "\" height=\"";
  append_number(out, std::ceil((y1 - y0) * scale));
  out += "\">\n";
  for (std::size_t j = 0; j < strands.size(); ++j) {
    out += "<polyline class=\"strand\" fill=\"none\" stroke=\"#999\" "
           "stroke-dasharray=\"4 3\" points=\"";
    for (const auto& p : strands[j]) emit(out, p);
    out += "\"/>\n";
  }
  const auto stride = std::max<Eigen::Index>(1, log.positions.rows() / 2000);
  for (int j = 0; j < log.agents; ++j) {
    out += "<polyline class=\"trajectory\" fill=\"none\" stroke=\"";
    out += kColors[j % 8];
    out += "\" points=\"";
    for (Eigen::Index k = 0; k < log.positions.rows(); k += stride) {
      emit(out, log.position(static_cast<int>(k), j));
    }
    if (log.positions.rows() > 0) {
      emit(out, log.position(static_cast<int>(log.positions.rows() - 1), j));
    }
    out += "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << contents;
  if (!out) throw Error("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace braidmix
