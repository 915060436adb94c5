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

// braidmix plan|simulate|verify|bound|sweep
//
// Exit status: 0 verified, 2 verification failed, 3 precondition or
// scheduling error, 1 other failures.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "braidmix/controllers.hpp"
#include "braidmix/output.hpp"
#include "braidmix/scenario.hpp"
#include "braidmix/simulator.hpp"
#include "braidmix/verify.hpp"
#include "json.hpp"

namespace {

constexpr int kVerified = 0;
constexpr int kFailure = 1;
constexpr int kVerificationFailed = 2;
constexpr int kPrecondition = 3;

struct Options {
  std::string scenario;
  std::string out = ".";
  std::string braid;
  int agents = 0;
  std::string controller;
  double dt = 0.0;
  bool svg = false;
  bool headings = false;
};

braidmix::Scenario default_scenario() {
  braidmix::Scenario s;
  s.braid = "s1";
  s.agents = 2;
  s.region = {1.0, 2.0, 10.0};
  s.separation = braidmix::uniform_separation(2, 0.05);
  s.v_max = 1.0;
  return s;
}

braidmix::Scenario load(const Options& o) {
  auto s = o.scenario.empty() ? default_scenario()
                              : braidmix::load_scenario(o.scenario);
  if (o.agents > 0 && o.agents != s.agents) {
    if (s.columns) {
      throw braidmix::PreconditionError(
          "--agents cannot change a scenario with explicit region columns");
    }
    const double sep = s.max_separation();
    s.agents = o.agents;
    s.separation = braidmix::uniform_separation(o.agents, sep);
  }
  if (!o.braid.empty()) s.braid = o.braid;
  if (!o.controller.empty()) s.controller = braidmix::controller_from_string(o.controller);
  if (o.dt > 0.0) s.dt = o.dt;
  return s;
}

std::string out_path(const Options& o, const std::string& name) {
  return (std::filesystem::path(o.out) / name).string();
}

void ensure_out(const Options& o) {
  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  if (ec) throw braidmix::Error("cannot create '" + o.out + "': " + ec.message());
}

int run_plan(const Options& o) {
  const auto s = load(o);
  const auto p = braidmix::plan(s);
  std::cout << braidmix::plan_json(p);
  return p.violations.empty() ? kVerified : kPrecondition;
}

void summarize(const braidmix::VerificationReport& r) {
  std::cout << (r.verified() ? "verified" : "FAILED")
            << ": min distance " << r.distance.global.distance << " (agents "
            << r.distance.global.first << "/" << r.distance.global.second
            << " at t=" << r.distance.global.time << "), max braid-point error "
            << r.max_error << " (tolerance " << r.tolerance << ")\n";
  for (const auto& v : r.violations) std::cout << "  flagged: " << v << "\n";
}

int run_simulate(const Options& o) {
  const auto s = load(o);
  const auto p = braidmix::plan(s);
  const auto log = braidmix::simulate(s, p);
  const auto report = braidmix::verify(log, s, p);
  ensure_out(o);
  braidmix::write_file(out_path(o, "trajectory.csv"), braidmix::trajectory_csv(log, o.headings));
  braidmix::write_file(out_path(o, "report.json"), braidmix::report_json(report));
  if (o.svg) {
    braidmix::write_file(out_path(o, "trajectory.svg"),
                         braidmix::trajectory_svg(log, p));
  }
  summarize(report);
  return report.verified() ? kVerified : kVerificationFailed;
}

int run_verify(const Options& o) {
  const auto s = load(o);
  const auto p = braidmix::plan(s);
  auto log = braidmix::parse_trajectory_csv(
      braidmix::read_file(out_path(o, "trajectory.csv")));
  if (log.agents != s.agents) {
    throw braidmix::PreconditionError("trajectory has " +
                                      std::to_string(log.agents) +
                                      " agents, scenario has " +
                                      std::to_string(s.agents));
  }
  log.scenario_hash = braidmix::scenario_hash(s);
  const auto report = braidmix::verify(log, s, p);
  std::cout << braidmix::report_json(report);
  summarize(report);
  return report.verified() ? kVerified : kVerificationFailed;
}

int run_bound(const Options& o) {
  const auto s = load(o);
  const auto& r = s.region;
  const double sep = s.max_separation();
  const auto b = braidmix::mixing_limit_upper(s.agents, r.height, r.length,
                                              r.duration, sep, s.v_max);
  nlohmann::json j;
  j["agents"] = s.agents;
  j["height"] = r.height;
  j["length"] = r.length;
  j["duration"] = r.duration;
  j["separation"] = sep;
  j["v_max"] = s.v_max;
  j["mixing_bound"] = {{"value", b.value},
                       {"separation_term", b.separation_term},
                       {"time_term", b.time_term}};
  j["max_stop_go_stop_steps"] = braidmix::max_stop_go_stop_steps(
      s.agents, r.height, r.length, r.duration, sep, s.v_max);
  std::cout << j.dump(2) << "\n";
  return kVerified;
}

int run_sweep(const Options& o) {
  const auto s = load(o);
  const auto& r = s.region;
  const double sep = s.max_separation();
  const int max_agents = o.agents > 0 ? o.agents : 29;
  const int max_time = std::max(1, static_cast<int>(std::ceil(r.duration)));
  std::string csv = "agents,duration,mixing_bound,max_stop_go_stop_steps\r\n";
  for (int n = 2; n <= max_agents; ++n) {
    for (int t = 1; t <= max_time; ++t) {
      const auto b =
          braidmix::mixing_limit_upper(n, r.height, r.length, t, sep, s.v_max);
      const int sgs = braidmix::max_stop_go_stop_steps(n, r.height, r.length, t,
                                                       sep, s.v_max, 200);
      csv += std::to_string(n) + "," + std::to_string(t) + "," +
             std::to_string(b.value) + "," + std::to_string(sgs) + "\r\n";
    }
  }
  if (o.out == ".") {
    std::cout << csv;
  } else {
    ensure_out(o);
    braidmix::write_file(out_path(o, "sweep.csv"), csv);
  }
  return kVerified;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plan, simulate and verify braid-specified multi-robot mixing"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", o.scenario, "Scenario JSON file");
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--braid", o.braid, "Braid word, e.g. \"{s1.s3}.S2\"");
    cmd->add_option("--agents", o.agents, "Number of agents")->check(CLI::PositiveNumber);
    cmd->add_option("--controller", o.controller,
                    "stop-go-stop, exact, lq-single or lq-unicycle");
    cmd->add_option("--dt", o.dt, "Integration step")->check(CLI::PositiveNumber);
    cmd->add_flag("--svg", o.svg, "Also write trajectory.svg");
    cmd->add_flag("--headings", o.headings,
                  "Add per-agent heading columns (unicycle) to trajectory.csv");
  };
  auto* plan = app.add_subcommand("plan", "Schedule the braid and print the plan");
  auto* simulate = app.add_subcommand("simulate", "Simulate and verify a scenario");
  auto* verify = app.add_subcommand("verify", "Verify <out>/trajectory.csv");
  auto* bound = app.add_subcommand("bound", "Mixing-limit bound for the scenario");
  auto* sweep = app.add_subcommand("sweep", "Mixing-limit bound over N and T");
  for (auto* cmd : {plan, simulate, verify, bound, sweep}) add_common(cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*plan) return run_plan(o);
    if (*simulate) return run_simulate(o);
    if (*verify) return run_verify(o);
    if (*bound) return run_bound(o);
    if (*sweep) return run_sweep(o);
  } catch (const braidmix::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const braidmix::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
