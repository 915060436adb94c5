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

#include "braidmix/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "braidmix/tracking.hpp"

namespace braidmix {

Vec2 AgentLeg::rect_position(double t) const {
  return strand.at_fraction(timing.position(t));
}

Vec2 AgentLeg::world_point(const Vec2& rect) const {
  return cell ? cell->transform.map(rect) : rect;
}

Vec2 AgentLeg::world_position(double t) const {
  return world_point(rect_position(t));
}

Vec2 BraidPlan::world_waypoint(int step, int agent) const {
  if (curved) return curved->point(step, grid.rows[step][agent]);
  return grid.waypoint(step, agent);
}

Vec2 BraidPlan::reference(int step, int agent, double t) const {
  if (stop_go_stop) return stop_go_stop->position(step, agent, t);
  return legs[step][agent].world_position(t);
}

namespace {

// Smooth S-shaped strand with horizontal end tangents.
StrandPath smooth_strand(const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  return StrandPath::custom(
      [a, d](double p) {
        return Vec2(a.x() + p * d.x(), a.y() + (3 * p * p - 2 * p * p * p) * d.y());
      },
      [d](double p) { return Vec2(d.x(), (6 * p - 6 * p * p) * d.y()); });
}

StrandPath make_strand(const Vec2& a, const Vec2& b, StrandKind kind) {
  return kind == StrandKind::kCustom ? smooth_strand(a, b)
                                     : strand_path(a, b, kind);
}

// Timing offset putting the agent `margin` beyond (under) or before (over)
// the crossing at arclength fraction `fraction` at mid-step.
double crossing_offset(double length, double fraction, double margin,
                       CrossingRole role) {
  if (role == CrossingRole::kUnder) return 2 * fraction * length + 2 * margin - length;
  return length - 2 * fraction * length + 2 * margin;
}

std::string step_label(int step) { return "step " + std::to_string(step + 1); }

void plan_step(const Scenario& sc, BraidPlan& out, int i) {
  const auto& grid = out.grid;
  const int n = grid.agents;
  const double t0 = grid.times[i];
  const double t1 = grid.times[i + 1];
  auto& legs = out.legs[i];
  legs.resize(static_cast<std::size_t>(n));

  std::vector<int> at_row(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    auto& leg = legs[j];
    leg.row_from = grid.rows[i][j];
    leg.row_to = grid.rows[i + 1][j];
    at_row[leg.row_from] = j;
    leg.strand = make_strand(grid.braid_point(i, leg.row_from),
                             grid.braid_point(i + 1, leg.row_to), sc.strand);
    leg.timing = reparameterize(leg.strand.length(), 0.0, t0, t1,
                                CrossingRole::kNone);
    if (out.curved) {
      const int lower = leg.row_from + 1 < n ? leg.row_from : leg.row_from - 1;
      leg.cell = region_cell(grid, *out.curved, i + 1, lower);
    }
  }

  for (const auto& g : out.steps[i].generators) {
    if (g.is_identity()) continue;
    const int row = g.index - 1;
    const int a = at_row[row];
    const int b = at_row[row + 1];
    const auto [role_a, role_b] = crossing_roles(g);
    auto& la = legs[a];
    auto& lb = legs[b];
    la.role = role_a;
    lb.role = role_b;
    la.partner = b;
    lb.partner = a;
    const double sep = sc.separation(a, b);
    const std::string where =
        step_label(i) + " agents " + std::to_string(a) + "/" + std::to_string(b);

    double frac_a = 0.5, frac_b = 0.5;
    double margin_a = 0.0, margin_b = 0.0;
    try {
      if (out.curved) {
        const QuadCell cell = region_cell(grid, *out.curved, i + 1, row);
        la.cell = lb.cell = cell;
        const auto rect_cross = intersection(la.strand, lb.strand);
        const Vec2 qa0 = out.world_waypoint(i, a), qa1 = out.world_waypoint(i + 1, a);
        const Vec2 qb0 = out.world_waypoint(i, b), qb1 = out.world_waypoint(i + 1, b);
        const auto quad_cross = intersection(StrandPath::straight(qa0, qa1),
                                             StrandPath::straight(qb0, qb1));
        if (!rect_cross || !quad_cross) {
          throw PreconditionError("strands do not cross");
        }
        frac_a = rect_cross->param_j;
        frac_b = rect_cross->param_k;
        const double delta_q = sep / std::sin(quad_cross->angle);
        margin_a = curved_safety_margin(cell, quad_cross->point,
                                        (qa1 - qa0).normalized(), delta_q, role_a);
        margin_b = curved_safety_margin(cell, quad_cross->point,
                                        (qb1 - qb0).normalized(), delta_q, role_b);
      } else if (sc.strand == StrandKind::kCityBlock) {
        CrossingInfo c;
        c.point = 0.5 * (grid.braid_point(i, row) + grid.braid_point(i + 1, row + 1));
        c.param_j = c.param_k = 0.5;
        margin_a = margin_b =
            safety_margin(c, sep, StrandKind::kCityBlock, n, grid.region.height);
      } else {
        const auto cross = intersection(la.strand, lb.strand);
        if (!cross) throw PreconditionError("strands do not cross");
        frac_a = cross->param_j;
        frac_b = cross->param_k;
        margin_a = margin_b = safety_margin(la.strand, lb.strand, *cross, sep, n,
                                            grid.region.height);
      }
    } catch (const PreconditionError& e) {
      out.violations.push_back(where + ": " + e.what());
    }
    la.margin = margin_a;
    lb.margin = margin_b;

    for (auto [leg, frac, margin] :
         {std::tuple{&la, frac_a, margin_a}, std::tuple{&lb, frac_b, margin_b}}) {
      const double length = leg->strand.length();
      double offset = crossing_offset(length, frac, margin, leg->role);
      if (offset > length) {
        out.violations.push_back(where + ": safety region " +
                                 std::to_string(offset) + " exceeds strand length " +
                                 std::to_string(length));
        offset = length;
      }
      offset = std::max(offset, 0.0);
      leg->timing = reparameterize(length, offset, t0, t1, leg->role);
    }
  }
}

}  // namespace

BraidPlan plan(const Scenario& sc) {
  sc.validate();
  BraidPlan out;
  out.word = scenario_word(sc);
  out.steps = schedule_steps(out.word, sc.honor_braces);
  const int m = static_cast<int>(out.steps.size());
  WaypointGrid grid =
      sc.times.empty()
          ? braid_point_grid(sc.agents, m, sc.region)
          : braid_point_grid(sc.agents, m, sc.region, sc.times);
  out.grid = waypoints(std::move(grid), out.steps);

  if (sc.track) out.curved = sample_track(*sc.track, sc.agents, m);
  if (sc.columns) {
    if (sc.columns->steps() != m || sc.columns->agents() != sc.agents) {
      throw PreconditionError("region columns must be " + std::to_string(m + 1) +
                              " columns of " + std::to_string(sc.agents) +
                              " points");
    }
    out.curved = *sc.columns;
  }

  if (sc.controller == ControllerKind::kStopGoStop) {
    if (out.curved || sc.strand != StrandKind::kStraight) {
      throw PreconditionError(
          "stop-go-stop needs straight strands in a rectangular region");
    }
    out.stop_go_stop =
        stop_go_stop_plan(out.grid, sc.v_max, sc.max_separation(), false);
    const auto& c = out.stop_go_stop->check;
    if (!c.inequality) {
      out.violations.push_back("stop-go-stop: step time too short for release "
                               "spacing (" + std::to_string(c.lhs) + " < " +
                               std::to_string(c.rhs) + ")");
    }
    if (!c.rows_separated) {
      out.violations.push_back("stop-go-stop: braid rows closer than separation");
    }
    if (!c.diagonal_clearance) {
      out.violations.push_back(
          "stop-go-stop: braid points closer than separation to a diagonal");
    }
    return out;
  }
  if (out.curved && sc.strand != StrandKind::kStraight) {
    throw PreconditionError("curved regions need straight rectangle strands");
  }
  out.legs.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) plan_step(sc, out, i);
  return out;
}

std::vector<int> substeps(const std::vector<double>& step_times, double dt) {
  if (!(dt > 0.0)) throw PreconditionError("dt must be > 0");
  std::vector<int> n;
  for (std::size_t i = 1; i < step_times.size(); ++i) {
    const double span = step_times[i] - step_times[i - 1];
    n.push_back(std::max(1, static_cast<int>(std::ceil(span / dt - 1e-9))));
  }
  return n;
}

std::vector<int> locate_steps(const std::vector<double>& times,
                              const std::vector<double>& step_times) {
  std::vector<int> out;
  std::size_t k = 0;
  for (double t : step_times) {
    while (k < times.size() && times[k] != t) ++k;
    if (k == times.size()) {
      throw PreconditionError("trajectory has no sample at braid time " +
                              std::to_string(t));
    }
    out.push_back(static_cast<int>(k));
  }
  return out;
}

namespace {

using Vec3 = Eigen::Vector3d;

struct StepContext {
  const Scenario& sc;
  const BraidPlan& plan;
  int step;
  double t0;
  double t1;
  int n;
  double h;
  double time(int k) const { return k == n ? t1 : t0 + k * h; }
};

// Tracks the reference of one agent over one step.
class LqAgent {
 public:
  LqAgent(const StepContext& ctx, int agent, const Vec2& start) : ctx_(ctx) {
    TrackingProblem<double> p;
    p.Q = ctx.sc.Q;
    p.R = ctx.sc.R;
    const BraidPlan* plan = &ctx.plan;
    const int step = ctx.step;
    p.reference = [plan, step, agent](double t) {
      return plan->reference(step, agent, t);
    };
    p.start = start;
    p.end = ctx.plan.world_waypoint(ctx.step + 1, agent);
    p.t_start = ctx.t0;
    p.t_end = ctx.t1;
    const double want = ctx.sc.gain_steps_per_unit * (ctx.t1 - ctx.t0);
    int per = std::max(1, static_cast<int>(std::ceil(want / ctx.n - 1e-9)));
    if (ctx.n * per < 2) per = 2;
    gains_ = solve_gains(p, ctx.n * per);
    end_ = p.end;
    u_last_ = control_closed_loop(gains_, start, ctx.t0, end_);
  }

  // Closed-loop control, or the held control once past the guard time.
  Vec2 control(const Vec2& x, double t) const {
    if (coasting_) return u_last_;
    return control_closed_loop(gains_, x, t, end_);
  }

  // Switches to coasting for substeps ending after the guard time.
  void begin_substep(double t_end_sub) {
    coasting_ = t_end_sub > gains_.guard_time() + 1e-12 * (ctx_.t1 - ctx_.t0);
  }
  void end_substep(const Vec2& x, double t) {
    if (!coasting_) u_last_ = control_closed_loop(gains_, x, t, end_);
  }

 private:
  const StepContext& ctx_;
  TrackingGains<double> gains_;
  Vec2 end_ = Vec2::Zero();
  Vec2 u_last_ = Vec2::Zero();
  bool coasting_ = false;
};

}  // namespace

TrajectoryLog simulate(const Scenario& sc, const BraidPlan& plan) {
  const int n_agents = plan.agents();
  const int m = plan.step_count();
  const auto& times = plan.grid.times;
  const auto counts = substeps(times, sc.step_size());
  int total = 1;
  for (int c : counts) total += c;

  const bool unicycle = sc.controller == ControllerKind::kLqUnicycle;
  TrajectoryLog log;
  log.agents = n_agents;
  log.headings = unicycle;
  log.scenario_hash = scenario_hash(sc);
  log.times.reserve(static_cast<std::size_t>(total));
  log.positions.resize(total, 2 * n_agents);
  if (unicycle) log.heading.resize(total, n_agents);

  Eigen::Matrix2Xd x(2, n_agents);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(n_agents);
  for (int j = 0; j < n_agents; ++j) {
    x.col(j) = plan.world_waypoint(0, j);
    const Vec2 d = plan.world_waypoint(1, j) - x.col(j);
    theta(j) = std::atan2(d.y(), d.x());
  }
  int sample = 0;
  auto record = [&](double t) {
    log.times.push_back(t);
    for (int j = 0; j < n_agents; ++j) {
      log.positions(sample, 2 * j) = x(0, j);
      log.positions(sample, 2 * j + 1) = x(1, j);
      if (unicycle) log.heading(sample, j) = theta(j);
    }
    ++sample;
  };
  record(times[0]);
  log.step_samples.push_back(0);

  for (int i = 0; i < m; ++i) {
    const StepContext ctx{sc, plan, i, times[i], times[i + 1], counts[i],
                          (times[i + 1] - times[i]) / counts[i]};
    try {
      std::vector<LqAgent> lq;
      if (sc.controller == ControllerKind::kLqSingle || unicycle) {
        lq.reserve(static_cast<std::size_t>(n_agents));
        for (int j = 0; j < n_agents; ++j) lq.emplace_back(ctx, j, x.col(j));
      }
      for (int k = 1; k <= ctx.n; ++k) {
        const double ta = ctx.time(k - 1);
        const double tb = ctx.time(k);
        const double h = tb - ta;
        for (int j = 0; j < n_agents; ++j) {
          switch (sc.controller) {
            case ControllerKind::kExact:
              x.col(j) = plan.reference(i, j, tb);
              break;
            case ControllerKind::kStopGoStop: {
              const auto& leg = plan.stop_go_stop->legs[i][j];
              const double active = tb - std::max(ta, leg.release);
              if (active <= 0.0) break;
              const Vec2 to_go = leg.to - x.col(j);
              const double remaining = to_go.norm();
              const double reach = leg.speed * active;
              if (remaining <= reach) {
                x.col(j) = leg.to;
              } else {
                x.col(j) += reach * to_go / remaining;
              }
              break;
            }
            case ControllerKind::kLqSingle: {
              auto& agent = lq[j];
              agent.begin_substep(tb);
              auto f = [&](double t, const Vec2& s) -> Vec2 {
                return agent.control(s, t);
              };
              x.col(j) = rk4_step<double, Vec2>(f, ta, Vec2(x.col(j)), h);
              agent.end_substep(x.col(j), tb);
              break;
            }
            case ControllerKind::kLqUnicycle: {
              auto& agent = lq[j];
              agent.begin_substep(tb);
              const double kappa = sc.kappa;
              auto f = [&](double t, const Vec3& s) -> Vec3 {
                const Vec2 u = agent.control(s.head<2>(), t);
                const auto [nu, omega] = unicycle_map(u, s(2), kappa);
                return Vec3(nu * std::cos(s(2)), nu * std::sin(s(2)), omega);
              };
              const Vec3 s0(x(0, j), x(1, j), theta(j));
              const Vec3 s1 = rk4_step<double, Vec3>(f, ta, s0, h);
              x.col(j) = s1.head<2>();
              theta(j) = s1(2);
              agent.end_substep(x.col(j), tb);
              break;
            }
          }
        }
        record(tb);
      }
    } catch (const NumericalError& e) {
      throw NumericalError(step_label(i) + " (t in [" + std::to_string(ctx.t0) +
                           ", " + std::to_string(ctx.t1) + "]): " + e.what());
    }
    log.step_samples.push_back(sample - 1);
  }
  return log;
}

}  // namespace braidmix
