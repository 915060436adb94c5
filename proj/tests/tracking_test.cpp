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
#include <random>

#include "braidmix/tracking.hpp"
#include "doctest.h"

using namespace braidmix;
using doctest::Approx;

namespace {

using Problem = TrackingProblem<double>;
using Gains = TrackingGains<double>;

Problem zero_reference(const Vec2& start, const Vec2& end) {
  Problem p;
  p.reference = [](double) { return Vec2(0, 0); };
  p.start = start;
  p.end = end;
  return p;
}

Problem coupled_problem() {
  Problem p;
  p.Q << 3.0, 0.5, 0.5, 5.0;
  p.R << 1.0, 0.2, 0.2, 0.8;
  p.reference = [](double t) { return Vec2(t, 0.3 * std::sin(2 * t)); };
  p.start = p.reference(0.0);
  p.end = p.reference(1.0);
  return p;
}

struct Rollout {
  // Gain sample index of each entry.
  std::vector<int> k;
  std::vector<double> t;
  std::vector<Vec2> x;
  std::vector<Vec2> u;
  double cost = 0.0;
};

// Fixed-step RK4 over two gain steps, so every stage lands on a stored gain
// sample. The closed loop holds its control after the guard time. `kick` is
// added to the state at gain sample `kick_at`.
Rollout rollout(const Gains& g, bool closed, int kick_at = -1,
                const Vec2& kick = Vec2::Zero(),
                const std::function<Vec2(double)>& extra = {}) {
  const auto& p = g.problem();
  const double h = 2 * g.step();
  using Z = Eigen::Vector3d;
  Rollout r;
  Z z(p.start.x(), p.start.y(), 0.0);
  Vec2 held = Vec2::Zero();
  bool coasting = false;
  auto law = [&](const Vec2& x, double t) -> Vec2 {
    Vec2 u = coasting ? held
                      : (closed ? control_closed_loop(g, x, t, p.end)
                                : control_open_loop(g, x, t));
    if (extra) u += extra(t);
    return u;
  };
  auto f = [&](double t, const Z& s) -> Z {
    const Vec2 x = s.head<2>();
    const Vec2 u = law(x, t);
    const Vec2 e = x - p.reference(t);
    Z d;
    d << u, 0.5 * e.dot(p.Q * e) + 0.5 * u.dot(p.R * u);
    return d;
  };
  for (int k = 0; k < g.steps(); k += 2) {
    const double t = g.time(k);
    if (k == kick_at) z.head<2>() += kick;
    if (closed && !coasting && t >= g.guard_time() - 1e-12) {
      held = control_closed_loop(g, Vec2(z.head<2>()), t, p.end);
      coasting = true;
    }
    r.k.push_back(k);
    r.t.push_back(t);
    r.x.push_back(z.head<2>());
    r.u.push_back(law(z.head<2>(), t));
    z = rk4_step<double>(f, t, z, h);
  }
  r.k.push_back(g.steps());
  r.t.push_back(p.t_end);
  r.x.push_back(z.head<2>());
  if (!closed) r.u.push_back(law(z.head<2>(), p.t_end));
  r.cost = z(2);
  return r;
}

}  // namespace

TEST_CASE("sweep matches the hyperbolic closed forms") {
  const auto g = solve_gains(zero_reference({1, 0}, {0, 0}), 100);
  const auto& s0 = g.samples().front();
  CHECK((s0.H - std::tanh(1.0) * Mat2::Identity()).norm() < 1e-8);
  CHECK((s0.K - Mat2::Identity() / std::cosh(1.0)).norm() < 1e-8);
  CHECK((s0.G + std::tanh(1.0) * Mat2::Identity()).norm() < 1e-8);
  CHECK(s0.H(0, 0) == Approx(0.76159).epsilon(1e-5));
  CHECK(s0.K(0, 0) == Approx(0.64805).epsilon(1e-5));
  for (int k = 0; k <= 100; k += 10) {
    const double t = g.time(k);
    const auto& s = g.samples()[k];
    CHECK(std::abs(s.H(0, 0) - std::tanh(1 - t)) < 1e-8);
    CHECK(std::abs(s.K(1, 1) - 1 / std::cosh(1 - t)) < 1e-8);
    CHECK(std::abs(s.H(0, 1)) < 1e-14);
  }
  const auto& end = g.samples().back();
  CHECK(end.H == Mat2::Zero());
  CHECK(end.K == Mat2::Identity());
  CHECK(end.G == Mat2::Zero());
}

TEST_CASE("zero state weight integrates exactly") {
  Problem p = zero_reference({0, 0}, {1, 2});
  p.Q.setZero();
  p.R << 2.0, 0.0, 0.0, 0.5;
  p.t_start = 1.0;
  p.t_end = 4.0;
  p.reference = [](double t) { return Vec2(t, -t); };
  const auto g = solve_gains(p, 300);
  for (int k = 0; k <= 300; k += 25) {
    const auto& s = g.samples()[k];
    const double left = p.t_end - g.time(k);
    CHECK(s.H.norm() < 1e-14);
    CHECK((s.K - Mat2::Identity()).norm() < 1e-14);
    CHECK((s.G + left * p.R.inverse()).norm() < 1e-12);
    CHECK(s.E.norm() < 1e-14);
    CHECK(s.D.norm() < 1e-14);
  }
}

TEST_CASE("zero reference leaves the affine gains at zero") {
  Problem p = zero_reference({1, 1}, {2, 0});
  p.Q << 4, 1, 1, 2;
  const auto g = solve_gains(p, 200);
  for (const auto& s : g.samples()) {
    CHECK(s.E.norm() == 0.0);
    CHECK(s.D.norm() == 0.0);
  }
}

TEST_CASE("minimum-energy control laws") {
  Problem p = zero_reference({0.5, -1.0}, {2.0, 1.0});
  p.Q.setZero();
  const auto g = solve_gains(p, 200);
  for (double t : {0.0, 0.2, 0.5, 0.8}) {
    const Vec2 x = p.start + t * (p.end - p.start);
    const Vec2 expect = (p.end - x) / (1 - t);
    CHECK((control_open_loop(g, x, t) - expect).norm() < 1e-12);
    CHECK((control_closed_loop(g, x, t, p.end) - expect).norm() < 1e-12);
  }
  // Off the optimal path only the closed loop re-aims.
  const Vec2 off(0.0, 0.0);
  CHECK((control_closed_loop(g, off, 0.5, p.end) - (p.end - off) / 0.5).norm() < 1e-12);
  CHECK(optimal_cost(g, p.start) == Approx(0.5 * (p.end - p.start).squaredNorm()));

  Problem still;
  still.reference = [](double) { return Vec2(0.3, 0.7); };
  still.start = still.end = Vec2(0.3, 0.7);
  const auto gs = solve_gains(still, 100);
  for (double t : {0.0, 0.3, 0.9}) {
    CHECK(control_open_loop(gs, still.start, t).norm() < 1e-12);
    CHECK(control_closed_loop(gs, still.start, t, still.end).norm() < 1e-12);
  }
  CHECK(std::abs(optimal_cost(gs, still.start)) < 1e-12);
}

TEST_CASE("initial control from the hyperbolic example") {
  const auto p = zero_reference({1, 0}, {0, 0});
  const auto g = solve_gains(p, 200);
  const Vec2 open = control_open_loop(g, p.start, 0.0);
  const Vec2 closed = control_closed_loop(g, p.start, 0.0, p.end);
  CHECK((open - closed).norm() < 1e-12);
  // x(t) = sinh(1 - t) / sinh(1)
  CHECK(open.x() == Approx(-1.0 / std::tanh(1.0)).epsilon(1e-9));
  CHECK(std::abs(open.y()) < 1e-14);
  // J = coth(1) / 2
  CHECK(optimal_cost(g, p.start) == Approx(0.5 / std::tanh(1.0)).epsilon(1e-9));
}

TEST_CASE("closed and open loop agree on the optimal trajectory") {
  const auto g = solve_gains(coupled_problem(), 1000);
  const auto r = rollout(g, false);
  for (std::size_t k = 0; k + 3 < r.t.size(); k += 50) {
    const Vec2 closed = control_closed_loop(g, r.x[k], r.t[k], g.problem().end);
    CHECK((closed - r.u[k]).norm() < 1e-6 * (1 + r.u[k].norm()));
  }
  CHECK((r.x.back() - g.problem().end).norm() < 1e-9);
}

TEST_CASE("closed loop recovers from a mid-horizon kick") {
  const auto g = solve_gains(coupled_problem(), 1000);
  const Vec2 kick(0.2, -0.15);
  const auto closed = rollout(g, true, 500, kick);
  const auto open = rollout(g, false, 500, kick);
  CHECK((closed.x.back() - g.problem().end).norm() <= 1e-3);
  CHECK((open.x.back() - g.problem().end).norm() > 1e-2);
  const auto calm = rollout(g, true);
  CHECK((calm.x.back() - g.problem().end).norm() <= 1e-3);
}

TEST_CASE("optimal cost matches rollout quadrature") {
  const auto g = solve_gains(coupled_problem(), 2000);
  const auto r = rollout(g, true);
  CHECK(std::abs(optimal_cost(g, g.problem().start) - r.cost) < 1e-4);
  CHECK(value_function(g, g.problem().start, 0.0) ==
        Approx(optimal_cost(g, g.problem().start)).epsilon(1e-9));
  // V(end, t_end) = 0.
  CHECK(std::abs(value_function(g, g.problem().end, 1.0)) < 1e-12);

  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    Problem p;
    const double a = 2 + u(rng), b = u(rng);
    p.Q << 5 + 4 * u(rng), b, b, 5 + 4 * u(rng);
    p.R << 1 + 0.5 * u(rng), 0.1 * u(rng), 0, 1 + 0.5 * u(rng);
    p.R(1, 0) = p.R(0, 1);
    const double w = 1 + u(rng);
    p.reference = [=](double t) { return Vec2(a * t, std::sin(w * t)); };
    p.t_end = 1.5;
    p.start = p.reference(0.0) + Vec2(0.1 * u(rng), 0.1 * u(rng));
    p.end = p.reference(1.5);
    const auto gr = solve_gains(p, 3000);
    CHECK(std::abs(optimal_cost(gr, p.start) - rollout(gr, true).cost) < 1e-4);
  }
}

TEST_CASE("value function satisfies the HJB equation") {
  const auto g = solve_gains(coupled_problem(), 2000);
  const auto& p = g.problem();
  const double h = g.step(), e = 1e-5;
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    const int k = 100 + 400 * i;
    const double t = g.time(k);
    for (int a = 0; a < 5; ++a) {
      for (int b = 0; b < 5; ++b) {
        const Vec2 x(-1 + 0.5 * a, -1 + 0.5 * b);
        const double vt =
            (value_function(g, x, g.time(k + 1)) - value_function(g, x, g.time(k - 1))) /
            (2 * h);
        Vec2 vx;
        vx.x() = (value_function(g, Vec2(x + Vec2(e, 0)), t) -
                  value_function(g, Vec2(x - Vec2(e, 0)), t)) / (2 * e);
        vx.y() = (value_function(g, Vec2(x + Vec2(0, e)), t) -
                  value_function(g, Vec2(x - Vec2(0, e)), t)) / (2 * e);
        const Vec2 err = x - p.reference(t);
        const Vec2 u = -g.r_inverse() * vx;
        const double residual = vt + 0.5 * err.dot(p.Q * err) + 0.5 * u.dot(p.R * u) + vx.dot(u);
        worst = std::max(worst, std::abs(residual));
        CHECK((u - control_open_loop(g, x, t)).norm() < 1e-6);
      }
    }
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("smooth bumps never lower the cost") {
  const auto g = solve_gains(coupled_problem(), 1000);
  const auto& p = g.problem();
  const auto best = rollout(g, false);
  const std::size_t n = best.t.size() - 1;
  const double h = 2 * g.step();
  // Replays the optimal control samples plus s * bump with the trapezoid
  // rule. The bump has zero integral, so the terminal state is unchanged.
  auto replay = [&](double s, const std::function<Vec2(double)>& bump) {
    Vec2 x = p.start;
    double cost = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double t0 = best.t[k], t1 = best.t[k + 1];
      const Vec2 u0 = best.u[k] + s * bump(t0);
      const Vec2 u1 = best.u[k + 1] + s * bump(t1);
      const Vec2 x1 = x + 0.5 * h * (u0 + u1);
      const Vec2 e0 = x - p.reference(t0), e1 = x1 - p.reference(t1);
      cost += 0.25 * h * (e0.dot(p.Q * e0) + u0.dot(p.R * u0) + e1.dot(p.Q * e1) +
                          u1.dot(p.R * u1));
      x = x1;
    }
    return std::pair{x, cost};
  };
  const auto base = replay(0.0, [](double) { return Vec2(0, 0); });
  CHECK((base.first - p.end).norm() < 1e-6);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const Vec2 amp(u(rng), u(rng));
    const int freq = 1 + static_cast<int>(rng() % 4);
    const double phase = M_PI * u(rng);
    const double scale = std::pow(10.0, -2 + 2 * (u(rng) + 1) / 2);
    auto bump = [=](double t) -> Vec2 {
      return (std::sin(2 * M_PI * freq * t + phase) - std::sin(phase)) * amp;
    };
    // Remove the mean so the terminal state stays put.
    Vec2 mean = Vec2::Zero();
    for (std::size_t k = 0; k < n; ++k) {
      mean += 0.5 * h * (bump(best.t[k]) + bump(best.t[k + 1]));
    }
    auto centered = [=](double t) -> Vec2 { return bump(t) - mean; };
    const auto [x, cost] = replay(scale, centered);
    CHECK((x - base.first).norm() < 1e-9);
    CHECK(cost > base.second);
  }
}

TEST_CASE("terminal representation and costate dynamics") {
  const auto g = solve_gains(coupled_problem(), 2000);
  const auto& p = g.problem();
  const auto r = rollout(g, false);
  for (std::size_t k = 0; k < r.t.size(); k += 100) {
    const auto s = g.at(r.t[k]);
    // x(t_end) = K' x + G nu + D: the terminal map is the transpose of K.
    const Vec2 predicted = s.K.transpose() * r.x[k] + s.G * g.lambda_end() + s.D;
    CHECK((predicted - p.end).norm() < 1e-8);
  }
  // K is not symmetric here, so the transpose matters.
  CHECK((g.samples().front().K - g.samples().front().K.transpose()).norm() > 1e-4);

  auto lambda = [&](std::size_t i) {
    const auto s = g.samples()[r.k[i]];
    return Vec2(s.H * r.x[i] + s.K * g.lambda_end() + s.E);
  };
  const double h = 2 * g.step();
  for (std::size_t k = 1; k + 1 < r.t.size(); k += 97) {
    const Vec2 dl = (lambda(k + 1) - lambda(k - 1)) / (2 * h);
    const Vec2 expect = -p.Q * (r.x[k] - p.reference(r.t[k]));
    CHECK((dl - expect).norm() < 1e-4);
    const auto& s = g.samples()[r.k[k]];
    CHECK((g.costate_offset(r.t[k]) - (s.K * g.lambda_end() + s.E)).norm() < 1e-12);
  }
}

TEST_CASE("gain interpolation and guard") {
  const auto g = solve_gains(zero_reference({1, 0}, {0, 0}), 100);
  const double t = 0.505;
  const auto s = g.at(t);
  CHECK(s.H(0, 0) == Approx(0.5 * (g.samples()[50].H(0, 0) + g.samples()[51].H(0, 0))));
  CHECK(g.at(-1.0).H == g.samples().front().H);
  CHECK(g.at(2.0).H == g.samples().back().H);
  CHECK(g.guard_time() == Approx(0.98));
  CHECK_THROWS_AS(control_closed_loop(g, Vec2(0.1, 0.0), 1.0, Vec2(0, 0)), NumericalError);
  CHECK_NOTHROW(control_closed_loop(g, Vec2(0.1, 0.0), g.guard_time(), Vec2(0, 0)));
}

TEST_CASE("tracking problem validation") {
  Problem p = zero_reference({0, 0}, {1, 0});
  CHECK_THROWS_AS(solve_gains(p, 1), PreconditionError);
  Problem a = p;
  a.Q << 1, 0.5, 0, 1;
  CHECK_THROWS_AS(solve_gains(a, 100), PreconditionError);
  Problem b = p;
  b.R = -Mat2::Identity();
  CHECK_THROWS_AS(solve_gains(b, 100), PreconditionError);
  Problem c = p;
  c.Q = -Mat2::Identity();
  CHECK_THROWS_AS(solve_gains(c, 100), PreconditionError);
  Problem d = p;
  d.t_end = 0.0;
  CHECK_THROWS_AS(solve_gains(d, 100), PreconditionError);
  Problem e = p;
  e.reference = nullptr;
  CHECK_THROWS_AS(solve_gains(e, 100), PreconditionError);
  Problem f = p;
  f.reference = [](double) { return Vec2(NAN, 0); };
  CHECK_THROWS_AS(solve_gains(f, 100), NumericalError);
}

TEST_CASE("unicycle mapping") {
  auto [v1, w1] = unicycle_map(Vec2(1, 0), 0.0, 5.0);
  CHECK(v1 == Approx(1.0));
  CHECK(w1 == Approx(0.0));
  auto [v2, w2] = unicycle_map(Vec2(0, 1), 0.0, 2.0);
  CHECK(v2 == Approx(0.0));
  CHECK(w2 == Approx(2.0));
  auto [v3, w3] = unicycle_map(Vec2(0, 5), 0.0, 2.0);
  CHECK(v3 == Approx(0.0));
  CHECK(w3 == Approx(2.0));
  auto [v4, w4] = unicycle_map(Vec2(0, 0), 1.0, 2.0);
  CHECK(v4 == 0.0);
  CHECK(w4 == 0.0);
  auto [v5, w5] = unicycle_map(Vec2(0, 0.5), M_PI / 2, 3.0);
  CHECK(v5 == Approx(0.5));
  CHECK(std::abs(w5) < 1e-15);
  auto [v6, w6] = unicycle_map(Vec2(-0.3, 0.0), M_PI / 2, 3.0);
  CHECK(std::abs(v6) < 1e-15);
  CHECK(w6 == Approx(0.9));
}

TEST_CASE("sweep in extended precision") {
  TrackingProblem<long double> p;
  p.reference = [](long double) { return Vector2<long double>(0, 0); };
  p.start = Vector2<long double>(1, 0);
  const auto g = solve_gains(p, 400);
  const auto& s0 = g.samples().front();
  CHECK(std::abs(s0.H(0, 0) - std::tanh(1.0L)) < 1e-12L);
  CHECK(std::abs(s0.K(0, 0) - 1 / std::cosh(1.0L)) < 1e-12L);
  CHECK(std::abs(optimal_cost(g, p.start) - 0.5L / std::tanh(1.0L)) < 1e-12L);
}
