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

// Finite-horizon linear-quadratic tracking of a reference with a fixed
// terminal state, solved by the backward sweep.
//
//   min 1/2 int (x - gamma)' Q (x - gamma) + u' R u dt,  x' = u,
//   x(t0) = start, x(tf) = end.
//
// The costate is lambda = H x + K nu + E with the terminal representation
// x(tf) = K' x + G nu + D, where nu is the terminal multiplier.

#ifndef BRAIDMIX_TRACKING_HPP_
#define BRAIDMIX_TRACKING_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "braidmix/types.hpp"

namespace braidmix {

// One classical fourth-order Runge-Kutta step of x' = f(t, x).
template <typename Scalar, typename State, typename F>
State rk4_step(F&& f, Scalar t, const State& x, Scalar h) {
  const State k1 = f(t, x);
  const State k2 = f(t + h / 2, State(x + (h / 2) * k1));
  const State k3 = f(t + h / 2, State(x + (h / 2) * k2));
  const State k4 = f(t + h, State(x + h * k3));
  return x + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
}

template <typename Scalar>
struct TrackingProblem {
  Matrix2<Scalar> Q = Matrix2<Scalar>::Identity();
  Matrix2<Scalar> R = Matrix2<Scalar>::Identity();
  std::function<Vector2<Scalar>(Scalar)> reference;
  Vector2<Scalar> start = Vector2<Scalar>::Zero();
  Vector2<Scalar> end = Vector2<Scalar>::Zero();
  Scalar t_start = 0;
  Scalar t_end = 1;

  // Throws PreconditionError unless Q, R are symmetric positive definite
  // (Q may be zero) and t_end > t_start.
  void validate() const {
    if (!(t_end > t_start)) throw PreconditionError("tracking horizon is empty");
    const auto symmetric = [](const Matrix2<Scalar>& m) {
      using std::abs;
      return abs(m(0, 1) - m(1, 0)) <=
             Scalar(1e-12) * (Scalar(1) + m.cwiseAbs().maxCoeff());
    };
    if (!symmetric(Q) || !symmetric(R)) {
      throw PreconditionError("Q and R must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix2<Scalar>> q(Q), r(R);
    if (!(r.eigenvalues().minCoeff() > 0)) {
      throw PreconditionError("R must be positive definite");
    }
    if (q.eigenvalues().minCoeff() < 0) {
      throw PreconditionError("Q must be positive semidefinite");
    }
  }
};

template <typename Scalar>
struct GainSample {
  Matrix2<Scalar> H = Matrix2<Scalar>::Zero();
  Matrix2<Scalar> K = Matrix2<Scalar>::Identity();
  Matrix2<Scalar> G = Matrix2<Scalar>::Zero();
  Vector2<Scalar> E = Vector2<Scalar>::Zero();
  Vector2<Scalar> D = Vector2<Scalar>::Zero();
  Scalar phi = 0;
};

template <typename Scalar>
class TrackingGains {
 public:
  using Sample = GainSample<Scalar>;

  TrackingGains() = default;
  TrackingGains(TrackingProblem<Scalar> problem, std::vector<Sample> samples,
                Vector2<Scalar> lambda_end)
      : problem_(std::move(problem)),
        samples_(std::move(samples)),
        lambda_end_(std::move(lambda_end)),
        r_inv_(problem_.R.inverse()) {}

  const TrackingProblem<Scalar>& problem() const { return problem_; }
  // samples()[k] holds the gains at t_start + k * step().
  const std::vector<Sample>& samples() const { return samples_; }
  int steps() const { return static_cast<int>(samples_.size()) - 1; }
  Scalar step() const { return (problem_.t_end - problem_.t_start) / steps(); }
  Scalar time(int k) const {
    return k == steps() ? problem_.t_end : problem_.t_start + k * step();
  }
  const Vector2<Scalar>& lambda_end() const { return lambda_end_; }
  const Matrix2<Scalar>& r_inverse() const { return r_inv_; }

  // Closed-loop evaluation stops two gain steps before t_end.
  Scalar guard_time() const { return problem_.t_end - 2 * step(); }

  // Linear interpolation between samples, clamped to the horizon.
  Sample at(Scalar t) const {
    const Scalar s = (t - problem_.t_start) / step();
    if (!(s > 0)) return samples_.front();
    if (s >= steps()) return samples_.back();
    using std::floor;
    const int k = std::min(static_cast<int>(floor(s)), steps() - 1);
    const Scalar w = s - k;
    const Sample& a = samples_[k];
    const Sample& b = samples_[k + 1];
    Sample out;
    out.H = (1 - w) * a.H + w * b.H;
    out.K = (1 - w) * a.K + w * b.K;
    out.G = (1 - w) * a.G + w * b.G;
    out.E = (1 - w) * a.E + w * b.E;
    out.D = (1 - w) * a.D + w * b.D;
    out.phi = (1 - w) * a.phi + w * b.phi;
    return out;
  }

  // Lambda(t) = K(t) lambda_end + E(t).
  Vector2<Scalar> costate_offset(Scalar t) const {
    const Sample s = at(t);
    return s.K * lambda_end_ + s.E;
  }

 private:
  TrackingProblem<Scalar> problem_;
  std::vector<Sample> samples_;
  Vector2<Scalar> lambda_end_ = Vector2<Scalar>::Zero();
  Matrix2<Scalar> r_inv_ = Matrix2<Scalar>::Identity();
};

namespace detail {

// H, K, G (column-major), E, D, phi.
template <typename Scalar>
using SweepState = Eigen::Matrix<Scalar, 17, 1>;

template <typename Scalar>
SweepState<Scalar> pack(const GainSample<Scalar>& s) {
  SweepState<Scalar> x;
  x << Eigen::Map<const Eigen::Matrix<Scalar, 4, 1>>(s.H.data()),
      Eigen::Map<const Eigen::Matrix<Scalar, 4, 1>>(s.K.data()),
      Eigen::Map<const Eigen::Matrix<Scalar, 4, 1>>(s.G.data()), s.E, s.D,
      s.phi;
  return x;
}

template <typename Scalar>
GainSample<Scalar> unpack(const SweepState<Scalar>& x) {
  GainSample<Scalar> s;
  s.H = Eigen::Map<const Matrix2<Scalar>>(x.data());
  s.K = Eigen::Map<const Matrix2<Scalar>>(x.data() + 4);
  s.G = Eigen::Map<const Matrix2<Scalar>>(x.data() + 8);
  s.E = x.template segment<2>(12);
  s.D = x.template segment<2>(14);
  s.phi = x(16);
  return s;
}

template <typename Scalar>
bool finite(const SweepState<Scalar>& x) {
  using std::isfinite;
  for (int i = 0; i < x.size(); ++i) {
    if (!isfinite(x(i))) return false;
  }
  return true;
}

template <typename Scalar>
Matrix2<Scalar> checked_inverse(const Matrix2<Scalar>& g, Scalar scale,
                                const char* what) {
  using std::abs;
  const Scalar det = g.determinant();
  if (!(abs(det) > Scalar(1e-13) * scale * scale)) {
    throw NumericalError(std::string(what) + ": G is singular (abnormal problem)");
  }
  return g.inverse();
}

}  // namespace detail

// Backward sweep by fixed-step RK4 from t_end:
//   H' = H R^-1 H - Q,   K' = H R^-1 K,   G' = K' R^-1 K,
//   E' = H R^-1 E + Q gamma,   D' = K' R^-1 E,
//   phi' = 1/2 Lambda' R^-1 Lambda - 1/2 gamma' Q gamma,  Lambda = K nu + E,
// with H = 0, K = I, G = 0, E = 0, D = 0 and phi = -end' nu at t_end. The
// first pass fixes nu from the initial data; the second adds phi.
// Throws NumericalError on blowup or a singular G(t_start).
template <typename Scalar>
TrackingGains<Scalar> solve_gains(const TrackingProblem<Scalar>& problem,
                                  int steps) {
  problem.validate();
  if (steps < 2) throw PreconditionError("gain sweep needs >= 2 steps");
  if (!problem.reference) throw PreconditionError("tracking reference missing");
  const Matrix2<Scalar> r_inv = problem.R.inverse();
  const Matrix2<Scalar>& Q = problem.Q;
  const Scalar t0 = problem.t_start;
  const Scalar tf = problem.t_end;
  const Scalar h = (tf - t0) / steps;

  auto sweep = [&](const Vector2<Scalar>& nu, bool with_phi) {
    // d/ds of the state in reversed time s = tf - t.
    auto rhs = [&](Scalar s, const detail::SweepState<Scalar>& x) {
      const auto g = detail::unpack(x);
      const Vector2<Scalar> gamma = problem.reference(tf - s);
      GainSample<Scalar> d;
      d.H = g.H * r_inv * g.H - Q;
      d.K = g.H * r_inv * g.K;
      d.G = g.K.transpose() * r_inv * g.K;
      d.E = g.H * r_inv * g.E + Q * gamma;
      d.D = g.K.transpose() * r_inv * g.E;
      if (with_phi) {
        const Vector2<Scalar> lam = g.K * nu + g.E;
        d.phi = Scalar(0.5) * lam.dot(r_inv * lam) -
                Scalar(0.5) * gamma.dot(Q * gamma);
      } else {
        d.phi = 0;
      }
      return detail::SweepState<Scalar>(-detail::pack(d));
    };
    std::vector<GainSample<Scalar>> samples(static_cast<std::size_t>(steps) + 1);
    GainSample<Scalar> terminal;
    terminal.phi = with_phi ? -problem.end.dot(nu) : Scalar(0);
    detail::SweepState<Scalar> x = detail::pack(terminal);
    samples[steps] = terminal;
    for (int k = steps; k > 0; --k) {
      const Scalar s = (steps - k) * h;
      x = rk4_step<Scalar>(rhs, s, x, h);
      if (!detail::finite(x)) {
        throw NumericalError("gain sweep blew up at t = " +
                             std::to_string(static_cast<double>(tf - s - h)));
      }
      samples[k - 1] = detail::unpack(x);
    }
    return samples;
  };

  auto first = sweep(Vector2<Scalar>::Zero(), false);
  const auto& g0 = first.front();
  const Scalar scale = (tf - t0) * r_inv.norm();
  const Matrix2<Scalar> g_inv =
      detail::checked_inverse<Scalar>(g0.G, scale, "solve_gains");
  const Vector2<Scalar> nu =
      g_inv * (problem.end - g0.K.transpose() * problem.start - g0.D);
  return TrackingGains<Scalar>(problem, sweep(nu, true), nu);
}

// u = -R^-1 (H x + K nu + E) with nu frozen from the initial data.
template <typename Scalar>
Vector2<Scalar> control_open_loop(const TrackingGains<Scalar>& gains,
                                  const Vector2<Scalar>& x, Scalar t) {
  const auto s = gains.at(t);
  return -gains.r_inverse() * (s.H * x + s.K * gains.lambda_end() + s.E);
}

// u = -R^-1 [(H - K G^-1 K') x + K G^-1 (end - D) + E].
// Throws NumericalError where G(t) is singular (at and near t_end).
template <typename Scalar>
Vector2<Scalar> control_closed_loop(const TrackingGains<Scalar>& gains,
                                    const Vector2<Scalar>& x, Scalar t,
                                    const Vector2<Scalar>& end) {
  const auto s = gains.at(t);
  const Scalar scale = gains.step() * gains.r_inverse().norm();
  const Matrix2<Scalar> g_inv =
      detail::checked_inverse<Scalar>(s.G, scale, "control_closed_loop");
  const Matrix2<Scalar> kg = s.K * g_inv;
  return -gains.r_inverse() *
         ((s.H - kg * s.K.transpose()) * x + kg * (end - s.D) + s.E);
}

// V(x, t) = 1/2 x' H x + x' Lambda + phi for the frozen multiplier; satisfies
// the Hamilton-Jacobi-Bellman equation of the sweep and V(end, t_end) = 0.
template <typename Scalar>
Scalar value_function(const TrackingGains<Scalar>& gains,
                      const Vector2<Scalar>& x, Scalar t) {
  const auto s = gains.at(t);
  return Scalar(0.5) * x.dot(s.H * x) +
         x.dot(s.K * gains.lambda_end() + s.E) + s.phi;
}

// Optimal cost from the problem's start state:
//   x' (1/2 H - K G^-1 K') x + x' (K G^-1 (end - D) + E) + phi  at t_start.
template <typename Scalar>
Scalar optimal_cost(const TrackingGains<Scalar>& gains,
                    const Vector2<Scalar>& start) {
  const auto& s = gains.samples().front();
  const auto& p = gains.problem();
  const Scalar scale = (p.t_end - p.t_start) * gains.r_inverse().norm();
  const Matrix2<Scalar> g_inv =
      detail::checked_inverse<Scalar>(s.G, scale, "optimal_cost");
  const Matrix2<Scalar> kg = s.K * g_inv;
  return start.dot((Scalar(0.5) * s.H - kg * s.K.transpose()) * start) +
         start.dot(kg * (p.end - s.D) + s.E) + s.phi;
}

// Unicycle actuation (forward speed, turn rate) for a planar velocity
// command u at heading theta.
template <typename Scalar>
std::pair<Scalar, Scalar> unicycle_map(const Vector2<Scalar>& u, Scalar theta,
                                       Scalar kappa) {
  using std::cos;
  using std::sin;
  const Vector2<Scalar> forward(cos(theta), sin(theta));
  const Vector2<Scalar> left(-sin(theta), cos(theta));
  const Scalar n = u.norm();
  const Scalar nu = forward.dot(u);
  const Scalar omega = n > 1 ? kappa * left.dot(u) / n : kappa * left.dot(u);
  return {nu, omega};
}

}  // namespace braidmix

#endif  // BRAIDMIX_TRACKING_HPP_
