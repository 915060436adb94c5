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

#include "braidmix/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace braidmix {

void RegionRect::validate() const {
  if (!(height > 0.0) || !(length > 0.0) || !(duration > 0.0)) {
    throw PreconditionError("region height, length and duration must be > 0");
  }
}

double RegionRect::diagonal() const { return std::hypot(height, length); }

WaypointGrid braid_point_grid(int agents, int steps, const RegionRect& region) {
  std::vector<double> times(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) {
    times[i] = region.duration * i / steps;
  }
  if (steps >= 1) times.back() = region.duration;
  return braid_point_grid(agents, steps, region, std::move(times));
}

WaypointGrid braid_point_grid(int agents, int steps, const RegionRect& region,
                              std::vector<double> times) {
  if (agents < 2) throw PreconditionError("braid point grid needs N >= 2");
  if (steps < 1) throw PreconditionError("braid point grid needs M >= 1");
  region.validate();
  if (times.size() != static_cast<std::size_t>(steps) + 1) {
    throw PreconditionError("time partition must have M + 1 entries");
  }
  if (times.front() != 0.0 || times.back() != region.duration) {
    throw PreconditionError("time partition must start at 0 and end at T");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw PreconditionError("time partition must be strictly increasing");
    }
  }

  WaypointGrid grid;
  grid.agents = agents;
  grid.steps = steps;
  grid.region = region;
  grid.times = std::move(times);
  grid.braid_points.reserve(static_cast<std::size_t>(steps) + 1);
  for (int q = 0; q <= steps; ++q) {
    Eigen::Matrix2Xd column(2, agents);
    for (int r = 0; r < agents; ++r) {
      column(0, r) = q * region.length / steps;
      column(1, r) = r * region.height / (agents - 1);
    }
    grid.braid_points.push_back(std::move(column));
  }
  return grid;
}

WaypointGrid waypoints(WaypointGrid grid, const std::vector<BraidStep>& steps) {
  if (static_cast<int>(steps.size()) != grid.steps) {
    throw PreconditionError("expected " + std::to_string(grid.steps) +
                            " braid steps, got " +
                            std::to_string(steps.size()));
  }
  Permutation rows(grid.agents);
  grid.rows.assign(1, rows.image());
  for (const auto& step : steps) {
    for (const auto& g : step.generators) {
      if (g.index >= grid.agents) {
        throw PreconditionError("generator " + to_string(g) +
                                " out of range for " +
                                std::to_string(grid.agents) + " agents");
      }
      if (!g.is_identity()) rows.swap_rows(g.index - 1);
    }
    grid.rows.push_back(rows.image());
  }
  return grid;
}

std::string to_string(StrandKind kind) {
  switch (kind) {
    case StrandKind::kStraight:
      return "straight";
    case StrandKind::kCityBlock:
      return "city-block";
    case StrandKind::kCustom:
      return "custom";
  }
  return "unknown";
}

StrandKind strand_kind_from_string(const std::string& name) {
  if (name == "straight") return StrandKind::kStraight;
  if (name == "city-block") return StrandKind::kCityBlock;
  if (name == "custom") return StrandKind::kCustom;
  throw ParseError("unknown strand kind '" + name + "'");
}

namespace {

// Corners of the city-block polyline from a to b.
std::vector<Vec2> city_block_corners(const Vec2& a, const Vec2& b) {
  const double mid = 0.5 * (a.x() + b.x());
  return {a, Vec2(mid, a.y()), Vec2(mid, b.y()), b};
}

// Point and unit direction at arclength s along a polyline.
std::pair<Vec2, Vec2> walk_polyline(const std::vector<Vec2>& pts, double s) {
  Vec2 dir = Vec2::Zero();
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const Vec2 seg = pts[i] - pts[i - 1];
    const double len = seg.norm();
    if (len == 0.0) continue;
    dir = seg / len;
    if (s <= len || i + 1 == pts.size()) {
      return {pts[i - 1] + std::clamp(s, 0.0, len) * dir, dir};
    }
    s -= len;
  }
  return {pts.back(), dir};
}

}  // namespace

StrandPath StrandPath::straight(const Vec2& a, const Vec2& b) {
  StrandPath path;
  path.kind_ = StrandKind::kStraight;
  path.a_ = a;
  path.b_ = b;
  path.length_ = (b - a).norm();
  return path;
}

StrandPath StrandPath::city_block(const Vec2& a, const Vec2& b) {
  StrandPath path;
  path.kind_ = StrandKind::kCityBlock;
  path.a_ = a;
  path.b_ = b;
  path.length_ = std::abs(b.x() - a.x()) + std::abs(b.y() - a.y());
  return path;
}

StrandPath StrandPath::custom(Curve position, Curve velocity, int table_steps) {
  if (table_steps < 1) throw PreconditionError("arclength table needs >= 1 step");
  StrandPath path;
  path.kind_ = StrandKind::kCustom;
  path.position_ = std::move(position);
  path.velocity_ = std::move(velocity);
  path.a_ = path.position_(0.0);
  path.b_ = path.position_(1.0);
  auto table = std::make_shared<std::vector<double>>(
      static_cast<std::size_t>(table_steps) + 1, 0.0);
  const double h = 1.0 / table_steps;
  for (int k = 0; k < table_steps; ++k) {
    const double speed = path.velocity_((k + 0.5) * h).norm();
    if (!std::isfinite(speed)) {
      throw NumericalError("non-finite strand derivative");
    }
    (*table)[k + 1] = (*table)[k] + speed * h;
  }
  path.length_ = table->back();
  path.table_ = std::move(table);
  return path;
}

Vec2 StrandPath::position(double p) const {
  switch (kind_) {
    case StrandKind::kStraight:
      return (1.0 - p) * a_ + p * b_;
    case StrandKind::kCityBlock:
      return walk_polyline(city_block_corners(a_, b_), p * length_).first;
    case StrandKind::kCustom:
      return position_(p);
  }
  return a_;
}

Vec2 StrandPath::velocity(double p) const {
  switch (kind_) {
    case StrandKind::kStraight:
      return b_ - a_;
    case StrandKind::kCityBlock:
      return length_ * walk_polyline(city_block_corners(a_, b_), p * length_).second;
    case StrandKind::kCustom:
      return velocity_(p);
  }
  return Vec2::Zero();
}

double StrandPath::parameter_at_fraction(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  if (kind_ != StrandKind::kCustom || length_ == 0.0) return u;
  const auto& table = *table_;
  const double target = u * length_;
  auto it = std::upper_bound(table.begin(), table.end(), target);
  if (it == table.end()) return 1.0;
  const auto k = static_cast<std::size_t>(std::distance(table.begin(), it)) - 1;
  const double seg = table[k + 1] - table[k];
  const double frac = seg > 0.0 ? (target - table[k]) / seg : 0.0;
  return (static_cast<double>(k) + frac) / static_cast<double>(table.size() - 1);
}

Vec2 StrandPath::at_fraction(double u) const {
  return position(parameter_at_fraction(u));
}

Vec2 StrandPath::tangent_at_fraction(double u) const {
  const Vec2 v = velocity(parameter_at_fraction(u));
  const double n = v.norm();
  return n > 0.0 ? Vec2(v / n) : Vec2(Vec2::Zero());
}

std::vector<Vec2> StrandPath::polyline(int segments) const {
  if (kind_ == StrandKind::kCityBlock) return city_block_corners(a_, b_);
  if (kind_ == StrandKind::kStraight) return {a_, b_};
  std::vector<Vec2> pts;
  pts.reserve(static_cast<std::size_t>(segments) + 1);
  for (int i = 0; i <= segments; ++i) {
    pts.push_back(at_fraction(static_cast<double>(i) / segments));
  }
  return pts;
}

StrandPath strand_path(const Vec2& a, const Vec2& b, StrandKind kind) {
  switch (kind) {
    case StrandKind::kStraight:
      return StrandPath::straight(a, b);
    case StrandKind::kCityBlock:
      return StrandPath::city_block(a, b);
    case StrandKind::kCustom:
      break;
  }
  throw PreconditionError(
      "custom strands need a parameter map; use StrandPath::custom");
}

double arclength(const StrandPath& path, int steps) {
  if (steps < 1) throw PreconditionError("quadrature needs >= 1 step");
  const double h = 1.0 / steps;
  double sum = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double speed = path.velocity((k + 0.5) * h).norm();
    if (!std::isfinite(speed)) throw NumericalError("non-finite strand derivative");
    sum += speed;
  }
  return sum * h;
}

namespace {

constexpr double kParamEps = 1e-12;

struct SegmentHit {
  double s = 0.0;  // parameter on the first segment
  double t = 0.0;  // parameter on the second segment
};

// Solves a + s*da = b + t*db; nullopt when (near) parallel.
std::optional<SegmentHit> solve_segments(const Vec2& a, const Vec2& da,
                                         const Vec2& b, const Vec2& db) {
  Mat2 A;
  A.col(0) = da;
  A.col(1) = -db;
  const double det = A.determinant();
  if (std::abs(det) <= 1e-12 * da.norm() * db.norm() || det == 0.0) {
    return std::nullopt;
  }
  const Vec2 st = A.inverse() * (b - a);
  return SegmentHit{st(0), st(1)};
}

double angle_between(const Vec2& u, const Vec2& v) {
  return std::acos(std::clamp(u.normalized().dot(v.normalized()), -1.0, 1.0));
}

}  // namespace

std::optional<CrossingInfo> intersection(const StrandPath& path_j,
                                         const StrandPath& path_k) {
  if (path_j.length() == 0.0 || path_k.length() == 0.0) return std::nullopt;

  if (path_j.kind() == StrandKind::kStraight &&
      path_k.kind() == StrandKind::kStraight) {
    const Vec2 dj = path_j.end() - path_j.start();
    const Vec2 dk = path_k.end() - path_k.start();
    const auto hit = solve_segments(path_j.start(), dj, path_k.start(), dk);
    if (!hit) return std::nullopt;
    const auto inside = [](double x) {
      return x > kParamEps && x < 1.0 - kParamEps;
    };
    if (!inside(hit->s) || !inside(hit->t)) return std::nullopt;
    CrossingInfo info;
    info.point = path_j.position(hit->s);
    info.param_j = hit->s;
    info.param_k = hit->t;
    info.angle = angle_between(dj, dk);
    return info;
  }

  const auto pj = path_j.polyline();
  const auto pk = path_k.polyline();
  // Sampled curves may cross exactly on a shared sample; count each segment
  // half-open so such a vertex is seen once. Exact city-block corners keep
  // the strict test.
  const bool sampled = path_j.kind() == StrandKind::kCustom &&
                       path_k.kind() == StrandKind::kCustom;
  const double lo = sampled ? 0.0 : kParamEps;
  double sj = 0.0;
  for (std::size_t a = 1; a < pj.size(); ++a) {
    const Vec2 dj = pj[a] - pj[a - 1];
    const double lj = dj.norm();
    double sk = 0.0;
    for (std::size_t b = 1; b < pk.size(); ++b) {
      const Vec2 dk = pk[b] - pk[b - 1];
      const double lk = dk.norm();
      if (lj > 0.0 && lk > 0.0) {
        const auto hit = solve_segments(pj[a - 1], dj, pk[b - 1], dk);
        if (hit && hit->s >= lo && hit->s < 1.0 - kParamEps && hit->t >= lo &&
            hit->t < 1.0 - kParamEps) {
          CrossingInfo info;
          info.point = pj[a - 1] + hit->s * dj;
          info.param_j = (sj + hit->s * lj) / path_j.length();
          info.param_k = (sk + hit->t * lk) / path_k.length();
          info.angle = angle_between(dj, dk);
          if (info.param_j > kParamEps && info.param_j < 1.0 - kParamEps &&
              info.param_k > kParamEps && info.param_k < 1.0 - kParamEps) {
            return info;
          }
        }
      }
      sk += lk;
    }
    sj += lj;
  }
  return std::nullopt;
}

double safety_margin(const CrossingInfo& cross, double min_sep, StrandKind kind,
                     int agents, double height) {
  if (!(min_sep > 0.0)) throw PreconditionError("safety separation must be > 0");
  switch (kind) {
    case StrandKind::kStraight:
      if (!(cross.angle > 0.0 && cross.angle < M_PI)) {
        throw PreconditionError("straight crossing angle must lie in (0, pi)");
      }
      return min_sep / std::sin(cross.angle);
    case StrandKind::kCityBlock:
      if (agents < 2) throw PreconditionError("city-block margin needs N >= 2");
      return min_sep + height / (2.0 * (agents - 1));
    case StrandKind::kCustom:
      break;
  }
  throw PreconditionError("custom strands need custom_safety_margin");
}

double safety_margin(const StrandPath& path_j, const StrandPath& path_k,
                     const CrossingInfo& cross, double min_sep, int agents,
                     double height) {
  double margin = 0.0;
  if (path_j.kind() == path_k.kind() && path_j.kind() != StrandKind::kCustom) {
    margin = safety_margin(cross, min_sep, path_j.kind(), agents, height);
  } else {
    return custom_safety_margin(path_j, path_k, cross, min_sep);
  }
  if (margin > path_j.length() || margin > path_k.length()) {
    throw PreconditionError("safety region (" + std::to_string(margin) +
                            ") exceeds strand length");
  }
  return margin;
}

namespace {

double distance_to_polyline(const Vec2& p, const std::vector<Vec2>& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const Vec2 d = pts[i] - pts[i - 1];
    const double len2 = d.squaredNorm();
    double t = len2 > 0.0 ? (p - pts[i - 1]).dot(d) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    best = std::min(best, (p - (pts[i - 1] + t * d)).norm());
  }
  return best;
}

}  // namespace

double custom_safety_margin(const StrandPath& path_j, const StrandPath& path_k,
                            const CrossingInfo& cross, double min_sep,
                            int samples) {
  if (!(min_sep > 0.0)) throw PreconditionError("safety separation must be > 0");
  if (samples < 2) throw PreconditionError("margin search needs >= 2 samples");
  const auto pj = path_j.polyline(samples);
  const auto pk = path_k.polyline(samples);

  // Along-path distance from the crossing and clearance to the other strand,
  // for every arclength sample of both strands.
  struct Sample {
    double along;
    double clearance;
  };
  std::vector<Sample> all;
  all.reserve(2 * static_cast<std::size_t>(samples) + 2);
  for (int i = 0; i <= samples; ++i) {
    const double u = static_cast<double>(i) / samples;
    all.push_back({std::abs(u - cross.param_j) * path_j.length(),
                   distance_to_polyline(path_j.at_fraction(u), pk)});
    all.push_back({std::abs(u - cross.param_k) * path_k.length(),
                   distance_to_polyline(path_k.at_fraction(u), pj)});
  }
  const auto safe_outside = [&](double delta) {
    return std::all_of(all.begin(), all.end(), [&](const Sample& s) {
      return s.along < delta || s.clearance >= min_sep;
    });
  };

  const double spacing =
      std::max(path_j.length(), path_k.length()) / samples;
  double hi = 0.0;
  for (const auto& s : all) hi = std::max(hi, s.along);
  hi += spacing;
  if (!safe_outside(hi)) {
    throw PreconditionError("no safety region fits on these strands");
  }
  double lo = 0.0;
  if (safe_outside(lo)) return 0.0;
  while (hi - lo > spacing) {
    const double mid = 0.5 * (lo + hi);
    (safe_outside(mid) ? hi : lo) = mid;
  }
  const double margin = hi + spacing;
  if (margin > path_j.length() || margin > path_k.length()) {
    throw PreconditionError("safety region (" + std::to_string(margin) +
                            ") exceeds strand length");
  }
  return margin;
}

}  // namespace braidmix
