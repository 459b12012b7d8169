// Copyright 2026 The glance-auth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Force-model features of a gesture.
//
// A tap is described by its touch point, its duration and the downward force
// curve Fz(t) = pressure * area. A swipe adds the end point, the angle of the
// start-to-end segment against the y-axis, the segment length and the planar
// force curve Fxy(t), estimated from the speed between adjacent readings.
// Both curves are aligned at t = 0, resampled on a fixed grid and zero-filled
// past the end of the gesture so every sample yields vectors of equal length.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "glance/error.hpp"
#include "glance/gesture.hpp"

namespace glance {

struct ResampleConfig {
  double t_int = 0.01;  // grid spacing, seconds
  double t_off = 0.3;   // cut-off, seconds

  /// Number of grid points, t_off / t_int.
  std::size_t length() const {
    validate();
    return static_cast<std::size_t>(std::llround(t_off / t_int));
  }

  void validate() const {
    if (!(t_int > 0.0) || !(t_off > 0.0) || !std::isfinite(t_int) || !std::isfinite(t_off)) {
      throw FeatureError("t_int and t_off must be positive");
    }
    double ratio = t_off / t_int;
    double m = std::round(ratio);
    if (m < 1.0 || std::abs(ratio - m) > 1e-9 * ratio) {
      throw FeatureError("t_off must be a positive integer multiple of t_int");
    }
  }

  friend bool operator==(const ResampleConfig&, const ResampleConfig&) = default;
};

/// How the contact area in F = P * A is derived from the touch ellipse.
enum class AreaMode { kMajor, kMajorTimesMinor };

struct FeatureConfig {
  ResampleConfig resample;
  AreaMode area = AreaMode::kMajor;
};

enum class FeatureKind { kUnitary, kSeries };

struct FeatureSlot {
  std::string_view name;
  FeatureKind kind;
  std::size_t index;  // into FeatureSet::unitary or FeatureSet::series
};

namespace detail {
inline constexpr FeatureSlot kTapLayout[] = {
    {"x", FeatureKind::kUnitary, 0},
    {"y", FeatureKind::kUnitary, 1},
    {"Fz", FeatureKind::kSeries, 0},
    {"dt", FeatureKind::kUnitary, 2},
};
inline constexpr FeatureSlot kSwipeLayout[] = {
    {"x0", FeatureKind::kUnitary, 0},    {"y0", FeatureKind::kUnitary, 1},
    {"x1", FeatureKind::kUnitary, 2},    {"y1", FeatureKind::kUnitary, 3},
    {"theta", FeatureKind::kUnitary, 4}, {"Fz", FeatureKind::kSeries, 0},
    {"Fxy", FeatureKind::kSeries, 1},    {"dt", FeatureKind::kUnitary, 5},
    {"l", FeatureKind::kUnitary, 6},
};
inline constexpr std::string_view kTapUnitary[] = {"x", "y", "dt"};
inline constexpr std::string_view kSwipeUnitary[] = {"x0", "y0", "x1", "y1", "theta", "dt", "l"};
inline constexpr std::string_view kTapSeries[] = {"Fz"};
inline constexpr std::string_view kSwipeSeries[] = {"Fz", "Fxy"};
}  // namespace detail

/// Features of a gesture type in the canonical order used for decision
/// vectors and frequency reports.
inline std::span<const FeatureSlot> feature_layout(GestureType g) {
  if (g == GestureType::kTap) return detail::kTapLayout;
  return detail::kSwipeLayout;
}

inline std::span<const std::string_view> unitary_names(GestureType g) {
  if (g == GestureType::kTap) return detail::kTapUnitary;
  return detail::kSwipeUnitary;
}

inline std::span<const std::string_view> series_names(GestureType g) {
  if (g == GestureType::kTap) return detail::kTapSeries;
  return detail::kSwipeSeries;
}

/// Number of features a combination votes over (4 per tap, 9 per swipe type).
inline std::size_t feature_count(const Combination& c) {
  std::size_t m = 0;
  for (auto g : c.types()) m += feature_layout(g).size();
  return m;
}

/// "T.x", "F.theta", ... in decision-vector order.
inline std::vector<std::string> feature_labels(const Combination& c) {
  std::vector<std::string> out;
  for (auto g : c.types())
    for (const auto& slot : feature_layout(g))
      out.push_back(std::string(1, gesture_letter(g)) + "." + std::string(slot.name));
  return out;
}

struct FeatureSet {
  GestureType type = GestureType::kTap;
  int day = 0;
  std::vector<double> unitary;             // per unitary_names(type)
  std::vector<std::vector<double>> series;  // per series_names(type), each length m

  friend bool operator==(const FeatureSet&, const FeatureSet&) = default;
};

inline double force_magnitude(double pressure, double area) { return pressure * area; }

struct TimePoint {
  double t;
  double v;
};

/// Aligns the first point at t = 0 and evaluates the piecewise-linear curve at
/// k * t_int for k < m. Grid points after the last reading are 0.
inline std::vector<double> resample_series(std::span<const TimePoint> points,
                                           const ResampleConfig& cfg = {}) {
  if (points.empty()) throw FeatureError("cannot resample an empty series");
  const std::size_t m = cfg.length();
  const double t0 = points.front().t;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].t > points[i - 1].t)) {
      throw FeatureError("series times must be strictly increasing");
    }
  }
  const double duration = points.back().t - t0;
  // Grid times are products k * t_int while point times are differences of
  // absolute timestamps; allow for rounding when comparing the two.
  const double eps = 1e-9 * std::max(1.0, cfg.t_off);

  std::vector<double> out(m, 0.0);
  std::size_t seg = 0;
  for (std::size_t k = 0; k < m; ++k) {
    double t = static_cast<double>(k) * cfg.t_int;
    if (t > duration + eps) break;
    if (t >= duration) {
      out[k] = points.back().v;
      continue;
    }
    while (seg + 1 < points.size() && points[seg + 1].t - t0 <= t) ++seg;
    if (seg + 1 == points.size()) {
      out[k] = points.back().v;
      continue;
    }
    double ta = points[seg].t - t0;
    double tb = points[seg + 1].t - t0;
    double w = (t - ta) / (tb - ta);
    out[k] = points[seg].v + w * (points[seg + 1].v - points[seg].v);
  }
  return out;
}

namespace detail {

inline double area_of(const Reading& r, AreaMode mode) {
  if (mode == AreaMode::kMajorTimesMinor) return double(r.touch_major) * double(r.touch_minor);
  return double(r.touch_major);
}

inline std::vector<double> force_series(const RawSample& s, const FeatureConfig& cfg) {
  std::vector<TimePoint> pts;
  pts.reserve(s.readings.size());
  for (const auto& r : s.readings) {
    pts.push_back({r.timestamp, force_magnitude(double(r.pressure), area_of(r, cfg.area))});
  }
  return resample_series(pts, cfg.resample);
}

}  // namespace detail

inline FeatureSet extract_tap(const GestureSample& g, const FeatureConfig& cfg = {}) {
  if (g.type != GestureType::kTap) throw FeatureError("extract_tap on a non-tap sample");
  const auto& rs = g.sample.readings;
  if (rs.empty()) throw FeatureError("sample has no readings");
  FeatureSet f;
  f.type = GestureType::kTap;
  f.day = g.sample.day;
  f.unitary = {double(rs.front().x), double(rs.front().y),
               rs.back().timestamp - rs.front().timestamp};
  f.series = {detail::force_series(g.sample, cfg)};
  return f;
}

inline FeatureSet extract_swipe(const GestureSample& g, const FeatureConfig& cfg = {}) {
  if (!is_swipe(g.type)) throw FeatureError("extract_swipe on a tap sample");
  const auto& rs = g.sample.readings;
  if (rs.size() < 2) throw FeatureError("a swipe needs at least two readings");

  std::vector<TimePoint> speed;
  speed.reserve(rs.size());
  speed.push_back({rs.front().timestamp, 0.0});
  for (std::size_t i = 1; i < rs.size(); ++i) {
    double dt = rs[i].timestamp - rs[i - 1].timestamp;
    if (!(dt > 0.0)) throw FeatureError("two readings share a timestamp");
    double dist = std::hypot(double(rs[i].x) - double(rs[i - 1].x),
                             double(rs[i].y) - double(rs[i - 1].y));
    speed.push_back({rs[i].timestamp, dist / dt});
  }

  double x0 = rs.front().x, y0 = rs.front().y;
  double x1 = rs.back().x, y1 = rs.back().y;
  FeatureSet f;
  f.type = g.type;
  f.day = g.sample.day;
  f.unitary = {x0, y0, x1, y1, std::atan2(x1 - x0, y1 - y0),
               rs.back().timestamp - rs.front().timestamp, std::hypot(x1 - x0, y1 - y0)};
  f.series = {detail::force_series(g.sample, cfg), resample_series(speed, cfg.resample)};
  return f;
}

inline FeatureSet extract_features(const GestureSample& g, const FeatureConfig& cfg = {}) {
  return g.type == GestureType::kTap ? extract_tap(g, cfg) : extract_swipe(g, cfg);
}

}  // namespace glance
