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

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "glance/error.hpp"
#include "glance/event_parser.hpp"

namespace glance {

/// Tap, forward swipe, backward swipe, downward swipe.
enum class GestureType : std::uint8_t { kTap = 0, kForward = 1, kBackward = 2, kDown = 3 };

inline constexpr std::array<GestureType, 4> kAllGestures = {
    GestureType::kTap, GestureType::kForward, GestureType::kBackward, GestureType::kDown};

inline constexpr std::size_t index_of(GestureType g) { return static_cast<std::size_t>(g); }

inline constexpr char gesture_letter(GestureType g) {
  constexpr char kLetters[] = {'T', 'F', 'B', 'D'};
  return kLetters[index_of(g)];
}

inline std::optional<GestureType> gesture_from_letter(char c) {
  switch (c) {
    case 'T': case 't': return GestureType::kTap;
    case 'F': case 'f': return GestureType::kForward;
    case 'B': case 'b': return GestureType::kBackward;
    case 'D': case 'd': return GestureType::kDown;
    default: return std::nullopt;
  }
}

inline constexpr bool is_swipe(GestureType g) { return g != GestureType::kTap; }

/// A set of gesture types evaluated together, e.g. T+F.
class Combination {
 public:
  constexpr Combination() = default;

  /// Accepts "TF", "T+F", "tfbd"; letters may come in any order but not repeat.
  static Combination parse(std::string_view text) {
    Combination c;
    if (text.empty()) throw ConfigError("empty gesture combination");
    for (char ch : text) {
      if (ch == '+') continue;
      auto g = gesture_from_letter(ch);
      if (!g) throw ConfigError("bad gesture letter '" + std::string(1, ch) + "' in '" +
                                std::string(text) + "'");
      if (c.contains(*g)) throw ConfigError("repeated gesture in '" + std::string(text) + "'");
      c.insert(*g);
    }
    if (c.empty()) throw ConfigError("empty gesture combination");
    return c;
  }

  constexpr void insert(GestureType g) { bits_ |= static_cast<std::uint8_t>(1u << index_of(g)); }
  constexpr bool contains(GestureType g) const { return (bits_ >> index_of(g)) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }

  /// Member types in T, F, B, D order.
  std::vector<GestureType> types() const {
    std::vector<GestureType> out;
    for (auto g : kAllGestures)
      if (contains(g)) out.push_back(g);
    return out;
  }

  /// Canonical letter string in T, F, B, D order ("TF").
  std::string name() const {
    std::string s;
    for (auto g : types()) s.push_back(gesture_letter(g));
    return s;
  }

  std::uint8_t bits() const { return bits_; }
  friend bool operator==(const Combination&, const Combination&) = default;

 private:
  std::uint8_t bits_ = 0;
};

struct TypingConfig {
  double tap_path_max = 30.0;  // touchpad units
  double down_ratio = 1.0;     // |dy| must exceed this times |dx|
  bool invert_x = false;       // decreasing x is "forward"
};

struct GestureSample {
  RawSample sample;
  GestureType type = GestureType::kTap;
};

/// Types a sample from its coordinate sequence. Returns nullopt for motions
/// outside the four gesture types (upward or purely vertical non-downward).
inline std::optional<GestureType> classify_gesture(const RawSample& s,
                                                   const TypingConfig& cfg = {}) {
  if (s.readings.empty()) return std::nullopt;
  const auto& first = s.readings.front();
  const auto& last = s.readings.back();
  double path = 0.0;
  for (std::size_t i = 1; i < s.readings.size(); ++i) {
    double dx = double(s.readings[i].x) - double(s.readings[i - 1].x);
    double dy = double(s.readings[i].y) - double(s.readings[i - 1].y);
    path += std::hypot(dx, dy);
  }
  if (path < cfg.tap_path_max) return GestureType::kTap;

  double dx = double(last.x) - double(first.x);
  double dy = double(last.y) - double(first.y);
  if (cfg.invert_x) dx = -dx;
  if (std::abs(dy) > cfg.down_ratio * std::abs(dx)) {
    if (dy < 0) return GestureType::kDown;
    return std::nullopt;  // upward
  }
  if (dx > 0) return GestureType::kForward;
  if (dx < 0) return GestureType::kBackward;
  return std::nullopt;
}

inline std::optional<GestureSample> type_sample(RawSample s, const TypingConfig& cfg = {}) {
  auto g = classify_gesture(s, cfg);
  if (!g) return std::nullopt;
  return GestureSample{std::move(s), *g};
}

}  // namespace glance
