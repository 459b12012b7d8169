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

#include "glance/gesture.hpp"

#include <gtest/gtest.h>

#include "glance/rng.hpp"

namespace glance {
namespace {

RawSample path(std::initializer_list<std::pair<std::uint32_t, std::uint32_t>> pts) {
  RawSample s;
  double t = 0.0;
  for (auto [x, y] : pts) {
    Reading r;
    r.timestamp = t;
    r.x = x;
    r.y = y;
    s.readings.push_back(r);
    t += 0.012;
  }
  return s;
}

TEST(ClassifyGesture, SingleReadingIsTap) {
  EXPECT_EQ(classify_gesture(path({{849, 102}})), GestureType::kTap);
}

TEST(ClassifyGesture, RightwardIsForward) {
  EXPECT_EQ(classify_gesture(path({{100, 100}, {500, 110}})), GestureType::kForward);
}

TEST(ClassifyGesture, DecreasingYIsDown) {
  EXPECT_EQ(classify_gesture(path({{300, 150}, {310, 20}})), GestureType::kDown);
}

TEST(ClassifyGesture, LeftwardIsBackward) {
  EXPECT_EQ(classify_gesture(path({{500, 110}, {100, 100}})), GestureType::kBackward);
}

TEST(ClassifyGesture, UpwardIsUntyped) {
  EXPECT_EQ(classify_gesture(path({{300, 20}, {310, 150}})), std::nullopt);
}

TEST(ClassifyGesture, ClosedLoopWithoutNetMotionIsUntyped) {
  EXPECT_EQ(classify_gesture(path({{300, 100}, {400, 100}, {300, 100}})), std::nullopt);
}

TEST(ClassifyGesture, EmptySampleIsUntyped) { EXPECT_EQ(classify_gesture(RawSample{}), std::nullopt); }

TEST(ClassifyGesture, TapThresholdIsOnPathLength) {
  // Net motion 0 but path 40: not a tap at the default threshold.
  auto s = path({{100, 100}, {120, 100}, {100, 100}});
  EXPECT_EQ(classify_gesture(s), std::nullopt);
  EXPECT_EQ(classify_gesture(s, {50.0, 1.0, false}), GestureType::kTap);
  // Path exactly at the threshold is not a tap.
  EXPECT_NE(classify_gesture(path({{100, 100}, {130, 100}})), GestureType::kTap);
  EXPECT_EQ(classify_gesture(path({{100, 100}, {129, 100}})), GestureType::kTap);
}

TEST(ClassifyGesture, DownRatioIsStrict) {
  auto s = path({{100, 150}, {150, 100}});  // |dy| == |dx|
  EXPECT_EQ(classify_gesture(s), GestureType::kForward);
  EXPECT_EQ(classify_gesture(s, {30.0, 0.9, false}), GestureType::kDown);
}

TEST(ClassifyGesture, InvertXSwapsForwardAndBackward) {
  auto s = path({{100, 100}, {500, 110}});
  EXPECT_EQ(classify_gesture(s, {30.0, 1.0, true}), GestureType::kBackward);
}

TEST(ClassifyGesture, MirroringXSwapsForwardAndBackward) {
  Rng rng(3);
  int swipes = 0;
  for (int i = 0; i < 2000; ++i) {
    RawSample s;
    std::size_t n = 1 + rng.index(8);
    for (std::size_t k = 0; k < n; ++k) {
      Reading r;
      r.timestamp = 0.012 * double(k);
      r.x = std::uint32_t(rng.index(1367));
      r.y = std::uint32_t(rng.index(188));
      s.readings.push_back(r);
    }
    RawSample m = s;
    for (auto& r : m.readings) r.x = 1366 - r.x;
    auto a = classify_gesture(s);
    auto b = classify_gesture(m);
    if (a == GestureType::kForward) {
      EXPECT_EQ(b, GestureType::kBackward);
      ++swipes;
    } else if (a == GestureType::kBackward) {
      EXPECT_EQ(b, GestureType::kForward);
      ++swipes;
    } else {
      EXPECT_EQ(a, b);
    }
  }
  EXPECT_GT(swipes, 100);
}

TEST(ClassifyGesture, IgnoresNonCoordinateFields) {
  auto s = path({{100, 100}, {500, 110}});
  auto t = s;
  for (auto& r : t.readings) {
    r.pressure = 99;
    r.touch_major = 7;
    r.timestamp *= 3.0;
  }
  EXPECT_EQ(classify_gesture(s), classify_gesture(t));
}

TEST(TypeSample, DropsUntyped) {
  EXPECT_FALSE(type_sample(path({{300, 20}, {310, 150}})));
  auto g = type_sample(path({{849, 102}}));
  ASSERT_TRUE(g);
  EXPECT_EQ(g->type, GestureType::kTap);
  EXPECT_EQ(g->sample.readings.size(), 1u);
}

TEST(Combination, ParsesLetterStrings) {
  EXPECT_EQ(Combination::parse("TF").name(), "TF");
  EXPECT_EQ(Combination::parse("T+F+B+D").name(), "TFBD");
  EXPECT_EQ(Combination::parse("dbft").name(), "TFBD");
  EXPECT_EQ(Combination::parse("D").types(), std::vector<GestureType>{GestureType::kDown});
  EXPECT_THROW(Combination::parse(""), ConfigError);
  EXPECT_THROW(Combination::parse("+"), ConfigError);
  EXPECT_THROW(Combination::parse("TT"), ConfigError);
  EXPECT_THROW(Combination::parse("TX"), ConfigError);
}

}  // namespace
}  // namespace glance
