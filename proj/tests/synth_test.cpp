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

#include "glance/synth.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "glance/classifier.hpp"
#include "glance/model_store.hpp"

namespace glance {
namespace {

TEST(Synth, SameSeedSameBytes) {
  SynthConfig c;
  c.users = 4;
  c.seed = 99;
  auto a = dataset_to_json(synth_generate(c)).dump();
  auto b = dataset_to_json(synth_generate(c)).dump();
  EXPECT_EQ(a, b);
  c.seed = 100;
  EXPECT_NE(dataset_to_json(synth_generate(c)).dump(), a);
}

TEST(Synth, ShapesAndCounts) {
  SynthConfig c;
  c.users = 3;
  c.samples = {5, 6, 7, 8};
  c.days = {1, 2};
  auto d = synth_generate(c);
  ASSERT_EQ(d.users.size(), 3u);
  EXPECT_EQ(d.days(), (std::vector<int>{1, 2}));
  for (const auto& u : d.users) {
    for (auto g : kAllGestures) {
      ASSERT_EQ(u.of(g).size(), 2 * c.samples[index_of(g)]);
      for (const auto& f : u.of(g)) {
        EXPECT_EQ(f.type, g);
        EXPECT_EQ(f.unitary.size(), unitary_names(g).size());
        ASSERT_EQ(f.series.size(), series_names(g).size());
        for (const auto& s : f.series) EXPECT_EQ(s.size(), 30u);
      }
    }
  }
  EXPECT_EQ(d.generator["profiles"].size(), 3u);
}

TEST(Synth, IdenticalUsersShareAProfile) {
  SynthConfig c;
  c.users = 3;
  c.identical = true;
  auto p = synth_profiles(c);
  EXPECT_EQ(profile_to_json(p[0])["gestures"], profile_to_json(p[2])["gestures"]);
  auto d = synth_generate(c);
  EXPECT_NE(d.users[0].of(GestureType::kTap)[0], d.users[1].of(GestureType::kTap)[0]);
}

TEST(Synth, GridLayoutSpacesUsersEvenly) {
  SynthConfig c;
  c.users = 2;
  c.layout = SynthLayout::kGrid;
  c.separation = 6;
  auto p = synth_profiles(c);
  for (auto g : kAllGestures) {
    const auto& a = p[0].gestures[index_of(g)];
    const auto& b = p[1].gestures[index_of(g)];
    for (std::size_t u = 0; u < a.unitary_mean.size(); ++u) {
      EXPECT_NEAR(std::abs(b.unitary_mean[u] - a.unitary_mean[u]), 6 * a.unitary_sd[u], 1e-9);
    }
  }
}

// The drawn samples must match the recorded profile: sample moments of each
// unitary feature and of each summed series agree with the analytic values.
TEST(Synth, SampleMomentsMatchProfile) {
  for (bool bimodal : {false, true}) {
    SynthConfig c;
    c.users = 2;
    c.samples = {4000, 4000, 4000, 4000};
    c.bimodal = bimodal;
    auto d = synth_generate(c);
    auto profiles = synth_profiles(c);
    for (std::size_t u = 0; u < 2; ++u) {
      for (auto g : kAllGestures) {
        const auto& gp = profiles[u].gestures[index_of(g)];
        auto model = fit_gesture(g, d.users[u].of(g));
        const double n = 4000;
        for (std::size_t i = 0; i < gp.unitary_mean.size(); ++i) {
          double sd = gp.unitary_sd[i];
          EXPECT_NEAR(model.unitary[i].mean, gp.unitary_mean[i], 4 * sd / std::sqrt(n));
          EXPECT_NEAR(std::sqrt(model.unitary[i].var), sd, 0.05 * sd);
        }
        for (std::size_t s = 0; s < gp.series.size(); ++s) {
          const auto& sp = gp.series[s];
          double sd = std::sqrt(sp.sum_variance());
          EXPECT_NEAR(model.series[s].sum_mean(), sp.sum_mean(), 4 * sd / std::sqrt(n));
          EXPECT_NEAR(std::sqrt(model.series[s].sum_variance()), sd, 0.05 * sd);
        }
      }
    }
  }
}

TEST(Synth, DriftMovesLaterDays) {
  SynthConfig c;
  c.users = 1;
  c.samples = {2000, 10, 10, 10};
  c.days = {1, 2};
  c.drift = 1.0;
  auto d = synth_generate(c);
  const auto& taps = d.users[0].of(GestureType::kTap);
  std::vector<FeatureSet> day1(taps.begin(), taps.begin() + 2000);
  std::vector<FeatureSet> day2(taps.begin() + 2000, taps.end());
  auto m1 = fit_gesture(GestureType::kTap, day1);
  auto m2 = fit_gesture(GestureType::kTap, day2);
  double sd = std::sqrt(m1.unitary[0].var);
  EXPECT_NEAR(std::abs(m2.unitary[0].mean - m1.unitary[0].mean), sd, 0.15 * sd);
}

TEST(Synth, RejectsBadConfig) {
  SynthConfig c;
  c.users = 0;
  EXPECT_THROW(synth_generate(c), ConfigError);
  c.users = 1;
  c.noise = 0;
  EXPECT_THROW(synth_generate(c), ConfigError);
}

}  // namespace
}  // namespace glance
