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

// Synthetic gesture populations with known parameters.
//
// Each user gets a profile: a Gaussian mean and standard deviation for every
// unitary feature, and for every series feature a half-sine mean curve
//   mu(j) = A sin(pi (j + 0.5) / L),  j < L,   0 beyond,
// perturbed as  x(j) = mu(j) (1 + a z0) + b A z(j)  with one shared z0 per
// sample and independent z(j). The summed series then has mean A S and
// variance a^2 (A S)^2 + L b^2 A^2, where S = sum_j sin(pi (j + 0.5) / L).
// User means are spread around per-gesture base values by `separation`
// within-user standard deviations.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "glance/dataset.hpp"
#include "glance/error.hpp"
#include "glance/features.hpp"
#include "glance/rng.hpp"

namespace glance {

struct SeriesProfile {
  double amplitude = 0.0;
  std::size_t length = 1;  // active grid points
  double shared_sd = 0.0;  // relative sd of the whole-curve scale factor
  double point_sd = 0.0;   // per-point sd relative to the amplitude

  double shape_sum() const {
    double s = 0.0;
    for (std::size_t j = 0; j < length; ++j)
      s += std::sin(std::numbers::pi * (double(j) + 0.5) / double(length));
    return s;
  }
  std::vector<double> mean_curve(std::size_t m) const {
    std::vector<double> mu(m, 0.0);
    for (std::size_t j = 0; j < length && j < m; ++j)
      mu[j] = amplitude * std::sin(std::numbers::pi * (double(j) + 0.5) / double(length));
    return mu;
  }
  double sum_mean() const { return amplitude * shape_sum(); }
  double sum_variance() const {
    double s = sum_mean();
    return shared_sd * shared_sd * s * s + double(length) * point_sd * point_sd * amplitude * amplitude;
  }
};

struct GestureProfile {
  std::vector<double> unitary_mean;
  std::vector<double> unitary_sd;
  std::vector<SeriesProfile> series;
};

struct UserProfile {
  std::string user_id;
  std::array<GestureProfile, 4> gestures;
  std::vector<double> drift_sign;  // +-1 per gesture, direction of day-to-day drift
};

enum class SynthLayout {
  kRandom,  // user means drawn N(base, (separation * sd)^2)
  kGrid,    // user means equally spaced, separation * sd apart, on every feature
};

struct SynthConfig {
  std::size_t users = 10;
  std::array<std::size_t, 4> samples = {80, 80, 45, 40};  // per user, per day, T F B D
  std::uint64_t seed = 1;
  double separation = 1.5;
  double noise = 1.0;
  SynthLayout layout = SynthLayout::kRandom;
  bool identical = false;  // every user shares user 0's profile
  bool bimodal = false;    // unitary draws from a two-component mixture
  std::vector<int> days;   // empty: unlabeled
  double drift = 0.0;      // per-day mean shift, in within-user sd
  FeatureConfig features;
};

namespace detail {

struct BaseFeature {
  double mean;
  double sd;
};

struct BaseGesture {
  std::vector<BaseFeature> unitary;
  std::vector<double> series_amplitude;
};

inline const BaseGesture& base_gesture(GestureType g) {
  // Values in touchpad units, seconds and radians, sized after a 1366 x 187 pad.
  static const std::array<BaseGesture, 4> kBase = {{
      {{{683, 60}, {93, 15}, {0.10, 0.02}}, {200}},
      {{{350, 60}, {100, 15}, {850, 60}, {95, 15}, {1.55, 0.08}, {0.18, 0.03}, {500, 50}},
       {180, 3000}},
      {{{850, 60}, {95, 15}, {350, 60}, {100, 15}, {-1.55, 0.08}, {0.18, 0.03}, {500, 50}},
       {180, 3000}},
      {{{683, 60}, {160, 10}, {690, 60}, {30, 10}, {2.9, 0.08}, {0.14, 0.03}, {130, 15}},
       {190, 1500}},
  }};
  return kBase[index_of(g)];
}

inline constexpr double kSharedSd = 0.15;
inline constexpr double kPointSd = 0.05;

inline double spread(const SynthConfig& cfg, std::size_t user, Rng& rng) {
  if (cfg.layout == SynthLayout::kGrid) {
    return (double(user) - (double(cfg.users) - 1.0) / 2.0) * cfg.separation;
  }
  return cfg.separation * rng.normal();
}

inline UserProfile make_profile(const SynthConfig& cfg, std::size_t user, Rng& rng) {
  UserProfile p;
  p.user_id = "u" + std::to_string(user);
  const std::size_t m = cfg.features.resample.length();
  for (auto g : kAllGestures) {
    const auto& base = base_gesture(g);
    auto& gp = p.gestures[index_of(g)];
    for (const auto& f : base.unitary) {
      gp.unitary_sd.push_back(f.sd * cfg.noise);
      gp.unitary_mean.push_back(f.mean + f.sd * spread(cfg, user, rng));
    }
    // Active length follows this user's mean duration (last unitary is dt for
    // taps, second to last for swipes).
    double dt = g == GestureType::kTap ? gp.unitary_mean[2] : gp.unitary_mean[5];
    std::size_t len = std::size_t(std::llround(std::max(dt, 0.0) / cfg.features.resample.t_int)) + 1;
    len = std::clamp<std::size_t>(len, 2, m);
    for (double amp : base.series_amplitude) {
      SeriesProfile sp{amp, len, kSharedSd * cfg.noise, kPointSd * cfg.noise};
      // Spread amplitudes in units of the summed series' relative sd at
      // unit noise, so separation means the same thing for every feature.
      SeriesProfile unit{amp, len, kSharedSd, kPointSd};
      double rel = std::sqrt(unit.sum_variance()) / unit.sum_mean();
      sp.amplitude = std::max(amp * (1.0 + rel * spread(cfg, user, rng)), 0.05 * amp);
      gp.series.push_back(sp);
    }
    p.drift_sign.push_back(rng.bernoulli(0.5) ? 1.0 : -1.0);
  }
  return p;
}

inline FeatureSet draw_sample(const SynthConfig& cfg, const UserProfile& p, GestureType g,
                              int day, std::size_t day_index, Rng& rng) {
  const auto& gp = p.gestures[index_of(g)];
  const std::size_t m = cfg.features.resample.length();
  const double shift = cfg.drift * double(day_index) * p.drift_sign[index_of(g)];
  FeatureSet f;
  f.type = g;
  f.day = day;
  for (std::size_t u = 0; u < gp.unitary_mean.size(); ++u) {
    double mean = gp.unitary_mean[u] + shift * gp.unitary_sd[u];
    double sd = gp.unitary_sd[u];
    if (cfg.bimodal) {
      // Two modes at +-0.8 sd with sd 0.6 keep the overall mean and variance.
      double mode = rng.bernoulli(0.5) ? 0.8 : -0.8;
      f.unitary.push_back(mean + sd * (mode + 0.6 * rng.normal()));
    } else {
      f.unitary.push_back(mean + sd * rng.normal());
    }
  }
  for (const auto& sp : gp.series) {
    SeriesProfile shifted = sp;
    shifted.amplitude *= 1.0 + shift * kSharedSd;
    auto mu = shifted.mean_curve(m);
    double scale = 1.0 + sp.shared_sd * rng.normal();
    std::vector<double> v(m, 0.0);
    for (std::size_t j = 0; j < sp.length && j < m; ++j) {
      v[j] = mu[j] * scale + sp.point_sd * shifted.amplitude * rng.normal();
    }
    f.series.push_back(std::move(v));
  }
  return f;
}

}  // namespace detail

inline nlohmann::json profile_to_json(const UserProfile& p) {
  nlohmann::json j;
  j["user_id"] = p.user_id;
  for (auto g : kAllGestures) {
    const auto& gp = p.gestures[index_of(g)];
    nlohmann::json jg;
    for (std::size_t u = 0; u < gp.unitary_mean.size(); ++u) {
      jg["unitary"][std::string(unitary_names(g)[u])] = {{"mean", gp.unitary_mean[u]},
                                                         {"sd", gp.unitary_sd[u]}};
    }
    for (std::size_t s = 0; s < gp.series.size(); ++s) {
      const auto& sp = gp.series[s];
      jg["series"][std::string(series_names(g)[s])] = {{"amplitude", sp.amplitude},
                                                        {"length", sp.length},
                                                        {"shared_sd", sp.shared_sd},
                                                        {"point_sd", sp.point_sd}};
    }
    jg["drift_sign"] = p.drift_sign[index_of(g)];
    j["gestures"][std::string(1, gesture_letter(g))] = jg;
  }
  return j;
}

/// Profiles the generator would use for cfg, without drawing samples.
inline std::vector<UserProfile> synth_profiles(const SynthConfig& cfg) {
  if (cfg.users == 0) throw ConfigError("synthetic population needs at least one user");
  if (!(cfg.noise > 0.0)) throw ConfigError("noise scale must be positive");
  std::vector<UserProfile> profiles;
  for (std::size_t u = 0; u < cfg.users; ++u) {
    Rng rng(cfg.seed, 0x70726f66ULL, cfg.identical ? 0 : u);
    auto p = detail::make_profile(cfg, cfg.identical ? 0 : u, rng);
    p.user_id = "u" + std::to_string(u);
    profiles.push_back(std::move(p));
  }
  return profiles;
}

inline Dataset synth_generate(const SynthConfig& cfg) {
  auto profiles = synth_profiles(cfg);
  std::vector<int> days = cfg.days.empty() ? std::vector<int>{0} : cfg.days;
  Dataset d;
  d.features = cfg.features;
  nlohmann::json gen;
  gen["users"] = cfg.users;
  gen["samples"] = {{"T", cfg.samples[0]}, {"F", cfg.samples[1]}, {"B", cfg.samples[2]},
                    {"D", cfg.samples[3]}};
  gen["seed"] = cfg.seed;
  gen["separation"] = cfg.separation;
  gen["noise"] = cfg.noise;
  gen["layout"] = cfg.layout == SynthLayout::kGrid ? "grid" : "random";
  gen["identical"] = cfg.identical;
  gen["bimodal"] = cfg.bimodal;
  gen["days"] = cfg.days;
  gen["drift"] = cfg.drift;
  gen["profiles"] = nlohmann::json::array();
  for (std::size_t u = 0; u < profiles.size(); ++u) {
    const auto& p = profiles[u];
    gen["profiles"].push_back(profile_to_json(p));
    UserData ud{p.user_id, {}};
    Rng rng(cfg.seed, 0x73616d70ULL, u);
    for (std::size_t di = 0; di < days.size(); ++di) {
      for (auto g : kAllGestures) {
        for (std::size_t k = 0; k < cfg.samples[index_of(g)]; ++k) {
          ud.of(g).push_back(detail::draw_sample(cfg, p, g, days[di], di, rng));
        }
      }
    }
    d.users.push_back(std::move(ud));
  }
  d.generator = std::move(gen);
  return d;
}

}  // namespace glance
