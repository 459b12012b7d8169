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

#include <algorithm>
#include <array>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "glance/features.hpp"
#include "glance/gesture.hpp"

namespace glance {

struct UserData {
  std::string user_id;
  std::array<std::vector<FeatureSet>, 4> gestures;

  const std::vector<FeatureSet>& of(GestureType g) const { return gestures[index_of(g)]; }
  std::vector<FeatureSet>& of(GestureType g) { return gestures[index_of(g)]; }
};

/// Extracted features of a population, grouped by user and gesture type.
struct Dataset {
  FeatureConfig features;
  std::vector<UserData> users;
  nlohmann::json generator;  // synthetic-generator parameters, null for real data

  const UserData* find(const std::string& user_id) const {
    for (const auto& u : users)
      if (u.user_id == user_id) return &u;
    return nullptr;
  }

  /// Sorted distinct day labels over all samples.
  std::vector<int> days() const {
    std::set<int> s;
    for (const auto& u : users)
      for (const auto& list : u.gestures)
        for (const auto& f : list) s.insert(f.day);
    return {s.begin(), s.end()};
  }
};

/// First k users in dataset order; k = 0 keeps everyone.
inline Dataset first_users(const Dataset& d, std::size_t k) {
  Dataset out = d;
  if (k != 0 && k < out.users.size()) out.users.resize(k);
  return out;
}

/// Adds a FeatureSet under its user, creating the user on first sight.
inline void add_sample(Dataset& d, const std::string& user_id, FeatureSet f) {
  auto it = std::find_if(d.users.begin(), d.users.end(),
                         [&](const UserData& u) { return u.user_id == user_id; });
  if (it == d.users.end()) {
    d.users.push_back(UserData{user_id, {}});
    it = std::prev(d.users.end());
  }
  it->of(f.type).push_back(std::move(f));
}

}  // namespace glance
