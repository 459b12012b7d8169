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
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "glance/error.hpp"
#include "glance/gesture.hpp"

namespace glance {

struct RhoInterval {
  double lo;
  double hi;
  double midpoint() const { return (lo + hi) / 2.0; }
};

/// Block sizes with a published operating interval.
inline constexpr std::array<std::size_t, 7> kRhoTableBlockSizes = {1, 3, 5, 7, 10, 15, 25};

struct RhoTableRow {
  std::string_view combination;
  // One entry per kRhoTableBlockSizes; nullopt where no interval exists.
  std::array<std::optional<RhoInterval>, 7> user_set_1;  // 10 users
  std::array<std::optional<RhoInterval>, 7> user_set_2;  // 20 users
};

/// rho intervals containing the equal-error operating point, measured on a
/// 10-user and a 20-user population with the 0.05-step rho grid.
inline const std::array<RhoTableRow, 7>& rho_table() {
  using I = RhoInterval;
  constexpr std::nullopt_t no = std::nullopt;
  static const std::array<RhoTableRow, 7> kTable = {{
      {"T",
       {I{0.45, 0.5}, I{0.3, 0.35}, I{0.2, 0.25}, I{0.15, 0.2}, I{0.15, 0.2}, I{0.1, 0.15},
        I{0.1, 0.15}},
       {I{0.5, 0.55}, I{0.3, 0.35}, I{0.25, 0.3}, I{0.2, 0.25}, I{0.15, 0.2}, no, no}},
      {"F",
       {I{0.75, 0.8}, I{0.5, 0.55}, I{0.35, 0.4}, I{0.35, 0.4}, I{0.3, 0.35}, I{0.25, 0.3},
        I{0.15, 0.2}},
       {I{0.8, 0.85}, I{0.5, 0.55}, I{0.4, 0.45}, I{0.35, 0.4}, I{0.3, 0.35}, no, no}},
      {"B",
       {I{0.7, 0.75}, I{0.4, 0.45}, I{0.3, 0.35}, I{0.25, 0.3}, I{0.2, 0.25}, no, no},
       {I{0.8, 0.85}, I{0.45, 0.5}, I{0.35, 0.4}, I{0.3, 0.35}, I{0.25, 0.3}, no, no}},
      {"D",
       {I{0.5, 0.55}, I{0.3, 0.35}, I{0.2, 0.25}, I{0.15, 0.2}, I{0.15, 0.2}, no, no},
       {I{0.45, 0.5}, I{0.3, 0.35}, I{0.2, 0.25}, I{0.15, 0.2}, I{0.15, 0.2}, no, no}},
      {"TF",
       {I{0.8, 0.85}, I{0.5, 0.55}, I{0.4, 0.45}, I{0.35, 0.4}, I{0.25, 0.3}, I{0.2, 0.25},
        I{0.15, 0.2}},
       {I{0.8, 0.85}, I{0.5, 0.55}, I{0.45, 0.5}, I{0.35, 0.4}, I{0.3, 0.35}, no, no}},
      {"TFB",
       {I{0.8, 0.85}, I{0.5, 0.55}, I{0.4, 0.45}, I{0.35, 0.4}, I{0.3, 0.35}, no, no},
       {I{0.85, 0.9}, I{0.55, 0.6}, I{0.45, 0.5}, I{0.35, 0.4}, I{0.35, 0.4}, no, no}},
      {"TFBD",
       {I{0.75, 0.8}, I{0.5, 0.55}, I{0.4, 0.45}, I{0.3, 0.35}, I{0.25, 0.3}, no, no},
       {I{0.8, 0.85}, I{0.5, 0.55}, I{0.4, 0.45}, I{0.35, 0.4}, I{0.3, 0.35}, no, no}},
  }};
  return kTable;
}

inline std::optional<RhoInterval> rho_interval(const Combination& combo, std::size_t n,
                                               int user_set = 1) {
  const std::string name = combo.name();
  for (const auto& row : rho_table()) {
    if (row.combination != name) continue;
    for (std::size_t i = 0; i < kRhoTableBlockSizes.size(); ++i) {
      if (kRhoTableBlockSizes[i] == n) return user_set == 2 ? row.user_set_2[i] : row.user_set_1[i];
    }
  }
  return std::nullopt;
}

/// Default rho for a combination and block size: midpoint of the 10-user
/// interval.
inline double lookup_rho(const Combination& combo, std::size_t n) {
  auto iv = rho_interval(combo, n, 1);
  if (!iv) {
    throw ConfigError("no tabulated rho for combination " + combo.name() + " at n = " +
                      std::to_string(n) + "; pass rho explicitly");
  }
  return iv->midpoint();
}

}  // namespace glance
