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
#include <cmath>
#include <span>
#include <vector>

#include "glance/error.hpp"

namespace glance {

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double rho = 0.0;

  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

/// Average error rate, (1 - TPR + FPR) / 2.
inline double compute_aer(double tpr, double fpr) { return 0.5 * (1.0 - tpr + fpr); }

struct EerResult {
  double eer = 0.0;
  bool extrapolated = false;
};

/// Equal error rate: where the ROC polyline (sorted by FPR) meets
/// TPR = 1 - FPR, linearly interpolated between the bracketing points. With
/// no bracketing segment, or a single point, the point closest to that line
/// is used and its average error rate reported, flagged as extrapolated.
inline EerResult compute_eer(std::span<const RocPoint> roc) {
  if (roc.empty()) throw Error("cannot compute EER of an empty ROC");
  std::vector<RocPoint> pts(roc.begin(), roc.end());
  std::sort(pts.begin(), pts.end(), [](const RocPoint& a, const RocPoint& b) {
    return a.fpr != b.fpr ? a.fpr < b.fpr : a.tpr < b.tpr;
  });
  auto gap = [](const RocPoint& p) { return 1.0 - p.tpr - p.fpr; };

  if (pts.size() >= 2) {
    for (const auto& p : pts) {
      if (gap(p) == 0.0) return {p.fpr, false};
    }
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      double ga = gap(pts[i]);
      double gb = gap(pts[i + 1]);
      if ((ga > 0.0) != (gb > 0.0)) {
        double t = ga / (ga - gb);
        return {pts[i].fpr + t * (pts[i + 1].fpr - pts[i].fpr), false};
      }
    }
  }
  const RocPoint* best = &pts.front();
  for (const auto& p : pts) {
    if (std::abs(gap(p)) < std::abs(gap(*best))) best = &p;
  }
  return {compute_aer(best->tpr, best->fpr), true};
}

}  // namespace glance
