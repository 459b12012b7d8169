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

// Chebyshev block classifier.
//
// For a feature X with mean mu and variance s2, the mean of n i.i.d. draws
// deviates from mu by tau or more with probability at most s2 / (n tau^2).
// Fixing that bound at rho gives tau = s / sqrt(n rho); a test block is
// accepted on the feature iff its mean lies strictly within tau of mu.
//
// A series feature is reduced to a scalar by summing its m grid values. The
// sum has mean sum_j mu(j) and variance equal to the grand sum of the m x m
// covariance matrix, and the same test applies to the block mean of the sums.
//
// The overall decision is a vote: accept iff at least ceil(eps * m) of the m
// per-feature tests accept.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "glance/error.hpp"
#include "glance/features.hpp"
#include "glance/gesture.hpp"

namespace glance {

inline constexpr double kDefaultEpsilon = 2.0 / 3.0;

struct UnitaryStat {
  double mean = 0.0;
  double var = 0.0;
  std::size_t count = 0;

  friend bool operator==(const UnitaryStat&, const UnitaryStat&) = default;
};

/// Per-index means and the full sample covariance of a fixed-length series.
struct SeriesStat {
  std::vector<double> means;
  std::vector<double> cov;  // row-major, dim() x dim()
  std::size_t count = 0;

  std::size_t dim() const { return means.size(); }
  double at(std::size_t j, std::size_t k) const { return cov[j * means.size() + k]; }

  /// Mean of the summed series.
  double sum_mean() const {
    double s = 0.0;
    for (double v : means) s += v;
    return s;
  }

  /// Variance of the summed series: grand sum of the covariance matrix.
  double sum_variance() const {
    double s = 0.0;
    double mag = 0.0;
    for (double v : cov) {
      s += v;
      mag += std::abs(v);
    }
    if (s < 0.0) {
      if (s < -1e-9 * mag) throw ModelError("series covariance has a negative grand sum");
      s = 0.0;
    }
    return s;
  }

  friend bool operator==(const SeriesStat&, const SeriesStat&) = default;
};

namespace detail {

inline const FeatureSet& deref(const FeatureSet& f) { return f; }
inline const FeatureSet& deref(const FeatureSet* f) { return *f; }

/// Sample mean with a fixed left-to-right summation order; every mean in this
/// file goes through here so that the scalar and the 1-point-series paths
/// agree bit for bit.
template <class Get>
double mean_by(std::size_t n, Get get) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += get(i);
  return s / static_cast<double>(n);
}

template <class Get>
UnitaryStat fit_unitary_by(std::size_t n, Get get) {
  if (n < 2) throw TrainingError("need at least 2 training values, got " + std::to_string(n));
  UnitaryStat st;
  st.count = n;
  st.mean = mean_by(n, get);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = get(i) - st.mean;
    ss += d * d;
  }
  st.var = ss / static_cast<double>(n - 1);
  return st;
}

// get(i) returns the i-th training vector.
template <class Get>
SeriesStat fit_series_by(std::size_t n, Get get) {
  if (n < 2) throw TrainingError("need at least 2 training series, got " + std::to_string(n));
  const std::size_t m = get(0).size();
  for (std::size_t i = 1; i < n; ++i) {
    if (get(i).size() != m) throw TrainingError("training series differ in length");
  }
  SeriesStat st;
  st.count = n;
  st.means.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    st.means[j] = mean_by(n, [&](std::size_t i) { return get(i)[j]; });
  }
  st.cov.assign(m * m, 0.0);
  std::vector<double> d(m);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& v = get(i);
    for (std::size_t j = 0; j < m; ++j) d[j] = v[j] - st.means[j];
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = j; k < m; ++k) st.cov[j * m + k] += d[j] * d[k];
    }
  }
  const double denom = static_cast<double>(n - 1);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = j; k < m; ++k) {
      st.cov[j * m + k] /= denom;
      st.cov[k * m + j] = st.cov[j * m + k];
    }
  }
  return st;
}

inline double series_sum(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace detail

/// Training mean and unbiased sample variance.
inline UnitaryStat fit_unitary(std::span<const double> values) {
  return detail::fit_unitary_by(values.size(), [&](std::size_t i) { return values[i]; });
}

inline SeriesStat fit_series(std::span<const std::vector<double>> samples) {
  return detail::fit_series_by(samples.size(),
                               [&](std::size_t i) -> const std::vector<double>& {
                                 return samples[i];
                               });
}

/// tau = sigma / sqrt(n rho).
inline double chebyshev_threshold(double variance, std::size_t n, double rho) {
  return std::sqrt(variance) / std::sqrt(static_cast<double>(n) * rho);
}

/// One feature's block statistic: how far the block mean lies from the
/// training mean, and the training variance it is judged against.
struct FeatureScore {
  double deviation = 0.0;
  double variance = 0.0;
  std::size_t n = 1;

  bool accepts(double rho) const { return deviation < chebyshev_threshold(variance, n, rho); }
};

inline FeatureScore score_unitary(const UnitaryStat& stat, std::span<const double> test) {
  if (test.empty()) throw InputError("empty test block");
  double m = detail::mean_by(test.size(), [&](std::size_t i) { return test[i]; });
  return {std::abs(m - stat.mean), stat.var, test.size()};
}

inline bool f_unitary(const UnitaryStat& stat, std::span<const double> test, double rho) {
  return score_unitary(stat, test).accepts(rho);
}

inline FeatureScore score_series(const SeriesStat& stat,
                                 std::span<const std::vector<double>> test) {
  if (test.empty()) throw InputError("empty test block");
  for (const auto& v : test) {
    if (v.size() != stat.dim()) throw InputError("test series length does not match the model");
  }
  double m = detail::mean_by(test.size(), [&](std::size_t i) { return detail::series_sum(test[i]); });
  return {std::abs(m - stat.sum_mean()), stat.sum_variance(), test.size()};
}

inline bool f_series(const SeriesStat& stat, std::span<const std::vector<double>> test,
                     double rho) {
  return score_series(stat, test).accepts(rho);
}

/// Number of per-feature accepts needed out of m: ceil(eps * m).
inline std::size_t decision_boundary(std::size_t m, double epsilon = kDefaultEpsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in (0, 1]");
  // eps * m is inexact for eps = 2/3; a value a hair above an integer must
  // not round up to the next one.
  double b = std::ceil(epsilon * static_cast<double>(m) - 1e-9);
  return b < 1.0 ? std::size_t{1} : static_cast<std::size_t>(b);
}

inline bool g_vote(std::span<const std::uint8_t> decisions, double epsilon = kDefaultEpsilon) {
  if (decisions.empty()) throw InputError("no feature decisions to vote on");
  std::size_t ones = 0;
  for (auto d : decisions) ones += d ? 1 : 0;
  return ones >= decision_boundary(decisions.size(), epsilon);
}

/// Statistics of every feature of one gesture type, in unitary_names /
/// series_names order.
struct GestureModel {
  std::vector<UnitaryStat> unitary;
  std::vector<SeriesStat> series;

  friend bool operator==(const GestureModel&, const GestureModel&) = default;
};

struct UserModel {
  std::string user_id;
  FeatureConfig features;
  std::array<std::optional<GestureModel>, 4> gestures;

  const std::optional<GestureModel>& at(GestureType g) const { return gestures[index_of(g)]; }
  std::optional<GestureModel>& at(GestureType g) { return gestures[index_of(g)]; }

  Combination trained() const {
    Combination c;
    for (auto g : kAllGestures)
      if (at(g)) c.insert(g);
    return c;
  }

  friend bool operator==(const UserModel& a, const UserModel& b) {
    return a.user_id == b.user_id && a.features.resample == b.features.resample &&
           a.features.area == b.features.area && a.gestures == b.gestures;
  }
};

/// Fits one gesture type from FeatureSets (or pointers to them).
template <class Elem>
GestureModel fit_gesture(GestureType g, std::span<const Elem> samples) {
  using detail::deref;
  const std::size_t n = samples.size();
  for (const auto& s : samples) {
    const FeatureSet& f = deref(s);
    if (f.type != g) throw TrainingError("training sample of the wrong gesture type");
    if (f.unitary.size() != unitary_names(g).size() || f.series.size() != series_names(g).size()) {
      throw TrainingError("training sample has the wrong feature shape");
    }
  }
  GestureModel model;
  for (std::size_t u = 0; u < unitary_names(g).size(); ++u) {
    model.unitary.push_back(
        detail::fit_unitary_by(n, [&](std::size_t i) { return deref(samples[i]).unitary[u]; }));
  }
  for (std::size_t s = 0; s < series_names(g).size(); ++s) {
    model.series.push_back(detail::fit_series_by(
        n, [&](std::size_t i) -> const std::vector<double>& { return deref(samples[i]).series[s]; }));
  }
  return model;
}

template <class Elem>
GestureModel fit_gesture(GestureType g, const std::vector<Elem>& samples) {
  return fit_gesture(g, std::span<const Elem>(samples));
}

/// Names of features whose training variance is exactly zero. Such features
/// get tau = 0 and reject every block.
inline std::vector<std::string> constant_features(const UserModel& model) {
  std::vector<std::string> out;
  for (auto g : kAllGestures) {
    const auto& gm = model.at(g);
    if (!gm) continue;
    std::string prefix(1, gesture_letter(g));
    for (std::size_t u = 0; u < gm->unitary.size(); ++u)
      if (gm->unitary[u].var == 0.0) out.push_back(prefix + "." + std::string(unitary_names(g)[u]));
    for (std::size_t s = 0; s < gm->series.size(); ++s)
      if (gm->series[s].sum_variance() == 0.0)
        out.push_back(prefix + "." + std::string(series_names(g)[s]));
  }
  return out;
}

struct DecisionConfig {
  double rho = 0.3;
  double epsilon = kDefaultEpsilon;
  std::size_t n = 1;

  void validate() const {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw ConfigError("rho must be positive");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in (0, 1]");
    if (n < 1) throw ConfigError("block size n must be at least 1");
  }
};

/// Scores every feature of every gesture in `combo`, in feature_labels order.
/// `block[g]` holds the n test samples of gesture g (FeatureSets or pointers).
template <class Elem>
std::vector<FeatureScore> score_block(const UserModel& model, const Combination& combo,
                                      const std::array<std::vector<Elem>, 4>& block,
                                      std::size_t n) {
  using detail::deref;
  std::vector<FeatureScore> scores;
  std::vector<double> values;
  for (auto g : combo.types()) {
    const auto& gm = model.at(g);
    if (!gm) {
      throw InputError(std::string("model has no statistics for gesture ") + gesture_letter(g));
    }
    const auto& tests = block[index_of(g)];
    if (tests.size() != n) {
      throw InputError(std::string("block for gesture ") + gesture_letter(g) + " holds " +
                       std::to_string(tests.size()) + " samples, expected " + std::to_string(n));
    }
    for (const auto& t : tests) {
      const FeatureSet& f = deref(t);
      if (f.type != g || f.unitary.size() != gm->unitary.size() ||
          f.series.size() != gm->series.size()) {
        throw InputError(std::string("malformed test sample for gesture ") + gesture_letter(g));
      }
    }
    for (const auto& slot : feature_layout(g)) {
      if (slot.kind == FeatureKind::kUnitary) {
        values.clear();
        for (const auto& t : tests) values.push_back(deref(t).unitary[slot.index]);
        scores.push_back(score_unitary(gm->unitary[slot.index], values));
      } else {
        const auto& st = gm->series[slot.index];
        for (const auto& t : tests) {
          if (deref(t).series[slot.index].size() != st.dim()) {
            throw InputError("test series length does not match the model");
          }
        }
        double mean = detail::mean_by(n, [&](std::size_t i) {
          return detail::series_sum(deref(tests[i]).series[slot.index]);
        });
        scores.push_back({std::abs(mean - st.sum_mean()), st.sum_variance(), n});
      }
    }
  }
  return scores;
}

struct BlockDecision {
  bool accepted = false;
  std::vector<std::uint8_t> bits;  // one per feature, feature_labels order
  std::size_t accepted_count = 0;
  std::size_t boundary = 0;
};

inline BlockDecision decide(std::span<const FeatureScore> scores, double rho, double epsilon) {
  BlockDecision d;
  d.bits.reserve(scores.size());
  for (const auto& s : scores) {
    bool ok = s.accepts(rho);
    d.bits.push_back(ok ? 1 : 0);
    d.accepted_count += ok ? 1 : 0;
  }
  d.boundary = decision_boundary(scores.size(), epsilon);
  d.accepted = d.accepted_count >= d.boundary;
  return d;
}

template <class Elem>
BlockDecision classify_block(const UserModel& model, const Combination& combo,
                             const std::array<std::vector<Elem>, 4>& block,
                             const DecisionConfig& cfg) {
  cfg.validate();
  auto scores = score_block(model, combo, block, cfg.n);
  return decide(scores, cfg.rho, cfg.epsilon);
}

}  // namespace glance
