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

// Randomized evaluation of the block classifier.
//
// A genuine trial picks a random target user, trains on a random subset of
// that user's samples and tests an n-block drawn from the held-out rest. An
// impostor trial trains the same way and tests an n-block drawn from a random
// other user. Trial i always uses random stream (seed, kind, i), so a run is
// reproducible for any thread count, and the per-feature scores of one trial
// can be judged at every rho of a sweep without redrawing.

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "glance/classifier.hpp"
#include "glance/dataset.hpp"
#include "glance/error.hpp"
#include "glance/log.hpp"
#include "glance/metrics.hpp"
#include "glance/rho_table.hpp"
#include "glance/rng.hpp"

namespace glance {

struct TrialConfig {
  std::size_t trials = 500;
  std::size_t n = 10;
  Combination combination = Combination::parse("TF");
  std::array<std::size_t, 4> training_sizes = {50, 50, 25, 10};
  std::optional<double> rho;  // nullopt: tabulated default for (combination, n)
  double epsilon = kDefaultEpsilon;
  std::uint64_t seed = 0;
  std::size_t threads = 1;  // 0: hardware concurrency
  bool exclude_insufficient = false;
};

inline double resolve_rho(const std::optional<double>& rho, const Combination& combo,
                          std::size_t n) {
  return rho ? *rho : lookup_rho(combo, n);
}

/// rho = 1.00, 0.95, ..., 0.10.
inline std::vector<double> rho_grid() {
  std::vector<double> out;
  for (int k = 0; k <= 18; ++k) out.push_back(double(100 - 5 * k) / 100.0);
  return out;
}

/// Runs fn(0..count-1) on up to `threads` workers; results keep index order.
template <class Fn>
auto run_parallel(std::size_t count, std::size_t threads, Fn fn) {
  using R = decltype(fn(std::size_t{0}));
  std::vector<R> out(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!err) err = std::current_exception();
        next.store(count);
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
  return out;
}

namespace detail {

inline constexpr std::uint64_t kGenuineStream = 0x67656e75ULL;
inline constexpr std::uint64_t kImpostorStream = 0x696d706fULL;
inline constexpr std::uint64_t kEvolutionStream = 0x65766f6cULL;

/// Users that can serve as both target and attacker; throws, or drops
/// offenders when `exclude` is set.
inline std::vector<const UserData*> eligible_users(const Dataset& data, const Combination& combo,
                                                   const std::array<std::size_t, 4>& needed,
                                                   bool exclude) {
  std::vector<const UserData*> ok;
  std::string offenders;
  for (const auto& u : data.users) {
    bool good = true;
    for (auto g : combo.types()) {
      std::size_t have = u.of(g).size();
      if (have < needed[index_of(g)]) {
        good = false;
        offenders += "\n  user " + u.user_id + ": " + gesture_letter(g) + " has " +
                     std::to_string(have) + " samples, needs " +
                     std::to_string(needed[index_of(g)]);
      }
    }
    if (good) ok.push_back(&u);
  }
  if (!offenders.empty()) {
    if (!exclude) throw ConfigError("insufficient samples:" + offenders);
    log::warn("excluding users with insufficient samples:" + offenders);
  }
  return ok;
}

inline void validate(const TrialConfig& cfg) {
  if (cfg.trials < 1) throw ConfigError("trials must be at least 1");
  if (cfg.n < 1) throw ConfigError("block size n must be at least 1");
  if (cfg.combination.empty()) throw ConfigError("empty gesture combination");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon <= 1.0)) throw ConfigError("epsilon must lie in (0, 1]");
  if (cfg.rho && !(*cfg.rho > 0.0)) throw ConfigError("rho must be positive");
  for (auto g : cfg.combination.types()) {
    if (cfg.training_sizes[index_of(g)] < 2) {
      throw ConfigError(std::string("training size for ") + gesture_letter(g) +
                        " must be at least 2");
    }
  }
}

using PtrBlock = std::array<std::vector<const FeatureSet*>, 4>;

inline std::vector<FeatureScore> genuine_trial(const std::vector<const UserData*>& users,
                                               const TrialConfig& cfg, std::size_t i) {
  Rng rng(cfg.seed, kGenuineStream, i);
  const UserData& target = *users[rng.index(users.size())];
  UserModel model;
  model.user_id = target.user_id;
  PtrBlock block;
  for (auto g : cfg.combination.types()) {
    const auto& pool = target.of(g);
    std::size_t k = cfg.training_sizes[index_of(g)];
    auto idx = sample_indices(rng, pool.size(), k + cfg.n);
    std::vector<const FeatureSet*> train;
    for (std::size_t j = 0; j < k; ++j) train.push_back(&pool[idx[j]]);
    for (std::size_t j = k; j < idx.size(); ++j) block[index_of(g)].push_back(&pool[idx[j]]);
    model.at(g) = fit_gesture(g, train);
  }
  return score_block(model, cfg.combination, block, cfg.n);
}

inline std::vector<FeatureScore> impostor_trial(const std::vector<const UserData*>& users,
                                                const TrialConfig& cfg, std::size_t i) {
  Rng rng(cfg.seed, kImpostorStream, i);
  std::size_t t = rng.index(users.size());
  std::size_t a = rng.index(users.size() - 1);
  if (a >= t) ++a;
  const UserData& target = *users[t];
  const UserData& attacker = *users[a];
  UserModel model;
  model.user_id = target.user_id;
  PtrBlock block;
  for (auto g : cfg.combination.types()) {
    const auto& pool = target.of(g);
    std::size_t k = cfg.training_sizes[index_of(g)];
    auto idx = sample_indices(rng, pool.size(), k);
    std::vector<const FeatureSet*> train;
    for (auto j : idx) train.push_back(&pool[j]);
    model.at(g) = fit_gesture(g, train);
    const auto& apool = attacker.of(g);
    for (auto j : sample_indices(rng, apool.size(), cfg.n)) block[index_of(g)].push_back(&apool[j]);
  }
  return score_block(model, cfg.combination, block, cfg.n);
}

struct Tally {
  std::size_t accepted = 0;
  std::vector<std::size_t> per_feature;
};

inline Tally tally(const std::vector<std::vector<FeatureScore>>& trials, double rho,
                   double epsilon) {
  Tally t;
  for (const auto& scores : trials) {
    auto d = decide(scores, rho, epsilon);
    if (t.per_feature.empty()) t.per_feature.assign(d.bits.size(), 0);
    for (std::size_t f = 0; f < d.bits.size(); ++f) t.per_feature[f] += d.bits[f];
    t.accepted += d.accepted ? 1 : 0;
  }
  return t;
}

inline std::array<std::size_t, 4> needed_for_trials(const TrialConfig& cfg) {
  std::array<std::size_t, 4> need{};
  for (auto g : cfg.combination.types()) need[index_of(g)] = cfg.training_sizes[index_of(g)] + cfg.n;
  return need;
}

}  // namespace detail

/// Per-feature block scores of every genuine trial.
inline std::vector<std::vector<FeatureScore>> genuine_scores(const Dataset& data,
                                                             const TrialConfig& cfg) {
  detail::validate(cfg);
  auto users = detail::eligible_users(data, cfg.combination, detail::needed_for_trials(cfg),
                                      cfg.exclude_insufficient);
  if (users.empty()) throw ConfigError("no user has enough samples");
  return run_parallel(cfg.trials, cfg.threads,
                      [&](std::size_t i) { return detail::genuine_trial(users, cfg, i); });
}

inline std::vector<std::vector<FeatureScore>> impostor_scores(const Dataset& data,
                                                              const TrialConfig& cfg) {
  detail::validate(cfg);
  auto users = detail::eligible_users(data, cfg.combination, detail::needed_for_trials(cfg),
                                      cfg.exclude_insufficient);
  if (users.size() < 2) throw ConfigError("impostor trials need at least 2 users");
  return run_parallel(cfg.trials, cfg.threads,
                      [&](std::size_t i) { return detail::impostor_trial(users, cfg, i); });
}

struct RateResult {
  double rate = 0.0;
  std::size_t accepted = 0;
  std::size_t trials = 0;
  std::vector<std::size_t> feature_frequency;  // feature_labels order
};

inline RateResult run_tpr_trials(const Dataset& data, const TrialConfig& cfg) {
  double rho = resolve_rho(cfg.rho, cfg.combination, cfg.n);
  auto t = detail::tally(genuine_scores(data, cfg), rho, cfg.epsilon);
  return {double(t.accepted) / double(cfg.trials), t.accepted, cfg.trials, t.per_feature};
}

inline RateResult run_fpr_trials(const Dataset& data, const TrialConfig& cfg) {
  double rho = resolve_rho(cfg.rho, cfg.combination, cfg.n);
  auto t = detail::tally(impostor_scores(data, cfg), rho, cfg.epsilon);
  return {double(t.accepted) / double(cfg.trials), t.accepted, cfg.trials, t.per_feature};
}

struct TrialReport {
  std::string combination;
  std::size_t n = 0;
  std::size_t trials = 0;
  std::size_t users = 0;
  double epsilon = kDefaultEpsilon;
  std::uint64_t seed = 0;
  std::array<std::size_t, 4> training_sizes{};
  std::vector<std::string> features;

  double rho = 0.0;  // operating point
  double tpr = 0.0;
  double fpr = 0.0;
  double aer = 0.0;
  std::vector<RocPoint> roc;  // rho descending
  std::optional<EerResult> eer;
  std::vector<std::size_t> tp_frequency;
  std::vector<std::size_t> fp_frequency;
};

namespace detail {

/// Builds a report from the trial scores judged at each of `rhos`. The
/// operating point is the single rho, or for a sweep the ROC point closest to
/// TPR = 1 - FPR.
inline TrialReport make_report(const TrialConfig& cfg, std::size_t users,
                               const std::vector<std::vector<FeatureScore>>& genuine,
                               const std::vector<std::vector<FeatureScore>>& impostor,
                               const std::vector<double>& rhos) {
  TrialReport r;
  r.combination = cfg.combination.name();
  r.n = cfg.n;
  r.trials = cfg.trials;
  r.users = users;
  r.epsilon = cfg.epsilon;
  r.seed = cfg.seed;
  r.training_sizes = cfg.training_sizes;
  r.features = feature_labels(cfg.combination);
  std::vector<Tally> tp, fp;
  for (double rho : rhos) {
    tp.push_back(tally(genuine, rho, cfg.epsilon));
    fp.push_back(tally(impostor, rho, cfg.epsilon));
    r.roc.push_back({double(fp.back().accepted) / double(cfg.trials),
                     double(tp.back().accepted) / double(cfg.trials), rho});
  }
  std::size_t op = 0;
  for (std::size_t k = 1; k < r.roc.size(); ++k) {
    auto gap = [&](std::size_t q) { return std::abs(1.0 - r.roc[q].tpr - r.roc[q].fpr); };
    if (gap(k) < gap(op)) op = k;
  }
  if (r.roc.size() >= 2) r.eer = compute_eer(r.roc);
  r.rho = r.roc[op].rho;
  r.tpr = r.roc[op].tpr;
  r.fpr = r.roc[op].fpr;
  r.aer = compute_aer(r.tpr, r.fpr);
  r.tp_frequency = tp[op].per_feature;
  r.fp_frequency = fp[op].per_feature;
  return r;
}

inline std::size_t count_eligible(const Dataset& data, const TrialConfig& cfg) {
  return eligible_users(data, cfg.combination, needed_for_trials(cfg), true).size();
}

}  // namespace detail

/// TPR, FPR, AER and feature frequencies at one rho.
inline TrialReport evaluate(const Dataset& data, const TrialConfig& cfg) {
  double rho = resolve_rho(cfg.rho, cfg.combination, cfg.n);
  auto genuine = genuine_scores(data, cfg);
  auto impostor = impostor_scores(data, cfg);
  return detail::make_report(cfg, detail::count_eligible(data, cfg), genuine, impostor, {rho});
}

/// ROC over rho = 1.00 .. 0.10 and the interpolated EER.
inline TrialReport roc_sweep(const Dataset& data, const TrialConfig& cfg) {
  auto genuine = genuine_scores(data, cfg);
  auto impostor = impostor_scores(data, cfg);
  return detail::make_report(cfg, detail::count_eligible(data, cfg), genuine, impostor,
                             rho_grid());
}

// ---------------------------------------------------------------------------
// Behaviour over time.

enum class Scenario { kSameDay, kFirstDay, kAdaptive };

inline const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::kSameDay: return "same_day";
    case Scenario::kFirstDay: return "first_day";
    default: return "adaptive";
  }
}

inline Scenario parse_scenario(const std::string& s) {
  if (s == "same_day" || s == "same-day") return Scenario::kSameDay;
  if (s == "first_day" || s == "first-day") return Scenario::kFirstDay;
  if (s == "adaptive") return Scenario::kAdaptive;
  throw ConfigError("unknown scenario '" + s + "'");
}

struct EvolutionConfig {
  Scenario scenario = Scenario::kAdaptive;
  std::size_t training_size = 20;  // per gesture type
  std::size_t replace_per_day = 4;
  std::size_t n = 1;
  Combination combination = Combination::parse("TFBD");
  std::optional<double> rho;  // nullopt: sweep the rho grid each day
  double epsilon = kDefaultEpsilon;
  std::size_t trials = 500;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

/// Where one day's training samples came from: source day -> count, per
/// gesture type.
struct DayProvenance {
  int day = 0;
  std::array<std::map<int, std::size_t>, 4> sources;
};

struct DayResult {
  int day = 0;
  std::vector<RocPoint> roc;
  std::optional<EerResult> eer;
  double rho = 0.0;
  double tpr = 0.0;
  double fpr = 0.0;
  double aer = 0.0;
};

struct EvolutionReport {
  Scenario scenario = Scenario::kAdaptive;
  std::string combination;
  std::size_t n = 0;
  std::size_t training_size = 0;
  std::size_t replace_per_day = 0;
  std::size_t trials = 0;
  std::size_t users = 0;
  std::uint64_t seed = 0;
  std::vector<DayResult> days;
  std::vector<DayProvenance> provenance;  // training composition of trial 0
};

namespace detail {

struct EvolutionTrial {
  std::vector<std::vector<FeatureScore>> genuine;   // per day
  std::vector<std::vector<FeatureScore>> impostor;  // per day
  std::vector<DayProvenance> provenance;
};

struct TrainEntry {
  int day;
  const FeatureSet* sample;
};

inline EvolutionTrial evolution_trial(const Dataset& data, const std::vector<int>& days,
                                      const EvolutionConfig& cfg, std::size_t i) {
  Rng rng(cfg.seed, kEvolutionStream, i);
  const std::size_t nu = data.users.size();
  std::size_t t = rng.index(nu);
  std::size_t a = rng.index(nu - 1);
  if (a >= t) ++a;
  const UserData& target = data.users[t];
  const UserData& attacker = data.users[a];
  const auto types = cfg.combination.types();

  auto by_day = [&](const UserData& u, GestureType g) {
    std::map<int, std::vector<const FeatureSet*>> pools;
    for (const auto& f : u.of(g)) pools[f.day].push_back(&f);
    return pools;
  };
  std::array<std::map<int, std::vector<const FeatureSet*>>, 4> tpools, apools;
  for (auto g : types) {
    tpools[index_of(g)] = by_day(target, g);
    apools[index_of(g)] = by_day(attacker, g);
  }

  EvolutionTrial out;
  std::array<std::vector<TrainEntry>, 4> training;
  const std::size_t k = cfg.training_size;
  for (std::size_t di = 0; di < days.size(); ++di) {
    const int day = days[di];
    UserModel model;
    model.user_id = target.user_id;
    PtrBlock genuine, impostor;
    DayProvenance prov{day, {}};
    for (auto g : types) {
      const auto& pool = tpools[index_of(g)][day];
      auto& train = training[index_of(g)];
      auto& gblock = genuine[index_of(g)];
      bool fresh_model = di == 0 || cfg.scenario == Scenario::kSameDay;
      if (fresh_model) {
        auto idx = sample_indices(rng, pool.size(), k + cfg.n);
        train.clear();
        for (std::size_t j = 0; j < k; ++j) train.push_back({day, pool[idx[j]]});
        for (std::size_t j = k; j < idx.size(); ++j) gblock.push_back(pool[idx[j]]);
      } else if (cfg.scenario == Scenario::kFirstDay) {
        for (auto j : sample_indices(rng, pool.size(), cfg.n)) gblock.push_back(pool[j]);
      } else {
        // Adaptive: swap replace_per_day of the oldest training samples for
        // fresh ones from today; the rest of today's samples form the test pool.
        const std::size_t r = cfg.replace_per_day;
        auto idx = sample_indices(rng, pool.size(), r + cfg.n);
        for (std::size_t j = 0; j < r; ++j) {
          int oldest = train.front().day;
          for (const auto& e : train) oldest = std::min(oldest, e.day);
          std::vector<std::size_t> slots;
          for (std::size_t s = 0; s < train.size(); ++s)
            if (train[s].day == oldest) slots.push_back(s);
          train[slots[rng.index(slots.size())]] = {day, pool[idx[j]]};
        }
        for (std::size_t j = r; j < idx.size(); ++j) gblock.push_back(pool[idx[j]]);
      }
      std::vector<const FeatureSet*> samples;
      for (const auto& e : train) {
        samples.push_back(e.sample);
        ++prov.sources[index_of(g)][e.day];
      }
      model.at(g) = fit_gesture(g, samples);
      const auto& apool = apools[index_of(g)][day];
      for (auto j : sample_indices(rng, apool.size(), cfg.n)) impostor[index_of(g)].push_back(apool[j]);
    }
    out.genuine.push_back(score_block(model, cfg.combination, genuine, cfg.n));
    out.impostor.push_back(score_block(model, cfg.combination, impostor, cfg.n));
    out.provenance.push_back(std::move(prov));
  }
  return out;
}

}  // namespace detail

/// Per-day error rates of a target trained under `cfg.scenario`. Every
/// sample must carry a day label; every user needs training_size + n samples
/// of each gesture on each day.
inline EvolutionReport run_evolution(const Dataset& data, const EvolutionConfig& cfg) {
  if (cfg.trials < 1) throw ConfigError("trials must be at least 1");
  if (cfg.n < 1) throw ConfigError("block size n must be at least 1");
  if (cfg.training_size < 2) throw ConfigError("training size must be at least 2");
  if (cfg.replace_per_day > cfg.training_size) {
    throw ConfigError("cannot replace more samples per day than the training set holds");
  }
  if (cfg.rho && !(*cfg.rho > 0.0)) throw ConfigError("rho must be positive");
  if (data.users.size() < 2) throw ConfigError("evolution trials need at least 2 users");
  auto days = data.days();
  if (days.empty() || days.front() <= 0) {
    throw ConfigError("missing day label: every sample needs a positive day");
  }
  std::string offenders;
  for (const auto& u : data.users) {
    for (auto g : cfg.combination.types()) {
      for (int d : days) {
        std::size_t have = 0;
        for (const auto& f : u.of(g)) have += f.day == d ? 1 : 0;
        if (have < cfg.training_size + cfg.n) {
          offenders += "\n  user " + u.user_id + ", day " + std::to_string(d) + ": " +
                       gesture_letter(g) + " has " + std::to_string(have) + " samples";
        }
      }
    }
  }
  if (!offenders.empty()) throw ConfigError("insufficient samples per day:" + offenders);

  auto trials = run_parallel(cfg.trials, cfg.threads, [&](std::size_t i) {
    return detail::evolution_trial(data, days, cfg, i);
  });

  EvolutionReport rep;
  rep.scenario = cfg.scenario;
  rep.combination = cfg.combination.name();
  rep.n = cfg.n;
  rep.training_size = cfg.training_size;
  rep.replace_per_day = cfg.replace_per_day;
  rep.trials = cfg.trials;
  rep.users = data.users.size();
  rep.seed = cfg.seed;
  rep.provenance = trials.front().provenance;

  TrialConfig tc;
  tc.combination = cfg.combination;
  tc.n = cfg.n;
  tc.trials = cfg.trials;
  tc.epsilon = cfg.epsilon;
  const std::vector<double> rhos = cfg.rho ? std::vector<double>{*cfg.rho} : rho_grid();
  for (std::size_t di = 0; di < days.size(); ++di) {
    std::vector<std::vector<FeatureScore>> gen, imp;
    for (const auto& tr : trials) {
      gen.push_back(tr.genuine[di]);
      imp.push_back(tr.impostor[di]);
    }
    auto r = detail::make_report(tc, rep.users, gen, imp, rhos);
    rep.days.push_back({days[di], r.roc, r.eer, r.rho, r.tpr, r.fpr, r.aer});
  }
  return rep;
}

}  // namespace glance
