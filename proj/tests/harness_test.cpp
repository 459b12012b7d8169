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

#include "glance/harness.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "glance/report.hpp"
#include "glance/synth.hpp"

namespace glance {
namespace {

const Dataset& default_data() {
  static const Dataset d = synth_generate(SynthConfig{});
  return d;
}

TrialConfig trials(const char* combo, std::size_t n, std::optional<double> rho,
                   std::size_t count = 500) {
  TrialConfig c;
  c.combination = Combination::parse(combo);
  c.n = n;
  c.rho = rho;
  c.trials = count;
  c.seed = 17;
  return c;
}

double se(double p, std::size_t n) { return std::sqrt(std::max(p * (1 - p), 1e-4) / double(n)); }

TEST(RhoGrid, OneDownToPointOneInFiveHundredths) {
  auto g = rho_grid();
  ASSERT_EQ(g.size(), 19u);
  EXPECT_EQ(g.front(), 1.0);
  EXPECT_EQ(g.back(), 0.1);
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(g[k], 1.0 - 0.05 * double(k), 1e-12);
}

TEST(RunParallel, KeepsIndexOrderAndPropagatesErrors) {
  auto out = run_parallel(100, 4, [](std::size_t i) { return i * i; });
  for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(out[i], i * i);
  EXPECT_THROW(run_parallel(50, 3,
                            [](std::size_t i) -> int {
                              if (i == 31) throw ConfigError("boom");
                              return 0;
                            }),
               ConfigError);
}

TEST(Trials, SingleTrialIsReproducible) {
  auto c = trials("TF", 10, 0.3, 1);
  auto a = run_tpr_trials(default_data(), c);
  auto b = run_tpr_trials(default_data(), c);
  EXPECT_EQ(a.accepted, b.accepted);
  EXPECT_EQ(a.feature_frequency, b.feature_frequency);
}

TEST(Trials, ReportsAreIdenticalAcrossThreadCounts) {
  for (const char* combo : {"T", "TFBD"}) {
    auto c = trials(combo, 5, std::nullopt, 200);
    c.threads = 1;
    auto one = report_to_json(roc_sweep(default_data(), c)).dump();
    c.threads = 4;
    auto four = report_to_json(roc_sweep(default_data(), c)).dump();
    EXPECT_EQ(one, four);
    c.threads = 3;
    EXPECT_EQ(report_to_json(evaluate(default_data(), c)).dump(),
              (c.threads = 1, report_to_json(evaluate(default_data(), c)).dump()));
  }
}

TEST(Trials, DefaultSyntheticPopulationIsSeparable) {
  auto c = trials("TF", 10, 0.3);
  auto tpr = run_tpr_trials(default_data(), c);
  auto fpr = run_fpr_trials(default_data(), c);
  EXPECT_GE(tpr.rate, 0.9);
  EXPECT_LE(fpr.rate, 0.1);
}

// Independent estimate of the same rates from the generator's recorded
// parameters: blocks are drawn from the profiles' Gaussians (summed series
// approximated by their analytic mean and variance) and judged against the
// true statistics, with no training step.
struct OracleRates {
  double tpr;
  double fpr;
};

OracleRates profile_oracle(const std::vector<UserProfile>& profiles, const Combination& combo,
                           std::size_t n, double rho, std::size_t trials) {
  Rng rng(2024);
  std::size_t tp = 0, fp = 0;
  const std::size_t m = feature_count(combo);
  const std::size_t need = decision_boundary(m);
  auto block_accepted = [&](const UserProfile& model, const UserProfile& source) {
    std::size_t ok = 0;
    for (auto g : combo.types()) {
      const auto& gm = model.gestures[index_of(g)];
      const auto& gs = source.gestures[index_of(g)];
      for (std::size_t u = 0; u < gm.unitary_mean.size(); ++u) {
        double mean = gs.unitary_mean[u] + gs.unitary_sd[u] * rng.normal() / std::sqrt(double(n));
        double tau = gm.unitary_sd[u] / std::sqrt(double(n) * rho);
        ok += std::abs(mean - gm.unitary_mean[u]) < tau;
      }
      for (std::size_t s = 0; s < gm.series.size(); ++s) {
        double sd = std::sqrt(gs.series[s].sum_variance());
        double mean = gs.series[s].sum_mean() + sd * rng.normal() / std::sqrt(double(n));
        double tau = std::sqrt(gm.series[s].sum_variance()) / std::sqrt(double(n) * rho);
        ok += std::abs(mean - gm.series[s].sum_mean()) < tau;
      }
    }
    return ok >= need;
  };
  for (std::size_t t = 0; t < trials; ++t) {
    std::size_t target = rng.index(profiles.size());
    std::size_t attacker = rng.index(profiles.size() - 1);
    if (attacker >= target) ++attacker;
    tp += block_accepted(profiles[target], profiles[target]);
    fp += block_accepted(profiles[target], profiles[attacker]);
  }
  return {double(tp) / double(trials), double(fp) / double(trials)};
}

TEST(Trials, ProfileOracleAgreesOnSeparability) {
  auto oracle = profile_oracle(synth_profiles(SynthConfig{}), Combination::parse("TF"), 10, 0.3,
                               20000);
  EXPECT_GE(oracle.tpr, 0.9);
  EXPECT_LE(oracle.fpr, 0.1);
  auto c = trials("TF", 10, 0.3, 2000);
  auto fpr = run_fpr_trials(default_data(), c);
  // Training noise only widens the gap between users' fitted statistics and
  // the truth; the impostor rate stays close to the oracle's.
  EXPECT_NEAR(fpr.rate, oracle.fpr, 0.05);
}

TEST(Trials, FeatureFrequenciesAreBounded) {
  auto c = trials("TFBD", 10, 0.3);
  auto r = evaluate(default_data(), c);
  ASSERT_EQ(r.tp_frequency.size(), 31u);
  ASSERT_EQ(r.features.size(), 31u);
  const double rho = 0.3;
  const double floor = (1 - rho) * 500 - 3 * std::sqrt(500 * rho * (1 - rho));
  for (std::size_t f = 0; f < 31; ++f) {
    EXPECT_LE(r.tp_frequency[f], 500u);
    EXPECT_LE(r.fp_frequency[f], 500u);
    EXPECT_GE(double(r.tp_frequency[f]), floor) << r.features[f];
  }
}

TEST(Trials, IdenticalUsersAreIndistinguishable) {
  SynthConfig s;
  s.identical = true;
  auto d = synth_generate(s);
  auto c = trials("TF", 5, 0.5, 1000);
  auto tpr = run_tpr_trials(d, c).rate;
  auto fpr = run_fpr_trials(d, c).rate;
  EXPECT_NEAR(tpr, fpr, 3 * std::hypot(se(tpr, 1000), se(fpr, 1000)));
}

TEST(Trials, FarApartUsersNeverAcceptEachOther) {
  SynthConfig s;
  s.users = 3;
  s.layout = SynthLayout::kGrid;
  s.separation = 40;
  auto d = synth_generate(s);
  auto c = trials("TF", 5, 0.5);
  EXPECT_EQ(run_fpr_trials(d, c).accepted, 0u);
}

TEST(Trials, InsufficientSamplesListOffenders) {
  auto d = default_data();
  d.users[3].of(GestureType::kDown).resize(11);
  auto c = trials("TFBD", 10, 0.3, 20);
  try {
    run_tpr_trials(d, c);
    FAIL();
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("u3"), std::string::npos);
    EXPECT_NE(msg.find("D has 11"), std::string::npos);
  }
  c.exclude_insufficient = true;
  auto r = evaluate(d, c);
  EXPECT_EQ(r.users, 9u);
  // Users not needing D are unaffected.
  auto t = trials("TF", 10, 0.3, 20);
  EXPECT_NO_THROW(run_tpr_trials(d, t));
}

TEST(Trials, ImpostorTrialsNeedTwoUsers) {
  auto d = first_users(default_data(), 1);
  EXPECT_THROW(run_fpr_trials(d, trials("T", 1, 0.3, 5)), ConfigError);
  EXPECT_NO_THROW(run_tpr_trials(d, trials("T", 1, 0.3, 5)));
}

TEST(Trials, RejectsBadConfig) {
  auto c = trials("T", 1, 0.3, 0);
  EXPECT_THROW(run_tpr_trials(default_data(), c), ConfigError);
  c = trials("T", 0, 0.3, 5);
  EXPECT_THROW(run_tpr_trials(default_data(), c), ConfigError);
  c = trials("T", 1, -1.0, 5);
  EXPECT_THROW(run_tpr_trials(default_data(), c), ConfigError);
  c = trials("T", 1, 0.3, 5);
  c.training_sizes[0] = 1;
  EXPECT_THROW(run_tpr_trials(default_data(), c), ConfigError);
  c = trials("TB", 10, std::nullopt, 5);
  EXPECT_THROW(evaluate(default_data(), c), ConfigError);
}

TEST(Trials, LookupRhoIsUsedWhenUnset) {
  auto r = evaluate(default_data(), trials("T", 1, std::nullopt, 20));
  EXPECT_DOUBLE_EQ(r.rho, 0.475);
}

TEST(Sweep, RatesRiseAsRhoFalls) {
  auto r = roc_sweep(default_data(), trials("T", 3, std::nullopt));
  ASSERT_EQ(r.roc.size(), 19u);
  for (std::size_t k = 1; k < r.roc.size(); ++k) {
    EXPECT_LT(r.roc[k].rho, r.roc[k - 1].rho);
    // Every rho is judged on the same trials, so the rates are exactly
    // monotone.
    EXPECT_GE(r.roc[k].tpr, r.roc[k - 1].tpr);
    EXPECT_GE(r.roc[k].fpr, r.roc[k - 1].fpr);
  }
  ASSERT_TRUE(r.eer);
  EXPECT_GE(r.eer->eer, 0.0);
  EXPECT_LE(r.eer->eer, 0.5);
  EXPECT_NEAR(r.aer, compute_aer(r.tpr, r.fpr), 1e-15);
}

TEST(Sweep, EerShrinksWithBlockSize) {
  double prev = 1.0;
  for (std::size_t n : {1, 3, 10}) {
    auto r = roc_sweep(default_data(), trials("T", n, std::nullopt));
    EXPECT_LE(r.eer->eer, prev + 3 * se(prev, 500));
    prev = r.eer->eer;
  }
}

Dataset daily(double drift = 0.0) {
  SynthConfig s;
  s.users = 4;
  s.samples = {30, 30, 30, 30};
  s.days = {1, 2, 3, 7, 14};
  s.drift = drift;
  return synth_generate(s);
}

EvolutionConfig evolution(Scenario sc, std::size_t trials = 50) {
  EvolutionConfig c;
  c.scenario = sc;
  c.trials = trials;
  c.seed = 5;
  return c;
}

TEST(Evolution, AdaptiveTrainingComposition) {
  auto r = run_evolution(daily(), evolution(Scenario::kAdaptive));
  ASSERT_EQ(r.provenance.size(), 5u);
  using Src = std::map<int, std::size_t>;
  const Src want[] = {{{1, 20}},
                      {{1, 16}, {2, 4}},
                      {{1, 12}, {2, 4}, {3, 4}},
                      {{1, 8}, {2, 4}, {3, 4}, {7, 4}},
                      {{1, 4}, {2, 4}, {3, 4}, {7, 4}, {14, 4}}};
  for (std::size_t d = 0; d < 5; ++d) {
    for (auto g : kAllGestures) EXPECT_EQ(r.provenance[d].sources[index_of(g)], want[d]);
  }
}

TEST(Evolution, FirstAndSameDayComposition) {
  auto first = run_evolution(daily(), evolution(Scenario::kFirstDay, 5));
  auto same = run_evolution(daily(), evolution(Scenario::kSameDay, 5));
  const int days[] = {1, 2, 3, 7, 14};
  for (std::size_t d = 0; d < 5; ++d) {
    EXPECT_EQ(first.provenance[d].day, days[d]);
    EXPECT_EQ(first.provenance[d].sources[0], (std::map<int, std::size_t>{{1, 20}}));
    EXPECT_EQ(same.provenance[d].sources[3], (std::map<int, std::size_t>{{days[d], 20}}));
  }
}

TEST(Evolution, DeterministicAcrossThreads) {
  auto c = evolution(Scenario::kAdaptive, 40);
  c.threads = 1;
  auto a = evolution_to_json(run_evolution(daily(0.5), c)).dump();
  c.threads = 4;
  EXPECT_EQ(evolution_to_json(run_evolution(daily(0.5), c)).dump(), a);
}

TEST(Evolution, StationaryUserIsStableAcrossDays) {
  auto c = evolution(Scenario::kSameDay, 400);
  c.rho = 0.5;
  c.combination = Combination::parse("T");
  auto r = run_evolution(daily(), c);
  const auto& d1 = r.days.front();
  for (const auto& d : r.days) {
    EXPECT_NEAR(d.tpr, d1.tpr, 3 * std::hypot(se(d.tpr, 400), se(d1.tpr, 400))) << d.day;
    EXPECT_NEAR(d.fpr, d1.fpr, 3 * std::hypot(se(d.fpr, 400), se(d1.fpr, 400))) << d.day;
  }
}

TEST(Evolution, DriftHurtsFirstDayModelMoreThanAdaptive) {
  auto data = daily(1.0);
  auto c = evolution(Scenario::kFirstDay, 300);
  c.rho = 0.3;
  auto first = run_evolution(data, c);
  c.scenario = Scenario::kAdaptive;
  auto adaptive = run_evolution(data, c);
  EXPECT_LT(first.days.back().tpr, adaptive.days.back().tpr);
}

TEST(Evolution, RequiresDayLabels) {
  EXPECT_THROW(run_evolution(default_data(), evolution(Scenario::kAdaptive)), ConfigError);
  auto c = evolution(Scenario::kAdaptive);
  c.replace_per_day = 21;
  EXPECT_THROW(run_evolution(daily(), c), ConfigError);
  c = evolution(Scenario::kAdaptive);
  c.training_size = 30;
  EXPECT_THROW(run_evolution(daily(), c), ConfigError);
}

}  // namespace
}  // namespace glance
