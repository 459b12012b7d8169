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

// Text renderings of evaluation results and feature dumps.

#pragma once

#include <charconv>
#include <string>
#include <system_error>

#include <json.hpp>

#include "glance/dataset.hpp"
#include "glance/harness.hpp"
#include "glance/model_store.hpp"

namespace glance {

/// Shortest decimal that reads back to the same double.
inline std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buf, end);
}

namespace detail {

inline json roc_to_json(const std::vector<RocPoint>& roc) {
  json out = json::array();
  for (const auto& p : roc) out.push_back({{"rho", p.rho}, {"fpr", p.fpr}, {"tpr", p.tpr}});
  return out;
}

inline json eer_to_json(const std::optional<EerResult>& eer) {
  if (!eer) return nullptr;
  return {{"eer", eer->eer}, {"extrapolated", eer->extrapolated}};
}

}  // namespace detail

inline json report_to_json(const TrialReport& r) {
  json sizes = json::object();
  for (auto g : Combination::parse(r.combination).types()) {
    sizes[std::string(1, gesture_letter(g))] = r.training_sizes[index_of(g)];
  }
  json freq = json::array();
  for (std::size_t f = 0; f < r.features.size(); ++f) {
    freq.push_back({{"feature", r.features[f]},
                    {"tp_count", r.tp_frequency.at(f)},
                    {"fp_count", r.fp_frequency.at(f)}});
  }
  return {{"combination", r.combination},
          {"n", r.n},
          {"trials", r.trials},
          {"users", r.users},
          {"epsilon", r.epsilon},
          {"seed", r.seed},
          {"training_sizes", std::move(sizes)},
          {"rho", r.rho},
          {"tpr", r.tpr},
          {"fpr", r.fpr},
          {"aer", r.aer},
          {"eer", detail::eer_to_json(r.eer)},
          {"roc", detail::roc_to_json(r.roc)},
          {"frequencies", std::move(freq)}};
}

/// One row per ROC point.
inline std::string roc_csv(const std::vector<RocPoint>& roc) {
  std::string out = "rho,fpr,tpr\n";
  for (const auto& p : roc) {
    out += format_number(p.rho) + "," + format_number(p.fpr) + "," + format_number(p.tpr) + "\n";
  }
  return out;
}

inline std::string frequency_csv(const TrialReport& r) {
  std::string out = "feature,tp_count,fp_count\n";
  for (std::size_t f = 0; f < r.features.size(); ++f) {
    out += r.features[f] + "," + std::to_string(r.tp_frequency.at(f)) + "," +
           std::to_string(r.fp_frequency.at(f)) + "\n";
  }
  return out;
}

inline json evolution_to_json(const EvolutionReport& r) {
  json days = json::array();
  for (const auto& d : r.days) {
    days.push_back({{"day", d.day},
                    {"rho", d.rho},
                    {"tpr", d.tpr},
                    {"fpr", d.fpr},
                    {"aer", d.aer},
                    {"eer", detail::eer_to_json(d.eer)},
                    {"roc", detail::roc_to_json(d.roc)}});
  }
  json prov = json::array();
  for (const auto& p : r.provenance) {
    json types = json::object();
    for (auto g : Combination::parse(r.combination).types()) {
      json src = json::object();
      for (const auto& [day, count] : p.sources[index_of(g)]) src[std::to_string(day)] = count;
      types[std::string(1, gesture_letter(g))] = std::move(src);
    }
    prov.push_back({{"day", p.day}, {"training_sources", std::move(types)}});
  }
  return {{"scenario", scenario_name(r.scenario)},
          {"combination", r.combination},
          {"n", r.n},
          {"training_size", r.training_size},
          {"replace_per_day", r.replace_per_day},
          {"trials", r.trials},
          {"users", r.users},
          {"seed", r.seed},
          {"days", std::move(days)},
          {"provenance", std::move(prov)}};
}

inline std::string evolution_csv(const EvolutionReport& r) {
  std::string out = "day,eer,eer_extrapolated,rho,tpr,fpr,aer\n";
  for (const auto& d : r.days) {
    out += std::to_string(d.day) + ",";
    out += d.eer ? format_number(d.eer->eer) + "," + (d.eer->extrapolated ? "1" : "0") : ",";
    out += "," + format_number(d.rho) + "," + format_number(d.tpr) + "," + format_number(d.fpr) +
           "," + format_number(d.aer) + "\n";
  }
  return out;
}

/// One row per sample: user, type, day, unitary features, then the Fz
/// columns, then the Fxy columns (empty for taps).
inline std::string feature_dump_csv(const Dataset& d) {
  const std::size_t m = d.features.resample.length();
  std::string out = "user_id,gesture_type,day";
  for (auto name : detail::kSwipeUnitary) out += "," + std::string(name);
  for (std::size_t k = 0; k < m; ++k) out += ",Fz_" + std::to_string(k);
  for (std::size_t k = 0; k < m; ++k) out += ",Fxy_" + std::to_string(k);
  out += "\n";
  for (const auto& u : d.users) {
    for (auto g : kAllGestures) {
      for (const auto& f : u.of(g)) {
        out += u.user_id + "," + gesture_letter(g) + "," + std::to_string(f.day);
        // Swipe columns; a tap fills x0, y0 and dt and leaves the rest empty.
        for (auto name : detail::kSwipeUnitary) {
          out += ",";
          auto names = unitary_names(g);
          for (std::size_t i = 0; i < names.size(); ++i) {
            std::string_view want = name;
            if (g == GestureType::kTap && (name == "x0" || name == "y0")) want = name.substr(0, 1);
            if (names[i] == want) out += format_number(f.unitary[i]);
          }
        }
        for (std::size_t s = 0; s < 2; ++s) {
          for (std::size_t k = 0; k < m; ++k) {
            out += ",";
            if (s < f.series.size()) out += format_number(f.series[s][k]);
          }
        }
        out += "\n";
      }
    }
  }
  return out;
}

}  // namespace glance
