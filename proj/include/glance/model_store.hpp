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

// JSON persistence for user models, feature datasets and typed samples.
//
// Files are written to a temporary sibling and renamed into place. Model and
// dataset documents carry a version tag and an FNV-1a checksum of their
// compact serialization (without the checksum member); loading checks the
// version first, then the checksum, then the model's numeric invariants.

#pragma once

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "glance/classifier.hpp"
#include "glance/dataset.hpp"
#include "glance/error.hpp"
#include "glance/event_parser.hpp"
#include "glance/features.hpp"
#include "glance/gesture.hpp"

namespace glance {

inline constexpr const char* kModelVersion = "1";
inline constexpr const char* kDatasetVersion = "1";
inline constexpr const char* kSamplesVersion = "1";

using nlohmann::json;

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string checksum_of(const json& doc) {
  json body = doc;
  body.erase("checksum");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(body.dump())));
  return buf;
}

/// Writes `text` to `path` through a temporary file and a rename.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw Error("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot rename into " + path.string());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw LoadError(what + ": not valid JSON (" + e.what() + ")");
  }
}

inline const char* area_mode_name(AreaMode m) {
  return m == AreaMode::kMajorTimesMinor ? "major-times-minor" : "major";
}

inline AreaMode parse_area_mode(std::string_view s) {
  if (s == "major") return AreaMode::kMajor;
  if (s == "major-times-minor") return AreaMode::kMajorTimesMinor;
  throw ConfigError("unknown area mode '" + std::string(s) + "'");
}

namespace detail {

inline double finite_or_throw(double v, const std::string& where) {
  if (!std::isfinite(v)) throw ModelError("non-finite value in " + where);
  return v;
}

inline json features_to_json(const FeatureConfig& f) {
  return {{"t_int", f.resample.t_int}, {"t_off", f.resample.t_off},
          {"area_mode", area_mode_name(f.area)}};
}

/// Typed access that turns every shape problem into a LoadError naming the
/// offending member.
template <class T>
T get_as(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw LoadError(where + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw LoadError(where + ": '" + key + "' has the wrong type");
  }
}

inline FeatureConfig features_from_json(const json& j, const std::string& where) {
  FeatureConfig f;
  f.resample.t_int = get_as<double>(j, "t_int", where);
  f.resample.t_off = get_as<double>(j, "t_off", where);
  try {
    f.resample.validate();
  } catch (const FeatureError& e) {
    throw LoadError(where + ": " + e.what());
  }
  if (j.contains("area_mode")) {
    try {
      f.area = parse_area_mode(get_as<std::string>(j, "area_mode", where));
    } catch (const ConfigError& e) {
      throw LoadError(where + ": " + e.what());
    }
  }
  return f;
}

inline void check_version(const json& doc, const char* expected, const std::string& what) {
  if (!doc.is_object() || !doc.contains("version")) {
    throw LoadError(what + ": missing version");
  }
  const json& v = doc["version"];
  std::string got = v.is_string() ? v.get<std::string>() : v.dump();
  if (got != expected) {
    throw VersionError(what + ": unsupported version " + got + " (expected " + expected + ")");
  }
}

inline void check_checksum(const json& doc, const std::string& what) {
  if (!doc.contains("checksum") || !doc["checksum"].is_string()) {
    throw IntegrityError(what + ": missing checksum");
  }
  if (doc["checksum"].get<std::string>() != checksum_of(doc)) {
    throw IntegrityError(what + ": checksum mismatch");
  }
}

inline json seal(json doc) {
  doc["checksum"] = checksum_of(doc);
  return doc;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Models.

inline json model_to_json(const UserModel& model) {
  json gestures = json::object();
  for (auto g : kAllGestures) {
    const auto& gm = model.at(g);
    if (!gm) continue;
    const std::string letter(1, gesture_letter(g));
    json unitary = json::object();
    for (std::size_t u = 0; u < gm->unitary.size(); ++u) {
      const std::string name(unitary_names(g)[u]);
      const auto& st = gm->unitary[u];
      const std::string where = letter + "." + name;
      unitary[name] = {{"mean", detail::finite_or_throw(st.mean, where)},
                       {"var", detail::finite_or_throw(st.var, where)},
                       {"count", st.count}};
    }
    json series = json::object();
    for (std::size_t s = 0; s < gm->series.size(); ++s) {
      const std::string name(series_names(g)[s]);
      const auto& st = gm->series[s];
      const std::string where = letter + "." + name;
      json means = json::array();
      for (double v : st.means) means.push_back(detail::finite_or_throw(v, where));
      json cov = json::array();
      for (std::size_t j = 0; j < st.dim(); ++j) {
        json row = json::array();
        for (std::size_t k = 0; k < st.dim(); ++k) {
          row.push_back(detail::finite_or_throw(st.at(j, k), where));
        }
        cov.push_back(std::move(row));
      }
      series[name] = {{"means", std::move(means)}, {"cov", std::move(cov)}, {"count", st.count}};
    }
    gestures[letter] = {{"unitary", std::move(unitary)}, {"series", std::move(series)}};
  }
  json doc = {{"version", kModelVersion},
              {"user_id", model.user_id},
              {"resample", {{"t_int", model.features.resample.t_int},
                            {"t_off", model.features.resample.t_off}}},
              {"area_mode", area_mode_name(model.features.area)},
              {"gestures", std::move(gestures)}};
  return detail::seal(std::move(doc));
}

namespace detail {

inline void check_covariance(const SeriesStat& st, const std::string& where) {
  const std::size_t m = st.dim();
  double scale = 0.0;
  for (double v : st.cov) scale = std::max(scale, std::abs(v));
  for (std::size_t j = 0; j < m; ++j) {
    if (st.at(j, j) < 0.0) throw LoadError(where + ": negative variance on the diagonal");
    for (std::size_t k = j + 1; k < m; ++k) {
      if (std::abs(st.at(j, k) - st.at(k, j)) > 1e-12 * scale) {
        throw LoadError(where + ": covariance is not symmetric");
      }
    }
  }
  if (m == 0 || scale == 0.0) return;
  Eigen::MatrixXd a(m, m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < m; ++k) a(j, k) = st.at(j, k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw LoadError(where + ": covariance eigensolver failed");
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().cwiseAbs().maxCoeff();
  if (lo < -1e-9 * hi) throw LoadError(where + ": covariance is not positive semi-definite");
}

inline std::size_t get_count(const json& j, const std::string& where) {
  if (!j.contains("count") || !j["count"].is_number_unsigned()) {
    throw LoadError(where + ": 'count' must be a non-negative integer");
  }
  auto c = j["count"].get<std::size_t>();
  if (c < 2) throw LoadError(where + ": count must be at least 2");
  return c;
}

inline double get_finite(const json& j, const std::string& where) {
  if (!j.is_number()) throw LoadError(where + ": expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) throw LoadError(where + ": non-finite number");
  return v;
}

inline void check_names(const json& obj, std::span<const std::string_view> names,
                        const std::string& where) {
  if (!obj.is_object()) throw LoadError(where + " must be an object");
  std::set<std::string> want(names.begin(), names.end());
  for (const auto& [k, v] : obj.items()) {
    if (!want.count(k)) throw LoadError(where + ": unknown feature '" + k + "'");
  }
  for (const auto& n : want) {
    if (!obj.contains(n)) throw LoadError(where + ": missing feature '" + n + "'");
  }
}

}  // namespace detail

inline UserModel model_from_json(const json& doc) {
  const std::string what = "model";
  detail::check_version(doc, kModelVersion, what);
  detail::check_checksum(doc, what);

  UserModel model;
  model.user_id = detail::get_as<std::string>(doc, "user_id", what);
  if (!doc.contains("resample")) throw LoadError("model: missing 'resample'");
  json fj = doc["resample"];
  if (doc.contains("area_mode")) fj["area_mode"] = doc["area_mode"];
  model.features = detail::features_from_json(fj, "model resample");
  const std::size_t m = model.features.resample.length();

  if (!doc.contains("gestures") || !doc["gestures"].is_object()) {
    throw LoadError("model: missing 'gestures'");
  }
  for (const auto& [key, gj] : doc["gestures"].items()) {
    auto g = key.size() == 1 ? gesture_from_letter(key[0]) : std::nullopt;
    if (!g || key[0] != gesture_letter(*g)) throw LoadError("model: unknown gesture '" + key + "'");
    if (!gj.contains("unitary") || !gj.contains("series")) {
      throw LoadError("model: gesture " + key + " needs 'unitary' and 'series'");
    }
    GestureModel gm;
    const auto& uj = gj["unitary"];
    detail::check_names(uj, unitary_names(*g), "model." + key + ".unitary");
    for (auto name : unitary_names(*g)) {
      const std::string where = key + "." + std::string(name);
      const auto& sj = uj[std::string(name)];
      UnitaryStat st;
      if (!sj.contains("mean") || !sj.contains("var")) throw LoadError(where + ": needs mean and var");
      st.mean = detail::get_finite(sj["mean"], where + ".mean");
      st.var = detail::get_finite(sj["var"], where + ".var");
      if (st.var < 0.0) throw LoadError(where + ": negative variance");
      st.count = detail::get_count(sj, where);
      gm.unitary.push_back(st);
    }
    const auto& serj = gj["series"];
    detail::check_names(serj, series_names(*g), "model." + key + ".series");
    for (auto name : series_names(*g)) {
      const std::string where = key + "." + std::string(name);
      const auto& sj = serj[std::string(name)];
      SeriesStat st;
      if (!sj.contains("means") || !sj["means"].is_array() || sj["means"].size() != m) {
        throw LoadError(where + ": 'means' must hold " + std::to_string(m) + " numbers");
      }
      for (const auto& v : sj["means"]) st.means.push_back(detail::get_finite(v, where + ".means"));
      if (!sj.contains("cov") || !sj["cov"].is_array() || sj["cov"].size() != m) {
        throw LoadError(where + ": 'cov' must be a " + std::to_string(m) + "x" +
                        std::to_string(m) + " matrix");
      }
      for (const auto& row : sj["cov"]) {
        if (!row.is_array() || row.size() != m) {
          throw LoadError(where + ": 'cov' must be a " + std::to_string(m) + "x" +
                          std::to_string(m) + " matrix");
        }
        for (const auto& v : row) st.cov.push_back(detail::get_finite(v, where + ".cov"));
      }
      st.count = detail::get_count(sj, where);
      detail::check_covariance(st, where);
      gm.series.push_back(std::move(st));
    }
    model.at(*g) = std::move(gm);
  }
  return model;
}

inline std::string dump_document(const json& doc) { return doc.dump(1) + "\n"; }

inline void save_model(const UserModel& model, const std::filesystem::path& path) {
  write_file_atomic(path, dump_document(model_to_json(model)));
}

inline UserModel load_model(const std::filesystem::path& path) {
  return model_from_json(parse_json_text(read_file(path), path.string()));
}

// ---------------------------------------------------------------------------
// Feature datasets.

inline json feature_set_to_json(const FeatureSet& f) {
  json series = json::array();
  for (const auto& s : f.series) series.push_back(s);
  return {{"day", f.day}, {"unitary", f.unitary}, {"series", std::move(series)}};
}

inline json dataset_to_json(const Dataset& d) {
  json users = json::array();
  for (const auto& u : d.users) {
    json gestures = json::object();
    for (auto g : kAllGestures) {
      json list = json::array();
      for (const auto& f : u.of(g)) list.push_back(feature_set_to_json(f));
      gestures[std::string(1, gesture_letter(g))] = std::move(list);
    }
    users.push_back({{"user_id", u.user_id}, {"gestures", std::move(gestures)}});
  }
  json doc = {{"version", kDatasetVersion},
              {"features", detail::features_to_json(d.features)},
              {"generator", d.generator},
              {"users", std::move(users)}};
  return detail::seal(std::move(doc));
}

inline Dataset dataset_from_json(const json& doc) {
  const std::string what = "dataset";
  detail::check_version(doc, kDatasetVersion, what);
  detail::check_checksum(doc, what);
  Dataset d;
  if (!doc.contains("features")) throw LoadError("dataset: missing 'features'");
  d.features = detail::features_from_json(doc["features"], "dataset features");
  d.generator = doc.value("generator", json());
  const std::size_t m = d.features.resample.length();
  if (!doc.contains("users") || !doc["users"].is_array()) throw LoadError("dataset: missing 'users'");
  for (const auto& uj : doc["users"]) {
    UserData u;
    u.user_id = detail::get_as<std::string>(uj, "user_id", "dataset user");
    if (!uj.contains("gestures") || !uj["gestures"].is_object()) {
      throw LoadError("dataset user " + u.user_id + ": missing 'gestures'");
    }
    for (auto g : kAllGestures) {
      const std::string letter(1, gesture_letter(g));
      if (!uj["gestures"].contains(letter)) continue;
      const std::string where = "dataset user " + u.user_id + " " + letter;
      for (const auto& fj : uj["gestures"][letter]) {
        FeatureSet f;
        f.type = g;
        f.day = detail::get_as<int>(fj, "day", where);
        f.unitary = detail::get_as<std::vector<double>>(fj, "unitary", where);
        f.series = detail::get_as<std::vector<std::vector<double>>>(fj, "series", where);
        if (f.unitary.size() != unitary_names(g).size() ||
            f.series.size() != series_names(g).size()) {
          throw LoadError(where + ": wrong number of features");
        }
        for (const auto& s : f.series)
          if (s.size() != m) throw LoadError(where + ": series length differs from t_off/t_int");
        u.of(g).push_back(std::move(f));
      }
    }
    d.users.push_back(std::move(u));
  }
  return d;
}

inline void save_dataset(const Dataset& d, const std::filesystem::path& path) {
  write_file_atomic(path, dataset_to_json(d).dump() + "\n");
}

inline Dataset load_dataset(const std::filesystem::path& path) {
  return dataset_from_json(parse_json_text(read_file(path), path.string()));
}

// ---------------------------------------------------------------------------
// Typed raw samples, the output of the parse stage.

struct SampleFile {
  TypingConfig typing;
  std::vector<GestureSample> samples;
};

inline constexpr const char* kReadingColumns[] = {
    "timestamp", "x", "y", "pressure", "touch_major", "touch_minor",
    "tracking_id", "tool_type", "orientation"};

inline json samples_to_json(const SampleFile& file) {
  json samples = json::array();
  for (const auto& gs : file.samples) {
    json readings = json::array();
    for (const auto& r : gs.sample.readings) {
      readings.push_back({r.timestamp, r.x, r.y, r.pressure, r.touch_major, r.touch_minor,
                          r.tracking_id, r.tool_type, r.orientation});
    }
    samples.push_back({{"user_id", gs.sample.user_id},
                       {"day", gs.sample.day},
                       {"type", std::string(1, gesture_letter(gs.type))},
                       {"readings", std::move(readings)}});
  }
  json columns = json::array();
  for (auto c : kReadingColumns) columns.push_back(c);
  return {{"version", kSamplesVersion},
          {"typing", {{"tap_path_max", file.typing.tap_path_max},
                      {"down_ratio", file.typing.down_ratio},
                      {"invert_x", file.typing.invert_x}}},
          {"columns", std::move(columns)},
          {"samples", std::move(samples)}};
}

inline SampleFile samples_from_json(const json& doc) {
  detail::check_version(doc, kSamplesVersion, "samples file");
  SampleFile file;
  if (doc.contains("typing")) {
    const auto& t = doc["typing"];
    file.typing.tap_path_max = detail::get_as<double>(t, "tap_path_max", "samples typing");
    file.typing.down_ratio = detail::get_as<double>(t, "down_ratio", "samples typing");
    file.typing.invert_x = detail::get_as<bool>(t, "invert_x", "samples typing");
  }
  if (!doc.contains("samples") || !doc["samples"].is_array()) {
    throw LoadError("samples file: missing 'samples'");
  }
  for (const auto& sj : doc["samples"]) {
    GestureSample gs;
    gs.sample.user_id = detail::get_as<std::string>(sj, "user_id", "sample");
    gs.sample.day = detail::get_as<int>(sj, "day", "sample");
    auto letter = detail::get_as<std::string>(sj, "type", "sample");
    auto g = letter.size() == 1 ? gesture_from_letter(letter[0]) : std::nullopt;
    if (!g) throw LoadError("sample: unknown gesture type '" + letter + "'");
    gs.type = *g;
    if (!sj.contains("readings") || !sj["readings"].is_array() || sj["readings"].empty()) {
      throw LoadError("sample of user " + gs.sample.user_id + ": no readings");
    }
    for (const auto& rj : sj["readings"]) {
      if (!rj.is_array() || rj.size() != std::size(kReadingColumns)) {
        throw LoadError("sample of user " + gs.sample.user_id + ": malformed reading");
      }
      try {
        Reading r;
        r.timestamp = rj[0].get<double>();
        r.x = rj[1].get<decltype(r.x)>();
        r.y = rj[2].get<decltype(r.y)>();
        r.pressure = rj[3].get<decltype(r.pressure)>();
        r.touch_major = rj[4].get<decltype(r.touch_major)>();
        r.touch_minor = rj[5].get<decltype(r.touch_minor)>();
        r.tracking_id = rj[6].get<decltype(r.tracking_id)>();
        r.tool_type = rj[7].get<decltype(r.tool_type)>();
        r.orientation = rj[8].get<decltype(r.orientation)>();
        gs.sample.readings.push_back(r);
      } catch (const json::exception&) {
        throw LoadError("sample of user " + gs.sample.user_id + ": malformed reading");
      }
    }
    file.samples.push_back(std::move(gs));
  }
  return file;
}

inline void save_samples(const SampleFile& file, const std::filesystem::path& path) {
  write_file_atomic(path, samples_to_json(file).dump() + "\n");
}

inline SampleFile load_samples(const std::filesystem::path& path) {
  return samples_from_json(parse_json_text(read_file(path), path.string()));
}

}  // namespace glance
