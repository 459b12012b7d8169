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

// glance-auth: parse event logs, extract features, train and apply user
// models, and run the randomized evaluation protocols.
//
// Exit status: 0 success, 1 usage error, 2 data or integrity error.

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "glance/classifier.hpp"
#include "glance/dataset.hpp"
#include "glance/error.hpp"
#include "glance/event_parser.hpp"
#include "glance/features.hpp"
#include "glance/gesture.hpp"
#include "glance/harness.hpp"
#include "glance/log.hpp"
#include "glance/model_store.hpp"
#include "glance/report.hpp"
#include "glance/rho_table.hpp"
#include "glance/synth.hpp"

namespace fs = std::filesystem;
using namespace glance;

namespace {

/// Bad flag values; reported with exit status 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t parse_size(const std::string& s, const std::string& what) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw UsageError(what + ": expected a non-negative integer, got '" + s + "'");
  }
  return v;
}

/// "T=50,F=50,B=25,D=10"; a bare integer sets every type. Unnamed types keep
/// their defaults.
std::array<std::size_t, 4> parse_per_type(const std::string& text,
                                          std::array<std::size_t, 4> out,
                                          const std::string& what) {
  if (text.find('=') == std::string::npos) {
    out.fill(parse_size(text, what));
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    std::string item = text.substr(pos, end - pos);
    auto eq = item.find('=');
    if (eq != 1) throw UsageError(what + ": expected LETTER=COUNT, got '" + item + "'");
    auto g = gesture_from_letter(item[0]);
    if (!g) throw UsageError(what + ": unknown gesture '" + item.substr(0, 1) + "'");
    out[index_of(*g)] = parse_size(item.substr(2), what);
    pos = end + 1;
  }
  return out;
}

Combination parse_combination(const std::string& s) {
  try {
    return Combination::parse(s);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
}

/// "lookup" or a positive number.
std::optional<double> parse_rho(const std::string& s) {
  if (s == "lookup") return std::nullopt;
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !(v > 0.0)) {
    throw UsageError("--rho: expected 'lookup' or a positive number, got '" + s + "'");
  }
  return v;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file_atomic(path, text);
  }
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::random_device rd;
  std::uint64_t s = (std::uint64_t(rd()) << 32) ^ rd();
  std::cerr << "no --seed given; using seed " << s << "\n";
  return s;
}

// ---------------------------------------------------------------------------

struct CommonFlags {
  double t_int = 0.01;
  double t_off = 0.3;
  std::string area_mode = "major";
  double tap_path_max = 30.0;
  double down_ratio = 1.0;
  bool invert_x = false;

  FeatureConfig features() const {
    FeatureConfig f;
    f.resample = {t_int, t_off};
    try {
      f.resample.validate();
      f.area = parse_area_mode(area_mode);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    return f;
  }

  TypingConfig typing() const {
    if (!(tap_path_max >= 0.0)) throw UsageError("--tap-path-max must be non-negative");
    if (!(down_ratio > 0.0)) throw UsageError("--down-ratio must be positive");
    return {tap_path_max, down_ratio, invert_x};
  }
};

void add_feature_flags(CLI::App* app, CommonFlags& f) {
  app->add_option("--t-int", f.t_int, "resampling interval in seconds")->capture_default_str();
  app->add_option("--t-off", f.t_off, "resampling cut-off in seconds")->capture_default_str();
  app->add_option("--area-mode", f.area_mode, "contact area: major | major-times-minor")
      ->capture_default_str();
}

void add_typing_flags(CLI::App* app, CommonFlags& f) {
  app->add_option("--tap-path-max", f.tap_path_max, "path length below which a gesture is a tap")
      ->capture_default_str();
  app->add_option("--down-ratio", f.down_ratio, "|dy| / |dx| above which a swipe is downward")
      ->capture_default_str();
  app->add_flag("--invert-x", f.invert_x, "treat decreasing x as forward");
}

struct TrialFlags {
  std::string data;
  std::string combination = "TF";
  std::size_t n = 10;
  std::string rho = "lookup";
  double epsilon = kDefaultEpsilon;
  std::string training_size = "T=50,F=50,B=25,D=10";
  std::size_t trials = 500;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 0;
  std::size_t users = 0;
  bool exclude_insufficient = false;
  std::string out, csv, freq;

  TrialConfig config() const {
    TrialConfig c;
    c.combination = parse_combination(combination);
    c.n = n;
    c.rho = parse_rho(rho);
    c.epsilon = epsilon;
    c.training_sizes = parse_per_type(training_size, c.training_sizes, "--training-size");
    c.trials = trials;
    c.threads = threads;
    c.exclude_insufficient = exclude_insufficient;
    if (n < 1) throw UsageError("--n must be at least 1");
    if (trials < 1) throw UsageError("--trials must be at least 1");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw UsageError("--epsilon must lie in (0, 1]");
    for (auto g : c.combination.types())
      if (c.training_sizes[index_of(g)] < 2)
        throw UsageError("--training-size must be at least 2 for every gesture used");
    return c;
  }
};

void add_trial_flags(CLI::App* app, TrialFlags& f, bool with_rho) {
  app->add_option("--data", f.data, "dataset file")->required();
  app->add_option("--combination", f.combination, "gesture combination, e.g. T, TF, TFBD")
      ->capture_default_str();
  app->add_option("--n", f.n, "test samples per gesture type in a block")->capture_default_str();
  if (with_rho) {
    app->add_option("--rho", f.rho, "Chebyshev bound, or 'lookup' for the tabulated value")
        ->capture_default_str();
  }
  app->add_option("--epsilon", f.epsilon, "fraction of features that must accept")
      ->capture_default_str();
  app->add_option("--training-size", f.training_size, "training samples per gesture type")
      ->capture_default_str();
  app->add_option("--trials", f.trials, "trials per rate")->capture_default_str();
  app->add_option("--seed", f.seed, "random seed");
  app->add_option("--threads", f.threads, "worker threads (0: all cores)")->capture_default_str();
  app->add_option("--users", f.users, "use only the first K users (0: all)");
  app->add_flag("--exclude-insufficient", f.exclude_insufficient,
                "drop users with too few samples instead of failing");
  app->add_option("--out", f.out, "report JSON (default: stdout)");
  app->add_option("--csv", f.csv, "ROC CSV");
  app->add_option("--freq", f.freq, "feature frequency CSV");
}

void write_trial_report(const TrialReport& r, const TrialFlags& f) {
  emit(report_to_json(r).dump(2) + "\n", f.out);
  if (!f.csv.empty()) emit(roc_csv(r.roc), f.csv);
  if (!f.freq.empty()) emit(frequency_csv(r), f.freq);
}

// ---------------------------------------------------------------------------
// parse

struct ParseFlags {
  std::vector<std::string> inputs;
  std::string out;
  std::string user;
  bool legacy = false;
  std::size_t n = 10;
  std::string training_size = "T=50,F=50,B=25,D=10";
  CommonFlags common;
};

/// "alice@3.log" -> ("alice", 3); "alice.log" -> ("alice", 0).
std::pair<std::string, int> user_and_day(const fs::path& p) {
  std::string stem = p.stem().string();
  auto at = stem.rfind('@');
  if (at == std::string::npos) return {stem, 0};
  std::string day = stem.substr(at + 1);
  int d = 0;
  auto [ptr, ec] = std::from_chars(day.data(), day.data() + day.size(), d);
  if (ec != std::errc() || ptr != day.data() + day.size() || d < 0) return {stem, 0};
  return {stem.substr(0, at), d};
}

std::vector<fs::path> list_logs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(p)) {
        if (e.is_regular_file() && e.path().filename().string().front() != '.') {
          found.push_back(e.path());
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(p)) {
      files.push_back(p);
    } else {
      throw Error("no such file or directory: " + in);
    }
  }
  return files;
}

int cmd_parse(const ParseFlags& f) {
  TypingConfig typing = f.common.typing();
  auto need = parse_per_type(f.training_size, {50, 50, 25, 10}, "--training-size");
  if (f.n < 1) throw UsageError("--n must be at least 1");

  SampleFile file;
  file.typing = typing;
  AssemblyStats total;
  std::size_t untyped = 0;
  std::map<std::string, std::array<std::size_t, 4>> counts;
  for (const auto& path : list_logs(f.inputs)) {
    auto [user, day] = user_and_day(path);
    if (!f.user.empty()) user = f.user;
    std::vector<RawEvent> events;
    try {
      events = read_event_log_file(path.string(), {f.legacy});
    } catch (const ParseError& e) {
      throw ParseError(e.line(), e.field(), path.string() + ": " + e.what());
    }
    AssemblyStats st;
    auto samples = assemble_samples(events, user, &st);
    total.samples += st.samples;
    total.incomplete += st.incomplete;
    total.multi_finger += st.multi_finger;
    total.out_of_range += st.out_of_range;
    total.non_monotonic += st.non_monotonic;
    counts.try_emplace(user, std::array<std::size_t, 4>{});
    for (auto& s : samples) {
      s.day = day;
      auto typed = type_sample(std::move(s), typing);
      if (!typed) {
        ++untyped;
        continue;
      }
      ++counts[user][index_of(typed->type)];
      file.samples.push_back(std::move(*typed));
    }
  }
  if (!f.out.empty()) save_samples(file, f.out);

  std::printf("%-16s %8s %12s %8s\n", "gesture", "total", "avg/user", "min");
  const char* kNames[] = {"tap", "forward swipe", "backward swipe", "downward swipe"};
  for (auto g : kAllGestures) {
    std::size_t sum = 0, lo = 0;
    bool first = true;
    for (const auto& [u, c] : counts) {
      sum += c[index_of(g)];
      lo = first ? c[index_of(g)] : std::min(lo, c[index_of(g)]);
      first = false;
    }
    double avg = counts.empty() ? 0.0 : double(sum) / double(counts.size());
    std::printf("%-16s %8zu %12.1f %8zu\n", kNames[index_of(g)], sum, avg, lo);
  }
  std::printf("users: %zu, samples kept: %zu, untyped: %zu, discarded: %zu "
              "(incomplete %zu, multi-finger %zu, out-of-range %zu, non-monotonic %zu)\n",
              counts.size(), file.samples.size(), untyped, total.discarded(), total.incomplete,
              total.multi_finger, total.out_of_range, total.non_monotonic);
  for (const auto& [u, c] : counts) {
    for (auto g : kAllGestures) {
      std::size_t want = need[index_of(g)] + f.n;
      if (c[index_of(g)] < want) {
        std::printf("excluded at n=%zu: user %s has %zu %s samples (needs %zu)\n", f.n, u.c_str(),
                    c[index_of(g)], kNames[index_of(g)], want);
      }
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// extract

struct ExtractFlags {
  std::string in, out, dump_csv;
  CommonFlags common;
};

int cmd_extract(const ExtractFlags& f) {
  FeatureConfig fc = f.common.features();
  auto file = load_samples(f.in);
  Dataset d;
  d.features = fc;
  for (const auto& s : file.samples) add_sample(d, s.sample.user_id, extract_features(s, fc));
  std::string text = dataset_to_json(d).dump() + "\n";
  emit(text, f.out);
  if (!f.dump_csv.empty()) emit(feature_dump_csv(d), f.dump_csv);
  return 0;
}

// ---------------------------------------------------------------------------
// train / predict

struct TrainFlags {
  std::string data, user, out;
  std::string combination = "TFBD";
  std::string training_size = "T=50,F=50,B=25,D=10";
};

int cmd_train(const TrainFlags& f) {
  Combination combo = parse_combination(f.combination);
  auto sizes = parse_per_type(f.training_size, {50, 50, 25, 10}, "--training-size");
  for (auto g : combo.types())
    if (sizes[index_of(g)] < 2) throw UsageError("--training-size must be at least 2");
  Dataset d = load_dataset(f.data);
  const UserData* u = d.find(f.user);
  if (!u) throw ConfigError("user '" + f.user + "' not in dataset");
  UserModel model;
  model.user_id = u->user_id;
  model.features = d.features;
  for (auto g : combo.types()) {
    const auto& all = u->of(g);
    std::size_t k = sizes[index_of(g)];
    if (all.size() < k) {
      throw ConfigError("user " + u->user_id + " has " + std::to_string(all.size()) + " " +
                        gesture_letter(g) + " samples, training needs " + std::to_string(k));
    }
    model.at(g) = fit_gesture(g, std::span<const FeatureSet>(all.data(), k));
  }
  for (const auto& name : constant_features(model)) {
    log::warn("feature " + name + " has zero training variance and will reject every block");
  }
  emit(dump_document(model_to_json(model)), f.out);
  return 0;
}

struct PredictFlags {
  std::string model, data, user;
  std::string combination;
  std::size_t n = 10;
  std::string rho = "lookup";
  double epsilon = kDefaultEpsilon;
  std::size_t skip = 0;
};

int cmd_predict(const PredictFlags& f) {
  DecisionConfig dc;
  dc.n = f.n;
  dc.epsilon = f.epsilon;
  std::optional<Combination> combo;
  if (!f.combination.empty()) combo = parse_combination(f.combination);
  auto rho = parse_rho(f.rho);
  if (f.n < 1) throw UsageError("--n must be at least 1");
  if (!(f.epsilon > 0.0 && f.epsilon <= 1.0)) throw UsageError("--epsilon must lie in (0, 1]");

  UserModel model = load_model(f.model);
  Dataset d = load_dataset(f.data);
  if (!(d.features.resample == model.features.resample)) {
    throw ConfigError("dataset and model use different resampling grids");
  }
  if (!combo) combo = model.trained();
  dc.rho = resolve_rho(rho, *combo, f.n);
  const UserData* u = d.find(f.user.empty() ? model.user_id : f.user);
  if (!u) throw ConfigError("user '" + (f.user.empty() ? model.user_id : f.user) + "' not in dataset");
  std::array<std::vector<const FeatureSet*>, 4> block;
  for (auto g : combo->types()) {
    const auto& all = u->of(g);
    if (all.size() < f.skip + f.n) {
      throw ConfigError("user " + u->user_id + " has too few " + gesture_letter(g) +
                        " samples for a block at offset " + std::to_string(f.skip));
    }
    for (std::size_t i = 0; i < f.n; ++i) block[index_of(g)].push_back(&all[f.skip + i]);
  }
  auto decision = classify_block(model, *combo, block, dc);
  auto labels = feature_labels(*combo);
  json features = json::array();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    features.push_back({{"feature", labels[i]}, {"accept", decision.bits[i] != 0}});
  }
  json out = {{"decision", decision.accepted ? "accept" : "reject"},
              {"model_user", model.user_id},
              {"block_user", u->user_id},
              {"combination", combo->name()},
              {"n", f.n},
              {"rho", dc.rho},
              {"epsilon", dc.epsilon},
              {"accepted_features", decision.accepted_count},
              {"boundary", decision.boundary},
              {"features", std::move(features)}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate / sweep / evolve

Dataset load_trial_data(const TrialFlags& f) { return first_users(load_dataset(f.data), f.users); }

int cmd_evaluate(const TrialFlags& f) {
  TrialConfig c = f.config();
  c.seed = resolve_seed(f.seed);
  auto d = load_trial_data(f);
  write_trial_report(evaluate(d, c), f);
  return 0;
}

int cmd_sweep(const TrialFlags& f) {
  TrialConfig c = f.config();
  c.seed = resolve_seed(f.seed);
  auto d = load_trial_data(f);
  write_trial_report(roc_sweep(d, c), f);
  return 0;
}

struct EvolveFlags {
  std::string data;
  std::string scenario = "adaptive";
  std::string combination = "TFBD";
  std::size_t n = 1;
  std::string rho;  // empty: sweep
  double epsilon = kDefaultEpsilon;
  std::size_t training_size = 20;
  std::size_t replace = 4;
  std::size_t trials = 500;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 0;
  std::size_t users = 0;
  std::string out, csv;
};

int cmd_evolve(const EvolveFlags& f) {
  EvolutionConfig c;
  try {
    c.scenario = parse_scenario(f.scenario);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  c.combination = parse_combination(f.combination);
  c.n = f.n;
  if (!f.rho.empty()) {
    c.rho = parse_rho(f.rho);
    if (!c.rho) c.rho = lookup_rho(c.combination, f.n);
  }
  c.epsilon = f.epsilon;
  c.training_size = f.training_size;
  c.replace_per_day = f.replace;
  c.trials = f.trials;
  c.threads = f.threads;
  if (f.n < 1 || f.trials < 1) throw UsageError("--n and --trials must be at least 1");
  if (f.training_size < 2) throw UsageError("--training-size must be at least 2");
  if (f.replace > f.training_size) throw UsageError("--replace cannot exceed --training-size");
  c.seed = resolve_seed(f.seed);
  auto d = first_users(load_dataset(f.data), f.users);
  auto r = run_evolution(d, c);
  emit(evolution_to_json(r).dump(2) + "\n", f.out);
  if (!f.csv.empty()) emit(evolution_csv(r), f.csv);
  return 0;
}

// ---------------------------------------------------------------------------
// synth

struct SynthFlags {
  std::string out;
  std::size_t users = 10;
  std::string samples = "T=80,F=80,B=45,D=40";
  std::optional<std::uint64_t> seed;
  double separation = 1.5;
  double noise = 1.0;
  std::string layout = "random";
  bool identical = false;
  bool bimodal = false;
  std::vector<int> days;
  double drift = 0.0;
  CommonFlags common;
};

int cmd_synth(const SynthFlags& f) {
  SynthConfig c;
  c.users = f.users;
  c.samples = parse_per_type(f.samples, c.samples, "--samples");
  c.separation = f.separation;
  c.noise = f.noise;
  if (f.layout == "random") {
    c.layout = SynthLayout::kRandom;
  } else if (f.layout == "grid") {
    c.layout = SynthLayout::kGrid;
  } else {
    throw UsageError("--layout must be random or grid");
  }
  c.identical = f.identical;
  c.bimodal = f.bimodal;
  c.days = f.days;
  c.drift = f.drift;
  c.features = f.common.features();
  if (f.users < 1) throw UsageError("--users must be at least 1");
  if (!(f.noise > 0.0)) throw UsageError("--noise must be positive");
  c.seed = resolve_seed(f.seed);
  emit(dataset_to_json(synth_generate(c)).dump() + "\n", f.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Touchpad gesture authentication: parsing, training and evaluation"};
  app.require_subcommand(1);

  ParseFlags parse_f;
  auto* parse = app.add_subcommand("parse", "decode event logs into typed samples");
  parse->add_option("inputs", parse_f.inputs, "event log files or directories")->required();
  parse->add_option("--out", parse_f.out, "samples file");
  parse->add_option("--user", parse_f.user, "user id (default: file name stem)");
  parse->add_flag("--legacy", parse_f.legacy, "logs without timestamps");
  parse->add_option("--n", parse_f.n, "block size used to flag users with too few samples")
      ->capture_default_str();
  parse->add_option("--training-size", parse_f.training_size, "training samples per gesture type")
      ->capture_default_str();
  add_typing_flags(parse, parse_f.common);

  ExtractFlags extract_f;
  auto* extract = app.add_subcommand("extract", "compute features of typed samples");
  extract->add_option("--in", extract_f.in, "samples file")->required();
  extract->add_option("--out", extract_f.out, "dataset file (default: stdout)");
  extract->add_option("--dump-csv", extract_f.dump_csv, "also write one CSV row per sample");
  add_feature_flags(extract, extract_f.common);

  TrainFlags train_f;
  auto* train = app.add_subcommand("train", "fit a user model");
  train->add_option("--data", train_f.data, "dataset file")->required();
  train->add_option("--user", train_f.user, "user id")->required();
  train->add_option("--combination", train_f.combination, "gesture types to model")
      ->capture_default_str();
  train->add_option("--training-size", train_f.training_size, "training samples per gesture type")
      ->capture_default_str();
  train->add_option("--out", train_f.out, "model file (default: stdout)");

  PredictFlags predict_f;
  auto* predict = app.add_subcommand("predict", "accept or reject one block");
  predict->add_option("--model", predict_f.model, "model file")->required();
  predict->add_option("--data", predict_f.data, "dataset file")->required();
  predict->add_option("--user", predict_f.user, "whose samples form the block (default: model user)");
  predict->add_option("--combination", predict_f.combination, "default: every modeled type");
  predict->add_option("--n", predict_f.n, "samples per gesture type")->capture_default_str();
  predict->add_option("--rho", predict_f.rho, "Chebyshev bound or 'lookup'")->capture_default_str();
  predict->add_option("--epsilon", predict_f.epsilon, "fraction of features that must accept")
      ->capture_default_str();
  predict->add_option("--skip", predict_f.skip, "samples to skip before the block")
      ->capture_default_str();

  TrialFlags eval_f;
  auto* eval = app.add_subcommand("evaluate", "TPR, FPR and AER at one rho");
  add_trial_flags(eval, eval_f, true);

  TrialFlags sweep_f;
  auto* sweep = app.add_subcommand("sweep", "ROC over rho = 1.00 .. 0.10 and the EER");
  add_trial_flags(sweep, sweep_f, false);

  EvolveFlags evolve_f;
  auto* evolve = app.add_subcommand("evolve", "error rates over successive days");
  evolve->add_option("--data", evolve_f.data, "dataset file with day labels")->required();
  evolve->add_option("--scenario", evolve_f.scenario, "same_day | first_day | adaptive")
      ->capture_default_str();
  evolve->add_option("--combination", evolve_f.combination, "gesture combination")->capture_default_str();
  evolve->add_option("--n", evolve_f.n, "test samples per gesture type in a block")->capture_default_str();
  evolve->add_option("--rho", evolve_f.rho, "fixed rho or 'lookup' (default: sweep each day)");
  evolve->add_option("--epsilon", evolve_f.epsilon, "fraction of features that must accept")->capture_default_str();
  evolve->add_option("--training-size", evolve_f.training_size, "training samples per type")
      ->capture_default_str();
  evolve->add_option("--replace", evolve_f.replace, "samples replaced per day (adaptive)")
      ->capture_default_str();
  evolve->add_option("--trials", evolve_f.trials, "trials per day")->capture_default_str();
  evolve->add_option("--seed", evolve_f.seed, "random seed");
  evolve->add_option("--threads", evolve_f.threads, "worker threads (0: all cores)")
      ->capture_default_str();
  evolve->add_option("--users", evolve_f.users, "use only the first K users (0: all)");
  evolve->add_option("--out", evolve_f.out, "report JSON (default: stdout)");
  evolve->add_option("--csv", evolve_f.csv, "per-day CSV");

  SynthFlags synth_f;
  auto* synth = app.add_subcommand("synth", "generate a synthetic feature dataset");
  synth->add_option("--out", synth_f.out, "dataset file (default: stdout)");
  synth->add_option("--users", synth_f.users, "number of users")->capture_default_str();
  synth->add_option("--samples", synth_f.samples, "samples per user, per day and type")
      ->capture_default_str();
  synth->add_option("--seed", synth_f.seed, "random seed");
  synth->add_option("--separation", synth_f.separation, "between-user spread in within-user sd")
      ->capture_default_str();
  synth->add_option("--noise", synth_f.noise, "within-user noise scale")->capture_default_str();
  synth->add_option("--layout", synth_f.layout, "random | grid")->capture_default_str();
  synth->add_flag("--identical", synth_f.identical, "every user shares one profile");
  synth->add_flag("--bimodal", synth_f.bimodal, "two-mode unitary features");
  synth->add_option("--days", synth_f.days, "day labels, e.g. --days 1 2 3")->delimiter(',');
  synth->add_option("--drift", synth_f.drift, "per-day mean shift in within-user sd")
      ->capture_default_str();
  add_feature_flags(synth, synth_f.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*parse) return cmd_parse(parse_f);
    if (*extract) return cmd_extract(extract_f);
    if (*train) return cmd_train(train_f);
    if (*predict) return cmd_predict(predict_f);
    if (*eval) return cmd_evaluate(eval_f);
    if (*sweep) return cmd_sweep(sweep_f);
    if (*evolve) return cmd_evolve(evolve_f);
    if (*synth) return cmd_synth(synth_f);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
