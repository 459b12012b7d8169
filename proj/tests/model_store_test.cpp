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

#include "glance/model_store.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <limits>

#include "glance/synth.hpp"

namespace glance {
namespace {

namespace fs = std::filesystem;

class ModelStore : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("glance_store_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  static UserModel trained(std::uint64_t seed = 3) {
    SynthConfig c;
    c.users = 1;
    c.samples = {60, 60, 30, 20};
    c.seed = seed;
    auto d = synth_generate(c);
    UserModel m;
    m.user_id = "alice";
    m.features = d.features;
    for (auto g : kAllGestures) m.at(g) = fit_gesture(g, d.users[0].of(g));
    return m;
  }

  fs::path dir_;
};

TEST_F(ModelStore, RoundTripIsExact) {
  auto m = trained();
  save_model(m, dir_ / "m.json");
  auto back = load_model(dir_ / "m.json");
  EXPECT_EQ(back, m);
}

TEST_F(ModelStore, SaveLoadSaveIsByteIdentical) {
  auto m = trained();
  save_model(m, dir_ / "a.json");
  save_model(load_model(dir_ / "a.json"), dir_ / "b.json");
  EXPECT_EQ(read_file(dir_ / "a.json"), read_file(dir_ / "b.json"));
  EXPECT_FALSE(fs::exists(dir_ / "a.json.tmp"));
}

TEST_F(ModelStore, PartialModelKeepsOnlyTrainedTypes) {
  auto m = trained();
  m.at(GestureType::kBackward).reset();
  m.at(GestureType::kDown).reset();
  save_model(m, dir_ / "m.json");
  auto back = load_model(dir_ / "m.json");
  EXPECT_EQ(back.trained().name(), "TF");
  EXPECT_EQ(back, m);
}

TEST_F(ModelStore, TamperedFileFailsIntegrity) {
  auto m = trained();
  auto doc = model_to_json(m);
  doc["gestures"]["T"]["unitary"]["x"]["mean"] = 1.0;
  EXPECT_THROW(model_from_json(doc), IntegrityError);
  doc = model_to_json(m);
  doc["checksum"] = "0000000000000000";
  EXPECT_THROW(model_from_json(doc), IntegrityError);
  doc.erase("checksum");
  EXPECT_THROW(model_from_json(doc), IntegrityError);
}

TEST_F(ModelStore, UnknownVersionIsRejected) {
  auto doc = model_to_json(trained());
  doc["version"] = "999";
  doc["checksum"] = checksum_of(doc);
  EXPECT_THROW(model_from_json(doc), VersionError);
  doc.erase("version");
  EXPECT_THROW(model_from_json(doc), LoadError);
}

json resealed(json doc) {
  doc["checksum"] = checksum_of(doc);
  return doc;
}

TEST_F(ModelStore, RejectsStructuralDamage) {
  const auto good = model_to_json(trained());
  auto expect_load_error = [&](auto mutate) {
    json doc = good;
    mutate(doc);
    EXPECT_THROW(model_from_json(resealed(doc)), LoadError) << doc.dump().substr(0, 80);
  };
  expect_load_error([](json& d) { d["gestures"]["T"]["unitary"].erase("x"); });
  expect_load_error([](json& d) { d["gestures"]["T"]["unitary"]["z"] = d["gestures"]["T"]["unitary"]["x"]; });
  expect_load_error([](json& d) { d["gestures"]["F"]["series"].erase("Fxy"); });
  expect_load_error([](json& d) { d["gestures"]["Q"] = d["gestures"]["T"]; });
  expect_load_error([](json& d) { d["gestures"]["T"]["unitary"]["x"]["var"] = -1.0; });
  expect_load_error([](json& d) { d["gestures"]["T"]["unitary"]["x"]["count"] = 1; });
  expect_load_error([](json& d) { d["gestures"]["T"]["unitary"]["x"]["mean"] = "a"; });
  expect_load_error([](json& d) { d["gestures"]["T"]["series"]["Fz"]["means"].erase(0); });
  expect_load_error([](json& d) { d["gestures"]["T"]["series"]["Fz"]["cov"][3].erase(0); });
  expect_load_error([](json& d) {
    auto& cov = d["gestures"]["T"]["series"]["Fz"]["cov"];
    cov[0][1] = cov[0][1].get<double>() + 1.0;
  });
  expect_load_error([](json& d) {
    // Symmetric but indefinite.
    auto& cov = d["gestures"]["T"]["series"]["Fz"]["cov"];
    double big = 1e3 * (cov[0][0].get<double>() + cov[1][1].get<double>() + 1.0);
    cov[0][1] = big;
    cov[1][0] = big;
  });
  expect_load_error([](json& d) { d["resample"]["t_int"] = 0.07; });
  expect_load_error([](json& d) { d.erase("user_id"); });
}

TEST_F(ModelStore, NonFiniteValuesCannotBeSaved) {
  auto m = trained();
  m.at(GestureType::kTap)->unitary[0].mean = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(save_model(m, dir_ / "m.json"), ModelError);
  EXPECT_FALSE(fs::exists(dir_ / "m.json"));
  m = trained();
  m.at(GestureType::kForward)->series[1].cov[5] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(model_to_json(m), ModelError);
}

TEST_F(ModelStore, GarbageAndMissingFiles) {
  EXPECT_THROW(load_model(dir_ / "absent.json"), LoadError);
  write_file_atomic(dir_ / "bad.json", "{ not json");
  EXPECT_THROW(load_model(dir_ / "bad.json"), LoadError);
}

TEST_F(ModelStore, NumbersSurviveTextRoundTrip) {
  auto m = trained(11);
  auto text = dump_document(model_to_json(m));
  auto back = model_from_json(json::parse(text));
  const auto& a = m.at(GestureType::kDown)->series[0].cov;
  const auto& b = back.at(GestureType::kDown)->series[0].cov;
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
}

TEST_F(ModelStore, DatasetRoundTrip) {
  SynthConfig c;
  c.users = 3;
  c.samples = {4, 5, 6, 7};
  c.days = {1, 2};
  auto d = synth_generate(c);
  save_dataset(d, dir_ / "d.json");
  auto back = load_dataset(dir_ / "d.json");
  ASSERT_EQ(back.users.size(), 3u);
  for (std::size_t u = 0; u < 3; ++u) {
    EXPECT_EQ(back.users[u].user_id, d.users[u].user_id);
    EXPECT_EQ(back.users[u].gestures, d.users[u].gestures);
  }
  EXPECT_EQ(back.generator, d.generator);
  save_dataset(back, dir_ / "e.json");
  EXPECT_EQ(read_file(dir_ / "d.json"), read_file(dir_ / "e.json"));

  auto doc = dataset_to_json(d);
  doc["users"][0]["gestures"]["T"][0]["unitary"][0] = 0.0;
  EXPECT_THROW(dataset_from_json(doc), IntegrityError);
  doc = dataset_to_json(d);
  doc["users"][0]["gestures"]["T"][0]["series"][0].erase(0);
  EXPECT_THROW(dataset_from_json(resealed(doc)), LoadError);
}

TEST_F(ModelStore, SamplesRoundTrip) {
  SampleFile f;
  f.typing.invert_x = true;
  Reading r;
  r.timestamp = 0.012;
  r.x = 849;
  r.y = 102;
  r.pressure = 71;
  r.touch_major = 3;
  r.touch_minor = 2;
  r.orientation = -4;
  f.samples.push_back({RawSample{"bob", 2, {r}}, GestureType::kTap});
  save_samples(f, dir_ / "s.json");
  auto back = load_samples(dir_ / "s.json");
  ASSERT_EQ(back.samples.size(), 1u);
  EXPECT_EQ(back.samples[0].sample.readings, f.samples[0].sample.readings);
  EXPECT_EQ(back.samples[0].sample.user_id, "bob");
  EXPECT_EQ(back.samples[0].sample.day, 2);
  EXPECT_TRUE(back.typing.invert_x);
}

}  // namespace
}  // namespace glance
