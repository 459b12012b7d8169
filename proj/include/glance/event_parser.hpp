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

// Decoder for textual ABS_MT event logs.
//
// A log line is `<timestamp> <type> <code> <value>`: a decimal timestamp in
// seconds followed by the three hex fields exactly as a raw evdev dump prints
// them (no `0x` prefix, any case). Legacy logs omit the timestamp; the reader
// then synthesizes one at kLegacyReadingInterval per SYN_REPORT frame.
//
// Events are grouped into readings (one per SYN frame) and readings into
// samples (one per gesture). A SYN frame carrying no ABS data closes the open
// sample.

#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "glance/error.hpp"

namespace glance {

namespace ev {
inline constexpr std::uint16_t kSyn = 0x0000;
inline constexpr std::uint16_t kAbs = 0x0003;

inline constexpr std::uint16_t kSynReport = 0x0000;
inline constexpr std::uint16_t kSynMtReport = 0x0002;

inline constexpr std::uint16_t kTouchMajor = 0x0030;
inline constexpr std::uint16_t kTouchMinor = 0x0031;
inline constexpr std::uint16_t kOrientation = 0x0034;
inline constexpr std::uint16_t kPositionX = 0x0035;
inline constexpr std::uint16_t kPositionY = 0x0036;
inline constexpr std::uint16_t kToolType = 0x0037;
inline constexpr std::uint16_t kTrackingId = 0x0039;
inline constexpr std::uint16_t kPressure = 0x003a;

inline constexpr std::uint32_t kToolFinger = 0;
}  // namespace ev

/// Average reading interval of the touchpad, used for timestamp-less logs.
inline constexpr double kLegacyReadingInterval = 0.012;

struct RawEvent {
  double timestamp = 0.0;
  std::uint16_t type = 0;
  std::uint16_t code = 0;
  std::uint32_t value = 0;

  friend bool operator==(const RawEvent&, const RawEvent&) = default;
};

struct Reading {
  double timestamp = 0.0;
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  std::uint32_t pressure = 0;
  std::uint32_t touch_major = 0;
  std::uint32_t touch_minor = 0;
  std::uint32_t tracking_id = 0;
  std::uint32_t tool_type = ev::kToolFinger;
  std::int32_t orientation = 0;

  friend bool operator==(const Reading&, const Reading&) = default;
};

/// All readings of one single-finger gesture.
struct RawSample {
  std::string user_id;
  int day = 0;  // 0 = unlabeled
  std::vector<Reading> readings;

  friend bool operator==(const RawSample&, const RawSample&) = default;
};

/// Touchpad coordinate ranges; readings outside them discard their sample.
struct TouchpadBounds {
  std::uint32_t x_max = 1366;
  std::uint32_t y_max = 187;
};

namespace detail {

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::uint32_t parse_hex(std::string_view text, std::uint32_t max, std::size_t line,
                               const char* field) {
  if (text.empty() || text.size() > 8) {
    throw ParseError(line, field, "expected 1-8 hex digits, got '" + std::string(text) + "'");
  }
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v, 16);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(line, field, "not a hex number: '" + std::string(text) + "'");
  }
  if (v > max) throw ParseError(line, field, "value out of range: '" + std::string(text) + "'");
  return v;
}

inline double parse_timestamp(std::string_view text, std::size_t line) {
  double t = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), t);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(t)) {
    throw ParseError(line, "timestamp", "not a decimal number: '" + std::string(text) + "'");
  }
  if (t < 0.0) throw ParseError(line, "timestamp", "negative timestamp");
  return t == 0.0 ? 0.0 : t;  // folds -0
}

inline bool known_abs_code(std::uint16_t code) {
  switch (code) {
    case ev::kTrackingId:
    case ev::kToolType:
    case ev::kPressure:
    case ev::kTouchMajor:
    case ev::kTouchMinor:
    case ev::kOrientation:
    case ev::kPositionX:
    case ev::kPositionY:
      return true;
    default:
      return false;
  }
}

inline RawEvent decode_fields(std::span<const std::string_view> f, double timestamp,
                              std::size_t line) {
  RawEvent e;
  e.timestamp = timestamp;
  e.type = static_cast<std::uint16_t>(parse_hex(f[0], 0xffff, line, "type"));
  e.code = static_cast<std::uint16_t>(parse_hex(f[1], 0xffff, line, "code"));
  e.value = parse_hex(f[2], 0xffffffffu, line, "value");
  if (e.type == ev::kSyn) {
    if (e.code != ev::kSynReport && e.code != ev::kSynMtReport) {
      throw ParseError(line, "code", "unknown SYN code '" + std::string(f[1]) + "'");
    }
  } else if (e.type == ev::kAbs) {
    if (!known_abs_code(e.code)) {
      throw ParseError(line, "code", "unknown ABS_MT code '" + std::string(f[1]) + "'");
    }
  } else {
    throw ParseError(line, "type", "unknown event type '" + std::string(f[0]) + "'");
  }
  return e;
}

}  // namespace detail

/// Decodes `<timestamp> <type> <code> <value>`.
inline RawEvent parse_event_line(std::string_view line, std::size_t line_no = 1) {
  auto fields = detail::split_fields(line);
  if (fields.size() != 4) {
    throw ParseError(line_no, "line",
                     "expected 4 fields, got " + std::to_string(fields.size()));
  }
  double t = detail::parse_timestamp(fields[0], line_no);
  return detail::decode_fields(std::span(fields).subspan(1), t, line_no);
}

/// Decodes a timestamp-less `<type> <code> <value>` line; timestamp is left at 0.
inline RawEvent parse_legacy_event_line(std::string_view line, std::size_t line_no = 1) {
  auto fields = detail::split_fields(line);
  if (fields.size() != 3) {
    throw ParseError(line_no, "line",
                     "expected 3 fields, got " + std::to_string(fields.size()));
  }
  return detail::decode_fields(fields, 0.0, line_no);
}

/// Inverse of parse_event_line. The timestamp uses the shortest fixed-point
/// form that reparses to the same double.
inline std::string format_event_line(const RawEvent& e) {
  std::array<char, 400> ts{};
  auto [end, ec] = std::to_chars(ts.data(), ts.data() + ts.size(), e.timestamp,
                                 std::chars_format::fixed);
  std::string out(ts.data(), end);
  static constexpr char kHex[] = "0123456789abcdef";
  auto hex = [&](std::uint32_t v, int digits) {
    out.push_back(' ');
    for (int i = digits - 1; i >= 0; --i) out.push_back(kHex[(v >> (4 * i)) & 0xf]);
  };
  hex(e.type, 4);
  hex(e.code, 4);
  hex(e.value, 8);
  return out;
}

struct LogOptions {
  bool legacy = false;  // lines carry no timestamp
};

/// Reads a whole event log. Blank and `#` lines are skipped; timestamps must
/// not decrease.
inline std::vector<RawEvent> read_event_log(std::istream& in, const LogOptions& opts = {}) {
  std::vector<RawEvent> events;
  std::string line;
  std::size_t line_no = 0;
  std::size_t frames = 0;
  double last_t = 0.0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    std::size_t first = view.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || view[first] == '#') continue;
    RawEvent e;
    if (opts.legacy) {
      e = parse_legacy_event_line(view, line_no);
      e.timestamp = static_cast<double>(frames) * kLegacyReadingInterval;
    } else {
      e = parse_event_line(view, line_no);
      if (!events.empty() && e.timestamp < last_t) {
        throw ParseError(line_no, "timestamp", "timestamp decreases");
      }
    }
    last_t = e.timestamp;
    if (e.type == ev::kSyn && e.code == ev::kSynReport) ++frames;
    events.push_back(e);
  }
  return events;
}

inline std::vector<RawEvent> read_event_log_file(const std::string& path,
                                                 const LogOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open event log '" + path + "'");
  return read_event_log(in, opts);
}

/// Why samples were dropped during assembly.
struct AssemblyStats {
  std::size_t samples = 0;
  std::size_t incomplete = 0;     // first reading lacks x, y, pressure or major
  std::size_t multi_finger = 0;   // tracking id changed mid-sample
  std::size_t out_of_range = 0;   // x or y outside the touchpad
  std::size_t non_monotonic = 0;  // reading timestamps not strictly increasing

  std::size_t discarded() const { return incomplete + multi_finger + out_of_range + non_monotonic; }

  friend bool operator==(const AssemblyStats&, const AssemblyStats&) = default;
};

/// Incremental reading/sample builder. Feeding a stream in arbitrary chunks
/// yields the same samples as feeding it whole; end-of-stream is signalled by
/// finish().
class SampleAssembler {
 public:
  explicit SampleAssembler(std::string user_id = {}, TouchpadBounds bounds = {})
      : user_id_(std::move(user_id)), bounds_(bounds) {}

  void feed(const RawEvent& e) {
    if (e.type == ev::kAbs) {
      set_pending(e.code, e.value);
      frame_has_abs_ = true;
      return;
    }
    // SYN_MT_REPORT is informational; SYN_REPORT ends the frame.
    if (e.code != ev::kSynReport) return;
    if (frame_has_abs_) {
      close_reading(e.timestamp);
    } else if (open_) {
      close_sample();
    }
    pending_ = {};
    frame_has_abs_ = false;
  }

  void feed(std::span<const RawEvent> events) {
    for (const auto& e : events) feed(e);
  }

  /// Completed samples so far; ownership moves to the caller.
  std::vector<RawSample> take() { return std::exchange(done_, {}); }

  /// Ends the stream: a partial frame is dropped, an open sample is closed.
  std::vector<RawSample> finish() {
    pending_ = {};
    frame_has_abs_ = false;
    if (open_) close_sample();
    return take();
  }

  const AssemblyStats& stats() const { return stats_; }

 private:
  enum Field { kX, kY, kPressure, kMajor, kMinor, kTracking, kTool, kOrient, kFieldCount };

  void set_pending(std::uint16_t code, std::uint32_t value) {
    switch (code) {
      case ev::kPositionX: pending_[kX] = value; break;
      case ev::kPositionY: pending_[kY] = value; break;
      case ev::kPressure: pending_[kPressure] = value; break;
      case ev::kTouchMajor: pending_[kMajor] = value; break;
      case ev::kTouchMinor: pending_[kMinor] = value; break;
      case ev::kTrackingId: pending_[kTracking] = value; break;
      case ev::kToolType: pending_[kTool] = value; break;
      case ev::kOrientation: pending_[kOrient] = value; break;
      default: break;
    }
  }

  void discard(std::size_t& counter) {
    if (!discarded_) ++counter;
    discarded_ = true;
  }

  void close_reading(double timestamp) {
    bool first = !open_;
    if (first) {
      open_ = true;
      discarded_ = false;
      current_ = RawSample{user_id_, 0, {}};
      if (!pending_[kX] || !pending_[kY] || !pending_[kPressure] || !pending_[kMajor]) {
        discard(stats_.incomplete);
      }
    }
    if (discarded_) return;

    Reading r = first ? Reading{} : current_.readings.back();
    r.timestamp = timestamp;
    if (pending_[kX]) r.x = *pending_[kX];
    if (pending_[kY]) r.y = *pending_[kY];
    if (pending_[kPressure]) r.pressure = *pending_[kPressure];
    if (pending_[kMajor]) r.touch_major = *pending_[kMajor];
    if (pending_[kMinor]) r.touch_minor = *pending_[kMinor];
    if (pending_[kTool]) r.tool_type = *pending_[kTool];
    if (pending_[kOrient]) r.orientation = static_cast<std::int32_t>(*pending_[kOrient]);
    if (pending_[kTracking]) {
      if (!first && *pending_[kTracking] != r.tracking_id) {
        discard(stats_.multi_finger);
        return;
      }
      r.tracking_id = *pending_[kTracking];
    }
    if (r.x > bounds_.x_max || r.y > bounds_.y_max) {
      discard(stats_.out_of_range);
      return;
    }
    if (!first && !(timestamp > current_.readings.back().timestamp)) {
      discard(stats_.non_monotonic);
      return;
    }
    current_.readings.push_back(r);
  }

  void close_sample() {
    if (!discarded_ && !current_.readings.empty()) {
      done_.push_back(std::move(current_));
      ++stats_.samples;
    }
    current_ = {};
    open_ = false;
    discarded_ = false;
  }

  std::string user_id_;
  TouchpadBounds bounds_;
  std::array<std::optional<std::uint32_t>, kFieldCount> pending_{};
  bool frame_has_abs_ = false;
  bool open_ = false;
  bool discarded_ = false;
  RawSample current_;
  std::vector<RawSample> done_;
  AssemblyStats stats_;
};

/// Groups a whole event stream into samples.
inline std::vector<RawSample> assemble_samples(std::span<const RawEvent> events,
                                               const std::string& user_id = {},
                                               AssemblyStats* stats = nullptr,
                                               TouchpadBounds bounds = {}) {
  SampleAssembler a(user_id, bounds);
  a.feed(events);
  auto out = a.finish();
  if (stats) *stats = a.stats();
  return out;
}

}  // namespace glance
