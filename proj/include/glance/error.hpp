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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace glance {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed event-log input. Carries the 1-based line number and field name.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::string field, const std::string& what)
      : Error("line " + std::to_string(line) + ", field '" + field + "': " + what),
        line_(line),
        field_(std::move(field)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// Invalid input to a feature or resampling routine.
class FeatureError : public Error {
 public:
  using Error::Error;
};

/// Too little or inconsistent training data.
class TrainingError : public Error {
 public:
  using Error::Error;
};

/// Bad block shape or a corrupted model at classification time.
class InputError : public Error {
 public:
  using Error::Error;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

/// Trial or scenario configuration that the data cannot satisfy.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Model or dataset file failed validation on load.
class LoadError : public Error {
 public:
  using Error::Error;
};

class IntegrityError : public LoadError {
 public:
  using LoadError::LoadError;
};

class VersionError : public LoadError {
 public:
  using LoadError::LoadError;
};

}  // namespace glance
