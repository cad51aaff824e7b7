// Copyright 2026 The seld3d Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SELD_ERROR_HPP_
#define SELD_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace seld {

// Base class for all library errors. Subclasses let the CLI map failures to
// exit codes: validation-type errors exit 1, I/O errors exit 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error("line " + std::to_string(line) + ": " + what), detail_(what), line_(line) {}
  int line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string detail_;
  int line_;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// Tensor dimensions that do not agree with each other or with a format.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Raised by the trainer when the loss stops being finite.
class TrainingError : public Error {
 public:
  TrainingError(const std::string& what, long step)
      : Error("step " + std::to_string(step) + ": " + what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

}  // namespace seld

#endif  // SELD_ERROR_HPP_
