// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MOMCAL_ERRORS_H_
#define MOMCAL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace momcal {

// Bad argument values (non-finite inputs, out-of-range parameters).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A documented precondition of an algorithm does not hold, e.g. the sample
// size is too small for the requested accuracy.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A guarantee that should hold unconditionally was violated. Indicates a bug.
class InternalLogicError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed input file. Carries the file name and 1-based line when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& file, int line, const std::string& what)
      : std::runtime_error(file + (line > 0 ? ":" + std::to_string(line) : "") +
                           ": " + what),
        file_(file),
        line_(line) {}

  const std::string& file() const { return file_; }
  int line() const { return line_; }

 private:
  std::string file_;
  int line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The finite sample pool ran out before training finished.
class PoolExhausted : public std::runtime_error {
 public:
  PoolExhausted(const std::string& what, unsigned long long missing_examples)
      : std::runtime_error(what), missing_examples_(missing_examples) {}
  unsigned long long missing_examples() const { return missing_examples_; }

 private:
  unsigned long long missing_examples_;
};

}  // namespace momcal

#endif  // MOMCAL_ERRORS_H_
