// Copyright 2026 The xslu Authors.
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xslu {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A line of input could not be read (wrong column count, bad number, ...).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Input is readable but violates a structural invariant.
class StructuralError : public Error {
 public:
  using Error::Error;
  StructuralError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_ = 0;
};

/// A tag string is not of the form O, B-<label> or I-<label>.
class TagError : public Error {
 public:
  TagError(std::size_t position, const std::string& what)
      : Error("tag " + std::to_string(position) + ": " + what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Gold and predicted data do not line up.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure (non-finite values, zero variance, divergence).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace xslu
