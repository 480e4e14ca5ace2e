// Copyright 2026 The Magpie Authors.
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

namespace magpie {

// Base of every domain error raised by the library. The CLI maps these to
// exit code 1; anything else escaping main is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define MAGPIE_DEFINE_ERROR(Name)        \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

MAGPIE_DEFINE_ERROR(UnknownLocation);
MAGPIE_DEFINE_ERROR(XmlError);
MAGPIE_DEFINE_ERROR(SpaceError);
MAGPIE_DEFINE_ERROR(MissingFile);
MAGPIE_DEFINE_ERROR(UnknownParameter);
MAGPIE_DEFINE_ERROR(OutOfDomainValue);
MAGPIE_DEFINE_ERROR(EmptySpace);
MAGPIE_DEFINE_ERROR(ScenarioError);
MAGPIE_DEFINE_ERROR(WorkspaceError);
MAGPIE_DEFINE_ERROR(ArityMismatch);
MAGPIE_DEFINE_ERROR(ZeroMean);
MAGPIE_DEFINE_ERROR(ZeroBaseline);
MAGPIE_DEFINE_ERROR(BaselineFailure);
MAGPIE_DEFINE_ERROR(FoldError);
MAGPIE_DEFINE_ERROR(SpaceTooLarge);
MAGPIE_DEFINE_ERROR(PreconditionError);

#undef MAGPIE_DEFINE_ERROR

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& reason)
      : Error(key + ": " + reason), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace magpie
