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

#include <string>
#include <string_view>

namespace magpie {

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

// Accumulates length-prefixed fields so that field boundaries are part of
// the hashed text.
class DigestBuilder {
 public:
  DigestBuilder& add(std::string_view field) {
    text_ += std::to_string(field.size());
    text_.push_back(':');
    text_ += field;
    return *this;
  }
  std::string finish() const { return sha256_hex(text_); }

 private:
  std::string text_;
};

}  // namespace magpie
