//
// Copyright 2026 The REAP Authors
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
//

// Strict JSON object reading with field-path error messages. Internal to the
// library.

#ifndef REAP_SRC_JSON_UTIL_H_
#define REAP_SRC_JSON_UTIL_H_

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"

namespace reap::json_util {

using Json = nlohmann::ordered_json;

absl::StatusOr<Json> Parse(const std::string& text);

// Reads fields of one JSON object. The first error is kept in a status
// shared with every child reader; accessors return zero values after it.
class Reader {
 public:
  Reader(const Json& json, std::string path);

  // Fails on any key not in `keys`.
  void Allow(std::initializer_list<std::string_view> keys) const;
  bool Has(std::string_view key) const;

  double Number(std::string_view key) const;
  std::optional<double> OptionalNumber(std::string_view key) const;
  int64_t Integer(std::string_view key) const;
  uint64_t Unsigned(std::string_view key) const;
  std::string String(std::string_view key) const;
  std::vector<double> NumberArray(std::string_view key) const;
  std::vector<Reader> Array(std::string_view key) const;
  Reader Object(std::string_view key) const;

  const Json& json() const { return *json_; }
  const std::string& path() const { return path_; }
  void Fail(std::string_view key, std::string_view message) const;
  absl::Status status() const { return *status_; }

 private:
  Reader(const Json* json, std::string path,
         std::shared_ptr<absl::Status> status);
  const Json* Field(std::string_view key, bool required) const;
  std::string PathOf(std::string_view key) const;

  const Json* json_;
  std::string path_;
  std::shared_ptr<absl::Status> status_;
};

}  // namespace reap::json_util

#endif  // REAP_SRC_JSON_UTIL_H_
