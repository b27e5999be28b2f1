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

#include "json_util.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"

namespace reap::json_util {
namespace {

const Json& EmptyObject() {
  static const Json* empty = new Json(Json::object());
  return *empty;
}

}  // namespace

absl::StatusOr<Json> Parse(const std::string& text) {
  Json j = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return absl::InvalidArgumentError("malformed JSON");
  return j;
}

Reader::Reader(const Json& json, std::string path)
    : Reader(&json, std::move(path),
             std::make_shared<absl::Status>(absl::OkStatus())) {}

Reader::Reader(const Json* json, std::string path,
               std::shared_ptr<absl::Status> status)
    : json_(json), path_(std::move(path)), status_(std::move(status)) {
  if (!json_->is_object()) {
    if (status_->ok()) {
      *status_ = absl::InvalidArgumentError(
          absl::StrCat(path_, ": expected a JSON object"));
    }
    json_ = &EmptyObject();
  }
}

std::string Reader::PathOf(std::string_view key) const {
  return path_ + "." + std::string(key);
}

void Reader::Fail(std::string_view key, std::string_view message) const {
  if (status_->ok()) {
    *status_ = absl::InvalidArgumentError(
        (key.empty() ? path_ : PathOf(key)) + ": " + std::string(message));
  }
}

void Reader::Allow(std::initializer_list<std::string_view> keys) const {
  for (auto it = json_->begin(); it != json_->end(); ++it) {
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) {
      Fail(it.key(), "unknown field");
    }
  }
}

bool Reader::Has(std::string_view key) const {
  return json_->contains(std::string(key));
}

const Json* Reader::Field(std::string_view key, bool required) const {
  auto it = json_->find(std::string(key));
  if (it == json_->end()) {
    if (required) Fail(key, "missing required field");
    return nullptr;
  }
  return &*it;
}

std::optional<double> Reader::OptionalNumber(std::string_view key) const {
  const Json* f = Field(key, /*required=*/false);
  if (f == nullptr) return std::nullopt;
  if (!f->is_number()) {
    Fail(key, "expected a number");
    return std::nullopt;
  }
  return f->get<double>();
}

double Reader::Number(std::string_view key) const {
  if (Field(key, /*required=*/true) == nullptr) return 0;
  return OptionalNumber(key).value_or(0);
}

int64_t Reader::Integer(std::string_view key) const {
  const Json* f = Field(key, /*required=*/true);
  if (f == nullptr) return 0;
  if (f->is_number_integer()) return f->get<int64_t>();
  Fail(key, "expected an integer");
  return 0;
}

uint64_t Reader::Unsigned(std::string_view key) const {
  const Json* f = Field(key, /*required=*/true);
  if (f == nullptr) return 0;
  if (f->is_number_unsigned()) return f->get<uint64_t>();
  Fail(key, "expected a non-negative integer");
  return 0;
}

std::string Reader::String(std::string_view key) const {
  const Json* f = Field(key, /*required=*/true);
  if (f == nullptr) return "";
  if (!f->is_string()) {
    Fail(key, "expected a string");
    return "";
  }
  return f->get<std::string>();
}

std::vector<double> Reader::NumberArray(std::string_view key) const {
  std::vector<double> out;
  const Json* f = Field(key, /*required=*/true);
  if (f == nullptr) return out;
  if (!f->is_array()) {
    Fail(key, "expected an array");
    return out;
  }
  for (const Json& v : *f) {
    if (!v.is_number()) {
      Fail(key, "expected an array of numbers");
      return {};
    }
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<Reader> Reader::Array(std::string_view key) const {
  std::vector<Reader> out;
  const Json* f = Field(key, /*required=*/true);
  if (f == nullptr) return out;
  if (!f->is_array()) {
    Fail(key, "expected an array");
    return out;
  }
  for (size_t i = 0; i < f->size(); ++i) {
    out.push_back(Reader(&(*f)[i], absl::StrCat(PathOf(key), "[", i, "]"),
                         status_));
  }
  return out;
}

Reader Reader::Object(std::string_view key) const {
  const Json* f = Field(key, /*required=*/true);
  return Reader(f == nullptr ? &EmptyObject() : f, PathOf(key), status_);
}

}  // namespace reap::json_util
