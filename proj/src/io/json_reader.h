// Copyright 2026 The rforge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RFORGE_IO_JSON_READER_H_
#define RFORGE_IO_JSON_READER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "common/strings.h"
#include "io/json_codec.h"

namespace rforge {

// Reads one JSON object field by field and keeps the first schema error.
// Absent optional keys leave the target untouched.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string_view path) : j_(j), path_(path) {
    if (!j.is_object()) Fail(path_, "expected an object");
  }

  bool ok() const { return status_.ok(); }
  const absl::Status& status() const { return status_; }
  std::string Path(std::string_view key) const {
    return StrCat(path_, ".", key);
  }

  // The value under `key`, or nullptr (recording an error if `required`).
  const Json* Find(std::string_view key, bool required = false) {
    seen_.insert(std::string(key));
    if (!ok() || !j_.is_object()) return nullptr;
    auto it = j_.find(std::string(key));
    if (it == j_.end()) {
      if (required) Fail(Path(key), "missing required field");
      return nullptr;
    }
    return &*it;
  }

  void Int(std::string_view key, int64_t& out, bool required = false) {
    if (const Json* v = Find(key, required)) {
      if (v->is_number_integer()) {
        out = v->get<int64_t>();
      } else {
        Fail(Path(key), "expected an integer");
      }
    }
  }
  void Int(std::string_view key, int& out, bool required = false) {
    int64_t v = out;
    Int(key, v, required);
    out = static_cast<int>(v);
  }
  void Uint(std::string_view key, uint64_t& out, bool required = false) {
    if (const Json* v = Find(key, required)) {
      if (v->is_number_unsigned()) {
        out = v->get<uint64_t>();
      } else {
        Fail(Path(key), "expected a non-negative integer");
      }
    }
  }
  void Number(std::string_view key, double& out, bool required = false) {
    if (const Json* v = Find(key, required)) {
      if (v->is_number()) {
        out = v->get<double>();
      } else {
        Fail(Path(key), "expected a number");
      }
    }
  }
  void Bool(std::string_view key, bool& out, bool required = false) {
    if (const Json* v = Find(key, required)) {
      if (v->is_boolean()) {
        out = v->get<bool>();
      } else {
        Fail(Path(key), "expected true or false");
      }
    }
  }
  void String(std::string_view key, std::string& out, bool required = false) {
    if (const Json* v = Find(key, required)) {
      if (v->is_string()) {
        out = v->get<std::string>();
      } else {
        Fail(Path(key), "expected a string");
      }
    }
  }
  template <typename E>
  void Enum(std::string_view key, E& out,
            std::optional<E> (*parse)(std::string_view),
            bool required = false) {
    if (const Json* v = Find(key, required)) {
      std::optional<E> e;
      if (v->is_string()) e = parse(v->get<std::string>());
      if (e) {
        out = *e;
      } else {
        Fail(Path(key), StrCat("unknown value ", v->dump()));
      }
    }
  }
  void IntList(std::string_view key, std::vector<int64_t>& out,
               bool required = false) {
    if (const Json* v = Find(key, required)) {
      std::vector<int64_t> list;
      if (!v->is_array()) {
        Fail(Path(key), "expected an array of integers");
        return;
      }
      for (size_t i = 0; i < v->size(); ++i) {
        if (!(*v)[i].is_number_integer()) {
          Fail(StrCat(Path(key), "[", i, "]"), "expected an integer");
          return;
        }
        list.push_back((*v)[i].get<int64_t>());
      }
      out = std::move(list);
    }
  }
  void StringList(std::string_view key, std::vector<std::string>& out,
                  bool required = false) {
    if (const Json* v = Find(key, required)) {
      std::vector<std::string> list;
      if (!v->is_array()) {
        Fail(Path(key), "expected an array of strings");
        return;
      }
      for (size_t i = 0; i < v->size(); ++i) {
        if (!(*v)[i].is_string()) {
          Fail(StrCat(Path(key), "[", i, "]"), "expected a string");
          return;
        }
        list.push_back((*v)[i].get<std::string>());
      }
      out = std::move(list);
    }
  }
  // Decodes each element of the array under `key` with `decode`.
  template <typename T>
  void List(std::string_view key, std::vector<T>& out,
            const std::function<absl::StatusOr<T>(const Json&,
                                                  std::string_view)>& decode,
            bool required = false) {
    if (const Json* v = Find(key, required)) {
      if (!v->is_array()) {
        Fail(Path(key), "expected an array");
        return;
      }
      std::vector<T> list;
      for (size_t i = 0; i < v->size(); ++i) {
        absl::StatusOr<T> item = decode((*v)[i], StrCat(Path(key), "[", i, "]"));
        if (!item.ok()) {
          Merge(item.status());
          return;
        }
        list.push_back(*std::move(item));
      }
      out = std::move(list);
    }
  }

  void Merge(const absl::Status& s) {
    if (ok() && !s.ok()) status_ = s;
  }
  void Fail(std::string_view where, std::string_view what) {
    Merge(absl::InvalidArgumentError(StrCat(where, ": ", what)));
  }

  // Rejects keys no accessor asked for. Call after reading all fields.
  absl::Status Finish() {
    if (ok() && j_.is_object()) {
      for (auto it = j_.begin(); it != j_.end(); ++it) {
        if (!seen_.count(it.key())) Fail(Path(it.key()), "unknown field");
      }
    }
    return status_;
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string, std::less<>> seen_;
  absl::Status status_;
};

}  // namespace rforge

#endif  // RFORGE_IO_JSON_READER_H_
