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

#ifndef RFORGE_COMMON_STRINGS_H_
#define RFORGE_COMMON_STRINGS_H_

#include <iterator>
#include <string>
#include <string_view>

#include <fmt/format.h>

#include "absl/strings/string_view.h"

// Abseil may be built with its own string_view (Status::message() returns
// it); teach fmt to print it like std::string_view.
#if !defined(ABSL_USES_STD_STRING_VIEW)
template <>
struct fmt::formatter<absl::string_view> : fmt::formatter<std::string_view> {
  template <typename FormatContext>
  auto format(absl::string_view v, FormatContext& ctx) const {
    return fmt::formatter<std::string_view>::format(
        std::string_view(v.data(), v.size()), ctx);
  }
};
#endif

namespace rforge {

// Concatenates the "{}"-formatted arguments. Unlike absl::StrCat this accepts
// std::string_view on every Abseil build, whichever string_view it uses.
template <typename... Args>
std::string StrCat(const Args&... args) {
  std::string out;
  (fmt::format_to(std::back_inserter(out), "{}", args), ...);
  return out;
}

}  // namespace rforge

#endif  // RFORGE_COMMON_STRINGS_H_
