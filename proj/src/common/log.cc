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

#include "common/log.h"

#include <cstdlib>
#include <memory>
#include <string_view>

#include <spdlog/sinks/stdout_color_sinks.h>

namespace rforge {

namespace {

spdlog::level::level_enum LevelFromEnv() {
  const char* raw = std::getenv("COLLIE_FORGE_LOG");
  if (raw == nullptr) return spdlog::level::err;
  const std::string_view value(raw);
  if (value == "debug") return spdlog::level::debug;
  if (value == "info") return spdlog::level::info;
  return spdlog::level::err;
}

}  // namespace

spdlog::logger& Log() {
  static const std::shared_ptr<spdlog::logger> logger = [] {
    auto l = spdlog::stderr_color_mt("rforge");
    l->set_level(LevelFromEnv());
    l->set_pattern("[%l] %v");
    return l;
  }();
  return *logger;
}

}  // namespace rforge
