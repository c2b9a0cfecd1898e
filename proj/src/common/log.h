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

#ifndef RFORGE_COMMON_LOG_H_
#define RFORGE_COMMON_LOG_H_

#include <spdlog/spdlog.h>

namespace rforge {

// Returns the process-wide logger (stderr). The level is read once from
// COLLIE_FORGE_LOG (error | info | debug); anything else means "error".
spdlog::logger& Log();

}  // namespace rforge

#endif  // RFORGE_COMMON_LOG_H_
