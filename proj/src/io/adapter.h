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

#ifndef RFORGE_IO_ADAPTER_H_
#define RFORGE_IO_ADAPTER_H_

#include <sys/types.h>

#include <memory>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "io/config.h"
#include "monitor/tester.h"

namespace rforge {

// Tester backed by an external traffic engine. The engine runs as a child
// process and speaks newline-delimited JSON on stdin/stdout, one request in
// flight at a time:
//   request   {"point": <WorkloadPoint>, "duration_s": <int>}
//   response  {"measurement": <Measurement>}  or  {"error": "<text>"}
// An error object, a malformed response, an early exit or a missed deadline
// fails the call; the campaign then stops with its partial results.
class AdapterTester : public Tester {
 public:
  // Spawns `config.command`. Fails if the process cannot be started.
  static absl::StatusOr<std::unique_ptr<AdapterTester>> Start(
      const AdapterConfig& config);
  ~AdapterTester() override;

  AdapterTester(const AdapterTester&) = delete;
  AdapterTester& operator=(const AdapterTester&) = delete;

  absl::StatusOr<Measurement> Measure(const WorkloadPoint& point,
                                      const EvalContext& ctx) override;

 private:
  AdapterTester(AdapterConfig config, pid_t pid, int to_child, int from_child);
  // Reads one line within the deadline.
  absl::StatusOr<std::string> ReadLine(const EvalContext& ctx);
  void Stop();

  AdapterConfig config_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  // Set after a failure; later calls fail fast.
  absl::Status broken_;
};

}  // namespace rforge

#endif  // RFORGE_IO_ADAPTER_H_
