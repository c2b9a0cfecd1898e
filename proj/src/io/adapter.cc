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

#include "io/adapter.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <thread>
#include <vector>

#include "common/log.h"
#include "common/strings.h"
#include "io/json_codec.h"

namespace rforge {

namespace {

absl::Status Errno(std::string_view what) {
  return absl::InternalError(StrCat(what, ": ", std::strerror(errno)));
}

absl::Status WriteAll(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      return Errno("write to adapter");
    }
    data.remove_prefix(static_cast<size_t>(n));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<std::unique_ptr<AdapterTester>> AdapterTester::Start(
    const AdapterConfig& config) {
  if (config.command.empty()) {
    return absl::InvalidArgumentError("adapter command is empty");
  }
  // A dead adapter must surface as a write error, not kill the framework.
  ::signal(SIGPIPE, SIG_IGN);

  int to_child[2], from_child[2], exec_status[2];
  if (::pipe2(to_child, O_CLOEXEC) != 0) return Errno("pipe");
  if (::pipe2(from_child, O_CLOEXEC) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    return Errno("pipe");
  }
  if (::pipe2(exec_status, O_CLOEXEC) != 0) {
    for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) {
      ::close(fd);
    }
    return Errno("pipe");
  }

  std::vector<char*> argv;
  for (const std::string& arg : config.command) {
    argv.push_back(const_cast<char*>(arg.c_str()));
  }
  argv.push_back(nullptr);

  const pid_t pid = ::fork();
  if (pid < 0) return Errno("fork");
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::execvp(argv[0], argv.data());
    // Report the exec failure through the status pipe; a successful exec
    // closes it (O_CLOEXEC) with nothing written.
    const int err = errno;
    [[maybe_unused]] ssize_t n = ::write(exec_status[1], &err, sizeof(err));
    ::_exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  ::close(exec_status[1]);

  int child_errno = 0;
  ssize_t n;
  do {
    n = ::read(exec_status[0], &child_errno, sizeof(child_errno));
  } while (n < 0 && errno == EINTR);
  ::close(exec_status[0]);
  if (n > 0) {
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::waitpid(pid, nullptr, 0);
    return absl::FailedPreconditionError(
        StrCat("cannot start adapter \"", config.command[0],
               "\": ", std::strerror(child_errno)));
  }
  Log().info("adapter started: pid {} ({})", pid, config.command[0]);
  return std::unique_ptr<AdapterTester>(
      new AdapterTester(config, pid, to_child[1], from_child[0]));
}

AdapterTester::AdapterTester(AdapterConfig config, pid_t pid, int to_child,
                             int from_child)
    : config_(std::move(config)),
      pid_(pid),
      to_child_(to_child),
      from_child_(from_child) {}

AdapterTester::~AdapterTester() { Stop(); }

void AdapterTester::Stop() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ <= 0) return;
  // Closing stdin asks the adapter to exit; give it a moment, then kill it.
  for (int i = 0; i < 50; ++i) {
    if (::waitpid(pid_, nullptr, WNOHANG) == pid_) {
      pid_ = -1;
      return;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  ::kill(pid_, SIGKILL);
  ::waitpid(pid_, nullptr, 0);
  pid_ = -1;
}

absl::StatusOr<std::string> AdapterTester::ReadLine(const EvalContext& ctx) {
  using Clock = std::chrono::steady_clock;
  const auto deadline =
      Clock::now() + std::chrono::duration_cast<Clock::duration>(
                         std::chrono::duration<double>(config_.deadline_s));
  for (;;) {
    if (size_t nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - Clock::now());
    if (left.count() <= 0) {
      return absl::DeadlineExceededError(StrCat(
          "adapter timed out after ", config_.deadline_s,
          " s waiting for the response to evaluation ", ctx.eval_index,
          " (sample ", ctx.sample, ")"));
    }
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      return Errno("poll adapter");
    }
    if (ready == 0) continue;
    char chunk[4096];
    const ssize_t n = ::read(from_child_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      return Errno("read from adapter");
    }
    if (n == 0) {
      return absl::UnavailableError(
          StrCat("adapter closed its output during evaluation ",
                 ctx.eval_index));
    }
    buffer_.append(chunk, static_cast<size_t>(n));
  }
}

absl::StatusOr<Measurement> AdapterTester::Measure(const WorkloadPoint& point,
                                                   const EvalContext& ctx) {
  if (!broken_.ok()) return broken_;
  auto fail = [&](absl::Status s) {
    broken_ = s;
    Stop();
    return s;
  };
  Json request;
  request["point"] = PointToJson(point);
  request["duration_s"] = config_.duration_s;
  if (absl::Status s = WriteAll(to_child_, request.dump() + "\n"); !s.ok()) {
    return fail(absl::UnavailableError(
        StrCat("evaluation ", ctx.eval_index, ": ", s.message())));
  }
  absl::StatusOr<std::string> line = ReadLine(ctx);
  if (!line.ok()) return fail(line.status());

  absl::StatusOr<Json> response = ParseJson(*line, "adapter response");
  if (!response.ok()) {
    return fail(absl::DataLossError(StrCat(
        "evaluation ", ctx.eval_index, ": ", response.status().message())));
  }
  if (response->is_object()) {
    if (auto it = response->find("error"); it != response->end()) {
      const std::string text =
          it->is_string() ? it->get<std::string>() : it->dump();
      return fail(absl::AbortedError(StrCat(
          "adapter reported an error at evaluation ", ctx.eval_index, ": ",
          text)));
    }
    if (auto it = response->find("measurement"); it != response->end()) {
      absl::StatusOr<Measurement> m =
          MeasurementFromJson(*it, "adapter response.measurement");
      if (!m.ok()) {
        return fail(absl::DataLossError(StrCat(
            "evaluation ", ctx.eval_index, ": ", m.status().message())));
      }
      return m;
    }
  }
  return fail(absl::DataLossError(
      StrCat("evaluation ", ctx.eval_index,
             ": adapter response has neither \"measurement\" nor \"error\"")));
}

}  // namespace rforge
