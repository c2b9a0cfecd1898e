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

#ifndef RFORGE_WORKLOAD_TYPES_H_
#define RFORGE_WORKLOAD_TYPES_H_

#include <optional>
#include <string_view>

namespace rforge {

enum class QpType { kRc, kUc, kUd };
enum class Opcode { kSendRecv, kWrite, kRead };
enum class Direction { kUnidirectional, kBidirectional };
enum class DeviceKind { kNumaDram, kGpu };
enum class Locality { kNicAffine, kCrossSocket, kCrossPcieBridge };

// What the anomaly monitor saw. Pause frames take precedence over throughput.
enum class SymptomKind { kPauseAnomaly, kThroughputAnomaly };

struct Transport {
  QpType qp_type = QpType::kRc;
  Opcode opcode = Opcode::kWrite;

  bool operator==(const Transport&) const = default;
};

// Verbs validity matrix: UD->{SEND}, UC->{SEND, WRITE}, RC->{SEND, WRITE,
// READ}.
bool IsValidTransport(QpType qp_type, Opcode opcode);
inline bool IsValidTransport(Transport t) {
  return IsValidTransport(t.qp_type, t.opcode);
}

std::string_view QpTypeName(QpType v);
std::string_view OpcodeName(Opcode v);
std::string_view DirectionName(Direction v);
std::string_view DeviceKindName(DeviceKind v);
std::string_view LocalityName(Locality v);
std::string_view SymptomKindName(SymptomKind v);

std::optional<QpType> ParseQpType(std::string_view s);
// Accepts "SEND" as an alias of "SEND_RECV".
std::optional<Opcode> ParseOpcode(std::string_view s);
std::optional<Direction> ParseDirection(std::string_view s);
std::optional<DeviceKind> ParseDeviceKind(std::string_view s);
std::optional<Locality> ParseLocality(std::string_view s);
std::optional<SymptomKind> ParseSymptomKind(std::string_view s);

}  // namespace rforge

#endif  // RFORGE_WORKLOAD_TYPES_H_
