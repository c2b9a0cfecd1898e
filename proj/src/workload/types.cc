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

#include "workload/types.h"

namespace rforge {

bool IsValidTransport(QpType qp_type, Opcode opcode) {
  switch (qp_type) {
    case QpType::kUd:
      return opcode == Opcode::kSendRecv;
    case QpType::kUc:
      return opcode == Opcode::kSendRecv || opcode == Opcode::kWrite;
    case QpType::kRc:
      return true;
  }
  return false;
}

std::string_view QpTypeName(QpType v) {
  switch (v) {
    case QpType::kRc: return "RC";
    case QpType::kUc: return "UC";
    case QpType::kUd: return "UD";
  }
  return "?";
}

std::string_view OpcodeName(Opcode v) {
  switch (v) {
    case Opcode::kSendRecv: return "SEND_RECV";
    case Opcode::kWrite: return "WRITE";
    case Opcode::kRead: return "READ";
  }
  return "?";
}

std::string_view DirectionName(Direction v) {
  return v == Direction::kBidirectional ? "bidirectional" : "unidirectional";
}

std::string_view DeviceKindName(DeviceKind v) {
  return v == DeviceKind::kGpu ? "gpu" : "numa-dram";
}

std::string_view LocalityName(Locality v) {
  switch (v) {
    case Locality::kNicAffine: return "nic-affine";
    case Locality::kCrossSocket: return "cross-socket";
    case Locality::kCrossPcieBridge: return "cross-pcie-bridge";
  }
  return "?";
}

std::string_view SymptomKindName(SymptomKind v) {
  return v == SymptomKind::kPauseAnomaly ? "pause-anomaly"
                                         : "throughput-anomaly";
}

std::optional<QpType> ParseQpType(std::string_view s) {
  if (s == "RC") return QpType::kRc;
  if (s == "UC") return QpType::kUc;
  if (s == "UD") return QpType::kUd;
  return std::nullopt;
}

std::optional<Opcode> ParseOpcode(std::string_view s) {
  if (s == "SEND_RECV" || s == "SEND") return Opcode::kSendRecv;
  if (s == "WRITE") return Opcode::kWrite;
  if (s == "READ") return Opcode::kRead;
  return std::nullopt;
}

std::optional<Direction> ParseDirection(std::string_view s) {
  if (s == "unidirectional") return Direction::kUnidirectional;
  if (s == "bidirectional") return Direction::kBidirectional;
  return std::nullopt;
}

std::optional<DeviceKind> ParseDeviceKind(std::string_view s) {
  if (s == "numa-dram") return DeviceKind::kNumaDram;
  if (s == "gpu") return DeviceKind::kGpu;
  return std::nullopt;
}

std::optional<Locality> ParseLocality(std::string_view s) {
  if (s == "nic-affine") return Locality::kNicAffine;
  if (s == "cross-socket") return Locality::kCrossSocket;
  if (s == "cross-pcie-bridge") return Locality::kCrossPcieBridge;
  return std::nullopt;
}

std::optional<SymptomKind> ParseSymptomKind(std::string_view s) {
  if (s == "pause-anomaly") return SymptomKind::kPauseAnomaly;
  if (s == "throughput-anomaly") return SymptomKind::kThroughputAnomaly;
  return std::nullopt;
}

}  // namespace rforge
