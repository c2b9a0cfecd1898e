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

#include "workload/point.h"

#include <algorithm>
#include <numeric>

#include "common/strings.h"

namespace rforge {

namespace {

constexpr std::string_view kFeatureNames[kFeatureCount] = {
    "src_device", "dst_device", "loopback",     "mr_count",
    "mr_size_bytes", "qp_type", "opcode",       "qp_count",
    "direction",  "mtu_bytes",  "wq_depth",     "wqe_batch",
    "sge_per_wqe", "msg_size_min", "msg_size_max",
};

template <typename T>
bool Contains(const std::vector<T>& v, const T& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

absl::Status OutOfRange(std::string_view field, int64_t value, int64_t lo,
                        int64_t hi) {
  return absl::InvalidArgumentError(StrCat(
      field, " = ", value, " is outside [", lo, ", ", hi, "]"));
}

// Sets the largest message to `value`, keeping the smallest one.
std::optional<std::vector<int64_t>> SetMaxMessage(
    std::vector<int64_t> pattern, int64_t value) {
  const int64_t lo = *std::min_element(pattern.begin(), pattern.end());
  const int64_t hi = *std::max_element(pattern.begin(), pattern.end());
  if (value == hi) return pattern;
  if (value < lo) return std::nullopt;
  if (lo == hi) {
    if (pattern.size() < 2) return std::nullopt;
    pattern.front() = value;
    return pattern;
  }
  for (int64_t& m : pattern) {
    if (m == hi || m > value) m = value;
  }
  return pattern;
}

// Sets the smallest message to `value`, keeping the largest one.
std::optional<std::vector<int64_t>> SetMinMessage(
    std::vector<int64_t> pattern, int64_t value) {
  const int64_t lo = *std::min_element(pattern.begin(), pattern.end());
  const int64_t hi = *std::max_element(pattern.begin(), pattern.end());
  if (value == lo) return pattern;
  if (value > hi) return std::nullopt;
  if (lo == hi) {
    if (pattern.size() < 2) return std::nullopt;
    pattern.back() = value;
    return pattern;
  }
  for (int64_t& m : pattern) {
    if (m == lo || m < value) m = value;
  }
  return pattern;
}

}  // namespace

int64_t WorkloadPoint::SgePerWqe() const {
  if (wqe_batch.empty()) return 0;
  return *std::max_element(wqe_batch.begin(), wqe_batch.end());
}

int64_t WorkloadPoint::MinMessageBytes() const {
  if (message_pattern.empty()) return 0;
  return *std::min_element(message_pattern.begin(), message_pattern.end());
}

int64_t WorkloadPoint::MaxMessageBytes() const {
  if (message_pattern.empty()) return 0;
  return *std::max_element(message_pattern.begin(), message_pattern.end());
}

double WorkloadPoint::MeanMessageBytes() const {
  if (message_pattern.empty()) return 0.0;
  const double total = std::accumulate(message_pattern.begin(),
                                       message_pattern.end(), 0.0);
  return total / static_cast<double>(message_pattern.size());
}

absl::Status ValidateStructure(const WorkloadPoint& p) {
  if (p.src_device < 0 || p.dst_device < 0) {
    return absl::InvalidArgumentError("device indices must be >= 0");
  }
  if (p.mr_count < 1) return OutOfRange("mr_count", p.mr_count, 1, INT64_MAX);
  if (p.mr_size_bytes < 1) {
    return OutOfRange("mr_size_bytes", p.mr_size_bytes, 1, INT64_MAX);
  }
  if (p.qp_count < 1) return OutOfRange("qp_count", p.qp_count, 1, INT64_MAX);
  if (p.mtu_bytes < 1) return OutOfRange("mtu_bytes", p.mtu_bytes, 1, INT64_MAX);
  if (p.wq_depth < 1) return OutOfRange("wq_depth", p.wq_depth, 1, INT64_MAX);
  if (!IsValidTransport(p.qp_type, p.opcode)) {
    return absl::InvalidArgumentError(
        StrCat(QpTypeName(p.qp_type), " ", OpcodeName(p.opcode),
                     " is not a valid verbs pair"));
  }
  if (p.wqe_batch.empty()) {
    return absl::InvalidArgumentError("wqe_batch is empty");
  }
  int64_t k = 0;
  for (size_t i = 0; i < p.wqe_batch.size(); ++i) {
    if (p.wqe_batch[i] < 1) {
      return absl::InvalidArgumentError(
          StrCat("wqe_batch[", i, "] must be >= 1"));
    }
    k += p.wqe_batch[i];
  }
  if (k != static_cast<int64_t>(p.message_pattern.size())) {
    return absl::InvalidArgumentError(StrCat(
        "sum(wqe_batch) = ", k, " but message_pattern has ",
        p.message_pattern.size(), " entries"));
  }
  for (size_t i = 0; i < p.message_pattern.size(); ++i) {
    if (p.message_pattern[i] < 1) {
      return absl::InvalidArgumentError(
          StrCat("message_pattern[", i, "] must be >= 1"));
    }
  }
  return absl::OkStatus();
}

absl::Status ValidatePoint(const WorkloadPoint& p, const SearchSpace& space) {
  if (auto s = ValidateStructure(p); !s.ok()) return s;
  const int devices = static_cast<int>(space.memory_devices.size());
  if (p.src_device >= devices) {
    return OutOfRange("src_device", p.src_device, 0, devices - 1);
  }
  if (p.dst_device >= devices) {
    return OutOfRange("dst_device", p.dst_device, 0, devices - 1);
  }
  if (!Contains(space.loopback_choices, p.loopback)) {
    return absl::InvalidArgumentError("loopback value not allowed by space");
  }
  if (p.mr_count > space.mr_count_max) {
    return OutOfRange("mr_count", p.mr_count, 1, space.mr_count_max);
  }
  if (p.mr_size_bytes > space.mr_size_max_bytes) {
    return OutOfRange("mr_size_bytes", p.mr_size_bytes, 1,
                      space.mr_size_max_bytes);
  }
  if (!Contains(space.transports, p.transport())) {
    return absl::InvalidArgumentError(
        StrCat(QpTypeName(p.qp_type), " ", OpcodeName(p.opcode),
                     " is not among the space's transports"));
  }
  if (p.qp_count > space.qp_count_max) {
    return OutOfRange("qp_count", p.qp_count, 1, space.qp_count_max);
  }
  if (!Contains(space.directions, p.direction)) {
    return absl::InvalidArgumentError(StrCat(
        "direction ", DirectionName(p.direction), " not allowed by space"));
  }
  if (!Contains(space.mtu_choices, p.mtu_bytes)) {
    return absl::InvalidArgumentError(
        StrCat("mtu_bytes = ", p.mtu_bytes, " is not an MTU choice"));
  }
  if (!Contains(space.wq_depth_choices, p.wq_depth)) {
    return absl::InvalidArgumentError(
        StrCat("wq_depth = ", p.wq_depth, " is not a WQ depth choice"));
  }
  const std::vector<int64_t> wqe_grid = space.WqeBatchGrid();
  if (p.WqeCount() < wqe_grid.front() || p.WqeCount() > wqe_grid.back()) {
    return OutOfRange("len(wqe_batch)", p.WqeCount(), wqe_grid.front(),
                      wqe_grid.back());
  }
  const std::vector<int64_t> sge_grid = space.SgeGrid();
  for (size_t i = 0; i < p.wqe_batch.size(); ++i) {
    if (p.wqe_batch[i] < sge_grid.front() || p.wqe_batch[i] > sge_grid.back()) {
      return OutOfRange(StrCat("wqe_batch[", i, "]"), p.wqe_batch[i],
                        sge_grid.front(), sge_grid.back());
    }
  }
  if (static_cast<int64_t>(p.message_pattern.size()) >
      space.request_vector_len_n) {
    return absl::InvalidArgumentError(StrCat(
        "message_pattern has ", p.message_pattern.size(),
        " entries, more than request_vector_len_n = ",
        space.request_vector_len_n));
  }
  for (size_t i = 0; i < p.message_pattern.size(); ++i) {
    if (p.message_pattern[i] > space.mr_size_max_bytes) {
      return OutOfRange(StrCat("message_pattern[", i, "]"),
                        p.message_pattern[i], 1, space.mr_size_max_bytes);
    }
  }
  return absl::OkStatus();
}

std::string_view FeatureName(Feature f) {
  return kFeatureNames[static_cast<int>(f)];
}

std::optional<Feature> ParseFeature(std::string_view name) {
  for (int i = 0; i < kFeatureCount; ++i) {
    if (kFeatureNames[i] == name) return static_cast<Feature>(i);
  }
  return std::nullopt;
}

bool IsNumericFeature(Feature f) {
  switch (f) {
    case Feature::kMrCount:
    case Feature::kMrSize:
    case Feature::kQpCount:
    case Feature::kMtu:
    case Feature::kWqDepth:
    case Feature::kWqeBatch:
    case Feature::kSgePerWqe:
    case Feature::kMsgSizeMin:
    case Feature::kMsgSizeMax:
      return true;
    default:
      return false;
  }
}

int FeatureDimension(Feature f) {
  switch (f) {
    case Feature::kSrcDevice:
    case Feature::kDstDevice:
    case Feature::kLoopback:
      return 1;
    case Feature::kMrCount:
    case Feature::kMrSize:
      return 2;
    case Feature::kMsgSizeMin:
    case Feature::kMsgSizeMax:
      return 4;
    default:
      return 3;
  }
}

int64_t FeatureValue(const WorkloadPoint& p, Feature f) {
  switch (f) {
    case Feature::kSrcDevice: return p.src_device;
    case Feature::kDstDevice: return p.dst_device;
    case Feature::kLoopback: return p.loopback ? 1 : 0;
    case Feature::kMrCount: return p.mr_count;
    case Feature::kMrSize: return p.mr_size_bytes;
    case Feature::kQpType: return static_cast<int64_t>(p.qp_type);
    case Feature::kOpcode: return static_cast<int64_t>(p.opcode);
    case Feature::kQpCount: return p.qp_count;
    case Feature::kDirection: return static_cast<int64_t>(p.direction);
    case Feature::kMtu: return p.mtu_bytes;
    case Feature::kWqDepth: return p.wq_depth;
    case Feature::kWqeBatch: return p.WqeCount();
    case Feature::kSgePerWqe: return p.SgePerWqe();
    case Feature::kMsgSizeMin: return p.MinMessageBytes();
    case Feature::kMsgSizeMax: return p.MaxMessageBytes();
  }
  return 0;
}

std::vector<int64_t> FeatureGrid(const SearchSpace& space, Feature f) {
  std::vector<int64_t> out;
  switch (f) {
    case Feature::kSrcDevice:
    case Feature::kDstDevice:
      for (size_t i = 0; i < space.memory_devices.size(); ++i) {
        out.push_back(static_cast<int64_t>(i));
      }
      return out;
    case Feature::kLoopback:
      for (bool b : {false, true}) {
        if (Contains(space.loopback_choices, b)) out.push_back(b ? 1 : 0);
      }
      return out;
    case Feature::kQpType:
      for (QpType q : {QpType::kRc, QpType::kUc, QpType::kUd}) {
        for (const Transport& t : space.transports) {
          if (t.qp_type == q) {
            out.push_back(static_cast<int64_t>(q));
            break;
          }
        }
      }
      return out;
    case Feature::kOpcode:
      for (Opcode o : {Opcode::kSendRecv, Opcode::kWrite, Opcode::kRead}) {
        for (const Transport& t : space.transports) {
          if (t.opcode == o) {
            out.push_back(static_cast<int64_t>(o));
            break;
          }
        }
      }
      return out;
    case Feature::kDirection:
      for (Direction d :
           {Direction::kUnidirectional, Direction::kBidirectional}) {
        if (Contains(space.directions, d)) {
          out.push_back(static_cast<int64_t>(d));
        }
      }
      return out;
    case Feature::kMrCount: return space.MrCountGrid();
    case Feature::kMrSize: return space.MrSizeGrid();
    case Feature::kQpCount: return space.QpCountGrid();
    case Feature::kMtu: return space.MtuGrid();
    case Feature::kWqDepth: return space.WqDepthGrid();
    case Feature::kWqeBatch: return space.WqeBatchGrid();
    case Feature::kSgePerWqe: return space.SgeGrid();
    case Feature::kMsgSizeMin:
    case Feature::kMsgSizeMax:
      return space.MessageSizeGrid();
  }
  return out;
}

std::vector<int64_t> ResizePattern(const std::vector<int64_t>& pattern,
                                   size_t k) {
  std::vector<int64_t> out;
  if (k == 0 || pattern.empty()) return out;
  out.reserve(k);
  for (size_t i = 0; i < k; ++i) out.push_back(pattern[i % pattern.size()]);
  if (k >= pattern.size()) return out;
  const int64_t lo = *std::min_element(pattern.begin(), pattern.end());
  const int64_t hi = *std::max_element(pattern.begin(), pattern.end());
  if (k == 1) return {hi};
  if (!Contains(out, hi)) out.front() = hi;
  if (!Contains(out, lo)) out.back() = lo;
  return out;
}

std::optional<WorkloadPoint> WithFeature(const WorkloadPoint& point,
                                         Feature f, int64_t value,
                                         const SearchSpace& space) {
  WorkloadPoint p = point;
  switch (f) {
    case Feature::kSrcDevice: p.src_device = static_cast<int>(value); break;
    case Feature::kDstDevice: p.dst_device = static_cast<int>(value); break;
    case Feature::kLoopback: p.loopback = value != 0; break;
    case Feature::kMrCount: p.mr_count = value; break;
    case Feature::kMrSize: p.mr_size_bytes = value; break;
    case Feature::kQpType:
      if (value < 0 || value > 2) return std::nullopt;
      p.qp_type = static_cast<QpType>(value);
      break;
    case Feature::kOpcode:
      if (value < 0 || value > 2) return std::nullopt;
      p.opcode = static_cast<Opcode>(value);
      break;
    case Feature::kQpCount: p.qp_count = value; break;
    case Feature::kDirection:
      if (value < 0 || value > 1) return std::nullopt;
      p.direction = static_cast<Direction>(value);
      break;
    case Feature::kMtu: p.mtu_bytes = value; break;
    case Feature::kWqDepth: p.wq_depth = value; break;
    case Feature::kWqeBatch:
    case Feature::kSgePerWqe: {
      if (value < 1) return std::nullopt;
      const int64_t w = f == Feature::kWqeBatch ? value : point.WqeCount();
      const int64_t s = f == Feature::kSgePerWqe ? value : point.SgePerWqe();
      if (w * s > space.request_vector_len_n) return std::nullopt;
      p.wqe_batch.assign(static_cast<size_t>(w), s);
      p.message_pattern =
          ResizePattern(point.message_pattern, static_cast<size_t>(w * s));
      break;
    }
    case Feature::kMsgSizeMin: {
      auto pattern = SetMinMessage(point.message_pattern, value);
      if (!pattern) return std::nullopt;
      p.message_pattern = *std::move(pattern);
      break;
    }
    case Feature::kMsgSizeMax: {
      auto pattern = SetMaxMessage(point.message_pattern, value);
      if (!pattern) return std::nullopt;
      p.message_pattern = *std::move(pattern);
      break;
    }
  }
  if (!ValidatePoint(p, space).ok()) return std::nullopt;
  for (int i = 0; i < kFeatureCount; ++i) {
    const Feature other = static_cast<Feature>(i);
    if (other == f) continue;
    if (FeatureValue(p, other) != FeatureValue(point, other)) {
      return std::nullopt;
    }
  }
  if (FeatureValue(p, f) != value) return std::nullopt;
  return p;
}

}  // namespace rforge
