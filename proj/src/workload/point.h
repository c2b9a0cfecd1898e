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

#ifndef RFORGE_WORKLOAD_POINT_H_
#define RFORGE_WORKLOAD_POINT_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "workload/space.h"
#include "workload/types.h"

namespace rforge {

// One application workload. `wqe_batch[i]` is the number of SG elements of
// WQE i in a posting round; the round carries sum(wqe_batch) messages whose
// sizes are listed in `message_pattern`.
struct WorkloadPoint {
  // Dim 1: host topology.
  int src_device = 0;
  int dst_device = 0;
  bool loopback = false;
  // Dim 2: memory allocation.
  int64_t mr_count = 1;
  int64_t mr_size_bytes = 65536;
  // Dim 3: transport setting.
  QpType qp_type = QpType::kRc;
  Opcode opcode = Opcode::kWrite;
  int64_t qp_count = 1;
  Direction direction = Direction::kUnidirectional;
  int64_t mtu_bytes = 4096;
  int64_t wq_depth = 128;
  std::vector<int64_t> wqe_batch = {1};
  // Dim 4: message pattern.
  std::vector<int64_t> message_pattern = {65536};

  Transport transport() const { return {qp_type, opcode}; }
  int64_t WqeCount() const { return static_cast<int64_t>(wqe_batch.size()); }
  // Longest SG list in the round.
  int64_t SgePerWqe() const;
  int64_t MinMessageBytes() const;
  int64_t MaxMessageBytes() const;
  double MeanMessageBytes() const;

  bool operator==(const WorkloadPoint&) const = default;
};

// Checks the invariants that do not depend on a search space: positive
// counts, a valid verbs pair, and sum(wqe_batch) == |message_pattern|.
absl::Status ValidateStructure(const WorkloadPoint& point);

// Full validation against `space`: all fields within bounds and choices,
// pattern no longer than the request vector.
absl::Status ValidatePoint(const WorkloadPoint& point,
                           const SearchSpace& space);

// Features the minimal feature set is expressed over. The transport pair is
// split into qp_type and opcode so that predicates read like "UD SEND".
enum class Feature : int {
  kSrcDevice = 0,
  kDstDevice,
  kLoopback,
  kMrCount,
  kMrSize,
  kQpType,
  kOpcode,
  kQpCount,
  kDirection,
  kMtu,
  kWqDepth,
  kWqeBatch,
  kSgePerWqe,
  kMsgSizeMin,
  kMsgSizeMax,
};
inline constexpr int kFeatureCount = 15;

std::string_view FeatureName(Feature f);
std::optional<Feature> ParseFeature(std::string_view name);
bool IsNumericFeature(Feature f);
// Dim 1..4 of the search space the feature belongs to.
int FeatureDimension(Feature f);

// Feature value as an integer. Categorical values use the enum ordinal
// (loopback: 0/1; devices: index).
int64_t FeatureValue(const WorkloadPoint& point, Feature f);

// Candidate values of `f` in `space`, ascending.
std::vector<int64_t> FeatureGrid(const SearchSpace& space, Feature f);

// `point` with feature `f` set to `value` and every other feature unchanged.
// Returns nullopt when that combination is not a valid point of `space` (for
// example a WQE batch that overflows the request vector, or a minimum message
// size above the maximum).
std::optional<WorkloadPoint> WithFeature(const WorkloadPoint& point,
                                         Feature f, int64_t value,
                                         const SearchSpace& space);

// Rebuilds a pattern of length `k` from `pattern`, keeping its minimum and
// maximum when k >= 2.
std::vector<int64_t> ResizePattern(const std::vector<int64_t>& pattern,
                                   size_t k);

}  // namespace rforge

#endif  // RFORGE_WORKLOAD_POINT_H_
