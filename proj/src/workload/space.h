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

#ifndef RFORGE_WORKLOAD_SPACE_H_
#define RFORGE_WORKLOAD_SPACE_H_

#include <cstdint>
#include <vector>

#include "absl/status/status.h"
#include "workload/types.h"

namespace rforge {

struct MemoryDevice {
  DeviceKind kind = DeviceKind::kNumaDram;
  Locality locality = Locality::kNicAffine;

  bool operator==(const MemoryDevice&) const = default;
};

// One discretized message-size class. Sampled messages always carry the
// representative size.
struct SizeRegion {
  int64_t lo = 1;
  int64_t hi = 1;
  int64_t representative = 1;

  bool operator==(const SizeRegion&) const = default;
};

// The four-dimensional workload space: host topology, memory allocation,
// transport setting and message pattern. Numeric axes are explored on the
// geometric grids returned by the *Grid() accessors.
struct SearchSpace {
  std::vector<MemoryDevice> memory_devices;
  int64_t mr_count_max = 200'000;
  int64_t mr_size_max_bytes = 4 << 20;
  int64_t qp_count_max = 20'000;
  std::vector<Transport> transports;
  std::vector<int64_t> mtu_choices;
  std::vector<int64_t> wq_depth_choices;
  int64_t request_vector_len_n = 128;
  std::vector<SizeRegion> size_regions;

  // Restrictions beyond the core schema. They default to "everything" and
  // mostly matter for restricted spaces handed to the anomaly-prevention
  // check.
  std::vector<Direction> directions = {Direction::kUnidirectional,
                                       Direction::kBidirectional};
  std::vector<bool> loopback_choices = {false, true};
  // Empty means the default grid.
  std::vector<int64_t> wqe_batch_choices;
  std::vector<int64_t> sge_choices;

  absl::Status Validate() const;

  std::vector<int64_t> QpCountGrid() const;
  std::vector<int64_t> MrCountGrid() const;
  std::vector<int64_t> MrSizeGrid() const;
  std::vector<int64_t> MtuGrid() const;
  std::vector<int64_t> WqDepthGrid() const;
  std::vector<int64_t> WqeBatchGrid() const;
  std::vector<int64_t> SgeGrid() const;
  // Representatives of size_regions, ascending.
  std::vector<int64_t> MessageSizeGrid() const;

  // Index of the region containing `bytes`, or -1.
  int RegionOf(int64_t bytes) const;

  bool operator==(const SearchSpace&) const = default;
};

// Size regions split at 1KB, each MTU choice, the NIC burst size and 64KB, up
// to `max_bytes`.
std::vector<SizeRegion> DefaultSizeRegions(
    const std::vector<int64_t>& mtu_choices, int64_t burst_size_bytes,
    int64_t max_bytes);

// The default space: three memory devices (NIC-affine DRAM, cross-socket DRAM,
// a GPU behind another PCIe bridge), all six valid transports, MTU
// {1K, 2K, 4K}, WQ depth {16, 64, 128, 256, 1024}, n = 128.
SearchSpace DefaultSearchSpace();

// Index of the grid value nearest to `value` (ties go to the lower index).
int NearestGridIndex(const std::vector<int64_t>& grid, int64_t value);

}  // namespace rforge

#endif  // RFORGE_WORKLOAD_SPACE_H_
