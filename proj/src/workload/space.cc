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

#include "workload/space.h"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "common/strings.h"

namespace rforge {

namespace {

constexpr int64_t kMrCountLadder[] = {1,    16,     256,    1024,
                                      4096, 12288, 65536, 200000};
constexpr int64_t kMrSizeLadder[] = {4096,   16384,   65536,
                                     262144, 1048576, 4194304};
constexpr int64_t kSgeLadder[] = {1, 2, 3, 4, 8, 16};

std::vector<int64_t> LadderUpTo(const int64_t* begin, const int64_t* end,
                                int64_t max) {
  std::vector<int64_t> out;
  for (const int64_t* it = begin; it != end; ++it) {
    if (*it <= max) out.push_back(*it);
  }
  if (out.empty() || out.back() != max) out.push_back(max);
  return out;
}

std::vector<int64_t> PowersOfTwoUpTo(int64_t max, bool include_max) {
  std::vector<int64_t> out;
  for (int64_t v = 1; v <= max; v *= 2) out.push_back(v);
  if (include_max && out.back() != max) out.push_back(max);
  return out;
}

std::vector<int64_t> SortedUnique(std::vector<int64_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

absl::Status CheckPositive(const std::vector<int64_t>& values,
                           const char* field) {
  if (values.empty()) {
    return absl::InvalidArgumentError(StrCat(field, " is empty"));
  }
  for (int64_t v : values) {
    if (v < 1) {
      return absl::InvalidArgumentError(
          StrCat(field, " contains non-positive value ", v));
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::Status SearchSpace::Validate() const {
  if (memory_devices.empty()) {
    return absl::InvalidArgumentError("memory_devices is empty");
  }
  if (mr_count_max < 1) {
    return absl::InvalidArgumentError("mr_count_max must be >= 1");
  }
  if (mr_size_max_bytes < 1) {
    return absl::InvalidArgumentError("mr_size_max_bytes must be >= 1");
  }
  if (qp_count_max < 1) {
    return absl::InvalidArgumentError("qp_count_max must be >= 1");
  }
  if (request_vector_len_n < 1) {
    return absl::InvalidArgumentError("request_vector_len_n must be >= 1");
  }
  if (transports.empty()) {
    return absl::InvalidArgumentError("transports is empty");
  }
  for (size_t i = 0; i < transports.size(); ++i) {
    const Transport& t = transports[i];
    if (!IsValidTransport(t)) {
      return absl::InvalidArgumentError(
          StrCat("transports[", i, "]: ", QpTypeName(t.qp_type), " ",
                       OpcodeName(t.opcode), " is not a valid verbs pair"));
    }
    for (size_t j = 0; j < i; ++j) {
      if (transports[j] == t) {
        return absl::InvalidArgumentError(
            StrCat("transports[", i, "] duplicates transports[", j, "]"));
      }
    }
  }
  if (auto s = CheckPositive(mtu_choices, "mtu_choices"); !s.ok()) return s;
  if (auto s = CheckPositive(wq_depth_choices, "wq_depth_choices"); !s.ok()) {
    return s;
  }
  if (!wqe_batch_choices.empty()) {
    if (auto s = CheckPositive(wqe_batch_choices, "wqe_batch_choices");
        !s.ok()) {
      return s;
    }
  }
  if (!sge_choices.empty()) {
    if (auto s = CheckPositive(sge_choices, "sge_choices"); !s.ok()) return s;
  }
  if (directions.empty()) {
    return absl::InvalidArgumentError("directions is empty");
  }
  if (loopback_choices.empty()) {
    return absl::InvalidArgumentError("loopback_choices is empty");
  }

  if (size_regions.empty()) {
    return absl::InvalidArgumentError("size_regions is empty");
  }
  int64_t expected_lo = 1;
  for (size_t i = 0; i < size_regions.size(); ++i) {
    const SizeRegion& r = size_regions[i];
    if (r.lo != expected_lo) {
      return absl::InvalidArgumentError(StrCat(
          "size_regions[", i, "].lo is ", r.lo, ", expected ", expected_lo,
          " (regions must be ordered, disjoint and gap-free)"));
    }
    if (r.hi < r.lo || r.representative < r.lo || r.representative > r.hi) {
      return absl::InvalidArgumentError(
          StrCat("size_regions[", i, "] is malformed"));
    }
    expected_lo = r.hi + 1;
  }
  if (size_regions.back().hi != mr_size_max_bytes) {
    return absl::InvalidArgumentError(
        StrCat("size_regions end at ", size_regions.back().hi,
                     " but mr_size_max_bytes is ", mr_size_max_bytes));
  }

  bool any_pair = false;
  for (int64_t w : WqeBatchGrid()) {
    for (int64_t s : SgeGrid()) {
      if (w * s <= request_vector_len_n) any_pair = true;
    }
  }
  if (!any_pair) {
    return absl::InvalidArgumentError(
        "no (wqe_batch, sge) combination fits in request_vector_len_n");
  }
  return absl::OkStatus();
}

std::vector<int64_t> SearchSpace::QpCountGrid() const {
  return PowersOfTwoUpTo(qp_count_max, /*include_max=*/true);
}

std::vector<int64_t> SearchSpace::MrCountGrid() const {
  return LadderUpTo(std::begin(kMrCountLadder), std::end(kMrCountLadder),
                    mr_count_max);
}

std::vector<int64_t> SearchSpace::MrSizeGrid() const {
  return LadderUpTo(std::begin(kMrSizeLadder), std::end(kMrSizeLadder),
                    mr_size_max_bytes);
}

std::vector<int64_t> SearchSpace::MtuGrid() const {
  return SortedUnique(mtu_choices);
}

std::vector<int64_t> SearchSpace::WqDepthGrid() const {
  return SortedUnique(wq_depth_choices);
}

std::vector<int64_t> SearchSpace::WqeBatchGrid() const {
  if (!wqe_batch_choices.empty()) return SortedUnique(wqe_batch_choices);
  return PowersOfTwoUpTo(request_vector_len_n, /*include_max=*/false);
}

std::vector<int64_t> SearchSpace::SgeGrid() const {
  if (!sge_choices.empty()) return SortedUnique(sge_choices);
  std::vector<int64_t> out;
  for (int64_t s : kSgeLadder) {
    if (s <= request_vector_len_n) out.push_back(s);
  }
  return out;
}

std::vector<int64_t> SearchSpace::MessageSizeGrid() const {
  std::vector<int64_t> out;
  out.reserve(size_regions.size());
  for (const SizeRegion& r : size_regions) out.push_back(r.representative);
  return SortedUnique(out);
}

int SearchSpace::RegionOf(int64_t bytes) const {
  for (size_t i = 0; i < size_regions.size(); ++i) {
    if (bytes >= size_regions[i].lo && bytes <= size_regions[i].hi) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

std::vector<SizeRegion> DefaultSizeRegions(
    const std::vector<int64_t>& mtu_choices, int64_t burst_size_bytes,
    int64_t max_bytes) {
  std::set<int64_t> cuts = {1024, burst_size_bytes, 65536};
  cuts.insert(mtu_choices.begin(), mtu_choices.end());
  std::vector<SizeRegion> regions;
  int64_t lo = 1;
  for (int64_t cut : cuts) {
    if (cut < lo || cut >= max_bytes) continue;
    regions.push_back({lo, cut, cut});
    lo = cut + 1;
  }
  regions.push_back({lo, max_bytes, max_bytes});
  return regions;
}

SearchSpace DefaultSearchSpace() {
  SearchSpace space;
  space.memory_devices = {
      {DeviceKind::kNumaDram, Locality::kNicAffine},
      {DeviceKind::kNumaDram, Locality::kCrossSocket},
      {DeviceKind::kGpu, Locality::kCrossPcieBridge},
  };
  space.transports = {
      {QpType::kUd, Opcode::kSendRecv}, {QpType::kUc, Opcode::kSendRecv},
      {QpType::kUc, Opcode::kWrite},    {QpType::kRc, Opcode::kSendRecv},
      {QpType::kRc, Opcode::kWrite},    {QpType::kRc, Opcode::kRead},
  };
  space.mtu_choices = {1024, 2048, 4096};
  space.wq_depth_choices = {16, 64, 128, 256, 1024};
  space.size_regions = DefaultSizeRegions(space.mtu_choices, 16384,
                                          space.mr_size_max_bytes);
  return space;
}

int NearestGridIndex(const std::vector<int64_t>& grid, int64_t value) {
  int best = 0;
  for (size_t i = 1; i < grid.size(); ++i) {
    if (std::llabs(grid[i] - value) < std::llabs(grid[best] - value)) {
      best = static_cast<int>(i);
    }
  }
  return best;
}

}  // namespace rforge
