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

#include "workload/sampling.h"

#include <algorithm>
#include <iterator>
#include <optional>
#include <vector>

namespace rforge {

namespace {

enum class Move {
  kSrcDevice,
  kDstDevice,
  kLoopback,
  kMrCount,
  kMrSize,
  kTransport,
  kQpCount,
  kDirection,
  kMtu,
  kWqDepth,
  kWqeBatch,
  kSge,
  kPatternElement,
  // Every message one size step up (or down), clamped at the grid ends.
  kPatternShift,
};

const std::vector<std::vector<Move>>& MoveGroups() {
  static const std::vector<std::vector<Move>> groups = {
      {Move::kSrcDevice, Move::kDstDevice, Move::kLoopback},
      {Move::kMrCount, Move::kMrSize},
      {Move::kTransport, Move::kQpCount, Move::kDirection, Move::kMtu,
       Move::kWqDepth, Move::kWqeBatch, Move::kSge},
      {Move::kPatternElement, Move::kPatternShift},
  };
  return groups;
}

template <typename T>
std::vector<T> Shuffled(std::vector<T> v, Rng& rng) {
  for (size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.UniformInt(i)]);
  }
  return v;
}

// Picks a grid value other than `current`: an adjacent one with probability
// p_local, otherwise any. `grid` holds only admissible values.
std::optional<int64_t> StepOnGrid(const std::vector<int64_t>& grid,
                                  int64_t current, double p_local, Rng& rng) {
  std::vector<int64_t> others;
  for (int64_t v : grid) {
    if (v != current) others.push_back(v);
  }
  if (others.empty()) return std::nullopt;
  if (rng.Bernoulli(p_local)) {
    // Neighbours: the closest admissible value below and above `current`.
    std::vector<int64_t> near;
    std::optional<int64_t> below, above;
    for (int64_t v : others) {
      if (v < current && (!below || v > *below)) below = v;
      if (v > current && (!above || v < *above)) above = v;
    }
    if (below) near.push_back(*below);
    if (above) near.push_back(*above);
    return rng.Pick(near);
  }
  return rng.Pick(others);
}

template <typename T>
std::optional<T> OtherChoice(const std::vector<T>& choices, const T& current,
                             Rng& rng) {
  std::vector<T> others;
  for (const T& c : choices) {
    if (!(c == current)) others.push_back(c);
  }
  if (others.empty()) return std::nullopt;
  return rng.Pick(others);
}

std::optional<WorkloadPoint> ApplyMove(const WorkloadPoint& point,
                                       const SearchSpace& space, Move move,
                                       double p_local, Rng& rng) {
  WorkloadPoint p = point;
  switch (move) {
    case Move::kSrcDevice:
    case Move::kDstDevice: {
      const int devices = static_cast<int>(space.memory_devices.size());
      if (devices < 2) return std::nullopt;
      int& field = move == Move::kSrcDevice ? p.src_device : p.dst_device;
      int next = static_cast<int>(rng.UniformInt(devices - 1));
      if (next >= field) ++next;
      field = next;
      return p;
    }
    case Move::kLoopback: {
      auto v = OtherChoice(space.loopback_choices, point.loopback, rng);
      if (!v) return std::nullopt;
      p.loopback = *v;
      return p;
    }
    case Move::kDirection: {
      auto v = OtherChoice(space.directions, point.direction, rng);
      if (!v) return std::nullopt;
      p.direction = *v;
      return p;
    }
    case Move::kTransport: {
      auto v = OtherChoice(space.transports, point.transport(), rng);
      if (!v) return std::nullopt;
      p.qp_type = v->qp_type;
      p.opcode = v->opcode;
      return p;
    }
    case Move::kMrCount:
    case Move::kMrSize:
    case Move::kQpCount:
    case Move::kMtu:
    case Move::kWqDepth: {
      int64_t* field = nullptr;
      std::vector<int64_t> grid;
      switch (move) {
        case Move::kMrCount:
          field = &p.mr_count;
          grid = space.MrCountGrid();
          break;
        case Move::kMrSize:
          field = &p.mr_size_bytes;
          grid = space.MrSizeGrid();
          break;
        case Move::kQpCount:
          field = &p.qp_count;
          grid = space.QpCountGrid();
          break;
        case Move::kMtu:
          field = &p.mtu_bytes;
          grid = space.MtuGrid();
          break;
        default:
          field = &p.wq_depth;
          grid = space.WqDepthGrid();
          break;
      }
      auto v = StepOnGrid(grid, *field, p_local, rng);
      if (!v) return std::nullopt;
      *field = *v;
      return p;
    }
    case Move::kWqeBatch:
    case Move::kSge: {
      const int64_t w = point.WqeCount();
      const int64_t s = point.SgePerWqe();
      const bool batch = move == Move::kWqeBatch;
      const std::vector<int64_t> sges = space.SgeGrid();
      const int64_t n = space.request_vector_len_n;
      std::vector<int64_t> grid;
      for (int64_t v : batch ? space.WqeBatchGrid() : sges) {
        // A larger batch may shrink the SGE count to fit the request vector.
        if ((batch ? v * sges.front() : w * v) <= n) grid.push_back(v);
      }
      auto v = StepOnGrid(grid, batch ? w : s, p_local, rng);
      if (!v) return std::nullopt;
      const int64_t nw = batch ? *v : w;
      int64_t ns = batch ? s : *v;
      if (nw * ns > n) {
        for (int64_t c : sges) {
          if (nw * c <= n) ns = c;
        }
      }
      p.wqe_batch.assign(static_cast<size_t>(nw), ns);
      p.message_pattern =
          ResizePattern(point.message_pattern, static_cast<size_t>(nw * ns));
      return p;
    }
    case Move::kPatternElement: {
      const std::vector<int64_t> sizes = space.MessageSizeGrid();
      const size_t i = rng.UniformInt(p.message_pattern.size());
      auto v = StepOnGrid(sizes, p.message_pattern[i], p_local, rng);
      if (!v) return std::nullopt;
      p.message_pattern[i] = *v;
      return p;
    }
    case Move::kPatternShift: {
      const std::vector<int64_t> sizes = space.MessageSizeGrid();
      const bool up = rng.Bernoulli(0.5);
      for (int64_t& m : p.message_pattern) {
        auto it = std::lower_bound(sizes.begin(), sizes.end(), m);
        if (up) {
          if (it != sizes.end() && *it == m) ++it;
          if (it != sizes.end()) m = *it;
        } else if (it != sizes.begin()) {
          m = *std::prev(it);
        }
      }
      return p;
    }
  }
  return std::nullopt;
}

// True when every feature that differs between `a` and `b` lies in one
// dimension group. A WQE-batch change reshapes the message list to the new
// length, but keeps its min/max features, so it stays within Dim 3.
bool WithinOneDimension(const WorkloadPoint& a, const WorkloadPoint& b) {
  int dim = 0;
  for (int i = 0; i < kFeatureCount; ++i) {
    const Feature f = static_cast<Feature>(i);
    if (FeatureValue(a, f) == FeatureValue(b, f)) continue;
    if (dim != 0 && dim != FeatureDimension(f)) return false;
    dim = FeatureDimension(f);
  }
  return true;
}

}  // namespace

WorkloadPoint SampleRandom(const SearchSpace& space, Rng& rng) {
  WorkloadPoint p;
  const uint64_t devices = space.memory_devices.size();
  p.src_device = static_cast<int>(rng.UniformInt(devices));
  p.dst_device = static_cast<int>(rng.UniformInt(devices));
  p.loopback = rng.Pick(space.loopback_choices);
  p.mr_count = rng.Pick(space.MrCountGrid());
  p.mr_size_bytes = rng.Pick(space.MrSizeGrid());
  const Transport t = rng.Pick(space.transports);
  p.qp_type = t.qp_type;
  p.opcode = t.opcode;
  p.qp_count = rng.Pick(space.QpCountGrid());
  p.direction = rng.Pick(space.directions);
  p.mtu_bytes = rng.Pick(space.mtu_choices);
  p.wq_depth = rng.Pick(space.wq_depth_choices);

  const std::vector<int64_t> sge_grid = space.SgeGrid();
  std::vector<int64_t> batches;
  for (int64_t w : space.WqeBatchGrid()) {
    if (w * sge_grid.front() <= space.request_vector_len_n) {
      batches.push_back(w);
    }
  }
  const int64_t w = rng.Pick(batches);
  std::vector<int64_t> sges;
  for (int64_t s : sge_grid) {
    if (w * s <= space.request_vector_len_n) sges.push_back(s);
  }
  const int64_t s = rng.Pick(sges);
  p.wqe_batch.assign(static_cast<size_t>(w), s);

  const std::vector<int64_t> sizes = space.MessageSizeGrid();
  p.message_pattern.resize(static_cast<size_t>(w * s));
  for (int64_t& m : p.message_pattern) m = rng.Pick(sizes);
  return p;
}

WorkloadPoint SampleRandom(const SearchSpace& space, uint64_t seed) {
  Rng rng(seed);
  return SampleRandom(space, rng);
}

WorkloadPoint Mutate(const WorkloadPoint& point, const SearchSpace& space,
                     Rng& rng, double p_local) {
  for (const std::vector<Move>& group : Shuffled(MoveGroups(), rng)) {
    for (Move move : Shuffled(group, rng)) {
      std::optional<WorkloadPoint> next =
          ApplyMove(point, space, move, p_local, rng);
      if (next && !(*next == point) && WithinOneDimension(point, *next) &&
          ValidatePoint(*next, space).ok()) {
        return *std::move(next);
      }
    }
  }
  return point;
}

WorkloadPoint Mutate(const WorkloadPoint& point, const SearchSpace& space,
                     uint64_t seed, double p_local) {
  Rng rng(seed);
  return Mutate(point, space, rng, p_local);
}

}  // namespace rforge
