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

#ifndef RFORGE_WORKLOAD_SAMPLING_H_
#define RFORGE_WORKLOAD_SAMPLING_H_

#include <cstdint>

#include "common/rng.h"
#include "workload/point.h"
#include "workload/space.h"

namespace rforge {

// Probability that a numeric mutation steps to an adjacent grid value rather
// than jumping to a random one.
inline constexpr double kLocalMutationProbability = 0.8;

// Uniform per dimension over the discretized choices of `space`. Every message
// of the pattern is drawn independently from the size-region representatives.
// `space` must be valid.
WorkloadPoint SampleRandom(const SearchSpace& space, Rng& rng);
WorkloadPoint SampleRandom(const SearchSpace& space, uint64_t seed);

// Alters exactly one dimension group (topology, memory, transport or message
// pattern) of a valid `point`; the result is valid and differs from `point`.
// If no feature of `point` can change (a single-point space), returns it as is.
WorkloadPoint Mutate(const WorkloadPoint& point, const SearchSpace& space,
                     Rng& rng, double p_local = kLocalMutationProbability);
WorkloadPoint Mutate(const WorkloadPoint& point, const SearchSpace& space,
                     uint64_t seed,
                     double p_local = kLocalMutationProbability);

}  // namespace rforge

#endif  // RFORGE_WORKLOAD_SAMPLING_H_
