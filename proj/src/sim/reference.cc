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

#include "sim/reference.h"

namespace rforge {

namespace {

using P = FeaturePredicate;

int64_t Ord(QpType v) { return static_cast<int64_t>(v); }
int64_t Ord(Opcode v) { return static_cast<int64_t>(v); }
int64_t Ord(Direction v) { return static_cast<int64_t>(v); }

AnomalyRule Pause(int id, std::vector<P> region, double ratio,
                  std::string comment) {
  return {id, std::move(region), AnomalyRule::Symptom::kPauseStorm, ratio,
          std::move(comment)};
}

}  // namespace

SubsystemSpec ReferenceSubsystem() { return SubsystemSpec{}; }

std::vector<AnomalyRule> ReferenceRules() {
  std::vector<AnomalyRule> rules;
  rules.push_back(Pause(
      1,
      {P::Equals(Feature::kQpType, Ord(QpType::kUd)),
       P::Equals(Feature::kOpcode, Ord(Opcode::kSendRecv)),
       P::AtLeast(Feature::kWqeBatch, 64), P::AtLeast(Feature::kWqDepth, 256)},
      0.20,
      "anomaly #1: UD SEND with a large WQE batch and a long WQ; receive-WQE "
      "cache misses throttle the receiver"));
  rules.push_back(Pause(
      3,
      {P::Equals(Feature::kQpType, Ord(QpType::kRc)),
       P::Equals(Feature::kOpcode, Ord(Opcode::kRead)),
       P::Equals(Feature::kMtu, 1024), P::AtLeast(Feature::kMsgSizeMin, 16384)},
      0.10,
      "anomaly #3: RC READ of large messages at MTU 1K hits the packet "
      "processing bottleneck"));
  rules.push_back(AnomalyRule{
      7,
      {P::Equals(Feature::kQpType, Ord(QpType::kRc)),
       P::Equals(Feature::kOpcode, Ord(Opcode::kWrite)),
       P::AtMost(Feature::kWqeBatch, 1), P::AtMost(Feature::kMsgSizeMax, 1024),
       P::AtLeast(Feature::kMrCount, 12288)},
      AnomalyRule::Symptom::kThroughputCap,
      0.50,
      "anomaly #7: RC WRITE of small unbatched messages over many MRs; ICM cache "
      "misses lower the sending rate without pause frames"});
  rules.push_back(Pause(
      9,
      {P::Equals(Feature::kDirection, Ord(Direction::kBidirectional)),
       P::AtLeast(Feature::kSgePerWqe, 3),
       P::AtMost(Feature::kMsgSizeMin, 1024),
       P::AtLeast(Feature::kMsgSizeMax, 65536)},
      0.25,
      "anomaly #9: bidirectional SG lists mixing <= 1KB and >= 64KB messages; "
      "PCIe ordering blocks long DMA reads"));
  rules.push_back(Pause(
      13,
      {P::Equals(Feature::kLoopback, 1),
       P::Equals(Feature::kDirection, Ord(Direction::kBidirectional))},
      0.05,
      "anomaly #13: loopback traffic coexisting with receiving traffic causes "
      "in-NIC incast"));
  rules.push_back(Pause(
      15,
      {P::Equals(Feature::kQpType, Ord(QpType::kUd)),
       P::Equals(Feature::kOpcode, Ord(Opcode::kSendRecv)),
       P::AtLeast(Feature::kWqDepth, 64), P::AtLeast(Feature::kQpCount, 32)},
      0.15,
      "anomaly #15: UD SEND with a long WQ and a few dozen connections"));
  return rules;
}

WorkloadPoint AnomalyOneTriggerPoint() {
  WorkloadPoint p;
  p.src_device = 0;
  p.dst_device = 0;
  p.loopback = false;
  p.mr_count = 1;
  p.mr_size_bytes = 65536;
  p.qp_type = QpType::kUd;
  p.opcode = Opcode::kSendRecv;
  p.qp_count = 1;
  p.direction = Direction::kUnidirectional;
  p.mtu_bytes = 2048;
  p.wq_depth = 256;
  p.wqe_batch.assign(64, 1);
  p.message_pattern.assign(64, 2048);
  return p;
}

}  // namespace rforge
